#include "lcone/exact.hpp"

#include <algorithm>
#include <istream>
#include <limits>
#include <numeric>
#include <sstream>

namespace lcone {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ZeroPivotNotPD: return "ZeroPivotNotPD";
    case ErrorKind::SingularMatrix: return "SingularMatrix";
    case ErrorKind::ZeroInput: return "ZeroInput";
    case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::AffinelyDependent: return "AffinelyDependent";
    case ErrorKind::NotAFacet: return "NotAFacet";
    case ErrorKind::NotOnSingleFacet: return "NotOnSingleFacet";
    case ErrorKind::NotATriangulation: return "NotATriangulation";
    case ErrorKind::EmptyRaySet: return "EmptyRaySet";
    case ErrorKind::NonPSDRay: return "NonPSDRay";
    case ErrorKind::NotPointed: return "NotPointed";
    case ErrorKind::DimensionUnsupported: return "DimensionUnsupported";
    case ErrorKind::IncompleteDatabase: return "IncompleteDatabase";
    case ErrorKind::IncompatibleCheckpoint: return "IncompatibleCheckpoint";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::Internal: return "Internal";
  }
  return "Unknown";
}

// ---------------------------------------------------------------- Mat

Mat Mat::identity(std::size_t n) {
  Mat m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

Mat Mat::from_rows(const std::vector<RatVec>& rows) {
  if (rows.empty()) return {};
  Mat m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < m.cols_; ++j) m(i, j) = rows[i][j];
  return m;
}

Mat Mat::from_points(std::span<const Point> rows) {
  if (rows.empty()) return {};
  Mat m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < m.cols_; ++j) m(i, j) = Rat(static_cast<long>(rows[i][j]));
  return m;
}

RatVec Mat::row(std::size_t i) const {
  return RatVec(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_);
}

Mat Mat::transpose() const {
  Mat t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

RatVec Mat::apply(std::span<const Rat> x) const {
  RatVec y(rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) y[i] += (*this)(i, j) * x[j];
  return y;
}

Mat operator*(const Mat& a, const Mat& b) {
  ensure(a.cols() == b.rows(), "matrix product dimension mismatch");
  Mat c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (sgn(a(i, k)) == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += a(i, k) * b(k, j);
    }
  return c;
}

// ---------------------------------------------------------------- SymMat

SymMat::SymMat(int dim, RatVec lower) : dim_(dim), lower_(std::move(lower)) {
  if (lower_.size() != coord_count(dim))
    throw Error(ErrorKind::ParseError, "symmetric matrix needs d(d+1)/2 entries");
}

SymMat SymMat::identity(int dim) {
  SymMat q(dim);
  for (int i = 0; i < dim; ++i) q(i, i) = 1;
  return q;
}

SymMat SymMat::from_rows(const std::vector<std::vector<long>>& rows) {
  const int d = static_cast<int>(rows.size());
  SymMat q(d);
  for (int i = 0; i < d; ++i) {
    ensure(rows[i].size() == std::size_t(d), "SymMat::from_rows expects a square matrix");
    for (int j = 0; j <= i; ++j) {
      ensure(rows[i][j] == rows[j][i], "SymMat::from_rows expects a symmetric matrix");
      q(i, j) = rows[i][j];
    }
  }
  return q;
}

SymMat SymMat::from_mat(const Mat& m) {
  const int d = static_cast<int>(m.rows());
  SymMat q(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j <= i; ++j) {
      ensure(m(i, j) == m(j, i), "SymMat::from_mat expects a symmetric matrix");
      q(i, j) = m(i, j);
    }
  return q;
}

SymMat SymMat::outer(std::span<const std::int64_t> v) {
  const int d = static_cast<int>(v.size());
  SymMat q(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j <= i; ++j) q(i, j) = Rat(static_cast<long>(v[i] * v[j]));
  return q;
}

SymMat SymMat::from_ints(int dim, std::span<const Int> lower) {
  SymMat q(dim);
  ensure(lower.size() == q.lower_.size(), "SymMat::from_ints size mismatch");
  for (std::size_t k = 0; k < lower.size(); ++k) q.lower_[k] = lower[k];
  return q;
}

Mat SymMat::to_mat() const {
  Mat m(dim_, dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) m(i, j) = (*this)(i, j);
  return m;
}

bool SymMat::is_integral() const {
  return std::all_of(lower_.begin(), lower_.end(),
                     [](const Rat& x) { return x.get_den() == 1; });
}

bool SymMat::is_zero() const {
  return std::all_of(lower_.begin(), lower_.end(), [](const Rat& x) { return sgn(x) == 0; });
}

IntVec SymMat::to_ints() const {
  IntVec out;
  out.reserve(lower_.size());
  for (const auto& x : lower_) {
    ensure(x.get_den() == 1, "SymMat::to_ints on non-integral matrix");
    out.push_back(x.get_num());
  }
  return out;
}

Rat SymMat::eval(std::span<const std::int64_t> x) const {
  Rat s;
  for (int i = 0; i < dim_; ++i) {
    if (x[i] == 0) continue;
    Rat row = (*this)(i, i) * static_cast<long>(x[i]);
    for (int j = 0; j < i; ++j)
      if (x[j] != 0) row += 2 * (*this)(i, j) * static_cast<long>(x[j]);
    s += row * static_cast<long>(x[i]);
  }
  return s;
}

Rat SymMat::eval(std::span<const Rat> x) const {
  Rat s;
  for (int i = 0; i < dim_; ++i) {
    Rat row = (*this)(i, i) * x[i];
    for (int j = 0; j < i; ++j) row += 2 * (*this)(i, j) * x[j];
    s += row * x[i];
  }
  return s;
}

Rat SymMat::bilinear(std::span<const std::int64_t> x, std::span<const std::int64_t> y) const {
  Rat s;
  for (int i = 0; i < dim_; ++i) {
    if (x[i] == 0) continue;
    for (int j = 0; j < dim_; ++j)
      if (y[j] != 0) s += (*this)(i, j) * static_cast<long>(x[i] * y[j]);
  }
  return s;
}

Rat SymMat::bilinear(std::span<const Rat> x, std::span<const std::int64_t> y) const {
  Rat s;
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j)
      if (y[j] != 0) s += (*this)(i, j) * x[i] * static_cast<long>(y[j]);
  return s;
}

SymMat SymMat::congruent(const Mat& u) const {
  Mat m = u.transpose() * to_mat() * u;
  return from_mat(m);
}

SymMat& SymMat::operator+=(const SymMat& o) {
  ensure(dim_ == o.dim_, "SymMat dimension mismatch");
  for (std::size_t k = 0; k < lower_.size(); ++k) lower_[k] += o.lower_[k];
  return *this;
}

SymMat& SymMat::operator-=(const SymMat& o) {
  ensure(dim_ == o.dim_, "SymMat dimension mismatch");
  for (std::size_t k = 0; k < lower_.size(); ++k) lower_[k] -= o.lower_[k];
  return *this;
}

SymMat& SymMat::operator*=(const Rat& s) {
  for (auto& x : lower_) x *= s;
  return *this;
}

bool operator<(const SymMat& a, const SymMat& b) {
  if (a.dim_ != b.dim_) return a.dim_ < b.dim_;
  return std::lexicographical_compare(a.lower_.begin(), a.lower_.end(), b.lower_.begin(),
                                      b.lower_.end());
}

Rat trace_inner(const SymMat& a, const SymMat& b) {
  ensure(a.dim() == b.dim(), "trace_inner dimension mismatch");
  Rat s;
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j <= i; ++j) {
      if (i == j)
        s += a(i, i) * b(i, i);
      else
        s += 2 * a(i, j) * b(i, j);
    }
  return s;
}

RatVec trace_functional(const SymMat& a) {
  RatVec f(a.lower().size());
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j <= i; ++j) f[SymMat::index(i, j)] = i == j ? a(i, i) : 2 * a(i, j);
  return f;
}

// ---------------------------------------------------------------- decompositions

bool LDLT::positive_definite() const {
  return std::all_of(diag.begin(), diag.end(), [](const Rat& x) { return sgn(x) > 0; });
}

LDLT ldlt(const SymMat& q) {
  const int d = q.dim();
  LDLT out{Mat::identity(d), RatVec(d)};
  for (int j = 0; j < d; ++j) {
    Rat dj = q(j, j);
    for (int k = 0; k < j; ++k) dj -= out.lower(j, k) * out.lower(j, k) * out.diag[k];
    if (sgn(dj) == 0) throw Error(ErrorKind::ZeroPivotNotPD, "zero pivot at index " + std::to_string(j));
    out.diag[j] = dj;
    for (int i = j + 1; i < d; ++i) {
      Rat s = q(i, j);
      for (int k = 0; k < j; ++k) s -= out.lower(i, k) * out.lower(j, k) * out.diag[k];
      out.lower(i, j) = s / dj;
    }
  }
  return out;
}

bool is_positive_definite(const SymMat& q) {
  // Early exit on the first non-positive pivot (Sylvester via LDL^T).
  const int d = q.dim();
  Mat l = Mat::identity(d);
  RatVec diag(d);
  for (int j = 0; j < d; ++j) {
    Rat dj = q(j, j);
    for (int k = 0; k < j; ++k) dj -= l(j, k) * l(j, k) * diag[k];
    if (sgn(dj) <= 0) return false;
    diag[j] = dj;
    for (int i = j + 1; i < d; ++i) {
      Rat s = q(i, j);
      for (int k = 0; k < j; ++k) s -= l(i, k) * l(j, k) * diag[k];
      l(i, j) = s / dj;
    }
  }
  return true;
}

bool is_positive_semidefinite(const SymMat& q) {
  // Symmetric elimination with diagonal pivoting: a PSD matrix has a zero row
  // wherever the remaining diagonal is zero.
  const int d = q.dim();
  Mat a = q.to_mat();
  std::vector<bool> done(d, false);
  for (int step = 0; step < d; ++step) {
    int p = -1;
    for (int i = 0; i < d; ++i) {
      if (done[i]) continue;
      if (sgn(a(i, i)) < 0) return false;
      if (sgn(a(i, i)) > 0 && p < 0) p = i;
    }
    if (p < 0) {
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          if (!done[i] && !done[j] && sgn(a(i, j)) != 0) return false;
      return true;
    }
    done[p] = true;
    for (int i = 0; i < d; ++i) {
      if (done[i] || sgn(a(i, p)) == 0) continue;
      Rat f = a(i, p) / a(p, p);
      for (int j = 0; j < d; ++j)
        if (!done[j]) a(i, j) -= f * a(p, j);
    }
  }
  return true;
}

RatVec solve(const Mat& a, std::span<const Rat> b) {
  const std::size_t n = a.rows();
  ensure(a.cols() == n && b.size() == n, "solve expects a square system");
  Mat m(n, n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m(i, j) = a(i, j);
    m(i, n) = b[i];
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && sgn(m(p, c)) == 0) ++p;
    if (p == n) throw Error(ErrorKind::SingularMatrix, "solve: singular matrix");
    if (p != c)
      for (std::size_t j = 0; j <= n; ++j) std::swap(m(p, j), m(c, j));
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || sgn(m(i, c)) == 0) continue;
      Rat f = m(i, c) / m(c, c);
      for (std::size_t j = c; j <= n; ++j) m(i, j) -= f * m(c, j);
    }
  }
  RatVec x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = m(i, n) / m(i, i);
  return x;
}

Rat determinant(const Mat& a) {
  const std::size_t n = a.rows();
  ensure(a.cols() == n, "determinant of non-square matrix");
  Mat m = a;
  Rat det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && sgn(m(p, c)) == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(p, j), m(c, j));
      det = -det;
    }
    det *= m(c, c);
    for (std::size_t i = c + 1; i < n; ++i) {
      if (sgn(m(i, c)) == 0) continue;
      Rat f = m(i, c) / m(c, c);
      for (std::size_t j = c; j < n; ++j) m(i, j) -= f * m(c, j);
    }
  }
  return det;
}

Rat determinant(const SymMat& q) { return determinant(q.to_mat()); }

namespace {

// Reduced row echelon form in place; returns pivot columns.
std::vector<std::size_t> rref(Mat& m) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && sgn(m(p, c)) == 0) ++p;
    if (p == m.rows()) continue;
    if (p != r)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(r, j));
    Rat inv = 1 / m(r, c);
    for (std::size_t j = c; j < m.cols(); ++j) m(r, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || sgn(m(i, c)) == 0) continue;
      Rat f = m(i, c);
      for (std::size_t j = c; j < m.cols(); ++j) m(i, j) -= f * m(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

}  // namespace

std::size_t rank(const Mat& a) {
  Mat m = a;
  return rref(m).size();
}

std::size_t rank(const SymMat& q) { return rank(q.to_mat()); }

std::size_t rank(const std::vector<IntVec>& rows) {
  if (rows.empty()) return 0;
  std::vector<IntVec> m = rows;
  const std::size_t nr = m.size(), nc = m.front().size();
  std::size_t r = 0;
  Int prev = 1;
  for (std::size_t c = 0; c < nc && r < nr; ++c) {
    std::size_t p = r;
    while (p < nr && sgn(m[p][c]) == 0) ++p;
    if (p == nr) continue;
    std::swap(m[p], m[r]);
    for (std::size_t i = r + 1; i < nr; ++i) {
      for (std::size_t j = c + 1; j < nc; ++j) {
        m[i][j] = m[r][c] * m[i][j] - m[i][c] * m[r][j];
        mpz_divexact(m[i][j].get_mpz_t(), m[i][j].get_mpz_t(), prev.get_mpz_t());
      }
      m[i][c] = 0;
    }
    prev = m[r][c];
    ++r;
  }
  return r;
}

std::vector<std::size_t> independent_rows(const std::vector<IntVec>& rows) {
  std::vector<std::size_t> picked;
  if (rows.empty()) return picked;
  const std::size_t nc = rows.front().size();
  // Incrementally maintained echelon basis (integer rows, pivot column each).
  std::vector<IntVec> basis;
  std::vector<std::size_t> pivot_col;
  for (std::size_t idx = 0; idx < rows.size() && basis.size() < nc; ++idx) {
    IntVec v = rows[idx];
    for (std::size_t b = 0; b < basis.size(); ++b) {
      const std::size_t pc = pivot_col[b];
      if (sgn(v[pc]) == 0) continue;
      Int f = v[pc], g = basis[b][pc];
      for (std::size_t j = 0; j < nc; ++j) v[j] = v[j] * g - basis[b][j] * f;
    }
    auto it = std::find_if(v.begin(), v.end(), [](const Int& x) { return sgn(x) != 0; });
    if (it == v.end()) continue;
    v = gcd_normalize(std::move(v), SignConvention::PreserveSign);
    pivot_col.push_back(static_cast<std::size_t>(it - v.begin()));
    basis.push_back(std::move(v));
    picked.push_back(idx);
  }
  return picked;
}

std::vector<IntVec> kernel(const Mat& a) {
  Mat m = a;
  auto pivots = rref(m);
  std::vector<bool> is_pivot(a.cols(), false);
  for (auto c : pivots) is_pivot[c] = true;
  std::vector<IntVec> out;
  for (std::size_t f = 0; f < a.cols(); ++f) {
    if (is_pivot[f]) continue;
    RatVec v(a.cols());
    v[f] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m(r, f);
    out.push_back(primitive_integer(v));
  }
  return out;
}

// ---------------------------------------------------------------- lattices

std::vector<IntVec> hermite_basis(std::span<const Point> vectors, int d) {
  std::vector<IntVec> rows;
  rows.reserve(vectors.size());
  for (const auto& v : vectors) {
    ensure(v.size() == std::size_t(d), "hermite_basis: vector length mismatch");
    IntVec r(d);
    for (int j = 0; j < d; ++j) r[j] = static_cast<long>(v[j]);
    rows.push_back(std::move(r));
  }
  std::size_t top = 0;
  for (int c = 0; c < d && top < rows.size(); ++c) {
    // Euclid on column c among rows[top..].
    while (true) {
      std::size_t best = rows.size();
      for (std::size_t i = top; i < rows.size(); ++i) {
        if (sgn(rows[i][c]) == 0) continue;
        if (best == rows.size() || abs(rows[i][c]) < abs(rows[best][c])) best = i;
      }
      if (best == rows.size()) break;
      std::swap(rows[top], rows[best]);
      if (sgn(rows[top][c]) < 0)
        for (auto& x : rows[top]) x = -x;
      bool reduced = true;
      for (std::size_t i = top + 1; i < rows.size(); ++i) {
        if (sgn(rows[i][c]) == 0) continue;
        Int qt;
        mpz_fdiv_q(qt.get_mpz_t(), rows[i][c].get_mpz_t(), rows[top][c].get_mpz_t());
        for (int j = c; j < d; ++j) rows[i][j] -= qt * rows[top][j];
        if (sgn(rows[i][c]) != 0) reduced = false;
      }
      if (reduced) {
        ++top;
        break;
      }
    }
  }
  rows.resize(top);
  // Reduce entries above pivots into [0, pivot).
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::size_t c = 0;
    while (sgn(rows[r][c]) == 0) ++c;
    for (std::size_t i = 0; i < r; ++i) {
      Int qt;
      mpz_fdiv_q(qt.get_mpz_t(), rows[i][c].get_mpz_t(), rows[r][c].get_mpz_t());
      if (sgn(qt) == 0) continue;
      for (int j = 0; j < d; ++j) rows[i][j] -= qt * rows[r][j];
    }
  }
  return rows;
}

bool lattice_span_full(std::span<const Point> vectors, int d) {
  auto basis = hermite_basis(vectors, d);
  if (basis.size() != std::size_t(d)) return false;
  for (int i = 0; i < d; ++i)
    if (basis[i][i] != 1) return false;
  return true;
}

// ---------------------------------------------------------------- normalization

IntVec gcd_normalize(IntVec v, SignConvention sign) {
  Int g = 0;
  for (const auto& x : v) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
  if (sgn(g) == 0) throw Error(ErrorKind::ZeroInput, "gcd_normalize of the zero vector");
  if (sign == SignConvention::FirstNonzeroPositive) {
    auto it = std::find_if(v.begin(), v.end(), [](const Int& x) { return sgn(x) != 0; });
    if (sgn(*it) < 0) g = -g;
  }
  for (auto& x : v) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
  return v;
}

Point gcd_normalize(Point v, SignConvention sign) {
  std::int64_t g = 0;
  for (auto x : v) g = std::gcd(g, x < 0 ? -x : x);
  if (g == 0) throw Error(ErrorKind::ZeroInput, "gcd_normalize of the zero vector");
  if (sign == SignConvention::FirstNonzeroPositive) {
    auto it = std::find_if(v.begin(), v.end(), [](std::int64_t x) { return x != 0; });
    if (*it < 0) g = -g;
  }
  for (auto& x : v) x /= g;
  return v;
}

SymMat gcd_normalize(const SymMat& m, SignConvention sign) {
  IntVec v = primitive_integer(m.lower(), sign);
  return SymMat::from_ints(m.dim(), v);
}

IntVec primitive_integer(std::span<const Rat> v, SignConvention sign) {
  Int l = 1;
  for (const auto& x : v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
  IntVec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i].get_num() * (l / v[i].get_den());
  return gcd_normalize(std::move(out), sign);
}

// ---------------------------------------------------------------- text

SymMat read_form(std::istream& in) {
  int d = 0;
  if (!(in >> d) || d < 1) throw Error(ErrorKind::ParseError, "expected a positive dimension");
  RatVec entries;
  for (std::size_t k = 0; k < SymMat::coord_count(d); ++k) {
    std::string tok;
    if (!(in >> tok)) throw Error(ErrorKind::ParseError, "too few matrix entries");
    Rat x;
    if (x.set_str(tok, 10) != 0 || x.get_den() == 0)
      throw Error(ErrorKind::ParseError, "bad rational token '" + tok + "'");
    x.canonicalize();
    entries.push_back(x);
  }
  return SymMat(d, std::move(entries));
}

SymMat parse_form(const std::string& text) {
  std::istringstream in(text);
  return read_form(in);
}

std::string format_form(const SymMat& q) {
  std::ostringstream out;
  out << q.dim();
  for (const auto& x : q.lower()) out << ' ' << x.get_str();
  return out.str();
}

std::string to_string(const Point& p) {
  std::string s = "(";
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? "," : "") + std::to_string(p[i]);
  return s + ")";
}

std::string to_string(const RatVec& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i].get_str();
  return s + ")";
}

std::int64_t to_i64(const Int& x) {
  if (!x.fits_slong_p()) throw Error(ErrorKind::Internal, "integer exceeds 64 bits");
  return x.get_si();
}

std::int64_t to_i64(const Rat& x) {
  ensure(x.get_den() == 1, "to_i64 on a non-integer rational");
  return to_i64(x.get_num());
}

}  // namespace lcone
