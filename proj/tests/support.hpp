#pragma once

// Shared helpers and brute-force oracles for the test suites. Nothing here
// calls into the library code under test except for plain data types.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <vector>

#include <optional>

#include "lcone/error.hpp"
#include "lcone/exact.hpp"

namespace lcone::test {

inline SymMat form(int d, std::initializer_list<long> lower) {
  RatVec v;
  for (long x : lower) v.emplace_back(x);
  return SymMat(d, v);
}

inline SymMat a2() { return form(2, {2, 1, 2}); }
inline SymMat fcc() { return form(3, {2, 1, 2, 1, 1, 2}); }

/// Root lattice A_d Gram matrix (2 on the diagonal, 1 off it).
inline SymMat a_form(int d) {
  SymMat q(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j <= i; ++j) q(i, j) = i == j ? 2 : 1;
  return q;
}

inline SymMat d4() { return form(4, {2, -1, 2, 0, -1, 2, 0, -1, 0, 2}); }

/// Random unimodular integer matrix as a product of elementary operations.
inline Mat random_unimodular(int d, std::mt19937& rng, int steps = 6) {
  Mat u = Mat::identity(d);
  std::uniform_int_distribution<int> idx(0, d - 1), coef(-2, 2), coin(0, 3);
  for (int s = 0; s < steps; ++s) {
    int i = idx(rng), j = idx(rng);
    int kind = coin(rng);
    if (kind == 0 && d > 1) {
      if (i == j) continue;
      for (int r = 0; r < d; ++r) std::swap(u(r, i), u(r, j));
    } else if (kind == 1) {
      for (int r = 0; r < d; ++r) u(r, i) = -u(r, i);
    } else if (i != j) {
      int c = coef(rng);
      for (int r = 0; r < d; ++r) u(r, j) += c * u(r, i);
    }
  }
  return u;
}

inline long entry(const Rat& x) { return x.get_num().get_si(); }

/// Gauss-Jordan inverse of an invertible rational matrix.
inline Mat rational_inverse(const Mat& u) {
  const std::size_t n = u.rows();
  Mat a = u, inv = Mat::identity(n);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (a(p, c) == 0) ++p;
    for (std::size_t j = 0; j < n; ++j) {
      std::swap(a(c, j), a(p, j));
      std::swap(inv(c, j), inv(p, j));
    }
    Rat piv = a(c, c);
    for (std::size_t j = 0; j < n; ++j) {
      a(c, j) /= piv;
      inv(c, j) /= piv;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || a(r, c) == 0) continue;
      Rat f = a(r, c);
      for (std::size_t j = 0; j < n; ++j) {
        a(r, j) -= f * a(c, j);
        inv(r, j) -= f * inv(c, j);
      }
    }
  }
  return inv;
}

inline Point map_point(const Mat& u, const Point& v) {
  Point out(u.rows(), 0);
  for (std::size_t i = 0; i < u.rows(); ++i)
    for (std::size_t j = 0; j < u.cols(); ++j) out[i] += entry(u(i, j)) * v[j];
  return out;
}

/// U^T Q U, straight from the definition.
inline SymMat transform(const SymMat& q, const Mat& u) {
  const int d = q.dim();
  SymMat out(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j <= i; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) out(i, j) += u(k, i) * q(k, l) * u(l, j);
  return out;
}

/// Q[x] in plain rationals, straight from the definition.
inline Rat norm(const SymMat& q, const Point& x) {
  Rat s = 0;
  for (int i = 0; i < q.dim(); ++i)
    for (int j = 0; j < q.dim(); ++j) s += q(i, j) * Rat(x[i]) * Rat(x[j]);
  return s;
}

inline Rat norm(const SymMat& q, const RatVec& x) {
  Rat s = 0;
  for (int i = 0; i < q.dim(); ++i)
    for (int j = 0; j < q.dim(); ++j) s += q(i, j) * x[i] * x[j];
  return s;
}

inline void for_each_in_box(int d, int radius, const std::function<void(const Point&)>& f) {
  Point p(d, -radius);
  while (true) {
    f(p);
    int i = 0;
    while (i < d && p[i] == radius) p[i++] = -radius;
    if (i == d) return;
    ++p[i];
  }
}

/// Box radius that certainly contains every v with Q[v - c] <= bound, for c in
/// [-1, 1]^d: |v_i - c_i| <= sqrt(bound * (Q^-1)_ii).
inline int box_radius(const SymMat& q, const Rat& bound) {
  const int d = q.dim();
  Mat m = q.to_mat();
  Mat inv = rational_inverse(m);  // works for any invertible rational matrix
  double r = 0;
  for (int i = 0; i < d; ++i) r = std::max(r, std::sqrt(bound.get_d() * inv(i, i).get_d()));
  return int(std::ceil(r)) + 2;
}

/// Nonzero v with Q[v] <= bound by scanning a box; lexicographic order.
inline std::vector<Point> brute_short_vectors(const SymMat& q, const Rat& bound) {
  std::vector<Point> out;
  for_each_in_box(q.dim(), box_radius(q, bound), [&](const Point& p) {
    if (std::any_of(p.begin(), p.end(), [](auto x) { return x != 0; }) && norm(q, p) <= bound) out.push_back(p);
  });
  std::sort(out.begin(), out.end());
  return out;
}

/// Integer span equals Z^d: every unit vector is an integer combination
/// (checked by the gcd of all maximal minors being 1).
inline bool brute_span_full(const std::vector<Point>& vs, int d) {
  if (vs.size() < std::size_t(d)) return false;
  Int g = 0;
  std::vector<std::size_t> pick(d);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t k, std::size_t start) {
    if (k == std::size_t(d)) {
      Mat m(d, d);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) m(i, j) = vs[pick[i]][j];
      // Leibniz expansion for small d.
      std::vector<int> perm(d);
      for (int i = 0; i < d; ++i) perm[i] = i;
      Rat det = 0;
      do {
        int inv = 0;
        for (int i = 0; i < d; ++i)
          for (int j = i + 1; j < d; ++j) inv += perm[i] > perm[j];
        Rat t = inv % 2 ? -1 : 1;
        for (int i = 0; i < d; ++i) t *= m(i, perm[i]);
        det += t;
      } while (std::next_permutation(perm.begin(), perm.end()));
      Int a = abs(det.get_num());
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), a.get_mpz_t());
      return;
    }
    for (std::size_t i = start; i < vs.size(); ++i) {
      pick[k] = i;
      rec(k + 1, i + 1);
    }
  };
  rec(0, 0);
  return g == 1;
}

/// Number of integral U with U^T Q U = Q2, by backtracking over the images
/// of the standard basis (image of e_i must have norm Q2_ii and the right
/// inner products with earlier images).
inline std::size_t count_isometries(const SymMat& q, const SymMat& q2) {
  const int d = q.dim();
  std::vector<std::vector<Point>> cand(d);
  for (int i = 0; i < d; ++i)
    for (const auto& v : brute_short_vectors(q, q2(i, i)))
      if (norm(q, v) == q2(i, i)) cand[i].push_back(v);
  auto inner = [&](const Point& x, const Point& y) {
    Rat s = 0;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) s += q(i, j) * Rat(x[i]) * Rat(y[j]);
    return s;
  };
  std::vector<Point> img(d);
  std::size_t count = 0;
  std::function<void(int)> rec = [&](int i) {
    // det(U)^2 = det Q2 / det Q, so U is unimodular whenever the forms have equal determinants.
    if (i == d) {
      ++count;
      return;
    }
    for (const auto& v : cand[i]) {
      bool ok = true;
      for (int j = 0; j < i && ok; ++j) ok = inner(img[j], v) == q2(i, j);
      if (!ok) continue;
      img[i] = v;
      rec(i + 1);
    }
  };
  rec(0);
  return count;
}

/// For every nonzero class of Z^d / 2Z^d: its minimal norm and all vectors
/// attaining it. Each class has a representative in {0,1}^d, which bounds
/// the scan.
inline std::map<Point, std::pair<Rat, std::vector<Point>>> coset_minima(const SymMat& q) {
  const int d = q.dim();
  Rat bound = 0;
  for_each_in_box(d, 1, [&](const Point& p) {
    if (std::all_of(p.begin(), p.end(), [](auto x) { return x >= 0; })) bound = std::max(bound, norm(q, p));
  });
  std::map<Point, std::pair<Rat, std::vector<Point>>> best;
  for_each_in_box(d, box_radius(q, bound), [&](const Point& p) {
    Point key(d);
    for (int i = 0; i < d; ++i) key[i] = ((p[i] % 2) + 2) % 2;
    if (std::all_of(key.begin(), key.end(), [](auto x) { return x == 0; })) return;
    Rat n = norm(q, p);
    auto it = best.find(key);
    if (it == best.end() || n < it->second.first)
      best[key] = {n, {p}};
    else if (n == it->second.first)
      it->second.second.push_back(p);
  });
  return best;
}

/// Voronoi's criterion: v is relevant iff +-v are the only minimal vectors of v + 2Z^d.
inline std::size_t relevant_count(const SymMat& q) {
  std::size_t count = 0;
  for (const auto& [k, v] : coset_minima(q))
    if (v.second.size() == 2) count += 2;
  return count;
}

/// DV vertices of an integral form with d <= 3: every d-subset of bisector
/// hyperplanes 2 v^T Q x = Q[v] (v minimal in its parity class) is solved by
/// Cramer's rule in 64-bit integers and kept when it satisfies all of them.
inline std::set<RatVec> brute_dv_vertices(const SymMat& q) {
  const int d = q.dim();
  std::vector<std::vector<long>> rows;  // (a_1..a_d, b): a.x <= b
  for (const auto& [k, m] : coset_minima(q))
    for (const auto& v : m.second) {
      std::vector<long> r(d + 1, 0);
      for (int j = 0; j < d; ++j)
        for (int i = 0; i < d; ++i) r[j] += 2 * entry(q(i, j)) * v[i];
      r[d] = entry(norm(q, v));
      rows.push_back(r);
    }
  auto det = [&](const std::vector<std::vector<long>>& m) -> long {
    if (d == 1) return m[0][0];
    if (d == 2) return m[0][0] * m[1][1] - m[0][1] * m[1][0];
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  };
  std::set<RatVec> out;
  std::vector<std::size_t> pick(d);
  std::function<void(int, std::size_t)> rec = [&](int k, std::size_t start) {
    if (k == d) {
      std::vector<std::vector<long>> a(d, std::vector<long>(d));
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) a[i][j] = rows[pick[i]][j];
      long den = det(a);
      if (den == 0) return;
      std::vector<long> num(d);
      for (int c = 0; c < d; ++c) {
        auto m = a;
        for (int i = 0; i < d; ++i) m[i][c] = rows[pick[i]][d];
        num[c] = det(m);
      }
      if (den < 0) {
        den = -den;
        for (auto& x : num) x = -x;
      }
      for (const auto& r : rows) {
        long lhs = 0;
        for (int j = 0; j < d; ++j) lhs += r[j] * num[j];
        if (lhs > r[d] * den) return;
      }
      RatVec x(d);
      for (int j = 0; j < d; ++j) {
        x[j] = Rat(num[j], den);
        x[j].canonicalize();
      }
      out.insert(x);
      return;
    }
    for (std::size_t i = start; i < rows.size(); ++i) {
      pick[k] = i;
      rec(k + 1, i + 1);
    }
  };
  rec(0, 0);
  return out;
}

/// Random diagonally dominant (hence positive definite) integral form.
inline SymMat random_pd_form(int d, std::mt19937& rng) {
  std::uniform_int_distribution<int> diag(1, 3);
  SymMat q(d);
  for (int i = 0; i < d; ++i) q(i, i) = diag(rng) * d;
  std::uniform_int_distribution<int> off(-1, 1);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < i; ++j) q(i, j) = off(rng);
  return q;
}

/// Kind of the lcone::Error thrown by f, or nullopt when it returns normally.
template <class F>
std::optional<ErrorKind> error_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return std::nullopt;
}

/// v v^T.
inline SymMat outer(const Point& v) {
  SymMat m(int(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = 0; j <= i; ++j) m(i, j) = Rat(v[i]) * Rat(v[j]);
  return m;
}

/// <a, b> = trace(a b) = sum_ij a_ij b_ij.
inline Rat pairing(const SymMat& a, const SymMat& b) {
  Rat s = 0;
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) s += a(i, j) * b(i, j);
  return s;
}

}  // namespace lcone::test
