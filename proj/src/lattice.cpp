#include "lcone/lattice.hpp"

#include <algorithm>

namespace lcone {

namespace {

constexpr std::int64_t kCoordinateLimit = std::int64_t(1) << 40;

struct Enumerator {
  const LDLT& fact;
  std::span<const Rat> center;
  // The bound may shrink during the walk (closest-vector search).
  Rat& bound;
  const std::function<void(const Point&, const Rat&)>& visit;
  int d;
  Point v;

  void walk(int i, const Rat& used) {
    Rat offset;
    for (int j = i + 1; j < d; ++j)
      offset += fact.lower(j, i) * (Rat(static_cast<long>(v[j])) - center[j]);
    // y_i = v_i - t with t = c_i - offset
    const Rat t = center[i] - offset;
    const Rat& di = fact.diag[i];
    Int fl;
    mpz_fdiv_q(fl.get_mpz_t(), t.get_num_mpz_t(), t.get_den_mpz_t());
    auto try_value = [&](std::int64_t x) -> bool {
      Rat y = Rat(static_cast<long>(x)) - t;
      Rat total = used + di * y * y;
      if (total > bound) return false;
      if (x > kCoordinateLimit || x < -kCoordinateLimit)
        throw Error(ErrorKind::Internal, "lattice enumeration coordinate overflow");
      v[i] = x;
      if (i == 0)
        visit(v, total);
      else
        walk(i - 1, total);
      return true;
    };
    const std::int64_t start = to_i64(fl);
    for (std::int64_t x = start;; --x)
      if (!try_value(x)) break;
    for (std::int64_t x = start + 1;; ++x)
      if (!try_value(x)) break;
  }
};

LDLT require_pd(const SymMat& q) {
  try {
    LDLT f = ldlt(q);
    if (!f.positive_definite()) throw Error(ErrorKind::NotPositiveDefinite, "form is not positive definite");
    return f;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ZeroPivotNotPD)
      throw Error(ErrorKind::NotPositiveDefinite, "form is not positive definite");
    throw;
  }
}

void enumerate(const LDLT& fact, std::span<const Rat> center, Rat& bound,
               const std::function<void(const Point&, const Rat&)>& visit) {
  const int d = static_cast<int>(fact.diag.size());
  Enumerator e{fact, center, bound, visit, d, Point(d, 0)};
  e.walk(d - 1, Rat(0));
}

}  // namespace

void for_each_in_ellipsoid(const SymMat& q, std::span<const Rat> center, const Rat& bound,
                           const std::function<void(const Point&, const Rat&)>& visit) {
  LDLT fact = require_pd(q);
  Rat b = bound;
  enumerate(fact, center, b, visit);
}

VectorSet short_vectors(const SymMat& q, const Rat& bound) {
  const int d = q.dim();
  RatVec origin(d);
  std::vector<std::pair<Point, Rat>> found;
  for_each_in_ellipsoid(q, origin, bound, [&](const Point& v, const Rat& n) {
    if (sgn(n) != 0) found.emplace_back(v, n);
  });
  std::sort(found.begin(), found.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  VectorSet out{d, {}, {}, bound};
  for (auto& [v, n] : found) {
    out.vectors.push_back(std::move(v));
    out.norms.push_back(std::move(n));
  }
  return out;
}

ClosestVectors closest_vectors(const SymMat& q, std::span<const Rat> center) {
  LDLT fact = require_pd(q);
  const int d = q.dim();
  // Seed the bound with the coordinatewise rounding of the center.
  Point seed(d);
  RatVec diff(d);
  for (int i = 0; i < d; ++i) {
    Int fl;
    Rat shifted = center[i] + Rat(1, 2);
    mpz_fdiv_q(fl.get_mpz_t(), shifted.get_num_mpz_t(), shifted.get_den_mpz_t());
    seed[i] = to_i64(fl);
    diff[i] = Rat(static_cast<long>(seed[i])) - center[i];
  }
  Rat bound = q.eval(diff);
  ClosestVectors out{bound, {}};
  enumerate(fact, center, bound, [&](const Point& v, const Rat& n) {
    if (n < out.min) {
      out.min = n;
      out.argmins.clear();
      bound = n;
    }
    if (n == out.min) out.argmins.push_back(v);
  });
  std::sort(out.argmins.begin(), out.argmins.end());
  return out;
}

VectorSet characteristic_set(const SymMat& q) {
  const int d = q.dim();
  if (!is_positive_definite(q)) throw Error(ErrorKind::NotPositiveDefinite, "characteristic_set needs a PD form");
  // The unit vectors lie in S(Q, max_i q_ii), so that layer always spans.
  Rat top = q(0, 0);
  for (int i = 1; i < d; ++i) top = std::max(top, q(i, i));
  VectorSet all = short_vectors(q, top);
  std::vector<Rat> levels = all.norms;
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  for (const auto& n : levels) {
    std::vector<Point> layer;
    for (std::size_t k = 0; k < all.vectors.size(); ++k)
      if (all.norms[k] <= n) layer.push_back(all.vectors[k]);
    if (!lattice_span_full(layer, d)) continue;
    VectorSet out{d, {}, {}, n};
    for (std::size_t k = 0; k < all.vectors.size(); ++k)
      if (all.norms[k] <= n) {
        out.vectors.push_back(all.vectors[k]);
        out.norms.push_back(all.norms[k]);
      }
    return out;
  }
  throw Error(ErrorKind::Internal, "characteristic_set: no spanning layer found");
}

}  // namespace lcone
