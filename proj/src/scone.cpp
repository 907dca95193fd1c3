#include "lcone/scone.hpp"

#include <algorithm>
#include <set>

#include "lcone/polyhedral.hpp"

namespace lcone {

namespace {

std::vector<IntVec> ray_rows(const std::vector<SymMat>& rays) {
  std::vector<IntVec> rows;
  rows.reserve(rays.size());
  for (const auto& r : rays) rows.push_back(r.to_ints());
  return rows;
}

std::size_t ray_rank(const std::vector<SymMat>& rays, const Bits& subset) {
  std::vector<IntVec> rows;
  for (auto i : subset.indices()) rows.push_back(rays[i].to_ints());
  return rank(rows);
}

// <g, Q> as a functional f on coordinates, back to the matrix g.
SymMat from_functional(int d, const RatVec& f, SignConvention sign) {
  SymMat g(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j <= i; ++j) g(i, j) = i == j ? f[SymMat::index(i, j)] : f[SymMat::index(i, j)] / 2;
  return gcd_normalize(g, sign);
}

// Greedy affinely independent subset of d+1 points, starting from the first.
std::vector<Point> affine_basis(const std::vector<Point>& pts, int d) {
  std::vector<Point> basis{pts.front()};
  std::vector<IntVec> rows;
  for (std::size_t k = 1; k < pts.size() && basis.size() < std::size_t(d) + 1; ++k) {
    IntVec r(d);
    for (int j = 0; j < d; ++j) r[j] = static_cast<long>(pts[k][j] - pts[0][j]);
    rows.push_back(r);
    if (rank(rows) == rows.size())
      basis.push_back(pts[k]);
    else
      rows.pop_back();
  }
  if (basis.size() != std::size_t(d) + 1)
    throw Error(ErrorKind::AffinelyDependent, "cell is not full-dimensional");
  return basis;
}

ConeDesc face_with_tight(const ConeDesc& c, const std::vector<Bits>& tight, const Bits& subset,
                         const std::vector<SymMat>& extra) {
  ConeDesc f;
  f.d = c.d;
  f.equalities = c.equalities;
  f.equalities.insert(f.equalities.end(), extra.begin(), extra.end());
  for (auto i : subset.indices()) f.rays.push_back(c.rays[i]);
  f.dim = rank(ray_rows(f.rays));
  if (f.dim > 0) {
    std::vector<Bits> seen;
    for (std::size_t j = 0; j < c.inequalities.size(); ++j) {
      Bits inter = tight[j] & subset;
      if (inter == subset) continue;
      if (ray_rank(c.rays, inter) + 1 != f.dim) continue;
      if (std::find(seen.begin(), seen.end(), inter) != seen.end()) continue;
      seen.push_back(inter);
      f.inequalities.push_back(c.inequalities[j]);
    }
  }
  f.central = f.rays.empty() ? SymMat(c.d) : central_form(f.rays);
  return f;
}

}  // namespace

Regulator regulator(const std::vector<Point>& simplex, const Point& w) {
  const int d = static_cast<int>(w.size());
  if (simplex.size() != std::size_t(d) + 1)
    throw Error(ErrorKind::AffinelyDependent, "regulator needs d+1 points");
  Regulator out{SymMat(d), false, simplex, w};
  if (std::find(simplex.begin(), simplex.end(), w) != simplex.end()) {
    out.degenerate = true;
    return out;
  }
  Mat a(d + 1, d + 1);
  RatVec b(d + 1);
  for (int k = 0; k <= d; ++k) {
    for (int j = 0; j < d; ++j) a(j, k) = static_cast<long>(simplex[k][j]);
    a(d, k) = 1;
  }
  for (int j = 0; j < d; ++j) b[j] = static_cast<long>(w[j]);
  b[d] = 1;
  RatVec alpha;
  try {
    alpha = solve(a, b);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::SingularMatrix)
      throw Error(ErrorKind::AffinelyDependent, "regulator: simplex is affinely dependent");
    throw;
  }
  SymMat n = SymMat::outer(w);
  for (int k = 0; k <= d; ++k)
    if (sgn(alpha[k]) != 0) n -= SymMat::outer(simplex[k]) * alpha[k];
  if (n.is_zero()) {
    out.degenerate = true;
    return out;
  }
  out.matrix = gcd_normalize(n, SignConvention::PreserveSign);
  return out;
}

ConeDesc secondary_cone(const DelaunayStar& t, bool must_be_triangulation) {
  const bool tri = is_triangulation(t);
  if (must_be_triangulation && !tri)
    throw Error(ErrorKind::NotATriangulation, "subdivision is not a triangulation");
  const int d = t.dim();
  const std::size_t n = SymMat::coord_count(d);

  std::set<SymMat> eqs, ineqs;
  for (std::size_t cls = 0; cls < t.classes.size(); ++cls) {
    const Cell& rep = t.representative(cls);
    const std::vector<Point> basis = affine_basis(rep.vertices, d);
    for (const auto& v : rep.vertices) {
      Regulator r = regulator(basis, v);
      if (!r.degenerate) eqs.insert(gcd_normalize(r.matrix));
    }
    for (const auto& link : t.adjacency[cls]) {
      Cell nb = translate(t.representative(link.neighbor_class), link.translation);
      std::vector<Point> facet;
      for (auto k : link.facet) facet.push_back(rep.vertices[k]);
      auto w = std::find_if(nb.vertices.begin(), nb.vertices.end(), [&](const Point& p) {
        return std::find(facet.begin(), facet.end(), p) == facet.end();
      });
      ensure(w != nb.vertices.end(), "secondary_cone: neighbor equals facet");
      Regulator r = regulator(basis, *w);
      ensure(!r.degenerate, "secondary_cone: degenerate wall regulator");
      ineqs.insert(r.matrix);
    }
  }

  HRep h{n, {}, {}};
  for (const auto& e : eqs) h.equalities.push_back(trace_functional(e));
  for (const auto& g : ineqs) h.inequalities.push_back(trace_functional(g));

  ConeDesc c;
  c.d = d;
  c.equalities.assign(eqs.begin(), eqs.end());
  for (const auto& r : extreme_rays(h)) c.rays.push_back(SymMat::from_ints(d, r));
  std::sort(c.rays.begin(), c.rays.end());
  c.dim = rank(ray_rows(c.rays));
  ensure(!tri || c.dim == n, "secondary cone of a triangulation is not full-dimensional");

  // An inequality defines a facet iff the rays it vanishes on span a hyperplane
  // of the cone.
  c.inequalities.assign(ineqs.begin(), ineqs.end());
  auto tight = inequality_tight_sets(c);
  std::vector<SymMat> kept;
  std::vector<Bits> seen;
  for (std::size_t j = 0; j < c.inequalities.size(); ++j) {
    if (tight[j].count() == c.rays.size()) continue;
    if (ray_rank(c.rays, tight[j]) + 1 != c.dim) continue;
    if (std::find(seen.begin(), seen.end(), tight[j]) != seen.end()) continue;
    seen.push_back(tight[j]);
    kept.push_back(c.inequalities[j]);
  }
  c.inequalities = std::move(kept);
  c.central = central_form(c.rays);
  return c;
}

SymMat central_form(const std::vector<SymMat>& rays) {
  if (rays.empty()) throw Error(ErrorKind::EmptyRaySet, "central form of an empty ray set");
  SymMat s(rays.front().dim());
  for (const auto& r : rays) s += r;
  return s;
}

std::vector<Bits> inequality_tight_sets(const ConeDesc& c) {
  auto rows = ray_rows(c.rays);
  std::vector<Bits> out;
  out.reserve(c.inequalities.size());
  for (const auto& g : c.inequalities) out.push_back(tight_set(trace_functional(g), rows));
  return out;
}

ConeDesc face_of(const ConeDesc& c, const Bits& subset, const std::vector<SymMat>& extra) {
  return face_with_tight(c, inequality_tight_sets(c), subset, extra);
}

std::vector<ConeDesc> cone_facets(const ConeDesc& c) {
  if (c.dim <= 1) return {};
  auto tight = inequality_tight_sets(c);
  std::vector<ConeDesc> out;
  out.reserve(c.inequalities.size());
  for (std::size_t i = 0; i < c.inequalities.size(); ++i)
    out.push_back(face_with_tight(c, tight, tight[i], {c.inequalities[i]}));
  return out;
}

ConeDesc cone_from_rays(int d, std::vector<SymMat> rays) {
  if (rays.empty()) throw Error(ErrorKind::EmptyRaySet, "cone_from_rays: no rays");
  for (auto& r : rays) r = gcd_normalize(r, SignConvention::PreserveSign);
  std::sort(rays.begin(), rays.end());
  rays.erase(std::unique(rays.begin(), rays.end()), rays.end());
  const std::size_t n = SymMat::coord_count(d);
  const auto rows = ray_rows(rays);
  HRep h = facets_from_rays(rows, n);
  // Keep the extreme generators: those whose tight facets cut out a single ray.
  std::vector<Bits> tight;
  for (const auto& f : h.inequalities) tight.push_back(tight_set(f, rows));
  std::vector<SymMat> extreme;
  for (std::size_t i = 0; i < rays.size(); ++i) {
    std::vector<IntVec> common;
    for (std::size_t k = 0; k < rays.size(); ++k) {
      bool on = true;
      for (const auto& t : tight)
        if (t.test(i) && !t.test(k)) on = false;
      if (on) common.push_back(rows[k]);
    }
    if (rank(common) == 1) extreme.push_back(rays[i]);
  }
  rays = std::move(extreme);
  ConeDesc c;
  c.d = d;
  for (const auto& e : h.equalities) c.equalities.push_back(from_functional(d, e, SignConvention::FirstNonzeroPositive));
  for (const auto& f : h.inequalities) c.inequalities.push_back(from_functional(d, f, SignConvention::PreserveSign));
  std::sort(c.inequalities.begin(), c.inequalities.end());
  c.rays = std::move(rays);
  c.dim = rank(ray_rows(c.rays));
  c.central = central_form(c.rays);
  return c;
}

bool contains_pd(const ConeDesc& c) {
  for (const auto& r : c.rays)
    if (!is_positive_semidefinite(r)) throw Error(ErrorKind::NonPSDRay, "cone ray is not PSD");
  if (c.rays.empty()) return false;
  return is_positive_definite(c.central);
}

std::optional<ConeDesc> fundamental_face(const ConeDesc& c) {
  Bits high(c.rays.size());
  for (std::size_t i = 0; i < c.rays.size(); ++i)
    if (rank(c.rays[i]) > 1) high.set(i);
  if (high.none()) return std::nullopt;
  auto tight = inequality_tight_sets(c);
  Bits face(c.rays.size());
  for (std::size_t i = 0; i < c.rays.size(); ++i) face.set(i);
  std::vector<SymMat> active;
  for (std::size_t j = 0; j < tight.size(); ++j) {
    if (!high.subset_of(tight[j])) continue;
    face &= tight[j];
    active.push_back(c.inequalities[j]);
  }
  return face_with_tight(c, tight, face, active);
}

std::map<std::size_t, std::size_t> rank_profile(const ConeDesc& c) {
  std::map<std::size_t, std::size_t> out;
  for (const auto& r : c.rays) ++out[rank(r)];
  return out;
}

bool cone_contains(const ConeDesc& c, const SymMat& q) {
  for (const auto& e : c.equalities)
    if (sgn(trace_inner(e, q)) != 0) return false;
  for (const auto& g : c.inequalities)
    if (sgn(trace_inner(g, q)) < 0) return false;
  return true;
}

bool cone_relint_contains(const ConeDesc& c, const SymMat& q) {
  for (const auto& e : c.equalities)
    if (sgn(trace_inner(e, q)) != 0) return false;
  for (const auto& g : c.inequalities)
    if (sgn(trace_inner(g, q)) <= 0) return false;
  return true;
}

std::pair<DelaunayStar, ConeDesc> cross_wall(const ConeDesc& cone, const SymMat& wallpoint,
                                             const SymMat& center) {
  if (wallpoint == center) throw Error(ErrorKind::NotOnSingleFacet, "wallpoint equals center");
  if (!is_positive_definite(wallpoint))
    throw Error(ErrorKind::NotPositiveDefinite, "wallpoint is not positive definite");
  std::size_t zero = 0;
  for (const auto& g : cone.inequalities) {
    int s = sgn(trace_inner(g, wallpoint));
    if (s < 0) throw Error(ErrorKind::NotOnSingleFacet, "wallpoint outside the cone");
    if (s == 0) ++zero;
  }
  if (zero != 1) throw Error(ErrorKind::NotOnSingleFacet, "wallpoint is not on exactly one facet");

  const SymMat step = wallpoint - center;
  Rat eps = 1;
  for (int round = 0; round < 256; ++round, eps /= 2) {
    SymMat probe = wallpoint + step * eps;
    if (!is_positive_definite(probe)) continue;
    DelaunayStar next = delaunay_star(probe);
    if (!is_triangulation(next)) continue;
    ConeDesc c2 = secondary_cone(next);
    bool closed = std::all_of(c2.inequalities.begin(), c2.inequalities.end(),
                              [&](const SymMat& g) { return sgn(trace_inner(g, wallpoint)) >= 0; });
    if (closed) return {std::move(next), std::move(c2)};
  }
  throw Error(ErrorKind::Internal, "wall crossing did not converge");
}

}  // namespace lcone
