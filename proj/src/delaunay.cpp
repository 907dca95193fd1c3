#include "lcone/delaunay.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <optional>

#include "lcone/lattice.hpp"
#include "lcone/polyhedral.hpp"
#include "lcone/scone.hpp"

namespace lcone {

namespace {

RatVec to_rat(const Point& p) {
  RatVec r(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) r[i] = static_cast<long>(p[i]);
  return r;
}

RatVec to_rat(const IntVec& p) { return RatVec(p.begin(), p.end()); }

RatVec times(const SymMat& q, const RatVec& x) {
  const int d = q.dim();
  RatVec out(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      if (sgn(x[j]) != 0) out[i] += q(i, j) * x[j];
  return out;
}

Rat dot(const RatVec& a, const RatVec& b) {
  Rat s;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

RatVec axpy(const RatVec& c, const Rat& t, const RatVec& u) {
  RatVec out = c;
  for (std::size_t i = 0; i < c.size(); ++i) out[i] += t * u[i];
  return out;
}

// Move the center c along u. Points of the sphere through w0 that are
// Q-orthogonal to u stay on it. Returns the first time t > 0 at which a new
// lattice point p (one with 2u^T Q (p - w0) > 0) reaches the growing sphere.
Rat first_hit(const SymMat& q, const RatVec& c, const Rat& r2, const Point& w0, const RatVec& u) {
  const RatVec qu = times(q, u);
  const Rat quu = dot(qu, u);
  const RatVec w0r = to_rat(w0);
  const Rat qu_w0 = dot(qu, w0r);
  const Rat slope = 2 * (dot(qu, c) - qu_w0);
  // Start with a step of about the current radius.
  Rat t_hi = 1;
  const Rat floor_r2 = sgn(r2) > 0 ? r2 : Rat(1);
  while (t_hi * t_hi * quu > floor_r2) t_hi /= 2;
  for (int round = 0; round < 400; ++round) {
    const RatVec ch = axpy(c, t_hi, u);
    const Rat rh = r2 + t_hi * slope + t_hi * t_hi * quu;
    std::optional<Rat> best;
    for_each_in_ellipsoid(q, ch, rh, [&](const Point& p, const Rat&) {
      Rat b = 2 * (dot(qu, to_rat(p)) - qu_w0);
      if (sgn(b) <= 0) return;
      RatVec diff = c;
      for (std::size_t i = 0; i < diff.size(); ++i) diff[i] -= static_cast<long>(p[i]);
      Rat t = (q.eval(diff) - r2) / b;
      if (!best || t < *best) best = t;
    });
    if (best) {
      ensure(sgn(*best) > 0, "first_hit: sphere was not empty");
      return *best;
    }
    t_hi *= 2;
  }
  throw Error(ErrorKind::Internal, "first_hit: no lattice point found");
}

Rat radius_at(const SymMat& q, const RatVec& c, const Point& w0, const RatVec& u, const Rat& t) {
  RatVec diff = axpy(c, t, u);
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] -= static_cast<long>(w0[i]);
  return q.eval(diff);
}

Cell verified_cell(const SymMat& q, RatVec center, const Rat& r2) {
  ClosestVectors cv = closest_vectors(q, center);
  ensure(cv.min == r2, "Delaunay sphere is not empty");
  return Cell{std::move(cv.argmins), std::move(center), r2};
}

std::size_t point_rank(const std::vector<Point>& pts) {
  std::vector<IntVec> rows;
  for (const auto& p : pts) rows.emplace_back(p.begin(), p.end());
  return rank(rows);
}

}  // namespace

std::pair<RatVec, Rat> circumcenter(const SymMat& q, const std::vector<Point>& vertices) {
  const int d = q.dim();
  if (vertices.size() != std::size_t(d) + 1)
    throw Error(ErrorKind::AffinelyDependent, "circumcenter needs d+1 points");
  // 2 (v_i - v_0)^T Q c = Q[v_i] - Q[v_0]
  Mat a(d, d);
  RatVec b(d);
  const RatVec v0 = to_rat(vertices[0]);
  const RatVec qv0 = times(q, v0);
  for (int i = 0; i < d; ++i) {
    const RatVec vi = to_rat(vertices[i + 1]);
    const RatVec qvi = times(q, vi);
    for (int j = 0; j < d; ++j) a(i, j) = 2 * (qvi[j] - qv0[j]);
    b[i] = dot(qvi, vi) - dot(qv0, v0);
  }
  RatVec c;
  try {
    c = solve(a, b);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::SingularMatrix)
      throw Error(ErrorKind::AffinelyDependent, "circumcenter: points are affinely dependent");
    throw;
  }
  RatVec diff = c;
  for (int j = 0; j < d; ++j) diff[j] -= v0[j];
  Rat r2 = q.eval(diff);
  return {std::move(c), std::move(r2)};
}

Cell translate(const Cell& c, const Point& t) {
  Cell out = c;
  for (auto& v : out.vertices)
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += t[i];
  for (std::size_t i = 0; i < t.size(); ++i) out.center[i] += static_cast<long>(t[i]);
  return out;
}

std::vector<std::vector<std::size_t>> cell_facets(const Cell& c) {
  const std::size_t d = c.center.size();
  std::vector<std::vector<std::size_t>> out;
  if (c.vertices.size() == d + 1) {
    for (std::size_t skip = d + 1; skip-- > 0;) {
      std::vector<std::size_t> f;
      for (std::size_t i = 0; i <= d; ++i)
        if (i != skip) f.push_back(i);
      out.push_back(std::move(f));
    }
    return out;
  }
  std::vector<RatVec> pts;
  for (const auto& v : c.vertices) pts.push_back(to_rat(v));
  LatPolytope p = polytope_from_vertices(pts);
  ensure(p.vertices == pts, "cell_facets: a cell vertex is not extreme");
  for (const auto& inc : p.incidence) out.push_back(inc.indices());
  std::sort(out.begin(), out.end());
  return out;
}

Cell initial_cell(const SymMat& q) {
  const int d = q.dim();
  Rat top = q(0, 0);
  for (int i = 1; i < d; ++i) top = std::min(top, q(i, i));
  VectorSet s = short_vectors(q, top);
  Rat m = *std::min_element(s.norms.begin(), s.norms.end());
  Point v;
  for (std::size_t i = 0; i < s.vectors.size(); ++i)
    if (s.norms[i] == m) v = s.vectors[i];  // lexicographically largest

  RatVec c = to_rat(v);
  for (auto& x : c) x /= 2;
  Rat r2 = m / 4;
  Cell cell = verified_cell(q, c, r2);
  const Point origin(d, 0);

  while (point_rank(cell.vertices) < std::size_t(d)) {
    std::vector<RatVec> rows;
    for (const auto& w : cell.vertices) rows.push_back(times(q, to_rat(w)));
    std::optional<std::pair<Rat, RatVec>> best;  // (radius, new center)
    for (const auto& k : kernel(Mat::from_rows(rows))) {
      for (int sign : {1, -1}) {
        RatVec u = to_rat(k);
        if (sign < 0)
          for (auto& x : u) x = -x;
        Rat t = first_hit(q, cell.center, cell.sqradius, origin, u);
        Rat r = radius_at(q, cell.center, origin, u, t);
        if (!best || r < best->first) best = {r, axpy(cell.center, t, u)};
      }
    }
    if (!best) throw Error(ErrorKind::Internal, "initial_cell: no extension direction for " + format_form(q));
    cell = verified_cell(q, std::move(best->second), best->first);
  }
  return cell;
}

Cell adjacent_cell(const SymMat& q, const Cell& cell, const std::vector<Point>& facet) {
  const int d = q.dim();
  for (const auto& f : facet)
    if (!std::binary_search(cell.vertices.begin(), cell.vertices.end(), f))
      throw Error(ErrorKind::NotAFacet, "facet point is not a cell vertex");
  if (facet.empty()) throw Error(ErrorKind::NotAFacet, "empty facet");
  std::vector<RatVec> hom;
  for (const auto& f : facet) {
    RatVec r(d + 1);
    r[0] = 1;
    for (int j = 0; j < d; ++j) r[j + 1] = static_cast<long>(f[j]);
    hom.push_back(std::move(r));
  }
  auto ker = kernel(Mat::from_rows(hom));
  if (ker.size() != 1) throw Error(ErrorKind::NotAFacet, "facet does not span a hyperplane");
  IntVec h = ker[0];
  auto side = [&](const Point& x) {
    Int s = h[0];
    for (int j = 0; j < d; ++j) s += h[j + 1] * static_cast<long>(x[j]);
    return sgn(s);
  };
  int orientation = 0;
  for (const auto& v : cell.vertices) {
    if (std::find(facet.begin(), facet.end(), v) != facet.end()) continue;
    int s = side(v);
    if (s == 0 || (orientation != 0 && s != orientation))
      throw Error(ErrorKind::NotAFacet, "vertex set is not a facet of the cell");
    orientation = s;
  }
  if (orientation == 0) throw Error(ErrorKind::NotAFacet, "cell has no vertex off the facet");
  // Outward normal n; the center moves along Q^{-1} n.
  RatVec n(d);
  for (int j = 0; j < d; ++j) n[j] = orientation > 0 ? Rat(-h[j + 1]) : Rat(h[j + 1]);
  RatVec u = solve(q.to_mat(), n);
  Rat t = first_hit(q, cell.center, cell.sqradius, facet[0], u);
  Rat r = radius_at(q, cell.center, facet[0], u, t);
  return verified_cell(q, axpy(cell.center, t, u), r);
}

DelaunayStar delaunay_star(const SymMat& q) {
  const int d = q.dim();
  std::vector<Cell> reps;
  std::vector<std::vector<FacetLink>> links;
  std::map<std::vector<Point>, std::size_t> index;

  auto normalize = [&](const Cell& c) -> std::pair<std::size_t, Point> {
    Point t = c.vertices.front();
    Point neg(d);
    for (int j = 0; j < d; ++j) neg[j] = -t[j];
    Cell r = translate(c, neg);
    auto [it, inserted] = index.emplace(r.vertices, reps.size());
    if (inserted) {
      reps.push_back(std::move(r));
      links.emplace_back();
    }
    return {it->second, t};
  };

  normalize(initial_cell(q));
  for (std::size_t i = 0; i < reps.size(); ++i) {
    const Cell rep = reps[i];
    std::vector<FacetLink> out;
    for (auto& f : cell_facets(rep)) {
      std::vector<Point> pts;
      for (auto k : f) pts.push_back(rep.vertices[k]);
      Cell nb = adjacent_cell(q, rep, pts);
      auto [cls, t] = normalize(nb);
      out.push_back(FacetLink{std::move(f), cls, std::move(t)});
    }
    links[i] = std::move(out);
  }

  // Deterministic class order: sorted vertex sets.
  std::vector<std::size_t> order(reps.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return reps[a].vertices < reps[b].vertices; });
  std::vector<std::size_t> rank_of(reps.size());
  for (std::size_t r = 0; r < order.size(); ++r) rank_of[order[r]] = r;

  DelaunayStar star;
  star.form = q;
  for (const auto& rep : reps)
    for (const auto& v : rep.vertices) {
      Point neg(d);
      for (int j = 0; j < d; ++j) neg[j] = -v[j];
      star.cells.push_back(translate(rep, neg));
    }
  std::sort(star.cells.begin(), star.cells.end(),
            [](const Cell& a, const Cell& b) { return a.vertices < b.vertices; });
  for (std::size_t k = 1; k < star.cells.size(); ++k)
    ensure(star.cells[k - 1].vertices != star.cells[k].vertices, "delaunay_star: duplicate cell");

  for (auto i : order) {
    auto it = std::lower_bound(star.cells.begin(), star.cells.end(), reps[i],
                               [](const Cell& a, const Cell& b) { return a.vertices < b.vertices; });
    star.classes.push_back(static_cast<std::size_t>(it - star.cells.begin()));
    auto l = links[i];
    for (auto& link : l) link.neighbor_class = rank_of[link.neighbor_class];
    star.adjacency.push_back(std::move(l));
  }
  return star;
}

bool is_triangulation(const DelaunayStar& star) {
  const std::size_t n = std::size_t(star.dim()) + 1;
  return std::all_of(star.cells.begin(), star.cells.end(),
                     [&](const Cell& c) { return c.vertices.size() == n; });
}

bool same_subdivision(const DelaunayStar& a, const DelaunayStar& b) {
  if (a.cells.size() != b.cells.size()) return false;
  for (std::size_t i = 0; i < a.cells.size(); ++i)
    if (a.cells[i].vertices != b.cells[i].vertices) return false;
  return true;
}

DelaunayStar neighbor_triangulation(const DelaunayStar& t, const SymMat& wallpoint,
                                    const SymMat& center) {
  return cross_wall(secondary_cone(t), wallpoint, center).first;
}

}  // namespace lcone
