#include "lcone/polyhedral.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "lcone/delaunay.hpp"
#include "lcone/lattice.hpp"

namespace lcone {

namespace {

Int dot(const IntVec& a, const IntVec& b) {
  Int s;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (sgn(a[i]) != 0 && sgn(b[i]) != 0) s += a[i] * b[i];
  return s;
}

// Double description for the pointed cone { y : a.y >= 0, a in rows } in Z^k.
// rows must have rank k.
std::vector<IntVec> double_description(const std::vector<IntVec>& rows, std::size_t k) {
  const std::size_t m = rows.size();
  auto basis = independent_rows(rows);
  if (basis.size() < k) throw Error(ErrorKind::NotPointed, "cone contains a line");

  // Initial simplicial cone from k independent rows: rays are the columns of
  // the inverse.
  Mat a(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) a(i, j) = rows[basis[i]][j];
  struct Ray {
    IntVec v;
    Bits zero;
  };
  std::vector<Ray> rays;
  for (std::size_t j = 0; j < k; ++j) {
    RatVec e(k);
    e[j] = 1;
    RatVec col = solve(a, e);
    Ray r{primitive_integer(col), Bits(m)};
    for (std::size_t i = 0; i < k; ++i)
      if (i != j) r.zero.set(basis[i]);
    rays.push_back(std::move(r));
  }

  std::vector<bool> used(m, false);
  for (auto b : basis) used[b] = true;
  std::vector<std::size_t> order;
  std::vector<std::size_t> satisfied(m, 0);
  for (std::size_t i = 0; i < m; ++i) {
    if (used[i]) continue;
    order.push_back(i);
    for (const auto& r : rays)
      if (sgn(dot(rows[i], r.v)) >= 0) ++satisfied[i];
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return satisfied[x] > satisfied[y]; });

  for (std::size_t idx : order) {
    const IntVec& row = rows[idx];
    std::vector<Int> val(rays.size());
    std::vector<std::size_t> pos, neg;
    for (std::size_t r = 0; r < rays.size(); ++r) {
      val[r] = dot(row, rays[r].v);
      const int s = sgn(val[r]);
      if (s > 0)
        pos.push_back(r);
      else if (s < 0)
        neg.push_back(r);
      else
        rays[r].zero.set(idx);
    }
    if (neg.empty()) continue;

    std::vector<Ray> next;
    next.reserve(rays.size());
    for (std::size_t r = 0; r < rays.size(); ++r)
      if (sgn(val[r]) >= 0) next.push_back(rays[r]);
    for (auto p : pos) {
      for (auto n : neg) {
        Bits common = rays[p].zero & rays[n].zero;
        if (k >= 2 && common.count() < k - 2) continue;
        bool adjacent = true;
        for (std::size_t r = 0; r < rays.size() && adjacent; ++r) {
          if (r == p || r == n) continue;
          if (common.subset_of(rays[r].zero)) adjacent = false;
        }
        if (!adjacent) continue;
        IntVec v(k);
        for (std::size_t j = 0; j < k; ++j) v[j] = val[p] * rays[n].v[j] - val[n] * rays[p].v[j];
        Ray nr{gcd_normalize(std::move(v), SignConvention::PreserveSign), std::move(common)};
        nr.zero.set(idx);
        next.push_back(std::move(nr));
      }
    }
    rays = std::move(next);
  }

  std::vector<IntVec> out;
  out.reserve(rays.size());
  for (auto& r : rays) out.push_back(std::move(r.v));
  return out;
}

IntVec to_int_functional(const RatVec& f) {
  return primitive_integer(f, SignConvention::PreserveSign);
}

bool is_zero(const RatVec& v) {
  return std::all_of(v.begin(), v.end(), [](const Rat& x) { return sgn(x) == 0; });
}

std::vector<IntVec> transpose(const std::vector<IntVec>& rows, std::size_t cols) {
  std::vector<IntVec> t(cols, IntVec(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols; ++j) t[j][i] = rows[i][j];
  return t;
}

}  // namespace

std::vector<IntVec> extreme_rays(const HRep& h) {
  const std::size_t n = h.ambient;
  // Parametrize the linear subspace cut out by the equalities.
  std::vector<IntVec> basis;
  if (h.equalities.empty()) {
    for (std::size_t j = 0; j < n; ++j) {
      IntVec e(n);
      e[j] = 1;
      basis.push_back(std::move(e));
    }
  } else {
    basis = kernel(Mat::from_rows(h.equalities));
  }
  const std::size_t k = basis.size();
  if (k == 0) return {};

  std::vector<IntVec> rows;
  for (const auto& f : h.inequalities) {
    RatVec g(k);
    for (std::size_t j = 0; j < k; ++j)
      for (std::size_t i = 0; i < n; ++i)
        if (sgn(f[i]) != 0 && sgn(basis[j][i]) != 0) g[j] += f[i] * basis[j][i];
    if (is_zero(g)) continue;
    rows.push_back(to_int_functional(g));
  }
  if (rows.empty() || rank(rows) < k) throw Error(ErrorKind::NotPointed, "cone contains a line");

  auto ys = double_description(rows, k);
  std::vector<IntVec> out;
  for (const auto& y : ys) {
    IntVec x(n);
    for (std::size_t j = 0; j < k; ++j)
      if (sgn(y[j]) != 0)
        for (std::size_t i = 0; i < n; ++i) x[i] += y[j] * basis[j][i];
    out.push_back(gcd_normalize(std::move(x), SignConvention::PreserveSign));
  }
  std::sort(out.begin(), out.end());
  return out;
}

HRep facets_from_rays(const std::vector<IntVec>& rays, std::size_t ambient) {
  HRep h{ambient, {}, {}};
  if (rays.empty()) {
    for (std::size_t j = 0; j < ambient; ++j) {
      RatVec e(ambient);
      e[j] = 1;
      h.equalities.push_back(std::move(e));
    }
    return h;
  }
  std::vector<RatVec> ray_rows;
  for (const auto& r : rays) ray_rows.emplace_back(r.begin(), r.end());
  for (auto& e : kernel(Mat::from_rows(ray_rows))) h.equalities.emplace_back(e.begin(), e.end());

  // Coordinates restricted to a set of pivot columns are injective on the span.
  auto pivots = independent_rows(transpose(rays, ambient));
  const std::size_t k = pivots.size();
  std::vector<IntVec> projected;
  for (const auto& r : rays) {
    IntVec p(k);
    for (std::size_t j = 0; j < k; ++j) p[j] = r[pivots[j]];
    projected.push_back(std::move(p));
  }
  auto normals = double_description(projected, k);
  for (const auto& y : normals) {
    RatVec f(ambient);
    for (std::size_t j = 0; j < k; ++j) f[pivots[j]] = y[j];
    h.inequalities.push_back(std::move(f));
  }
  std::sort(h.inequalities.begin(), h.inequalities.end());
  return h;
}

Bits tight_set(const RatVec& f, const std::vector<IntVec>& rays) {
  Bits b(rays.size());
  for (std::size_t r = 0; r < rays.size(); ++r) {
    Rat s;
    for (std::size_t i = 0; i < f.size(); ++i)
      if (sgn(f[i]) != 0 && sgn(rays[r][i]) != 0) s += f[i] * rays[r][i];
    if (sgn(s) == 0) b.set(r);
  }
  return b;
}

// ---------------------------------------------------------------- polytopes

namespace {

IntVec homogenize(const RatVec& x) {
  RatVec h(x.size() + 1);
  h[0] = 1;
  std::copy(x.begin(), x.end(), h.begin() + 1);
  return primitive_integer(h);
}

std::size_t affine_rank(const std::vector<IntVec>& homogenized, const Bits& subset) {
  std::vector<IntVec> rows;
  for (auto i : subset.indices()) rows.push_back(homogenized[i]);
  return rank(rows);
}

void fill_incidence(LatPolytope& p) {
  p.incidence.clear();
  for (const auto& f : p.facets) {
    Bits b(p.vertices.size());
    for (std::size_t v = 0; v < p.vertices.size(); ++v) {
      Rat s;
      for (int j = 0; j < p.dim; ++j) s += f.normal[j] * p.vertices[v][j];
      ensure(s <= f.offset, "polytope vertex violates a facet");
      if (s == f.offset) b.set(v);
    }
    p.incidence.push_back(std::move(b));
  }
}

}  // namespace

LatPolytope polytope_from_vertices(const std::vector<RatVec>& points) {
  ensure(!points.empty(), "polytope_from_vertices: no points");
  const int d = static_cast<int>(points.front().size());
  std::vector<IntVec> hom;
  for (const auto& p : points) hom.push_back(homogenize(p));
  HRep h = facets_from_rays(hom, d + 1);
  if (!h.equalities.empty()) throw Error(ErrorKind::Internal, "polytope is not full-dimensional");

  LatPolytope out;
  out.dim = d;
  // Keep the points that are vertices (facet normals through them have rank d).
  std::vector<RatVec> verts;
  for (std::size_t i = 0; i < points.size(); ++i) {
    std::vector<IntVec> normals;
    for (const auto& f : h.inequalities) {
      Rat s;
      for (int j = 0; j <= d; ++j) s += f[j] * hom[i][j];
      if (sgn(s) == 0) normals.push_back(primitive_integer(f));
    }
    if (rank(normals) == std::size_t(d)) verts.push_back(points[i]);
  }
  std::sort(verts.begin(), verts.end());
  verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
  out.vertices = std::move(verts);
  for (const auto& f : h.inequalities) {
    LatPolytope::Facet facet{RatVec(d), f[0]};
    for (int j = 0; j < d; ++j) facet.normal[j] = -f[j + 1];
    out.facets.push_back(std::move(facet));
  }
  fill_incidence(out);
  return out;
}

LatPolytope polytope_from_halfspaces(int dim, const std::vector<LatPolytope::Facet>& rows,
                                     std::vector<std::size_t>* kept) {
  HRep h{std::size_t(dim) + 1, {}, {}};
  for (const auto& r : rows) {
    RatVec f(dim + 1);
    f[0] = r.offset;
    for (int j = 0; j < dim; ++j) f[j + 1] = -r.normal[j];
    h.inequalities.push_back(std::move(f));
  }
  RatVec t(dim + 1);
  t[0] = 1;
  h.inequalities.push_back(t);
  auto rays = extreme_rays(h);

  LatPolytope out;
  out.dim = dim;
  for (const auto& r : rays) {
    if (sgn(r[0]) == 0) throw Error(ErrorKind::Internal, "halfspace system is unbounded");
    RatVec x(dim);
    for (int j = 0; j < dim; ++j) {
      x[j] = Rat(r[j + 1], r[0]);
      x[j].canonicalize();
    }
    out.vertices.push_back(std::move(x));
  }
  std::sort(out.vertices.begin(), out.vertices.end());

  std::vector<IntVec> hom;
  for (const auto& v : out.vertices) hom.push_back(homogenize(v));
  std::vector<Bits> seen;
  if (kept) kept->clear();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    Bits b(out.vertices.size());
    for (std::size_t v = 0; v < out.vertices.size(); ++v) {
      Rat s;
      for (int j = 0; j < dim; ++j) s += rows[i].normal[j] * out.vertices[v][j];
      if (s == rows[i].offset) b.set(v);
    }
    if (affine_rank(hom, b) != std::size_t(dim)) continue;
    if (std::find(seen.begin(), seen.end(), b) != seen.end()) continue;
    seen.push_back(b);
    out.facets.push_back(rows[i]);
    if (kept) kept->push_back(i);
  }
  fill_incidence(out);
  return out;
}

std::vector<std::size_t> FaceLattice::f_vector() const {
  std::vector<std::size_t> f;
  for (const auto& level : faces) f.push_back(level.size());
  return f;
}

FaceLattice face_lattice(const LatPolytope& p) {
  const int d = p.dim;
  FaceLattice fl;
  fl.faces.assign(d, {});
  fl.up.assign(d, {});
  if (d == 0) return fl;

  std::unordered_map<Bits, std::size_t, BitsHash> index;
  for (const auto& inc : p.incidence) {
    if (index.emplace(inc, fl.faces[d - 1].size()).second) fl.faces[d - 1].push_back(inc);
  }
  fl.up[d - 1].assign(fl.faces[d - 1].size(), {});

  for (int k = d - 1; k >= 1; --k) {
    std::unordered_map<Bits, std::size_t, BitsHash> below;
    auto& lower = fl.faces[k - 1];
    auto& lower_up = fl.up[k - 1];
    for (std::size_t fi = 0; fi < fl.faces[k].size(); ++fi) {
      const Bits& face = fl.faces[k][fi];
      std::vector<Bits> cands;
      for (const auto& inc : p.incidence) {
        Bits c = face & inc;
        if (c.none() || c == face) continue;
        cands.push_back(std::move(c));
      }
      std::sort(cands.begin(), cands.end());
      cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
      for (std::size_t a = 0; a < cands.size(); ++a) {
        bool maximal = true;
        for (std::size_t b = 0; b < cands.size() && maximal; ++b)
          if (a != b && cands[a].subset_of(cands[b])) maximal = false;
        if (!maximal) continue;
        auto [it, inserted] = below.emplace(cands[a], lower.size());
        if (inserted) {
          lower.push_back(cands[a]);
          lower_up.emplace_back();
        }
        lower_up[it->second].push_back(fi);
      }
    }
  }
  return fl;
}

SubordinationScheme subordination_scheme(const FaceLattice& lattice, int dim) {
  SubordinationScheme s;
  for (int k = 2; k <= dim - 1; ++k) {
    auto& hist = s.levels[k];
    for (const auto& ups : lattice.up[k - 1]) ++hist[static_cast<int>(ups.size())];
    std::vector<int> below(lattice.faces[k].size());
    for (const auto& ups : lattice.up[k - 1])
      for (std::size_t j : ups) ++below[j];
    auto& rev = s.down[k];
    for (int n : below) ++rev[n];
  }
  return s;
}

SubordinationScheme subordination_scheme(const LatPolytope& p) {
  return subordination_scheme(face_lattice(p), p.dim);
}

std::string SubordinationScheme::serialize() const {
  auto part = [](const std::map<int, std::map<int, std::size_t>>& levels) {
    std::ostringstream out;
    bool first_level = true;
    for (const auto& [k, hist] : levels) {
      if (!first_level) out << ';';
      first_level = false;
      out << k << ':';
      bool first = true;
      for (const auto& [n, c] : hist) {
        if (!first) out << ',';
        first = false;
        out << n << '=' << c;
      }
    }
    return out.str();
  };
  if (levels.empty() && down.empty()) return "";
  return part(levels) + '/' + part(down);
}

Rat polytope_volume(const LatPolytope& p) {
  const int d = p.dim;
  FaceLattice fl = face_lattice(p);
  // down[k][i]: (k-1)-faces of faces[k][i]
  std::vector<std::vector<std::vector<std::size_t>>> down(d + 1);
  for (int k = 1; k < d; ++k) {
    down[k].assign(fl.faces[k].size(), {});
    for (std::size_t i = 0; i < fl.faces[k - 1].size(); ++i)
      for (auto j : fl.up[k - 1][i]) down[k][j].push_back(i);
  }
  // Pulling triangulation: cone each sub-face missing the first vertex over it.
  std::function<void(int, const Bits&, const std::vector<std::size_t>&,
                     std::vector<std::vector<std::size_t>>&)>
      triangulate = [&](int k, const Bits& face, const std::vector<std::size_t>& subfaces,
                        std::vector<std::vector<std::size_t>>& out) {
        auto verts = face.indices();
        if (k == 0) {
          out.push_back({verts.front()});
          return;
        }
        const std::size_t apex = verts.front();
        for (auto s : subfaces) {
          const Bits& sub = fl.faces[k - 1][s];
          if (sub.test(apex)) continue;
          std::vector<std::vector<std::size_t>> part;
          triangulate(k - 1, sub, k - 1 >= 1 ? down[k - 1][s] : std::vector<std::size_t>{}, part);
          for (auto& simplex : part) {
            simplex.push_back(apex);
            out.push_back(std::move(simplex));
          }
        }
      };
  Bits all(p.vertices.size());
  for (std::size_t v = 0; v < p.vertices.size(); ++v) all.set(v);
  std::vector<std::size_t> facets(fl.faces[d - 1].size());
  std::iota(facets.begin(), facets.end(), 0);
  std::vector<std::vector<std::size_t>> simplices;
  if (d == 1) {
    Rat len = p.vertices.back()[0] - p.vertices.front()[0];
    return abs(len);
  }
  triangulate(d, all, facets, simplices);
  Rat vol;
  Int fact = 1;
  for (int i = 2; i <= d; ++i) fact *= i;
  for (const auto& s : simplices) {
    Mat m(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) m(i, j) = p.vertices[s[i + 1]][j] - p.vertices[s[0]][j];
    vol += abs(determinant(m));
  }
  return vol / Rat(fact);
}

IncidenceGraph incidence_graph(const LatPolytope& p) {
  IncidenceGraph g{p.vertices.size(), p.facets.size(), {}};
  for (std::size_t f = 0; f < p.incidence.size(); ++f)
    for (auto v : p.incidence[f].indices()) g.edges.emplace_back(v, g.vertex_count + f);
  return g;
}

// ---------------------------------------------------------------- Dirichlet-Voronoi

DVCell dv_polytope(const SymMat& q) {
  const int d = q.dim();
  DelaunayStar star = delaunay_star(q);
  Rat mu;
  for (auto c : star.classes) mu = std::max(mu, star.cells[c].sqradius);

  // Any relevant v has its facet midpoint v/2 within squared distance mu of 0.
  VectorSet cand = short_vectors(q, 4 * mu);

  // Voronoi's criterion: v is relevant iff +-v are the only shortest vectors
  // of the coset v + 2Z^d. Within the candidate set every such coset minimum
  // is present, since it is no longer than v.
  std::map<Point, std::pair<Rat, int>> coset_min;
  auto parity = [](const Point& v) {
    Point p(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) p[i] = ((v[i] % 2) + 2) % 2;
    return p;
  };
  for (std::size_t i = 0; i < cand.vectors.size(); ++i) {
    auto key = parity(cand.vectors[i]);
    auto it = coset_min.find(key);
    if (it == coset_min.end() || cand.norms[i] < it->second.first)
      coset_min[key] = {cand.norms[i], 1};
    else if (cand.norms[i] == it->second.first)
      ++it->second.second;
  }
  std::vector<Point> relevant;
  std::vector<LatPolytope::Facet> rows;
  for (std::size_t i = 0; i < cand.vectors.size(); ++i) {
    const Point key = parity(cand.vectors[i]);
    if (std::all_of(key.begin(), key.end(), [](std::int64_t x) { return x == 0; })) continue;
    const auto& [n, count] = coset_min.at(key);
    if (cand.norms[i] != n || count != 2) continue;
    const Point& v = cand.vectors[i];
    LatPolytope::Facet f{RatVec(d), cand.norms[i]};
    for (int j = 0; j < d; ++j) {
      Rat s;
      for (int k = 0; k < d; ++k) s += q(j, k) * static_cast<long>(v[k]);
      f.normal[j] = 2 * s;
    }
    rows.push_back(std::move(f));
    relevant.push_back(v);
  }

  std::vector<std::size_t> kept;
  DVCell out{polytope_from_halfspaces(d, rows, &kept), {}};
  ensure(kept.size() == rows.size(), "dv_polytope: coset-minimal vector gave a redundant facet");
  for (auto i : kept) out.relevant.push_back(relevant[i]);

  // Vertices of the cell are exactly the circumcenters of the star cells.
  std::vector<RatVec> centers;
  for (const auto& c : star.cells) centers.push_back(c.center);
  std::sort(centers.begin(), centers.end());
  ensure(centers == out.polytope.vertices, "dv_polytope: vertices differ from Delaunay centers");
  return out;
}

}  // namespace lcone
