#include "lcone/equiv.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "lcone/lattice.hpp"

namespace lcone {

namespace {

Mat inverse(const Mat& m) {
  const std::size_t n = m.rows();
  Mat inv(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    RatVec e(n);
    e[j] = 1;
    RatVec col = solve(m, e);
    for (std::size_t i = 0; i < n; ++i) inv(i, j) = col[i];
  }
  return inv;
}

Mat columns(const std::vector<Point>& vs, const std::vector<std::size_t>& idx) {
  const std::size_t d = vs.front().size();
  Mat m(d, idx.size());
  for (std::size_t k = 0; k < idx.size(); ++k)
    for (std::size_t i = 0; i < d; ++i) m(i, k) = static_cast<long>(vs[idx[k]][i]);
  return m;
}

std::vector<std::size_t> basis_indices(const std::vector<Point>& vs) {
  std::vector<IntVec> rows;
  for (const auto& v : vs) rows.emplace_back(v.begin(), v.end());
  auto idx = independent_rows(rows);
  ensure(idx.size() == vs.front().size(), "characteristic set does not span");
  return idx;
}

// The unique linear map sending from[i] to to[i] for every i.
Mat linear_map(const std::vector<Point>& from, const std::vector<Point>& to) {
  auto idx = basis_indices(from);
  return columns(to, idx) * inverse(columns(from, idx));
}

}  // namespace

CanonicalCertificate form_certificate(const SymMat& q, std::string_view digest) {
  if (!is_positive_definite(q)) throw Error(ErrorKind::NotPositiveDefinite, "form is not positive definite");
  const VectorSet can = characteristic_set(q);
  const std::size_t n = can.vectors.size();

  std::map<Rat, std::uint32_t> node_values, edge_values;
  for (const auto& x : can.norms) node_values.emplace(x, 0);
  std::vector<Rat> ip(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      ip[i * n + j] = q.bilinear(can.vectors[i], can.vectors[j]);
      edge_values.emplace(ip[i * n + j], 0);
    }
  std::ostringstream table;
  table << "gram " << q.dim() << " nodes";
  std::uint32_t k = 0;
  for (auto& [x, id] : node_values) {
    id = k++;
    table << ' ' << x.get_str();
  }
  table << " edges";
  k = 1;
  for (auto& [x, id] : edge_values) {
    id = k++;
    table << ' ' << x.get_str();
  }

  ColoredGraph g(n);
  for (std::size_t i = 0; i < n; ++i) g.node_color[i] = node_values.at(can.norms[i]);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) g.add_edge(i, j, edge_values.at(ip[i * n + j]));
  CanonResult r = canonicalize(g);

  CanonicalCertificate out;
  out.hash = digest_hex(table.str() + "|" + r.certificate, digest);
  std::vector<std::size_t> position(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.vectors.push_back(can.vectors[r.labeling[i]]);
    position[r.labeling[i]] = i;
  }
  for (const auto& gamma : r.generators) {
    Permutation p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = position[gamma[r.labeling[i]]];
    out.generators.push_back(std::move(p));
  }
  out.aut_order = r.group_order;
  return out;
}

bool is_isometry(const Mat& u, const SymMat& q, const SymMat& q2) {
  const std::size_t d = u.rows();
  if (u.cols() != d || int(d) != q.dim() || int(d) != q2.dim()) return false;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      if (u(i, j).get_den() != 1) return false;
  if (abs(determinant(u)) != 1) return false;
  return q.congruent(u) == q2;
}

std::optional<Mat> form_equivalence(const SymMat& q, const CanonicalCertificate& cq, const SymMat& q2,
                                    const CanonicalCertificate& cq2) {
  if (q.dim() != q2.dim() || cq.hash != cq2.hash || cq.vectors.size() != cq2.vectors.size())
    return std::nullopt;
  // U maps the canonical order of Can(q2) onto that of Can(q).
  Mat u = linear_map(cq2.vectors, cq.vectors);
  if (!is_isometry(u, q, q2)) return std::nullopt;
  return u;
}

std::optional<Mat> form_equivalence(const SymMat& q, const SymMat& q2, std::string_view digest) {
  if (q.dim() != q2.dim()) return std::nullopt;
  return form_equivalence(q, form_certificate(q, digest), q2, form_certificate(q2, digest));
}

AutomorphismGroup automorphism_group(const SymMat& q) {
  CanonicalCertificate c = form_certificate(q);
  AutomorphismGroup out{{}, c.aut_order};
  for (const auto& p : c.generators) {
    std::vector<Point> image;
    for (std::size_t i = 0; i < p.size(); ++i) image.push_back(c.vectors[p[i]]);
    Mat u = linear_map(c.vectors, image);
    ensure(is_isometry(u, q, q), "graph automorphism does not extend to an isometry");
    out.generators.push_back(std::move(u));
  }
  return out;
}

std::optional<Mat> cone_equivalence(const ConeDesc& a, const ConeDesc& b) {
  if (a.d != b.d || a.dim != b.dim || a.rays.size() != b.rays.size()) return std::nullopt;
  auto u = form_equivalence(a.central, b.central);
  if (!u) return std::nullopt;
  std::vector<SymMat> mapped;
  for (const auto& r : a.rays) mapped.push_back(r.congruent(*u));
  std::sort(mapped.begin(), mapped.end());
  ensure(mapped == b.rays, "central forms match but the ray sets do not");
  return u;
}

bool cone_equivalent(const ConeDesc& a, const ConeDesc& b) { return cone_equivalence(a, b).has_value(); }

Int stabilizer_order(const ConeDesc& c) { return form_certificate(c.central).aut_order; }

std::string incidence_certificate(const LatPolytope& p) {
  IncidenceGraph ig = incidence_graph(p);
  ColoredGraph g(ig.vertex_count + ig.facet_count);
  for (std::size_t f = 0; f < ig.facet_count; ++f) g.node_color[ig.vertex_count + f] = 1;
  for (const auto& [v, f] : ig.edges) g.add_edge(v, f, 1);
  return "incidence " + std::to_string(p.dim) + "|" + canonicalize(g).certificate;
}

std::string incidence_hash(const LatPolytope& p, std::string_view digest) {
  return digest_hex(incidence_certificate(p), digest);
}

}  // namespace lcone
