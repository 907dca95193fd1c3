#include <gtest/gtest.h>

#include <numeric>

#include "lcone/canon.hpp"
#include "lcone/classify.hpp"
#include "lcone/equiv.hpp"
#include "support.hpp"

using namespace lcone;
using namespace lcone::test;

namespace {

ColoredGraph cycle(std::size_t n) {
  ColoredGraph g(n);
  for (std::size_t i = 0; i < n; ++i) g.add_edge(i, (i + 1) % n, 1);
  return g;
}

ColoredGraph relabel(const ColoredGraph& g, const std::vector<std::size_t>& p) {
  ColoredGraph h(g.size());
  for (std::size_t u = 0; u < g.size(); ++u) {
    h.node_color[p[u]] = g.node_color[u];
    for (auto [v, c] : g.adj[u])
      if (u < v) h.add_edge(p[u], p[v], c);
  }
  return h;
}

std::map<std::pair<std::size_t, std::size_t>, std::uint32_t> edge_map(const ColoredGraph& g) {
  std::map<std::pair<std::size_t, std::size_t>, std::uint32_t> e;
  for (std::size_t u = 0; u < g.size(); ++u)
    for (auto [v, c] : g.adj[u]) e[{u, v}] = c;
  return e;
}

bool is_automorphism(const ColoredGraph& g, const std::vector<std::size_t>& p) {
  for (std::size_t u = 0; u < g.size(); ++u)
    if (g.node_color[p[u]] != g.node_color[u]) return false;
  auto e = edge_map(g);
  for (const auto& [uv, c] : e) {
    auto it = e.find({p[uv.first], p[uv.second]});
    if (it == e.end() || it->second != c) return false;
  }
  return true;
}

// Brute force over all n! permutations.
std::size_t brute_aut_count(const ColoredGraph& g) {
  std::vector<std::size_t> p(g.size());
  std::iota(p.begin(), p.end(), 0);
  std::size_t n = 0;
  do n += is_automorphism(g, p);
  while (std::next_permutation(p.begin(), p.end()));
  return n;
}

bool brute_isomorphic(const ColoredGraph& a, const ColoredGraph& b) {
  if (a.size() != b.size()) return false;
  auto eb = edge_map(b);
  std::vector<std::size_t> p(a.size());
  std::iota(p.begin(), p.end(), 0);
  do {
    if (relabel(a, p).node_color == b.node_color && edge_map(relabel(a, p)) == eb) return true;
  } while (std::next_permutation(p.begin(), p.end()));
  return false;
}

ColoredGraph random_graph(std::size_t n, std::mt19937& rng, int colors = 1) {
  ColoredGraph g(n);
  std::uniform_int_distribution<int> coin(0, 2), col(1, colors), nc(0, 1);
  for (std::size_t u = 0; u < n; ++u) {
    g.node_color[u] = nc(rng);
    for (std::size_t v = u + 1; v < n; ++v)
      if (coin(rng) == 0) g.add_edge(u, v, col(rng));
  }
  return g;
}

std::vector<SymMat> equiv_forms() {
  return {SymMat::identity(2), a2(), form(2, {1, 0, 3}), form(2, {3, 1, 4}), SymMat::identity(3), fcc(),
          a_form(3), form(3, {3, 1, 4, -1, -1, 4}), form(3, {2, 1, 2, 0, 0, 5}), a_form(4), d4(),
          form(4, {4, 1, 4, -1, 1, 5, 0, -1, 1, 3}), default_seed(3)};
}

}  // namespace

TEST(Canon, CycleAndCubeOrders) {
  EXPECT_EQ(canonicalize(cycle(4)).group_order, 8);
  EXPECT_EQ(canonicalize(cycle(7)).group_order, 14);
  ColoredGraph cube(8);
  for (std::size_t u = 0; u < 8; ++u)
    for (std::size_t b = 1; b < 8; b <<= 1)
      if (u < (u ^ b)) cube.add_edge(u, u ^ b, 1);
  EXPECT_EQ(canonicalize(cube).group_order, 48);
  ColoredGraph petersen(10);
  for (std::size_t i = 0; i < 5; ++i) {
    petersen.add_edge(i, (i + 1) % 5, 1);
    petersen.add_edge(i, i + 5, 1);
    petersen.add_edge(5 + i, 5 + (i + 2) % 5, 1);
  }
  EXPECT_EQ(canonicalize(petersen).group_order, 120);
}

TEST(Canon, ColoringsOfATriangle) {
  ColoredGraph k3 = cycle(3);
  ColoredGraph a = k3, b = k3;
  a.node_color = {0, 0, 1};
  b.node_color = {0, 1, 1};
  EXPECT_NE(canonicalize(a).certificate, canonicalize(b).certificate);
  ColoredGraph c = k3;
  c.node_color = {1, 0, 0};
  EXPECT_EQ(canonicalize(a).certificate, canonicalize(c).certificate);
  EXPECT_EQ(canonicalize(a).group_order, 2);
  EXPECT_EQ(canonicalize(k3).group_order, 6);
}

TEST(Canon, EdgeColorsMatter) {
  ColoredGraph a = cycle(4), b(4);
  for (std::size_t i = 0; i < 4; ++i) b.add_edge(i, (i + 1) % 4, i == 0 ? 2 : 1);
  EXPECT_NE(canonicalize(a).certificate, canonicalize(b).certificate);
  EXPECT_EQ(canonicalize(b).group_order, 2);
}

TEST(Canon, AgreesWithBruteForce) {
  std::mt19937 rng(51);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 3 + trial % 5;
    ColoredGraph g = random_graph(n, rng, 1 + trial % 2);
    CanonResult r = canonicalize(g);
    EXPECT_EQ(r.group_order, Int(brute_aut_count(g)));
    for (const auto& p : r.generators) EXPECT_TRUE(is_automorphism(g, p));
    std::vector<std::size_t> p(n);
    std::iota(p.begin(), p.end(), 0);
    std::shuffle(p.begin(), p.end(), rng);
    EXPECT_EQ(canonicalize(relabel(g, p)).certificate, r.certificate);
    ColoredGraph h = random_graph(n, rng, 1 + trial % 2);
    EXPECT_EQ(canonicalize(h).certificate == r.certificate, brute_isomorphic(g, h));
  }
}

TEST(Digest, KnownValues) {
  EXPECT_EQ(digest_hex("", "sha256"), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(digest_hex("abc", "md5"), "900150983cd24fb0d6963f7d28e17f72");
  EXPECT_EQ(error_of([] { digest_hex("abc", "no-such-digest"); }), ErrorKind::ParseError);
}

TEST(FormCertificate, InvariantUnderUnimodularChange) {
  std::mt19937 rng(52);
  int checked = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto forms = equiv_forms();
    const SymMat& q = forms[trial % forms.size()];
    Mat u = random_unimodular(q.dim(), rng);
    SymMat q2 = transform(q, u);
    EXPECT_EQ(form_certificate(q2).hash, form_certificate(q).hash) << format_form(q);
    ++checked;
  }
  EXPECT_EQ(checked, 100);
}

TEST(FormEquivalence, Examples) {
  // Same determinant 3, different minima.
  EXPECT_FALSE(form_equivalence(form(2, {1, 0, 3}), a2()).has_value());
  EXPECT_NE(form_certificate(form(2, {1, 0, 3})).hash, form_certificate(a2()).hash);
  auto u = form_equivalence(a2(), form(2, {2, -1, 2}));
  ASSERT_TRUE(u.has_value());
  EXPECT_EQ(transform(a2(), *u), form(2, {2, -1, 2}));
  // A_3 and the fcc Gram matrix describe the same lattice.
  u = form_equivalence(a_form(3), fcc());
  ASSERT_TRUE(u.has_value());
  EXPECT_EQ(transform(a_form(3), *u), fcc());
  EXPECT_FALSE(form_equivalence(a_form(4), d4()).has_value());
  EXPECT_FALSE(form_equivalence(SymMat::identity(3), a_form(3)).has_value());
}

TEST(FormEquivalence, RecoversRandomChanges) {
  std::mt19937 rng(53);
  for (const auto& q : equiv_forms()) {
    Mat u = random_unimodular(q.dim(), rng);
    SymMat q2 = transform(q, u);
    auto w = form_equivalence(q, q2);
    ASSERT_TRUE(w.has_value()) << format_form(q);
    EXPECT_EQ(transform(q, *w), q2);
    EXPECT_TRUE(is_isometry(*w, q, q2));
  }
}

TEST(Automorphisms, OrdersMatchBacktracking) {
  EXPECT_EQ(automorphism_group(SymMat::identity(2)).order, 8);
  EXPECT_EQ(automorphism_group(a2()).order, 12);
  EXPECT_EQ(automorphism_group(SymMat::identity(3)).order, 48);
  EXPECT_EQ(automorphism_group(d4()).order, 1152);
  for (const auto& q : equiv_forms()) {
    AutomorphismGroup g = automorphism_group(q);
    EXPECT_EQ(g.order, Int(count_isometries(q, q))) << format_form(q);
    EXPECT_EQ(form_certificate(q).aut_order, g.order);
    for (const auto& m : g.generators) EXPECT_EQ(transform(q, m), q);
  }
}

TEST(ConeEquivalence, Examples) {
  ConeDesc c = secondary_cone(delaunay_star(a2()));
  EXPECT_EQ(stabilizer_order(c), 12);
  auto facets = cone_facets(c);
  for (const auto& f : facets) {
    EXPECT_TRUE(cone_equivalent(f, facets[0]));
    EXPECT_EQ(stabilizer_order(f), 8);
    EXPECT_FALSE(cone_equivalent(f, c));
  }
  std::mt19937 rng(54);
  for (int d = 2; d <= 4; ++d) {
    ConeDesc base = secondary_cone(delaunay_star(default_seed(d)));
    Mat u = random_unimodular(d, rng);
    ConeDesc moved = cone_from_rays(d, [&] {
      std::vector<SymMat> rays;
      for (const auto& r : base.rays) rays.push_back(transform(r, u));
      return rays;
    }());
    auto w = cone_equivalence(base, moved);
    ASSERT_TRUE(w.has_value());
    std::set<std::string> mapped, target;
    for (const auto& r : base.rays) mapped.insert(format_form(transform(r, *w)));
    for (const auto& r : moved.rays) target.insert(format_form(r));
    EXPECT_EQ(mapped, target);
    Int s = stabilizer_order(base);
    EXPECT_EQ(s % 2, 0);
    EXPECT_EQ(s, Int(count_isometries(base.central, base.central)));
  }
}

TEST(IncidenceCertificate, CombinatorialTypeOnly) {
  auto hash = [](const SymMat& q) { return incidence_hash(dv_polytope(q).polytope); };
  EXPECT_EQ(hash(SymMat::identity(2)), hash(form(2, {1, 0, 3})));
  EXPECT_NE(hash(SymMat::identity(2)), hash(a2()));
  EXPECT_EQ(hash(a2()), hash(form(2, {3, 1, 4})));
  EXPECT_NE(hash(SymMat::identity(3)), hash(fcc()));
  std::mt19937 rng(55);
  for (const auto& q : equiv_forms()) {
    Mat u = random_unimodular(q.dim(), rng);
    EXPECT_EQ(hash(transform(q, u)), hash(q));
  }
}
