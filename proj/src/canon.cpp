#include "lcone/canon.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include <openssl/evp.h>

namespace lcone {

void ColoredGraph::add_edge(std::size_t u, std::size_t v, std::uint32_t color) {
  ensure(color >= 1, "edge colors start at 1");
  adj[u].emplace_back(static_cast<std::uint32_t>(v), color);
  if (u != v) adj[v].emplace_back(static_cast<std::uint32_t>(u), color);
}

namespace {

std::uint64_t mix(std::uint64_t h, std::uint64_t x) {
  std::uint64_t z = h ^ (x + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2));
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

struct Partition {
  std::vector<std::uint32_t> elems;  // position -> vertex
  std::vector<std::uint32_t> pos;    // vertex -> position
  std::vector<std::uint32_t> cell;   // vertex -> start of its cell
  std::vector<std::uint32_t> end;    // cell start -> one past its last position
  std::size_t cells = 0;

  bool discrete() const { return cells == elems.size(); }

  std::uint32_t target() const {
    for (std::uint32_t s = 0; s < elems.size(); s = end[s])
      if (end[s] - s > 1) return s;
    return static_cast<std::uint32_t>(elems.size());
  }
};

class Refiner {
public:
  explicit Refiner(const ColoredGraph& g) : g_(g), key_(g.size()), queued_(g.size(), 0) {}

  // Coarsest equitable refinement of p, processing the given splitter cells
  // first. Returns a hash of the refinement events, independent of labels.
  std::uint64_t refine(Partition& p, std::vector<std::uint32_t> queue) {
    std::uint64_t h = 0x6A09E667F3BCC908ULL;
    for (auto s : queue) queued_[s] = 1;
    std::vector<std::uint32_t> members, touched, cells;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const std::uint32_t w = queue[head];
      queued_[w] = 0;
      members.assign(p.elems.begin() + w, p.elems.begin() + p.end[w]);
      touched.clear();
      for (auto x : members)
        for (const auto& [v, c] : g_.adj[x]) {
          if (key_[v].empty()) touched.push_back(v);
          key_[v].push_back(c);
        }
      if (touched.empty()) continue;
      cells.clear();
      for (auto v : touched) {
        std::sort(key_[v].begin(), key_[v].end());
        cells.push_back(p.cell[v]);
      }
      std::sort(cells.begin(), cells.end());
      cells.erase(std::unique(cells.begin(), cells.end()), cells.end());

      for (auto x : cells) {
        const std::uint32_t e = p.end[x];
        if (e - x == 1) continue;
        auto first = p.elems.begin() + x, last = p.elems.begin() + e;
        std::sort(first, last, [&](std::uint32_t a, std::uint32_t b) { return key_[a] < key_[b]; });
        std::vector<std::uint32_t> starts{x};
        for (std::uint32_t i = x + 1; i < e; ++i) {
          p.pos[p.elems[i]] = i;
          if (key_[p.elems[i]] != key_[p.elems[i - 1]]) starts.push_back(i);
        }
        p.pos[p.elems[x]] = x;
        if (starts.size() == 1) continue;

        h = mix(h, x);
        h = mix(h, starts.size());
        std::uint32_t largest = x, largest_size = 0;
        for (std::size_t k = 0; k < starts.size(); ++k) {
          const std::uint32_t s = starts[k];
          const std::uint32_t t = k + 1 < starts.size() ? starts[k + 1] : e;
          for (std::uint32_t i = s; i < t; ++i) p.cell[p.elems[i]] = s;
          p.end[s] = t;
          h = mix(h, t - s);
          for (auto c : key_[p.elems[s]]) h = mix(h, c);
          if (t - s > largest_size) {
            largest = s;
            largest_size = t - s;
          }
        }
        p.cells += starts.size() - 1;
        const bool whole = queued_[x] != 0;
        for (auto s : starts) {
          if (queued_[s]) continue;
          if (!whole && s == largest) continue;
          queued_[s] = 1;
          queue.push_back(s);
        }
      }
      for (auto v : touched) key_[v].clear();
    }
    return mix(h, p.cells);
  }

private:
  const ColoredGraph& g_;
  std::vector<std::vector<std::uint32_t>> key_;
  std::vector<char> queued_;
};

std::uint32_t individualize(Partition& p, std::uint32_t v) {
  const std::uint32_t x = p.cell[v];
  const std::uint32_t u = p.elems[x];
  p.elems[p.pos[v]] = u;
  p.pos[u] = p.pos[v];
  p.elems[x] = v;
  p.pos[v] = x;
  const std::uint32_t e = p.end[x];
  p.end[x] = x + 1;
  p.end[x + 1] = e;
  for (std::uint32_t i = x + 1; i < e; ++i) p.cell[p.elems[i]] = x + 1;
  ++p.cells;
  return x;
}

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

struct Leaf {
  std::vector<std::uint64_t> trace;
  std::vector<std::uint32_t> cert;
  std::vector<std::uint32_t> elems;
};

class Search {
public:
  explicit Search(const ColoredGraph& g) : g_(g), refiner_(g), orbits_(g.size()) {}

  CanonResult run() {
    const std::size_t n = g_.size();
    CanonResult out;
    if (n == 0) return out;

    Partition root;
    root.elems.resize(n);
    std::iota(root.elems.begin(), root.elems.end(), 0);
    std::stable_sort(root.elems.begin(), root.elems.end(), [&](std::uint32_t a, std::uint32_t b) {
      return g_.node_color[a] < g_.node_color[b];
    });
    root.pos.resize(n);
    root.cell.resize(n);
    root.end.assign(n + 1, 0);
    std::vector<std::uint32_t> starts;
    std::uint64_t h0 = 0xBB67AE8584CAA73BULL;
    for (std::uint32_t i = 0; i < n; ++i) {
      root.pos[root.elems[i]] = i;
      if (i == 0 || g_.node_color[root.elems[i]] != g_.node_color[root.elems[i - 1]]) starts.push_back(i);
    }
    for (std::size_t k = 0; k < starts.size(); ++k) {
      const std::uint32_t s = starts[k];
      const std::uint32_t t = k + 1 < starts.size() ? starts[k + 1] : static_cast<std::uint32_t>(n);
      for (std::uint32_t i = s; i < t; ++i) root.cell[root.elems[i]] = s;
      root.end[s] = t;
      h0 = mix(mix(h0, g_.node_color[root.elems[s]]), t - s);
    }
    root.cells = starts.size();
    std::vector<std::uint64_t> trace{mix(h0, refiner_.refine(root, starts))};

    // First path: always individualize the first vertex of the target cell.
    std::vector<Partition> path;
    std::vector<std::uint32_t> choice;
    Partition node = root;
    while (!node.discrete()) {
      path.push_back(node);
      const std::uint32_t v = node.elems[node.target()];
      choice.push_back(v);
      const std::uint32_t s = individualize(node, v);
      trace.push_back(refiner_.refine(node, {s}));
    }
    first_ = make_leaf(node, trace);
    best_ = first_;

    for (std::size_t k = path.size(); k-- > 0;) {
      const Partition& at = path[k];
      const std::uint32_t t = at.target();
      std::vector<std::uint32_t> cell(at.elems.begin() + t, at.elems.begin() + at.end[t]);
      std::vector<std::uint32_t> explored{choice[k]};
      for (auto v : cell) {
        if (v == choice[k]) continue;
        bool seen = std::any_of(explored.begin(), explored.end(),
                                [&](std::uint32_t u) { return orbits_.find(u) == orbits_.find(v); });
        if (seen) continue;
        explored.push_back(v);
        Partition child = at;
        const std::uint32_t s = individualize(child, v);
        std::vector<std::uint64_t> tr(first_.trace.begin(), first_.trace.begin() + k + 1);
        tr.push_back(refiner_.refine(child, {s}));
        explore(child, tr);
      }
      const std::size_t root_v = orbits_.find(choice[k]);
      std::size_t orbit = 0;
      for (auto v : cell)
        if (orbits_.find(v) == root_v) ++orbit;
      out.group_order *= static_cast<unsigned long>(orbit);
    }

    out.labeling.assign(best_.elems.begin(), best_.elems.end());
    out.generators = std::move(generators_);
    std::ostringstream cert;
    for (std::size_t i = 0; i < best_.cert.size(); ++i) {
      if (i) cert << ',';
      cert << best_.cert[i];
    }
    out.certificate = cert.str();
    return out;
  }

private:
  Leaf make_leaf(const Partition& p, const std::vector<std::uint64_t>& trace) const {
    const std::size_t n = g_.size();
    Leaf leaf{trace, {}, p.elems};
    leaf.cert.reserve(n * 4);
    for (std::size_t i = 0; i < n; ++i) leaf.cert.push_back(g_.node_color[p.elems[i]]);
    std::vector<std::pair<std::uint32_t, std::uint32_t>> row;
    for (std::uint32_t i = 0; i < n; ++i) {
      row.clear();
      for (const auto& [u, c] : g_.adj[p.elems[i]])
        if (p.pos[u] >= i) row.emplace_back(p.pos[u], c);
      std::sort(row.begin(), row.end());
      leaf.cert.push_back(static_cast<std::uint32_t>(row.size()));
      for (const auto& [j, c] : row) {
        leaf.cert.push_back(j);
        leaf.cert.push_back(c);
      }
    }
    return leaf;
  }

  void add_generator(const std::vector<std::uint32_t>& from, const std::vector<std::uint32_t>& to) {
    Permutation gamma(from.size());
    for (std::size_t i = 0; i < from.size(); ++i) gamma[from[i]] = to[i];
    bool identity = true;
    for (std::size_t v = 0; v < gamma.size(); ++v) {
      if (gamma[v] != v) identity = false;
      orbits_.unite(v, gamma[v]);
    }
    if (!identity) generators_.push_back(std::move(gamma));
  }

  // Returns true when an automorphism onto the first leaf was found, which
  // makes the rest of this subtree redundant.
  bool explore(const Partition& p, std::vector<std::uint64_t>& trace) {
    const std::size_t len = std::min(trace.size(), best_.trace.size());
    const bool on_first = trace.size() <= first_.trace.size() &&
                          std::equal(trace.begin(), trace.end(), first_.trace.begin());
    if (!on_first &&
        std::lexicographical_compare(trace.begin(), trace.end(), best_.trace.begin(),
                                     best_.trace.begin() + len))
      return false;
    if (p.discrete()) {
      Leaf leaf = make_leaf(p, trace);
      if (leaf.trace == first_.trace && leaf.cert == first_.cert) {
        add_generator(first_.elems, leaf.elems);
        return true;
      }
      const auto key = std::tie(leaf.trace, leaf.cert);
      const auto best = std::tie(best_.trace, best_.cert);
      if (key == best)
        add_generator(best_.elems, leaf.elems);
      else if (best < key)
        best_ = std::move(leaf);
      return false;
    }
    const std::uint32_t t = p.target();
    std::vector<std::uint32_t> cell(p.elems.begin() + t, p.elems.begin() + p.end[t]);
    for (auto v : cell) {
      Partition child = p;
      const std::uint32_t s = individualize(child, v);
      trace.push_back(refiner_.refine(child, {s}));
      const bool found = explore(child, trace);
      trace.pop_back();
      if (found) return true;
    }
    return false;
  }

  const ColoredGraph& g_;
  Refiner refiner_;
  UnionFind orbits_;
  Leaf first_, best_;
  std::vector<Permutation> generators_;
};

}  // namespace

CanonResult canonicalize(const ColoredGraph& g) { return Search(g).run(); }

std::string digest_hex(std::string_view data, std::string_view algorithm) {
  const EVP_MD* md = EVP_get_digestbyname(std::string(algorithm).c_str());
  if (!md) throw Error(ErrorKind::ParseError, "unknown digest algorithm '" + std::string(algorithm) + "'");
  unsigned char buf[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  bool ok = ctx && EVP_DigestInit_ex(ctx, md, nullptr) == 1 &&
            EVP_DigestUpdate(ctx, data.data(), data.size()) == 1 &&
            EVP_DigestFinal_ex(ctx, buf, &len) == 1;
  EVP_MD_CTX_free(ctx);
  if (!ok) throw Error(ErrorKind::Internal, "digest computation failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[buf[i] >> 4]);
    out.push_back(hex[buf[i] & 15]);
  }
  return out;
}

}  // namespace lcone
