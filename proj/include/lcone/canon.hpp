#pragma once

// Canonical labeling and automorphism groups of vertex- and edge-colored
// graphs by individualization-refinement.

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lcone/exact.hpp"

namespace lcone {

struct ColoredGraph {
  explicit ColoredGraph(std::size_t n = 0) : node_color(n, 0), adj(n) {}

  std::size_t size() const { return node_color.size(); }
  /// Undirected edge; color must be >= 1.
  void add_edge(std::size_t u, std::size_t v, std::uint32_t color);

  /// Colors are small integers whose meaning must not depend on vertex labels.
  std::vector<std::uint32_t> node_color;
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> adj;  // (neighbor, color)
};

using Permutation = std::vector<std::size_t>;

struct CanonResult {
  /// labeling[i] is the vertex placed at canonical position i.
  std::vector<std::size_t> labeling;
  std::vector<Permutation> generators;
  Int group_order = 1;
  /// The canonically relabeled graph; equal strings iff isomorphic graphs.
  std::string certificate;
};

CanonResult canonicalize(const ColoredGraph& g);

/// Hex digest via OpenSSL ("sha256", "md5", ...). Throws ParseError for an
/// unknown algorithm.
std::string digest_hex(std::string_view data, std::string_view algorithm);

}  // namespace lcone
