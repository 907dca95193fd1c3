#pragma once

// Lattice-point enumeration against a positive definite form (Fincke-Pohst
// style, driven by the exact LDL^T of the form).

#include <functional>
#include <vector>

#include "lcone/exact.hpp"

namespace lcone {

/// Nonzero integer vectors v with Q[v] <= norm_bound, in lexicographic order.
struct VectorSet {
  int dim = 0;
  std::vector<Point> vectors;
  std::vector<Rat> norms;  // Q[v], parallel to vectors
  Rat norm_bound;
};

/// All v in Z^d with Q[v - center] <= bound, visited in unspecified order.
/// The visitor receives v and Q[v - center].
void for_each_in_ellipsoid(const SymMat& q, std::span<const Rat> center, const Rat& bound,
                           const std::function<void(const Point&, const Rat&)>& visit);

VectorSet short_vectors(const SymMat& q, const Rat& bound);

struct ClosestVectors {
  Rat min;
  std::vector<Point> argmins;  // lexicographic
};

ClosestVectors closest_vectors(const SymMat& q, std::span<const Rat> center);

/// Can(Q): the shortest layers S(Q, n*) with n* the least attained norm such
/// that S(Q, n*) spans Z^d as a lattice.
VectorSet characteristic_set(const SymMat& q);

}  // namespace lcone
