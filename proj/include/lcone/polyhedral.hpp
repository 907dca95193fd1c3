#pragma once

// Exact polyhedral computations: double description conversion, polytopes
// with vertex-facet incidences, face lattices and Dirichlet-Voronoi cells.

#include <map>
#include <vector>

#include "lcone/bits.hpp"
#include "lcone/exact.hpp"

namespace lcone {

/// Cone {x : e.x = 0 for e in equalities, f.x >= 0 for f in inequalities}.
struct HRep {
  std::size_t ambient = 0;
  std::vector<RatVec> equalities;
  std::vector<RatVec> inequalities;
};

/// Extreme rays of a pointed cone, primitive integral, sorted.
/// Throws NotPointed when the cone contains a line.
std::vector<IntVec> extreme_rays(const HRep& h);

/// Irredundant description of the cone generated by `rays`: equalities span
/// the orthogonal complement of the rays, inequalities are the facets.
HRep facets_from_rays(const std::vector<IntVec>& rays, std::size_t ambient);

/// Ray indices on which f vanishes.
Bits tight_set(const RatVec& f, const std::vector<IntVec>& rays);

/// Full-dimensional bounded polytope { x : normal.x <= offset }.
struct LatPolytope {
  int dim = 0;
  std::vector<RatVec> vertices;  // sorted
  struct Facet {
    RatVec normal;
    Rat offset;
  };
  std::vector<Facet> facets;
  std::vector<Bits> incidence;  // per facet, the incident vertices
};

LatPolytope polytope_from_vertices(const std::vector<RatVec>& points);
/// Polytope from a (possibly redundant) system normal.x <= offset; redundant
/// rows are dropped. `kept` receives the indices of the irredundant rows.
LatPolytope polytope_from_halfspaces(int dim, const std::vector<LatPolytope::Facet>& rows,
                                     std::vector<std::size_t>* kept = nullptr);

struct FaceLattice {
  /// faces[k] lists the k-dimensional faces as vertex sets, k = 0..d-1.
  std::vector<std::vector<Bits>> faces;
  /// up[k][i]: indices into faces[k+1] of the faces containing faces[k][i].
  std::vector<std::vector<std::vector<std::size_t>>> up;
  std::vector<std::size_t> f_vector() const;
};

FaceLattice face_lattice(const LatPolytope& p);

/// For k = 2..d-1: histogram n -> number of (k-1)-faces lying in exactly n k-faces
/// (`levels`), and n -> number of k-faces with exactly n (k-1)-faces (`down`).
struct SubordinationScheme {
  std::map<int, std::map<int, std::size_t>> levels;
  std::map<int, std::map<int, std::size_t>> down;
  std::string serialize() const;
  friend bool operator==(const SubordinationScheme&, const SubordinationScheme&) = default;
};

SubordinationScheme subordination_scheme(const LatPolytope& p);
SubordinationScheme subordination_scheme(const FaceLattice& lattice, int dim);

Rat polytope_volume(const LatPolytope& p);

/// Bipartite graph: nodes 0..V-1 are vertices, V..V+F-1 facets.
struct IncidenceGraph {
  std::size_t vertex_count = 0;
  std::size_t facet_count = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;  // (vertex, V + facet)
};

IncidenceGraph incidence_graph(const LatPolytope& p);

/// Dirichlet-Voronoi cell of Z^d under the form Q, in form coordinates:
/// facets 2 v^T Q x <= Q[v] for the Voronoi-relevant v.
struct DVCell {
  LatPolytope polytope;
  std::vector<Point> relevant;  // parallel to polytope.facets
};

DVCell dv_polytope(const SymMat& q);

}  // namespace lcone
