#pragma once

// Delaunay subdivisions Del(Z^d, Q), represented by the star of the origin.

#include <utility>
#include <vector>

#include "lcone/exact.hpp"

namespace lcone {

struct Cell {
  std::vector<Point> vertices;  // sorted
  RatVec center;
  Rat sqradius;

  friend bool operator==(const Cell& a, const Cell& b) { return a.vertices == b.vertices; }
};

/// A facet of a class representative, given as indices into its vertices,
/// and the cell on the other side as classes[neighbor_class] + translation.
struct FacetLink {
  std::vector<std::size_t> facet;
  std::size_t neighbor_class = 0;
  Point translation;
};

struct DelaunayStar {
  SymMat form;
  std::vector<Cell> cells;                      // every cell with 0 as a vertex, sorted
  std::vector<std::size_t> classes;             // indices into cells; smallest vertex is 0
  std::vector<std::vector<FacetLink>> adjacency;  // parallel to classes

  int dim() const { return form.dim(); }
  const Cell& representative(std::size_t cls) const { return cells[classes[cls]]; }
};

/// Center and squared radius of the sphere through d+1 affinely independent points.
std::pair<RatVec, Rat> circumcenter(const SymMat& q, const std::vector<Point>& vertices);

Cell translate(const Cell& c, const Point& t);

/// Facets of a cell as sorted vertex-index lists.
std::vector<std::vector<std::size_t>> cell_facets(const Cell& c);

Cell initial_cell(const SymMat& q);
/// The Delaunay cell across `facet` (vertex points of `cell`). Throws NotAFacet.
Cell adjacent_cell(const SymMat& q, const Cell& cell, const std::vector<Point>& facet);

DelaunayStar delaunay_star(const SymMat& q);
bool is_triangulation(const DelaunayStar& star);

/// Same subdivision (identical cell sets).
bool same_subdivision(const DelaunayStar& a, const DelaunayStar& b);

/// Crosses the unique wall of SC(T) containing `wallpoint`, approaching from `center`.
DelaunayStar neighbor_triangulation(const DelaunayStar& t, const SymMat& wallpoint,
                                    const SymMat& center);

}  // namespace lcone
