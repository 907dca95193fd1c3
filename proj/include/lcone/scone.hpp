#pragma once

// Secondary cones of Delaunay subdivisions and their faces.

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "lcone/bits.hpp"
#include "lcone/delaunay.hpp"
#include "lcone/exact.hpp"

namespace lcone {

/// N_{V,w} = w w^T - sum_v alpha_v v v^T where w = sum alpha_v v, sum alpha_v = 1.
/// <N, Q> = Q[w - c] - r^2 for the sphere (c, r) of V under Q.
struct Regulator {
  SymMat matrix;
  bool degenerate = false;  // w in V
  std::vector<Point> simplex;
  Point w;
};

Regulator regulator(const std::vector<Point>& simplex, const Point& w);

/// Closed polyhedral cone in the space of symmetric matrices, described by
/// <e, Q> = 0 for the equalities and <g, Q> >= 0 for the inequalities.
struct ConeDesc {
  int d = 0;
  std::vector<SymMat> equalities;
  std::vector<SymMat> inequalities;  // irredundant, integral
  std::vector<SymMat> rays;          // primitive integral, sorted
  std::size_t dim = 0;
  SymMat central;
};

/// Closure of SC(T). For subdivisions that are not triangulations the cone is
/// lower dimensional; it is only built when must_be_triangulation is false.
ConeDesc secondary_cone(const DelaunayStar& t, bool must_be_triangulation = true);

SymMat central_form(const std::vector<SymMat>& rays);

/// The face of c spanned by the rays in `subset`, with `extra` added to the
/// equalities. The subset must be the ray set of a face.
ConeDesc face_of(const ConeDesc& c, const Bits& subset, const std::vector<SymMat>& extra);

std::vector<ConeDesc> cone_facets(const ConeDesc& c);

/// Cone generated by the given PSD rays, with facets computed by dual description.
ConeDesc cone_from_rays(int d, std::vector<SymMat> rays);

std::vector<Bits> inequality_tight_sets(const ConeDesc& c);

bool contains_pd(const ConeDesc& c);

/// Smallest face containing every ray of rank > 1; nullopt when there is none.
std::optional<ConeDesc> fundamental_face(const ConeDesc& c);

std::map<std::size_t, std::size_t> rank_profile(const ConeDesc& c);

/// Crosses the unique facet of a primitive cone containing `wallpoint`, moving away
/// from `center`; returns the triangulation and cone on the other side.
std::pair<DelaunayStar, ConeDesc> cross_wall(const ConeDesc& cone, const SymMat& wallpoint,
                                             const SymMat& center);

bool cone_contains(const ConeDesc& c, const SymMat& q);
/// Strictly inside the relative interior.
bool cone_relint_contains(const ConeDesc& c, const SymMat& q);

}  // namespace lcone
