#pragma once

// GL_d(Z)-equivalence of forms and cones through canonical Gram graphs of
// the characteristic vector set Can(Q).

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lcone/canon.hpp"
#include "lcone/exact.hpp"
#include "lcone/polyhedral.hpp"
#include "lcone/scone.hpp"

namespace lcone {

inline constexpr std::string_view kDefaultDigest = "sha256";

struct CanonicalCertificate {
  std::string hash;
  std::vector<Point> vectors;                // Can(Q) in canonical order
  std::vector<Permutation> generators;       // automorphisms, on canonical positions
  Int aut_order;
};

CanonicalCertificate form_certificate(const SymMat& q, std::string_view digest = kDefaultDigest);

/// U with U^T q U = q2, verified; nullopt when the forms are inequivalent.
std::optional<Mat> form_equivalence(const SymMat& q, const SymMat& q2,
                                    std::string_view digest = kDefaultDigest);
std::optional<Mat> form_equivalence(const SymMat& q, const CanonicalCertificate& cq,
                                    const SymMat& q2, const CanonicalCertificate& cq2);

struct AutomorphismGroup {
  std::vector<Mat> generators;
  Int order;
};

AutomorphismGroup automorphism_group(const SymMat& q);

/// Equivalence of secondary cones via their central forms.
std::optional<Mat> cone_equivalence(const ConeDesc& a, const ConeDesc& b);
bool cone_equivalent(const ConeDesc& a, const ConeDesc& b);
Int stabilizer_order(const ConeDesc& c);

/// Is U unimodular with U^T q U = q2?
bool is_isometry(const Mat& u, const SymMat& q, const SymMat& q2);

/// Canonical certificate of the vertex-facet incidence graph.
std::string incidence_certificate(const LatPolytope& p);
std::string incidence_hash(const LatPolytope& p, std::string_view digest = kDefaultDigest);

}  // namespace lcone
