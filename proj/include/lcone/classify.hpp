#pragma once

// Classification of secondary cones up to GL_d(Z): wall crossing between
// primitive (full-dimensional) cones, then descent through facets, with
// on-disk checkpoints.

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lcone/equiv.hpp"
#include "lcone/scone.hpp"

namespace lcone {

inline constexpr const char* kVersion = "1.0.0";

struct ClassRecord {
  ConeDesc cone;
  CanonicalCertificate cert;  // of cone.central; generators are not kept
  Int stab_order;
  std::string key;            // det | dim | rays | rank profile | |Can|
  std::string dv_hash;
  std::string subordination;
  std::vector<std::size_t> f_vector;
  std::size_t dv_facets = 0;
  std::size_t dv_vertices = 0;
  bool zonotopal = false;
};

struct ClassDB {
  int d = 0;
  std::string digest{kDefaultDigest};
  std::map<std::size_t, std::vector<ClassRecord>> by_dim;
  bool complete = false;

  std::size_t total() const;
  std::size_t primitive() const;
  std::vector<const ClassRecord*> records() const;
};

struct ClassifyOptions {
  int d = 2;
  std::filesystem::path out_dir;  // empty: keep everything in memory
  unsigned workers = 1;
  bool resume = false;
  std::string digest{kDefaultDigest};
  std::optional<SymMat> seed;
  bool primitive_only = false;
  std::ostream* log = nullptr;
  /// Stop (leaving a checkpoint) after this many cones were expanded; 0 = run to the end.
  std::size_t stop_after = 0;
};

/// A_d (2 on the diagonal, 1 off it), made generic by generic_seed.
SymMat default_seed(int d);
/// Adds k/(100+k) at step k = 1, 2, ... to the entries of `q` in turn (diagonal
/// first, then below the diagonal) until its Delaunay subdivision is a triangulation.
SymMat generic_seed(const SymMat& q);

std::string invariant_key(const ConeDesc& c, const CanonicalCertificate& cert);
ClassRecord make_record(const ConeDesc& c, std::string_view digest = kDefaultDigest);

std::vector<ClassRecord> enumerate_primitive(int d, unsigned workers = 1);
ClassDB classify_all(const ClassifyOptions& opts);

/// Reads a database directory. Throws IncompatibleCheckpoint on malformed data.
ClassDB load_db(const std::filesystem::path& dir);

struct MassReport {
  Rat total;
  std::map<std::size_t, Rat> by_dim;  // signed partial sums
  std::map<std::size_t, std::size_t> cones_by_dim;
};
MassReport mass_check(const ClassDB& db);

struct DistinctReport {
  bool distinct = true;
  std::size_t hashes = 0;
  /// Pairs (dim, index) with equal incidence hashes; `isomorphic` after a full comparison.
  struct Collision {
    std::pair<std::size_t, std::size_t> a, b;
    bool isomorphic = false;
  };
  std::vector<Collision> collisions;
};
DistinctReport distinctness_check(const ClassDB& db);

/// Groups of records sharing a subordination scheme but differing in dv_hash.
std::vector<std::vector<std::pair<std::size_t, std::size_t>>> subordination_collision_scan(const ClassDB& db);

std::map<std::size_t, std::size_t> dimension_table(const ClassDB& db);

std::vector<const ClassRecord*> zonotopal_census(const ClassDB& db);
/// Cones all of whose rays have rank > 1.
std::vector<const ClassRecord*> totally_zone_contracted_census(const ClassDB& db);
/// Cones equal to their fundamental face.
std::vector<const ClassRecord*> irreducible_census(const ClassDB& db);

/// Contraction cones inside one secondary cone, up to equivalence.
std::vector<ConeDesc> contraction_pieces(const ConeDesc& c, std::string_view digest = kDefaultDigest);

struct ContractionReport {
  std::size_t total = 0;
  std::map<std::size_t, std::size_t> by_dim;
};
ContractionReport contraction_refine(const ClassDB& db, unsigned workers = 1);

/// Writes `db` (sorted) with its manifest; used for completed runs.
void write_db(const ClassDB& db, const std::filesystem::path& dir);

}  // namespace lcone
