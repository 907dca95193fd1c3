// lcone: Delaunay subdivisions, Dirichlet-Voronoi cells and the classification
// of secondary cones of positive definite quadratic forms.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "lcone/classify.hpp"
#include "lcone/delaunay.hpp"
#include "lcone/error.hpp"
#include "lcone/polyhedral.hpp"

using namespace lcone;

namespace {

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::ParseError:
    case ErrorKind::DimensionUnsupported:
      return 1;
    case ErrorKind::IncompleteDatabase:
    case ErrorKind::IncompatibleCheckpoint:
      return 3;
    default:
      return 2;
  }
}

SymMat load_form(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open " + path);
  return read_form(in);
}

std::string join(const std::vector<std::size_t>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + std::to_string(xs[i]);
  return s;
}

std::string output_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  const char* env = std::getenv("LCONE_OUT");
  return env ? env : "";
}

void cmd_delaunay(const std::string& file) {
  SymMat q = load_form(file);
  DelaunayStar t = delaunay_star(q);
  std::cout << "cells: " << t.cells.size() << ", classes: " << t.classes.size()
            << ", triangulation: " << (is_triangulation(t) ? "true" : "false") << '\n';
  for (std::size_t c = 0; c < t.classes.size(); ++c) {
    std::cout << "class " << c << ':';
    for (const auto& v : t.representative(c).vertices) std::cout << ' ' << to_string(v);
    std::cout << '\n';
  }
  for (const auto& cell : t.cells) {
    std::cout << "cell";
    for (const auto& v : cell.vertices) std::cout << ' ' << to_string(v);
    std::cout << '\n';
  }
}

void cmd_dvcell(const std::string& file, const std::string& digest) {
  SymMat q = load_form(file);
  DVCell dv = dv_polytope(q);
  FaceLattice fl = face_lattice(dv.polytope);
  std::cout << "facets: " << dv.polytope.facets.size() << ", vertices: " << dv.polytope.vertices.size()
            << ", f: (" << join(fl.f_vector()) << ")\n";
  std::cout << "subordination: " << subordination_scheme(fl, q.dim()).serialize() << '\n';
  std::cout << "hash: " << incidence_hash(dv.polytope, digest) << '\n';
}

void print_mass(const MassReport& m) {
  for (auto it = m.by_dim.rbegin(); it != m.by_dim.rend(); ++it)
    std::cout << "dim " << it->first << ": " << it->second.get_str() << " (cones: " << m.cones_by_dim.at(it->first)
              << ")\n";
}

struct ClassifyArgs {
  int d = 0;
  std::string out;
  unsigned workers = 1;
  bool resume = false;
  std::string seed_file;
  bool report = false;
  bool verbose = false;
  std::size_t stop_after = 0;
};

int cmd_classify(const ClassifyArgs& a, const std::string& digest) {
  ClassifyOptions o;
  o.d = a.d;
  o.out_dir = output_dir(a.out);
  o.workers = a.workers;
  o.resume = a.resume;
  o.digest = digest;
  o.stop_after = a.stop_after;
  if (a.resume && o.out_dir.empty()) throw Error(ErrorKind::ParseError, "--resume needs an output directory");
  if (!a.seed_file.empty()) o.seed = load_form(a.seed_file);
  if (o.seed && o.seed->dim() != a.d) throw Error(ErrorKind::ParseError, "seed form has the wrong dimension");
  if (a.verbose) o.log = &std::cerr;

  ClassDB db = classify_all(o);
  if (!db.complete) {
    std::cout << "stopped: " << db.total() << " classes so far; rerun with --resume\n";
    return 3;
  }
  for (const auto& [k, n] : dimension_table(db)) std::cout << "dim " << k << ": " << n << '\n';
  MassReport mass = mass_check(db);
  DistinctReport dist = distinctness_check(db);
  std::cout << "total: " << db.total() << ", primitive: " << db.primitive() << '\n';
  std::cout << "total: " << db.total() << ", mass: " << mass.total.get_str()
            << ", distinct: " << (dist.distinct ? "true" : "false") << '\n';
  if (a.report) {
    print_mass(mass);
    std::cout << "zonotopal: " << zonotopal_census(db).size() << '\n';
    std::cout << "totally zone-contracted: " << totally_zone_contracted_census(db).size() << '\n';
    std::cout << "irreducible: " << irreducible_census(db).size() << '\n';
    std::cout << "subordination collisions: " << subordination_collision_scan(db).size() << '\n';
    ContractionReport c = contraction_refine(db, a.workers);
    std::cout << "contraction types: " << c.total << '\n';
    for (auto it = c.by_dim.rbegin(); it != c.by_dim.rend(); ++it)
      std::cout << "contraction dim " << it->first << ": " << it->second << '\n';
  }
  return 0;
}

int cmd_masscheck(const std::string& dir) {
  if (dir.empty()) throw Error(ErrorKind::ParseError, "no database directory given");
  ClassDB db = load_db(dir);
  MassReport m = mass_check(db);
  print_mass(m);
  std::cout << "total: " << m.total.get_str() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Secondary cones and Delaunay subdivisions of lattices"};
  app.require_subcommand(1);
  std::string digest{kDefaultDigest};
  app.add_option("--digest", digest, "Digest algorithm for canonical hashes")->capture_default_str();

  std::string form_file;
  auto* delaunay = app.add_subcommand("delaunay", "Delaunay subdivision of a form");
  delaunay->add_option("form", form_file, "Form file")->required();
  auto* dvcell = app.add_subcommand("dvcell", "Dirichlet-Voronoi polytope of a form");
  dvcell->add_option("form", form_file, "Form file")->required();

  ClassifyArgs ca;
  auto* classify = app.add_subcommand("classify", "Classify all secondary cones in dimension d");
  classify->add_option("-d", ca.d, "Dimension")->required()->check(CLI::Range(1, 5));
  classify->add_option("-o", ca.out, "Output directory (default: $LCONE_OUT)");
  classify->add_option("-j", ca.workers, "Worker threads")->check(CLI::Range(1u, 1024u));
  classify->add_flag("--resume", ca.resume, "Continue from the checkpoint in the output directory");
  classify->add_option("--seed-form", ca.seed_file, "Form file for the traversal seed");
  classify->add_flag("--report", ca.report, "Also print censuses and contraction types");
  classify->add_flag("-v,--verbose", ca.verbose, "Progress on stderr");
  classify->add_option("--stop-after", ca.stop_after, "Stop after expanding this many cones")->group("");

  std::string db_dir;
  auto* masscheck = app.add_subcommand("masscheck", "Mass formula of a classification database");
  masscheck->add_option("dir", db_dir, "Database directory (default: $LCONE_OUT)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    digest_hex("", digest);
    if (*delaunay) cmd_delaunay(form_file);
    if (*dvcell) cmd_dvcell(form_file, digest);
    if (*classify) return cmd_classify(ca, digest);
    if (*masscheck) return cmd_masscheck(output_dir(db_dir));
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
