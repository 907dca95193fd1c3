#include "lcone/classify.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "json.hpp"
#include "lcone/delaunay.hpp"
#include "lcone/lattice.hpp"
#include "lcone/polyhedral.hpp"

namespace lcone {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void check_dimension(int d) {
  if (d < 1 || d > 5) throw Error(ErrorKind::DimensionUnsupported, "d must be between 1 and 5");
}

template <class F>
void parallel_for(std::size_t n, unsigned workers, F&& f) {
  if (workers <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < std::min<std::size_t>(workers, n); ++w)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next++) < n;) {
        try {
          f(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = n;
        }
      }
    });
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

std::string profile_string(const ConeDesc& c) {
  std::string s;
  for (const auto& [r, n] : rank_profile(c)) {
    if (!s.empty()) s += ',';
    s += std::to_string(r) + ':' + std::to_string(n);
  }
  return s;
}

// ---- JSON ----------------------------------------------------------------

json ints_json(const SymMat& m) {
  json a = json::array();
  for (const auto& x : m.lower()) a.push_back(to_i64(x));
  return a;
}

json mats_json(const std::vector<SymMat>& ms) {
  json a = json::array();
  for (const auto& m : ms) a.push_back(ints_json(m));
  return a;
}

SymMat mat_from_json(int d, const json& j) {
  std::vector<Int> lower;
  for (const auto& x : j) lower.emplace_back(x.get<long>());
  if (lower.size() != SymMat::coord_count(d))
    throw Error(ErrorKind::IncompatibleCheckpoint, "matrix of the wrong size");
  return SymMat::from_ints(d, lower);
}

std::vector<SymMat> mats_from_json(int d, const json& j) {
  std::vector<SymMat> out;
  for (const auto& m : j) out.push_back(mat_from_json(d, m));
  return out;
}

json record_json(const ClassRecord& r) {
  json j;
  j["d"] = r.cone.d;
  j["dim"] = r.cone.dim;
  j["rays"] = mats_json(r.cone.rays);
  j["central"] = ints_json(r.cone.central);
  j["eqs"] = mats_json(r.cone.equalities);
  j["ineqs"] = mats_json(r.cone.inequalities);
  j["stab_order"] = to_i64(r.stab_order);
  j["hash"] = r.cert.hash;
  j["cert"] = r.cert.vectors;
  j["key"] = r.key;
  j["dv_hash"] = r.dv_hash;
  j["subordination"] = r.subordination;
  j["zonotopal"] = r.zonotopal;
  j["f_vector"] = r.f_vector;
  j["dv_facets"] = r.dv_facets;
  j["dv_vertices"] = r.dv_vertices;
  return j;
}

ClassRecord record_from_json(const json& j) {
  try {
    ClassRecord r;
    r.cone.d = j.at("d").get<int>();
    check_dimension(r.cone.d);
    r.cone.dim = j.at("dim").get<std::size_t>();
    r.cone.rays = mats_from_json(r.cone.d, j.at("rays"));
    r.cone.central = mat_from_json(r.cone.d, j.at("central"));
    r.cone.equalities = mats_from_json(r.cone.d, j.at("eqs"));
    r.cone.inequalities = mats_from_json(r.cone.d, j.at("ineqs"));
    r.stab_order = Int(j.at("stab_order").get<long>());
    r.cert.hash = j.at("hash").get<std::string>();
    r.cert.vectors = j.at("cert").get<std::vector<Point>>();
    r.cert.aut_order = r.stab_order;
    r.key = j.at("key").get<std::string>();
    r.dv_hash = j.at("dv_hash").get<std::string>();
    r.subordination = j.at("subordination").get<std::string>();
    r.zonotopal = j.at("zonotopal").get<bool>();
    r.f_vector = j.at("f_vector").get<std::vector<std::size_t>>();
    r.dv_facets = j.at("dv_facets").get<std::size_t>();
    r.dv_vertices = j.at("dv_vertices").get<std::size_t>();
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::IncompatibleCheckpoint, std::string("bad record: ") + e.what());
  }
}

// ---- files ---------------------------------------------------------------

void atomic_write(const fs::path& p, const std::string& content) {
  fs::path tmp = p;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << content;
    out.flush();
    if (!out) throw Error(ErrorKind::Internal, "cannot write " + tmp.string());
  }
  fs::rename(tmp, p);
}

fs::path dim_file(const fs::path& dir, std::size_t k) { return dir / ("dim_" + std::to_string(k) + ".jsonl"); }

struct Cursor {
  std::string phase = "primitive";  // primitive | descent | done
  std::size_t dim = 0;
  std::size_t next = 0;
};

json manifest_json(const ClassDB& db) {
  json j;
  j["d"] = db.d;
  j["version"] = kVersion;
  j["digest"] = db.digest;
  j["complete"] = db.complete;
  json counts = json::object();
  for (const auto& [k, rs] : db.by_dim) counts[std::to_string(k)] = rs.size();
  j["counts"] = counts;
  j["total"] = db.total();
  j["primitive"] = db.primitive();
  if (db.complete) j["mass"] = mass_check(db).total.get_str();
  return j;
}

std::vector<ClassRecord> read_records(const fs::path& file) {
  std::vector<ClassRecord> out;
  std::ifstream in(file);
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line))
    if (!line.empty()) lines.push_back(line);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    json j = json::parse(lines[i], nullptr, false);
    // A torn final line comes from an interrupted append and is dropped.
    if (j.is_discarded()) {
      if (i + 1 == lines.size()) break;
      throw Error(ErrorKind::IncompatibleCheckpoint, "corrupt line in " + file.string());
    }
    out.push_back(record_from_json(j));
  }
  return out;
}

std::string records_text(const std::vector<ClassRecord>& rs) {
  std::string s;
  for (const auto& r : rs) s += record_json(r).dump() + '\n';
  return s;
}

void sort_records(std::vector<ClassRecord>& rs) {
  std::sort(rs.begin(), rs.end(), [](const ClassRecord& a, const ClassRecord& b) {
    if (a.key != b.key) return a.key < b.key;
    if (a.cert.hash != b.cert.hash) return a.cert.hash < b.cert.hash;
    return a.cone.rays < b.cone.rays;
  });
}

void require_complete(const ClassDB& db) {
  if (!db.complete) throw Error(ErrorKind::IncompleteDatabase, "the classification is not complete");
}

// ---- the engine ------------------------------------------------------------

struct Candidate {
  ConeDesc cone;
  CanonicalCertificate cert;
  std::string key;
};

Candidate make_candidate(ConeDesc c, std::string_view digest) {
  Candidate out;
  out.cert = form_certificate(c.central, digest);
  out.key = invariant_key(c, out.cert);
  out.cone = std::move(c);
  return out;
}

void enrich(ClassRecord& r, std::string_view digest) {
  r.stab_order = r.cert.aut_order;
  DVCell dv = dv_polytope(r.cone.central);
  r.dv_hash = incidence_hash(dv.polytope, digest);
  FaceLattice fl = face_lattice(dv.polytope);
  r.f_vector = fl.f_vector();
  r.subordination = subordination_scheme(fl, r.cone.d).serialize();
  r.dv_facets = dv.polytope.facets.size();
  r.dv_vertices = dv.polytope.vertices.size();
  r.zonotopal = !fundamental_face(r.cone).has_value();
}

class Engine {
 public:
  explicit Engine(const ClassifyOptions& o) : opts_(o), n_(SymMat::coord_count(o.d)) {
    check_dimension(o.d);
    db_.d = o.d;
    db_.digest = o.digest;
    persist_ = !o.out_dir.empty();
    cursor_ = {"primitive", n_, 0};
  }

  ClassDB run() {
    if (persist_) open_store();
    if (db_.complete) return std::move(db_);
    if (db_.by_dim[n_].empty()) seed();

    std::size_t expanded = 0;
    while (cursor_.phase != "done") {
      auto& bucket = db_.by_dim[cursor_.dim];
      if (cursor_.next >= bucket.size()) {
        advance_phase();
        continue;
      }
      std::size_t end = std::min(bucket.size(), cursor_.next + std::max<std::size_t>(1, 4 * opts_.workers));
      if (opts_.stop_after) {
        if (expanded >= opts_.stop_after) return std::move(db_);
        end = std::min(end, cursor_.next + (opts_.stop_after - expanded));
      }
      expand_batch(cursor_.next, end, expanded);
    }
    finish();
    return std::move(db_);
  }

 private:
  void log(const std::string& s) {
    if (opts_.log) *opts_.log << s << std::endl;
  }

  void seed() {
    SymMat q = opts_.seed ? generic_seed(*opts_.seed) : default_seed(opts_.d);
    std::vector<Candidate> c;
    c.push_back(make_candidate(secondary_cone(delaunay_star(q)), opts_.digest));
    auto fresh = merge(std::move(c), n_);
    enrich_and_store(fresh, n_);
    write_frontier();
  }

  void advance_phase() {
    if (cursor_.phase == "primitive") {
      log("primitive: " + std::to_string(db_.by_dim[n_].size()) + " classes");
      if (opts_.primitive_only) {
        cursor_ = {"done", 0, 0};
        return;
      }
      cursor_ = {"descent", n_, 0};
    } else if (cursor_.dim <= 1) {
      cursor_ = {"done", 0, 0};
    } else {
      log("dimension " + std::to_string(cursor_.dim - 1) + ": " +
          std::to_string(db_.by_dim[cursor_.dim - 1].size()) + " classes");
      cursor_ = {"descent", cursor_.dim - 1, 0};
    }
    write_frontier();
  }

  // Candidates obtained by expanding record i of the current bucket.
  std::vector<Candidate> expand(const ClassRecord& r) const {
    std::vector<Candidate> out;
    if (cursor_.phase == "primitive") {
      for (const auto& f : cone_facets(r.cone)) {
        if (!is_positive_definite(f.central)) continue;
        auto [star, cone] = cross_wall(r.cone, f.central, r.cone.central);
        out.push_back(make_candidate(std::move(cone), opts_.digest));
      }
    } else {
      for (auto& f : cone_facets(r.cone))
        if (contains_pd(f)) out.push_back(make_candidate(std::move(f), opts_.digest));
    }
    return out;
  }

  void expand_batch(std::size_t begin, std::size_t end, std::size_t& expanded) {
    const std::size_t target = cursor_.phase == "primitive" ? n_ : cursor_.dim - 1;
    std::vector<std::vector<Candidate>> found(end - begin);
    {
      // Pointers stay valid: merging starts after all workers are done.
      std::vector<const ClassRecord*> src;
      for (std::size_t i = begin; i < end; ++i) src.push_back(&db_.by_dim[cursor_.dim][i]);
      parallel_for(src.size(), opts_.workers, [&](std::size_t i) { found[i] = expand(*src[i]); });
    }
    std::vector<std::pair<std::size_t, std::size_t>> ranges;  // new records per cone
    for (auto& f : found) {
      std::size_t before = db_.by_dim[target].size();
      merge(std::move(f), target);
      ranges.emplace_back(before, db_.by_dim[target].size());
    }
    std::vector<std::size_t> fresh;
    for (const auto& [a, b] : ranges)
      for (std::size_t i = a; i < b; ++i) fresh.push_back(i);
    auto& bucket = db_.by_dim[target];
    parallel_for(fresh.size(), opts_.workers, [&](std::size_t i) { enrich(bucket[fresh[i]], opts_.digest); });
    for (std::size_t c = 0; c < ranges.size(); ++c) {
      for (std::size_t i = ranges[c].first; i < ranges[c].second; ++i) append(target, bucket[i]);
      ++cursor_.next;
      ++expanded;
      write_frontier();
    }
  }

  // Returns the indices of the records that were new.
  std::vector<std::size_t> merge(std::vector<Candidate> cands, std::size_t target) {
    std::vector<std::size_t> fresh;
    auto& bucket = db_.by_dim[target];
    auto& index = keys_[target];
    for (auto& c : cands) {
      auto& slot = index[c.key];
      bool duplicate = false;
      for (std::size_t i : slot) {
        const ClassRecord& r = bucket[i];
        if (r.cert.hash != c.cert.hash) continue;
        auto u = form_equivalence(c.cone.central, c.cert, r.cone.central, r.cert);
        if (!u) {
          log("warning: equal certificates without a witness");
          continue;
        }
        std::vector<SymMat> mapped;
        for (const auto& ray : c.cone.rays) mapped.push_back(ray.congruent(*u));
        std::sort(mapped.begin(), mapped.end());
        ensure(mapped == r.cone.rays, "equivalent central forms with different cones");
        duplicate = true;
        break;
      }
      if (duplicate) continue;
      ClassRecord r;
      r.cone = std::move(c.cone);
      r.cert = std::move(c.cert);
      r.cert.generators.clear();
      r.stab_order = r.cert.aut_order;
      r.key = std::move(c.key);
      slot.push_back(bucket.size());
      fresh.push_back(bucket.size());
      bucket.push_back(std::move(r));
    }
    return fresh;
  }

  void enrich_and_store(const std::vector<std::size_t>& fresh, std::size_t target) {
    auto& bucket = db_.by_dim[target];
    parallel_for(fresh.size(), opts_.workers, [&](std::size_t i) { enrich(bucket[fresh[i]], opts_.digest); });
    for (std::size_t i : fresh) append(target, bucket[i]);
  }

  void finish() {
    db_.complete = !opts_.primitive_only;
    for (auto& [k, rs] : db_.by_dim) sort_records(rs);
    for (auto it = db_.by_dim.begin(); it != db_.by_dim.end();)
      it = it->second.empty() ? db_.by_dim.erase(it) : std::next(it);
    if (persist_) {
      write_db(db_, opts_.out_dir);
      write_frontier();
    }
  }

  // ---- persistence ----

  void open_store() {
    const fs::path& dir = opts_.out_dir;
    fs::create_directories(dir);
    const fs::path manifest = dir / "manifest.json";
    if (opts_.resume && fs::exists(manifest)) {
      ClassDB loaded = load_db(dir);
      if (loaded.d != opts_.d) throw Error(ErrorKind::IncompatibleCheckpoint, "checkpoint has a different d");
      if (loaded.digest != opts_.digest)
        throw Error(ErrorKind::IncompatibleCheckpoint, "checkpoint uses a different digest");
      db_ = std::move(loaded);
      if (db_.complete) return;
      for (auto& [k, rs] : db_.by_dim) {
        atomic_write(dim_file(dir, k), records_text(rs));
        for (std::size_t i = 0; i < rs.size(); ++i) keys_[k][rs[i].key].push_back(i);
      }
      read_frontier();
      log("resumed with " + std::to_string(db_.total()) + " classes");
      return;
    }
    for (std::size_t k = 1; k <= n_; ++k) fs::remove(dim_file(dir, k));
    fs::remove(dir / "frontier.jsonl");
    cursor_ = {"primitive", n_, 0};
    atomic_write(manifest, manifest_json(db_).dump(2) + '\n');
  }

  void read_frontier() {
    cursor_ = {"primitive", n_, 0};
    std::ifstream in(opts_.out_dir / "frontier.jsonl");
    std::string line;
    if (!std::getline(in, line)) return;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.contains("phase"))
      throw Error(ErrorKind::IncompatibleCheckpoint, "unreadable frontier");
    cursor_.phase = j["phase"].get<std::string>();
    if (cursor_.phase != "primitive" && cursor_.phase != "descent" && cursor_.phase != "done")
      throw Error(ErrorKind::IncompatibleCheckpoint, "unknown frontier phase");
    cursor_.dim = j.value("dim", n_);
    cursor_.next = j.value("next", std::size_t{0});
    if (cursor_.dim < 1 || cursor_.dim > n_ || cursor_.next > db_.by_dim[cursor_.dim].size())
      throw Error(ErrorKind::IncompatibleCheckpoint, "frontier out of range");
  }

  void write_frontier() {
    if (!persist_) return;
    json j;
    j["phase"] = cursor_.phase;
    if (cursor_.phase != "done") {
      j["dim"] = cursor_.dim;
      j["next"] = cursor_.next;
    }
    atomic_write(opts_.out_dir / "frontier.jsonl", j.dump() + '\n');
  }

  void append(std::size_t k, const ClassRecord& r) {
    if (!persist_) return;
    std::ofstream out(dim_file(opts_.out_dir, k), std::ios::app | std::ios::binary);
    out << record_json(r).dump() << '\n';
    out.flush();
    if (!out) throw Error(ErrorKind::Internal, "cannot append to the database");
  }

  ClassifyOptions opts_;
  std::size_t n_;
  bool persist_ = false;
  ClassDB db_;
  Cursor cursor_{"primitive", 0, 0};
  std::map<std::size_t, std::unordered_map<std::string, std::vector<std::size_t>>> keys_;
};

}  // namespace

std::size_t ClassDB::total() const {
  std::size_t n = 0;
  for (const auto& [k, rs] : by_dim) n += rs.size();
  return n;
}

std::size_t ClassDB::primitive() const {
  auto it = by_dim.find(SymMat::coord_count(d));
  return it == by_dim.end() ? 0 : it->second.size();
}

std::vector<const ClassRecord*> ClassDB::records() const {
  std::vector<const ClassRecord*> out;
  for (auto it = by_dim.rbegin(); it != by_dim.rend(); ++it)
    for (const auto& r : it->second) out.push_back(&r);
  return out;
}

SymMat generic_seed(const SymMat& q) {
  if (!is_positive_definite(q)) throw Error(ErrorKind::NotPositiveDefinite, "seed form is not positive definite");
  // Diagonal entries first, then the off-diagonal ones, cyclically.
  const int d = q.dim();
  std::vector<std::pair<int, int>> order;
  for (int i = 0; i < d; ++i) order.emplace_back(i, i);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < i; ++j) order.emplace_back(i, j);
  SymMat s = q;
  for (int k = 1; k <= 200; ++k) {
    if (is_triangulation(delaunay_star(s))) return s;
    Rat step(k, 100 + k);
    step.canonicalize();
    auto [i, j] = order[(k - 1) % order.size()];
    SymMat t = s;
    t(i, j) += step;
    if (is_positive_definite(t)) s = std::move(t);
  }
  throw Error(ErrorKind::Internal, "seed perturbation did not reach a triangulation");
}

SymMat default_seed(int d) {
  check_dimension(d);
  SymMat a(d, RatVec(SymMat::coord_count(d), Rat(1)));
  for (int i = 0; i < d; ++i) a(i, i) = 2;
  return generic_seed(a);
}

std::string invariant_key(const ConeDesc& c, const CanonicalCertificate& cert) {
  return determinant(c.central).get_str() + '|' + std::to_string(c.dim) + '|' + std::to_string(c.rays.size()) +
         '|' + profile_string(c) + '|' + std::to_string(cert.vectors.size());
}

ClassRecord make_record(const ConeDesc& c, std::string_view digest) {
  ClassRecord r;
  r.cone = c;
  r.cert = form_certificate(c.central, digest);
  r.key = invariant_key(c, r.cert);
  enrich(r, digest);
  return r;
}

std::vector<ClassRecord> enumerate_primitive(int d, unsigned workers) {
  ClassifyOptions o;
  o.d = d;
  o.workers = workers;
  o.primitive_only = true;
  ClassDB db = classify_all(o);
  auto it = db.by_dim.find(SymMat::coord_count(d));
  return it == db.by_dim.end() ? std::vector<ClassRecord>{} : std::move(it->second);
}

ClassDB classify_all(const ClassifyOptions& opts) { return Engine(opts).run(); }

ClassDB load_db(const fs::path& dir) {
  std::ifstream in(dir / "manifest.json");
  if (!in) throw Error(ErrorKind::IncompatibleCheckpoint, "no manifest in " + dir.string());
  json m = json::parse(in, nullptr, false);
  if (m.is_discarded()) throw Error(ErrorKind::IncompatibleCheckpoint, "unreadable manifest");
  ClassDB db;
  try {
    db.d = m.at("d").get<int>();
    db.digest = m.at("digest").get<std::string>();
    db.complete = m.at("complete").get<bool>();
    if (m.at("version").get<std::string>() != kVersion)
      throw Error(ErrorKind::IncompatibleCheckpoint, "checkpoint written by another version");
  } catch (const json::exception& e) {
    throw Error(ErrorKind::IncompatibleCheckpoint, std::string("bad manifest: ") + e.what());
  }
  check_dimension(db.d);
  for (std::size_t k = 1; k <= SymMat::coord_count(db.d); ++k) {
    fs::path f = dim_file(dir, k);
    if (!fs::exists(f)) continue;
    auto rs = read_records(f);
    for (const auto& r : rs)
      if (r.cone.d != db.d || r.cone.dim != k)
        throw Error(ErrorKind::IncompatibleCheckpoint, "record in the wrong file");
    if (!rs.empty()) db.by_dim[k] = std::move(rs);
  }
  if (db.complete && !m.contains("counts")) throw Error(ErrorKind::IncompatibleCheckpoint, "manifest without counts");
  if (db.complete)
    for (const auto& [k, rs] : db.by_dim)
      if (m["counts"].value(std::to_string(k), std::size_t{0}) != rs.size())
        throw Error(ErrorKind::IncompatibleCheckpoint, "record counts disagree with the manifest");
  return db;
}

void write_db(const ClassDB& db, const fs::path& dir) {
  fs::create_directories(dir);
  for (std::size_t k = 1; k <= SymMat::coord_count(db.d); ++k) {
    auto it = db.by_dim.find(k);
    if (it == db.by_dim.end()) {
      fs::remove(dim_file(dir, k));
      continue;
    }
    auto rs = it->second;
    sort_records(rs);
    atomic_write(dim_file(dir, k), records_text(rs));
  }
  if (db.complete) atomic_write(dir / "frontier.jsonl", json{{"phase", "done"}}.dump() + '\n');
  atomic_write(dir / "manifest.json", manifest_json(db).dump(2) + '\n');
}

MassReport mass_check(const ClassDB& db) {
  require_complete(db);
  MassReport out;
  for (const auto& [k, rs] : db.by_dim) {
    Rat sum = 0;
    for (const auto& r : rs) sum += Rat(1) / Rat(r.stab_order);
    if (k % 2) sum = -sum;
    sum.canonicalize();
    out.by_dim[k] = sum;
    out.cones_by_dim[k] = rs.size();
    out.total += sum;
  }
  out.total.canonicalize();
  return out;
}

DistinctReport distinctness_check(const ClassDB& db) {
  require_complete(db);
  DistinctReport out;
  std::map<std::string, std::vector<std::pair<std::size_t, std::size_t>>> groups;
  for (const auto& [k, rs] : db.by_dim)
    for (std::size_t i = 0; i < rs.size(); ++i) groups[rs[i].dv_hash].emplace_back(k, i);
  out.hashes = groups.size();
  auto rec = [&](std::pair<std::size_t, std::size_t> p) -> const ClassRecord& { return db.by_dim.at(p.first)[p.second]; };
  for (const auto& [h, members] : groups)
    for (std::size_t a = 0; a < members.size(); ++a)
      for (std::size_t b = a + 1; b < members.size(); ++b) {
        DistinctReport::Collision c{members[a], members[b], false};
        c.isomorphic = incidence_certificate(dv_polytope(rec(c.a).cone.central).polytope) ==
                       incidence_certificate(dv_polytope(rec(c.b).cone.central).polytope);
        if (c.isomorphic) out.distinct = false;
        out.collisions.push_back(c);
      }
  return out;
}

std::vector<std::vector<std::pair<std::size_t, std::size_t>>> subordination_collision_scan(const ClassDB& db) {
  require_complete(db);
  std::map<std::string, std::vector<std::pair<std::size_t, std::size_t>>> groups;
  for (const auto& [k, rs] : db.by_dim)
    for (std::size_t i = 0; i < rs.size(); ++i) groups[rs[i].subordination].emplace_back(k, i);
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> out;
  for (auto& [s, members] : groups) {
    std::set<std::string> hashes;
    for (auto [k, i] : members) hashes.insert(db.by_dim.at(k)[i].dv_hash);
    if (hashes.size() >= 2) out.push_back(std::move(members));
  }
  return out;
}

std::map<std::size_t, std::size_t> dimension_table(const ClassDB& db) {
  require_complete(db);
  std::map<std::size_t, std::size_t> out;
  for (const auto& [k, rs] : db.by_dim) out[k] = rs.size();
  return out;
}

std::vector<const ClassRecord*> zonotopal_census(const ClassDB& db) {
  require_complete(db);
  std::vector<const ClassRecord*> out;
  for (const ClassRecord* r : db.records())
    if (r->zonotopal) {
      ensure(r->cone.rays.size() == r->cone.dim, "zonotopal cone that is not simplicial");
      out.push_back(r);
    }
  return out;
}

std::vector<const ClassRecord*> totally_zone_contracted_census(const ClassDB& db) {
  require_complete(db);
  std::vector<const ClassRecord*> out;
  for (const ClassRecord* r : db.records())
    if (std::all_of(r->cone.rays.begin(), r->cone.rays.end(), [](const SymMat& m) { return rank(m) > 1; }))
      out.push_back(r);
  return out;
}

std::vector<const ClassRecord*> irreducible_census(const ClassDB& db) {
  require_complete(db);
  std::vector<const ClassRecord*> out;
  for (const ClassRecord* r : db.records()) {
    auto f = fundamental_face(r->cone);
    if (f && f->rays == r->cone.rays) out.push_back(r);
  }
  return out;
}

namespace {

struct PieceKey {
  ConeDesc cone;
  CanonicalCertificate cert;
};

bool same_piece(const PieceKey& a, const PieceKey& b) {
  if (a.cone.dim != b.cone.dim || a.cone.rays.size() != b.cone.rays.size()) return false;
  auto u = form_equivalence(a.cone.central, a.cert, b.cone.central, b.cert);
  if (!u) return false;
  std::vector<SymMat> mapped;
  for (const auto& r : a.cone.rays) mapped.push_back(r.congruent(*u));
  std::sort(mapped.begin(), mapped.end());
  return mapped == b.cone.rays;
}

// Adds `p` unless an equivalent piece is already present.
bool insert_piece(std::unordered_map<std::string, std::vector<PieceKey>>& seen, PieceKey p) {
  auto& slot = seen[p.cert.hash];
  for (const auto& q : slot)
    if (same_piece(p, q)) return false;
  slot.push_back(std::move(p));
  return true;
}

}  // namespace

std::vector<ConeDesc> contraction_pieces(const ConeDesc& c, std::string_view digest) {
  auto f = fundamental_face(c);
  if (!f) return {c};
  std::vector<std::size_t> high, low;
  for (std::size_t i = 0; i < f->rays.size(); ++i) (rank(f->rays[i]) > 1 ? high : low).push_back(i);
  if (low.empty()) return {c};

  std::vector<SymMat> outside;
  for (const auto& r : c.rays)
    if (!std::binary_search(f->rays.begin(), f->rays.end(), r)) outside.push_back(r);

  // Faces of F as ray sets: all intersections of facet tight sets.
  const std::size_t m = f->rays.size();
  Bits all(m);
  for (std::size_t i = 0; i < m; ++i) all.set(i);
  std::set<Bits> faces{all};
  std::vector<Bits> frontier{all};
  const auto tight = inequality_tight_sets(*f);
  while (!frontier.empty()) {
    std::vector<Bits> next;
    for (const auto& s : frontier)
      for (const auto& t : tight)
        if (faces.insert(s & t).second) next.push_back(s & t);
    frontier = std::move(next);
  }
  Bits high_bits(m);
  for (std::size_t i : high) high_bits.set(i);

  std::unordered_map<std::string, std::vector<PieceKey>> seen;
  std::vector<ConeDesc> out;
  for (const auto& s : faces) {
    if (!s.subset_of(high_bits)) continue;
    std::vector<SymMat> rays;
    for (std::size_t i : s.indices()) rays.push_back(f->rays[i]);
    for (std::size_t i : low) rays.push_back(f->rays[i]);
    // S + R1 belongs to the decomposition when it reaches the relative interior of F.
    SymMat sum = central_form(rays);
    bool interior = std::all_of(f->inequalities.begin(), f->inequalities.end(),
                                [&](const SymMat& g) { return sgn(trace_inner(g, sum)) > 0; });
    if (!interior) continue;
    rays.insert(rays.end(), outside.begin(), outside.end());
    ConeDesc piece = cone_from_rays(c.d, std::move(rays));
    PieceKey k{piece, form_certificate(piece.central, digest)};
    if (insert_piece(seen, std::move(k))) out.push_back(std::move(piece));
  }
  return out;
}

ContractionReport contraction_refine(const ClassDB& db, unsigned workers) {
  require_complete(db);
  auto records = db.records();
  std::vector<std::vector<ConeDesc>> pieces(records.size());
  parallel_for(records.size(), workers,
               [&](std::size_t i) { pieces[i] = contraction_pieces(records[i]->cone, db.digest); });
  ContractionReport out;
  std::unordered_map<std::string, std::vector<PieceKey>> seen;
  for (auto& ps : pieces)
    for (auto& p : ps) {
      std::size_t dim = p.dim;
      if (insert_piece(seen, PieceKey{p, form_certificate(p.central, db.digest)})) {
        ++out.total;
        ++out.by_dim[dim];
      }
    }
  return out;
}

}  // namespace lcone
