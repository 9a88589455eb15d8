#pragma once

#include <array>
#include <atomic>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "geol/cache_store.hpp"
#include "geol/rtree.hpp"
#include "geol/topology.hpp"

namespace geol {

enum class Phase : int {
  CachingSource = 0,
  CachingTarget = 1,
  Parsing = 2,
  Indexing = 3,
  Linking = 4,
  Writing = 5,
};

std::string_view phase_name(Phase p);

struct ProgressEvent {
  Phase phase = Phase::CachingSource;
  std::int64_t done = 0;
  std::int64_t total = 0;
};

using EngineProgressFn = std::function<void(const ProgressEvent&)>;

/// One link discovery task: find M = {(s, t) in S x T : R(s, t)}.
struct LinkTask {
  ResourceSpec source;
  ResourceSpec target;
  TopoRelation relation = TopoRelation::Within;
  std::string output;  // filesystem path, or "inline" to skip file output
};

enum class Side { Source, Target };

enum class ExclusionReason {
  ParseFailure,
  UnsupportedType,
  InvalidGeometry,
  MissingGeometry,
  EmptyGeometry,
};

std::string_view exclusion_reason_name(ExclusionReason r);

/// A resource row kept out of the search space, with why.
struct Exclusion {
  std::string id;
  Side side = Side::Source;
  ExclusionReason reason = ExclusionReason::ParseFailure;
  std::string detail;
};

struct Link {
  std::string source_id;
  std::string target_id;

  bool operator==(const Link&) const = default;
  bool operator<(const Link& o) const {
    return source_id != o.source_id ? source_id < o.source_id : target_id < o.target_id;
  }
};

struct LinkStats {
  std::int64_t source_total = 0;
  std::int64_t target_total = 0;
  std::int64_t source_valid = 0;
  std::int64_t target_valid = 0;
  std::int64_t duplicate_ids = 0;
  std::int64_t candidates_tested = 0;
  std::int64_t links_found = 0;
  std::array<double, 6> phase_elapsed_ms{};
};

struct LinkMapping {
  TopoRelation relation = TopoRelation::Within;
  std::vector<Link> links;  // deduplicated, sorted by (source_id, target_id)
  std::vector<Exclusion> excluded;
  LinkStats stats;
};

/// GeoSPARQL Simple Features IRIs; Egenhofer IRIs for covers/coveredBy,
/// which the SF vocabulary lacks.
std::string_view relation_iri(TopoRelation rel);

/// The MBB filter stage on its own: every (source id, target id) pair whose
/// boxes intersect. A superset of the true links for every relation except
/// disjoint.
void candidate_pairs(std::span<const std::pair<std::string, BoundingBox>> sources,
                     const RTree<std::string>& target_index,
                     const std::function<void(const std::string&, const std::string&)>& emit);

/// Serializes links as N-Triples, one `<s> <p> <o> .` line per link in the
/// mapping's deterministic order. Returns bytes written.
std::uint64_t write_links(const LinkMapping& mapping, std::ostream& out);
std::uint64_t write_links(const LinkMapping& mapping, const std::filesystem::path& path);

/// Orchestrates a LinkTask: cache both resources, parse and validate, build
/// the R-tree over the target set, filter candidates by MBB, refine with
/// DE-9IM, and emit the mapping. A single bad row never aborts the task.
class LinkEngine {
 public:
  struct Options {
    std::size_t worker_threads = 0;  // 0 = hardware concurrency
    SparqlClient::Options client;
  };

  explicit LinkEngine(CacheStore& store);
  LinkEngine(CacheStore& store, Options options);

  /// Full run. When task.output names a file, links are written during the
  /// Writing phase. Progress events traverse all six phases in order.
  LinkMapping run(const LinkTask& task, const EngineProgressFn& progress = {},
                  const std::atomic<bool>* cancel = nullptr);

  /// Streaming variant for very large mappings: links are handed to `sink`
  /// (serialized, unordered, not deduplicated) and not materialized; the
  /// returned mapping carries stats and exclusions only.
  LinkMapping run_streaming(const LinkTask& task, const EngineProgressFn& progress,
                            const std::function<void(const Link&)>& sink,
                            const std::atomic<bool>* cancel = nullptr);

 private:
  LinkMapping run_impl(const LinkTask& task, const EngineProgressFn& progress,
                       const std::function<void(const Link&)>* sink,
                       const std::atomic<bool>* cancel);

  CacheStore& store_;
  Options options_;
};

}  // namespace geol
