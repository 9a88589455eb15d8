#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>

#include "geol/interval_set.hpp"
#include "geol/sparql_client.hpp"

namespace geol {

/// What ensure_cached did for one request: which part of the range was
/// fetched now, which was already present, and whether the request ran into
/// the end of the endpoint's data.
struct CoverageReport {
  Interval requested{0, 0};
  std::vector<Interval> downloaded;
  std::vector<Interval> served_from_cache;
  bool end_of_data = false;
};

/// Persistent table of downloaded rows for one resource key. Rows live in an
/// append-only length-prefixed log; committed coverage lives in a metadata
/// document that is replaced atomically (write-to-temp-then-rename), so a
/// torn append is invisible after a crash.
class ResourceTable : public RowSink {
 public:
  const std::string& key() const { return key_; }
  const IntervalSet& coverage() const { return coverage_; }
  std::optional<std::int64_t> exhausted_at() const { return exhausted_at_; }

  /// Rows [offset, offset+count) in index order. The range must be covered:
  /// a miss throws CacheMissError (an orchestration bug, not a user error).
  std::vector<TripleRow> read_rows(std::int64_t offset, std::int64_t count);

  /// RowSink: appends the chunk to the log and commits coverage. Chunk rows
  /// carry contiguous indices.
  void store_chunk(std::span<const TripleRow> rows) override;

 private:
  friend class CacheStore;

  ResourceTable(std::string key, std::filesystem::path dir, const ResourceSpec& spec);
  void load();
  void commit_meta();
  void set_exhausted(std::int64_t first_missing);

  std::string key_;
  std::filesystem::path dir_;
  std::string endpoint_;
  std::string query_normalized_;
  std::string id_var_;
  std::string geo_var_;

  std::recursive_mutex mutex_;  // serializes writers; readers of committed state
  IntervalSet coverage_;
  std::optional<std::int64_t> exhausted_at_;
  std::uint64_t valid_length_ = 0;
  std::vector<std::pair<std::int64_t, std::uint64_t>> row_offsets_;  // index -> log offset
};

/// On-disk cache of resource tables, keyed by a hash of (endpoint,
/// whitespace-normalized query, id/geo variable names). Implements the
/// interval bookkeeping that makes every triple index download at most once
/// across arbitrarily many overlapping tasks.
class CacheStore {
 public:
  explicit CacheStore(std::filesystem::path dir);

  ResourceTable& get_or_create_table(const ResourceSpec& spec);

  std::vector<Interval> missing_intervals(ResourceTable& table, std::int64_t offset,
                                          std::int64_t count) const;

  using ProgressFn = std::function<void(std::int64_t rows_done, std::int64_t rows_total)>;

  /// Makes coverage a superset of the requested range (clipped to the end of
  /// data), downloading only the missing intervals. Gaps below the stored
  /// maximum are fetched directly; extensions past it are guarded by a probe
  /// whose row is persisted, so the probe never costs a duplicate fetch.
  CoverageReport ensure_cached(const ResourceSpec& spec, const SparqlClient& client,
                               const ProgressFn& progress = {});

  const std::filesystem::path& directory() const { return dir_; }

  static std::string normalize_query(std::string_view query);
  static std::string table_key(const ResourceSpec& spec);

 private:
  std::filesystem::path dir_;
  std::mutex mutex_;
  std::map<std::string, std::unique_ptr<ResourceTable>> tables_;
};

}  // namespace geol
