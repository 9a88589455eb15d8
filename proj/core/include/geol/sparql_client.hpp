#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "geol/errors.hpp"

namespace geol {

/// One resource set definition: which endpoint to ask, the user's SELECT
/// text, the two designated result variables, and the pagination window.
struct ResourceSpec {
  std::string endpoint;
  std::string query;
  std::string id_var;
  std::string geo_var;
  std::int64_t offset = 0;
  std::optional<std::int64_t> limit;  // nullopt means "all"
  std::int64_t chunksize = 5000;

  bool operator==(const ResourceSpec&) const = default;
};

/// One row of a resource table. The index is the global endpoint offset of
/// the row, stable across requests thanks to the ORDER BY wrapper. An empty
/// geo_wkt marks a row whose geometry binding was absent; such rows are kept
/// so index arithmetic stays aligned, and excluded later at indexing time.
struct TripleRow {
  std::int64_t index = 0;
  std::string id;
  std::string geo_wkt;

  bool operator==(const TripleRow&) const = default;
};

/// Receives whole chunks during retrieval; must have persisted the rows by
/// the time it returns, so a crash never loses a reported chunk.
class RowSink {
 public:
  virtual ~RowSink() = default;
  virtual void store_chunk(std::span<const TripleRow> rows) = 0;
};

/// SPARQL 1.1 Protocol client: the user query is wrapped with deterministic
/// ORDER BY on the id variable plus OFFSET/LIMIT, sent as a form-encoded
/// POST, results read as SPARQL Results JSON.
class SparqlClient {
 public:
  struct Options {
    int max_retries = 1;  // extra attempts per failed page
    std::chrono::milliseconds backoff_base{1000};
    double backoff_factor = 2.0;
    std::chrono::seconds timeout{30};
  };

  SparqlClient() = default;
  explicit SparqlClient(Options opts) : opts_(opts) {}

  /// Executes one page. Returns at most `count` rows, each stamped with its
  /// global index offset + position. Throws EndpointError / QueryError.
  std::vector<TripleRow> fetch_page(const ResourceSpec& spec, std::int64_t offset,
                                    std::int64_t count) const;

  /// True iff the endpoint has a row at `offset` (LIMIT 1 probe).
  bool has_more_entries(const ResourceSpec& spec, std::int64_t offset) const;

  /// The LIMIT 1 probe behind has_more_entries, returning the row itself so
  /// callers can persist it rather than fetch the same index twice.
  std::optional<TripleRow> probe(const ResourceSpec& spec, std::int64_t offset) const;

  /// Pages through [offset, offset+count) in chunks of spec.chunksize,
  /// handing every chunk to the sink before the next fetch. Returns the
  /// number of rows stored, which is less than `count` when the endpoint
  /// runs out of data. A mid-stream failure leaves all fully received
  /// chunks persisted and reports the first missing index.
  std::int64_t retrieve_triples(const ResourceSpec& spec, std::int64_t offset, std::int64_t count,
                                RowSink& sink,
                                const std::function<void(std::int64_t)>& rows_stored_cb = {}) const;

  static std::string wrap_query(const ResourceSpec& spec, std::int64_t offset, std::int64_t count);

 private:
  Options opts_;
};

}  // namespace geol
