#include "geol/sparql_client.hpp"

#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

namespace geol {

namespace {

using nlohmann::json;

struct SplitUrl {
  std::string base;  // scheme://host[:port]
  std::string path;
};

SplitUrl split_url(const std::string& url) {
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos)
    throw EndpointError("endpoint URL must start with http:// : " + url);
  auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

}  // namespace

std::string SparqlClient::wrap_query(const ResourceSpec& spec, std::int64_t offset,
                                     std::int64_t count) {
  // SPARQL gives no ordering guarantee without ORDER BY; without a stable
  // order, interval caching would be unsound.
  std::string q = "SELECT ?" + spec.id_var + " ?" + spec.geo_var + " WHERE { { " + spec.query +
                  " } } ORDER BY ?" + spec.id_var;
  q += " OFFSET " + std::to_string(offset);
  q += " LIMIT " + std::to_string(count);
  return q;
}

std::vector<TripleRow> SparqlClient::fetch_page(const ResourceSpec& spec, std::int64_t offset,
                                                std::int64_t count) const {
  SplitUrl url = split_url(spec.endpoint);
  if (url.base.rfind("https://", 0) == 0)
    throw EndpointError("https endpoints are not supported by this build: " + spec.endpoint);

  httplib::Params params{{"query", wrap_query(spec, offset, count)}};
  httplib::Headers headers{{"Accept", "application/sparql-results+json"}};

  std::string last_error;
  auto backoff = opts_.backoff_base;
  for (int attempt = 0; attempt <= opts_.max_retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(backoff);
      backoff = std::chrono::milliseconds(
          static_cast<std::int64_t>(static_cast<double>(backoff.count()) * opts_.backoff_factor));
    }
    httplib::Client client(url.base);
    client.set_connection_timeout(opts_.timeout);
    client.set_read_timeout(opts_.timeout);
    auto res = client.Post(url.path, headers, params);
    if (!res) {
      last_error = "connection to " + spec.endpoint + " failed: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status == 400) {
      // The endpoint judged the query itself faulty; retrying cannot help.
      throw QueryError("endpoint rejected query (HTTP 400): " + res->body);
    }
    if (res->status != 200) {
      last_error = "endpoint returned HTTP " + std::to_string(res->status);
      continue;
    }

    json doc = json::parse(res->body, nullptr, false);
    if (doc.is_discarded() || !doc.contains("results") || !doc["results"].contains("bindings")) {
      last_error = "malformed SPARQL results JSON";
      continue;
    }
    std::vector<TripleRow> rows;
    std::int64_t position = 0;
    for (const auto& binding : doc["results"]["bindings"]) {
      if (position >= count) break;
      TripleRow row;
      row.index = offset + position;
      if (!binding.contains(spec.id_var) || !binding[spec.id_var].contains("value"))
        throw EndpointError("result row " + std::to_string(row.index) + " lacks the ?" +
                            spec.id_var + " binding");
      row.id = binding[spec.id_var]["value"].get<std::string>();
      if (binding.contains(spec.geo_var) && binding[spec.geo_var].contains("value"))
        row.geo_wkt = binding[spec.geo_var]["value"].get<std::string>();
      rows.push_back(std::move(row));
      ++position;
    }
    return rows;
  }
  throw EndpointError(last_error.empty() ? "endpoint request failed" : last_error);
}

bool SparqlClient::has_more_entries(const ResourceSpec& spec, std::int64_t offset) const {
  return probe(spec, offset).has_value();
}

std::optional<TripleRow> SparqlClient::probe(const ResourceSpec& spec, std::int64_t offset) const {
  auto rows = fetch_page(spec, offset, 1);
  if (rows.empty()) return std::nullopt;
  return rows.front();
}

std::int64_t SparqlClient::retrieve_triples(
    const ResourceSpec& spec, std::int64_t offset, std::int64_t count, RowSink& sink,
    const std::function<void(std::int64_t)>& rows_stored_cb) const {
  std::int64_t stored = 0;
  while (stored < count) {
    std::int64_t ask = std::min(spec.chunksize, count - stored);
    std::vector<TripleRow> page;
    try {
      page = fetch_page(spec, offset + stored, ask);
    } catch (const QueryError&) {
      throw;
    } catch (const EndpointError& e) {
      throw EndpointError(std::string(e.what()) + " (resume at index " +
                              std::to_string(offset + stored) + ")",
                          offset + stored);
    }
    if (page.empty()) break;
    sink.store_chunk(page);  // persisted before the next fetch
    stored += static_cast<std::int64_t>(page.size());
    if (rows_stored_cb) rows_stored_cb(stored);
    if (static_cast<std::int64_t>(page.size()) < ask) break;  // end of data
  }
  return stored;
}

}  // namespace geol
