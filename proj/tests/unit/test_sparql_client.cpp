#include <doctest.h>

#include <thread>

#include "geol/sparql_client.hpp"
#include "support/mock_sparql.hpp"

using namespace geol;
using geoltest::MockSparqlEndpoint;

namespace {

SparqlClient fast_client() {
  SparqlClient::Options opts;
  opts.backoff_base = std::chrono::milliseconds(1);
  return SparqlClient(opts);
}

std::vector<MockSparqlEndpoint::Row> numbered_rows(int n) {
  std::vector<MockSparqlEndpoint::Row> rows;
  for (int i = 0; i < n; ++i) {
    rows.push_back({"http://example.org/r/" + std::to_string(i),
                    "POINT (" + std::to_string(i) + " 0)"});
  }
  return rows;
}

struct MemorySink : RowSink {
  std::vector<std::vector<TripleRow>> chunks;
  void store_chunk(std::span<const TripleRow> rows) override {
    chunks.emplace_back(rows.begin(), rows.end());
  }
  std::vector<TripleRow> flat() const {
    std::vector<TripleRow> all;
    for (const auto& c : chunks) all.insert(all.end(), c.begin(), c.end());
    return all;
  }
};

ResourceSpec spec_for(const MockSparqlEndpoint& mock, std::int64_t chunksize = 5000) {
  ResourceSpec spec;
  spec.endpoint = mock.url();
  spec.query = "SELECT ?id ?geo WHERE { ?id <urn:geo> ?geo }";
  spec.id_var = "id";
  spec.geo_var = "geo";
  spec.chunksize = chunksize;
  return spec;
}

}  // namespace

TEST_CASE("fetch_page stamps global indices and truncates at end of data") {
  MockSparqlEndpoint mock("id", "geo");
  mock.set_rows(numbered_rows(10));
  mock.start();
  SparqlClient client = fast_client();
  ResourceSpec spec = spec_for(mock);

  auto page = client.fetch_page(spec, 0, 3);
  REQUIRE(page.size() == 3);
  CHECK(page[0].index == 0);
  CHECK(page[2].index == 2);
  CHECK(page[1].id == "http://example.org/r/1");

  auto tail = client.fetch_page(spec, 8, 5);
  REQUIRE(tail.size() == 2);
  CHECK(tail[0].index == 8);
  CHECK(tail[1].index == 9);

  CHECK(client.fetch_page(spec, 20, 5).empty());
}

TEST_CASE("has_more_entries probes with limit 1") {
  MockSparqlEndpoint mock("id", "geo");
  mock.set_rows(numbered_rows(10));
  mock.start();
  SparqlClient client = fast_client();
  ResourceSpec spec = spec_for(mock);

  CHECK(client.has_more_entries(spec, 9));
  CHECK(!client.has_more_entries(spec, 10));
  auto log = mock.request_log();
  REQUIRE(log.size() == 2);
  CHECK(log[0] == std::pair<std::int64_t, std::int64_t>{9, 1});
  CHECK(log[1] == std::pair<std::int64_t, std::int64_t>{10, 1});

  MockSparqlEndpoint empty("id", "geo");
  empty.set_rows({});
  empty.start();
  CHECK(!client.has_more_entries(spec_for(empty), 0));
}

TEST_CASE("retrieve_triples pages by chunksize and persists after every chunk") {
  MockSparqlEndpoint mock("id", "geo");
  mock.set_rows(numbered_rows(1200));
  mock.start();
  SparqlClient client = fast_client();
  ResourceSpec spec = spec_for(mock, 300);

  MemorySink sink;
  std::int64_t stored = client.retrieve_triples(spec, 0, 1000, sink);
  CHECK(stored == 1000);
  REQUIRE(sink.chunks.size() == 4);
  CHECK(sink.chunks[0].size() == 300);
  CHECK(sink.chunks[1].size() == 300);
  CHECK(sink.chunks[2].size() == 300);
  CHECK(sink.chunks[3].size() == 100);

  auto all = sink.flat();
  for (std::int64_t i = 0; i < 1000; ++i) CHECK(all[static_cast<std::size_t>(i)].index == i);
}

TEST_CASE("retrieve_triples stops early at end of data") {
  MockSparqlEndpoint mock("id", "geo");
  mock.set_rows(numbered_rows(20));
  mock.start();
  SparqlClient client = fast_client();
  MemorySink sink;
  CHECK(client.retrieve_triples(spec_for(mock, 8), 0, 50, sink) == 20);
  CHECK(sink.flat().size() == 20);
}

TEST_CASE("mid-stream failure keeps whole chunks and reports the resume index") {
  MockSparqlEndpoint mock("id", "geo");
  mock.set_rows(numbered_rows(1000));
  mock.start();
  SparqlClient client = fast_client();
  ResourceSpec spec = spec_for(mock, 300);

  // Two successful pages, then hard failure (including the retry).
  mock.fail_after_requests(2);
  MemorySink sink;
  try {
    client.retrieve_triples(spec, 0, 900, sink);
    FAIL("expected EndpointError");
  } catch (const EndpointError& e) {
    REQUIRE(e.has_first_missing_index());
    CHECK(e.first_missing_index() == 600);
  }
  CHECK(sink.flat().size() == 600);  // exactly two whole chunks
}

TEST_CASE("one retry succeeds after a transient failure") {
  MockSparqlEndpoint mock("id", "geo");
  mock.set_rows(numbered_rows(10));
  mock.start();
  SparqlClient client = fast_client();

  mock.fail_after_requests(0);
  // Heal between the first attempt and the retry by healing from another
  // thread after a short delay.
  std::thread healer([&] {
    std::this_thread::sleep_for(std::chrono::milliseconds(1));
    mock.heal();
  });
  auto page = client.fetch_page(spec_for(mock), 0, 5);
  healer.join();
  CHECK(page.size() == 5);
}

TEST_CASE("rows without a geometry binding are kept with the empty marker") {
  MockSparqlEndpoint mock("id", "geo");
  auto rows = numbered_rows(5);
  rows[2].wkt.clear();
  mock.set_rows(rows);
  mock.start();
  SparqlClient client = fast_client();
  auto page = client.fetch_page(spec_for(mock), 0, 5);
  REQUIRE(page.size() == 5);
  CHECK(page[2].geo_wkt.empty());
  CHECK(page[2].index == 2);
  CHECK(page[3].index == 3);
}

TEST_CASE("wrapped query orders by the id variable") {
  ResourceSpec spec;
  spec.endpoint = "http://example.org/sparql";
  spec.query = "SELECT ?s ?w WHERE { ?s <urn:geo> ?w }";
  spec.id_var = "s";
  spec.geo_var = "w";
  std::string wrapped = SparqlClient::wrap_query(spec, 40, 10);
  CHECK(wrapped.find("ORDER BY ?s") != std::string::npos);
  CHECK(wrapped.find("OFFSET 40") != std::string::npos);
  CHECK(wrapped.find("LIMIT 10") != std::string::npos);
  CHECK(wrapped.find(spec.query) != std::string::npos);
}

TEST_CASE("unreachable endpoint raises EndpointError") {
  SparqlClient::Options opts;
  opts.backoff_base = std::chrono::milliseconds(1);
  opts.timeout = std::chrono::seconds(1);
  SparqlClient client(opts);
  ResourceSpec spec;
  spec.endpoint = "http://127.0.0.1:1/sparql";  // nothing listens here
  spec.query = "SELECT ?id ?geo WHERE { ?id <urn:geo> ?geo }";
  spec.id_var = "id";
  spec.geo_var = "geo";
  CHECK_THROWS_AS(client.fetch_page(spec, 0, 1), EndpointError);
}
