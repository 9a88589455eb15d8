#include <doctest.h>

#include <chrono>
#include <filesystem>
#include <random>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "geol/link_engine.hpp"
#include "geol/service.hpp"
#include "geol/task_config.hpp"
#include "support/fixtures.hpp"
#include "support/mock_sparql.hpp"

using namespace geol;
using geoltest::MockSparqlEndpoint;
using nlohmann::json;

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("geol-service-" + std::to_string(std::random_device{}()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

std::string task_json(const std::string& endpoint, const std::string& relation,
                      std::int64_t limit, std::int64_t chunksize = 1000) {
  json doc;
  json resource = {{"endpoint", endpoint},
                   {"query", "SELECT ?id ?geo WHERE { ?id <urn:geo> ?geo }"},
                   {"id_var", "id"},
                   {"geo_var", "geo"},
                   {"limit", limit},
                   {"chunksize", std::min(limit, chunksize)}};
  doc["source"] = resource;
  doc["target"] = resource;
  doc["relation"] = relation;
  return doc.dump();
}

json wait_for_terminal(httplib::Client& client, const std::string& job_id) {
  for (int i = 0; i < 2000; ++i) {
    auto res = client.Get("/tasks/" + job_id);
    REQUIRE(res);
    REQUIRE(res->status == 200);
    json rec = json::parse(res->body);
    std::string state = rec["state"];
    if (state == "done" || state == "failed") return rec;
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
  FAIL("job did not finish in time");
  return {};
}

}  // namespace

TEST_CASE("service runs a task and serves the same links as the engine") {
  TempDir cache_a, cache_b;
  MockSparqlEndpoint mock("id", "geo");
  std::vector<MockSparqlEndpoint::Row> rows = {
      {"urn:a", geoltest::square_wkt(0, 0, 1)},
      {"urn:b", geoltest::square_wkt(4, 0, 1)},
      {"urn:c", geoltest::square_wkt(0, 4, 1)},
  };
  mock.set_rows(rows);
  mock.start();

  LinkService::Options opts;
  opts.cache_dir = cache_a.path;
  opts.client.backoff_base = std::chrono::milliseconds(1);
  LinkService service(opts);
  int port = service.start();
  httplib::Client http("127.0.0.1", port);

  auto post = http.Post("/tasks", task_json(mock.url(), "within", 3), "application/json");
  REQUIRE(post);
  REQUIRE(post->status == 202);
  std::string job_id = json::parse(post->body)["job_id"];

  json rec = wait_for_terminal(http, job_id);
  REQUIRE(rec["state"] == "done");
  CHECK(rec["result"]["links_found"] == 3);
  CHECK(rec["result"]["source_total"] == 3);
  CHECK(rec["error"].is_null());

  auto links = http.Get("/tasks/" + job_id + "/links");
  REQUIRE(links);
  REQUIRE(links->status == 200);
  CHECK(links->get_header_value("Content-Type") == "application/n-triples");

  // Direct engine run over the same fixture produces identical bytes.
  CacheStore store(cache_b.path);
  SparqlClient::Options copts;
  copts.backoff_base = std::chrono::milliseconds(1);
  LinkEngine engine(store, {0, copts});
  TaskConfig config = parse_config(task_json(mock.url(), "within", 3));
  std::ostringstream direct;
  write_links(engine.run(config.task), direct);
  CHECK(links->body == direct.str());

  service.stop();
}

TEST_CASE("invalid config returns 400 with all violations") {
  TempDir cache;
  LinkService::Options opts;
  opts.cache_dir = cache.path;
  LinkService service(opts);
  int port = service.start();
  httplib::Client http("127.0.0.1", port);

  auto res = http.Post("/tasks", R"({"relation": "sideways"})", "application/json");
  REQUIRE(res);
  CHECK(res->status == 400);
  json body = json::parse(res->body);
  CHECK(body["errors"].size() >= 3);
  service.stop();
}

TEST_CASE("unknown job ids return 404") {
  TempDir cache;
  LinkService::Options opts;
  opts.cache_dir = cache.path;
  LinkService service(opts);
  int port = service.start();
  httplib::Client http("127.0.0.1", port);

  CHECK(http.Get("/tasks/job-999")->status == 404);
  CHECK(http.Get("/tasks/job-999/links")->status == 404);
  CHECK(http.Delete("/tasks/job-999")->status == 404);
  service.stop();
}

TEST_CASE("links are unavailable until the job is done") {
  TempDir cache;
  MockSparqlEndpoint mock("id", "geo");
  // Large enough with a tiny chunksize that the job is observably running.
  auto fixture = geoltest::make_grid_fixture(400, 0, 1);
  mock.set_rows(fixture.rows);
  mock.start();

  LinkService::Options opts;
  opts.cache_dir = cache.path;
  opts.client.backoff_base = std::chrono::milliseconds(1);
  LinkService service(opts);
  int port = service.start();
  httplib::Client http("127.0.0.1", port);

  auto post = http.Post("/tasks", task_json(mock.url(), "within", 400, 10), "application/json");
  REQUIRE(post->status == 202);
  std::string job_id = json::parse(post->body)["job_id"];

  auto early = http.Get("/tasks/" + job_id + "/links");
  bool early_not_ready = early->status == 404;

  json rec = wait_for_terminal(http, job_id);
  REQUIRE(rec["state"] == "done");
  CHECK(rec["result"]["links_found"] == 400);
  auto links = http.Get("/tasks/" + job_id + "/links");
  CHECK(links->status == 200);
  CHECK(early_not_ready);
  service.stop();
}

TEST_CASE("duplicate running submissions conflict, progress is monotone") {
  TempDir cache;
  MockSparqlEndpoint mock("id", "geo");
  auto fixture = geoltest::make_grid_fixture(600, 0, 2);
  mock.set_rows(fixture.rows);
  mock.start();

  LinkService::Options opts;
  opts.cache_dir = cache.path;
  opts.client.backoff_base = std::chrono::milliseconds(1);
  LinkService service(opts);
  int port = service.start();
  httplib::Client http("127.0.0.1", port);

  std::string body = task_json(mock.url(), "within", 600, 5);
  auto first = http.Post("/tasks", body, "application/json");
  REQUIRE(first->status == 202);
  std::string job_id = json::parse(first->body)["job_id"];

  auto dup = http.Post("/tasks", body, "application/json");
  REQUIRE(dup);
  CHECK(dup->status == 409);
  CHECK(json::parse(dup->body)["job_id"] == job_id);

  // Poll progress: phases never go backwards, counters never shrink.
  int prev_phase = -1;
  std::int64_t prev_done = -1;
  for (int i = 0; i < 50; ++i) {
    json rec = json::parse(http.Get("/tasks/" + job_id)->body);
    int phase = 0;
    std::string name = rec["progress"]["phase"];
    for (int p = 0; p < 6; ++p) {
      if (name == phase_name(static_cast<Phase>(p))) phase = p;
    }
    std::int64_t done = rec["progress"]["done"];
    if (phase == prev_phase) CHECK(done >= prev_done);
    CHECK(phase >= prev_phase);
    prev_phase = std::max(prev_phase, phase);
    prev_done = phase == prev_phase ? done : 0;
    if (rec["state"] == "done") break;
    std::this_thread::sleep_for(std::chrono::milliseconds(2));
  }
  wait_for_terminal(http, job_id);

  // After completion an identical submission is accepted again.
  auto again = http.Post("/tasks", body, "application/json");
  CHECK(again->status == 202);
  wait_for_terminal(http, json::parse(again->body)["job_id"]);
  service.stop();
}

TEST_CASE("delete cancels a running job") {
  TempDir cache;
  MockSparqlEndpoint mock("id", "geo");
  auto fixture = geoltest::make_grid_fixture(2000, 0, 3);
  mock.set_rows(fixture.rows);
  mock.start();

  LinkService::Options opts;
  opts.cache_dir = cache.path;
  opts.client.backoff_base = std::chrono::milliseconds(1);
  LinkService service(opts);
  int port = service.start();
  httplib::Client http("127.0.0.1", port);

  auto post = http.Post("/tasks", task_json(mock.url(), "within", 2000, 5), "application/json");
  REQUIRE(post->status == 202);
  std::string job_id = json::parse(post->body)["job_id"];

  auto del = http.Delete("/tasks/" + job_id);
  REQUIRE(del);
  CHECK(del->status == 204);

  json rec = wait_for_terminal(http, job_id);
  CHECK(rec["state"] == "failed");
  CHECK(rec["error"] == "cancelled");

  // Deleting a finished job conflicts.
  CHECK(http.Delete("/tasks/" + job_id)->status == 409);
  service.stop();
}
