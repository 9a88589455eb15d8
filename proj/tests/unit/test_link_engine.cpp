#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "geol/link_engine.hpp"
#include "geol/wkt.hpp"
#include "support/fixtures.hpp"
#include "support/mock_sparql.hpp"

using namespace geol;
using geoltest::MockSparqlEndpoint;

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("geol-engine-" + std::to_string(std::random_device{}()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

LinkEngine::Options fast_options() {
  LinkEngine::Options opts;
  opts.client.backoff_base = std::chrono::milliseconds(1);
  return opts;
}

ResourceSpec spec_for(const std::string& url, std::int64_t limit, std::int64_t chunksize = 1000) {
  ResourceSpec spec;
  spec.endpoint = url;
  spec.query = "SELECT ?id ?geo WHERE { ?id <urn:geo> ?geo }";
  spec.id_var = "id";
  spec.geo_var = "geo";
  spec.limit = limit;
  spec.chunksize = chunksize;
  return spec;
}

LinkTask self_join(const std::string& url, TopoRelation rel, std::int64_t limit) {
  LinkTask task;
  task.source = spec_for(url, limit);
  task.target = spec_for(url, limit);
  task.relation = rel;
  task.output = "inline";
  return task;
}

// O(n^2) reference join over the same evaluate predicate.
std::vector<Link> brute_force(TopoRelation rel,
                              const std::vector<std::pair<std::string, Geometry>>& src,
                              const std::vector<std::pair<std::string, Geometry>>& tgt) {
  std::vector<Link> out;
  std::vector<std::pair<std::string, PreparedGeometry>> ps, pt;
  for (const auto& [id, g] : src) ps.emplace_back(id, PreparedGeometry(g));
  for (const auto& [id, g] : tgt) pt.emplace_back(id, PreparedGeometry(g));
  for (const auto& [sid, sg] : ps) {
    for (const auto& [tid, tg] : pt) {
      bool hit = false;
      try {
        hit = evaluate(rel, sg, tg);
      } catch (const UndefinedRelationError&) {
        hit = false;
      }
      if (hit) out.push_back({sid, tid});
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<MockSparqlEndpoint::Row> square_rows() {
  return {
      {"http://example.org/a", geoltest::square_wkt(0, 0, 1)},
      {"http://example.org/b", geoltest::square_wkt(4, 0, 1)},
      {"http://example.org/c", geoltest::square_wkt(0, 4, 1)},
      {"http://example.org/d", geoltest::square_wkt(4, 4, 1)},
  };
}

}  // namespace

TEST_CASE("self-join of disjoint squares yields exactly the identity links") {
  TempDir tmp;
  MockSparqlEndpoint mock("id", "geo");
  mock.set_rows(square_rows());
  mock.start();
  CacheStore store(tmp.path);
  LinkEngine engine(store, fast_options());

  LinkMapping mapping = engine.run(self_join(mock.url(), TopoRelation::Within, 4));
  REQUIRE(mapping.links.size() == 4);
  for (const auto& link : mapping.links) CHECK(link.source_id == link.target_id);
  CHECK(mapping.excluded.empty());
  CHECK(mapping.stats.source_total == 4);
  CHECK(mapping.stats.source_valid == 4);
}

TEST_CASE("an invalid bowtie is excluded on both sides and drops exactly one link") {
  TempDir tmp;
  MockSparqlEndpoint mock("id", "geo");
  auto rows = square_rows();
  rows[2].wkt = geoltest::bowtie_wkt(0, 4, 1);
  mock.set_rows(rows);
  mock.start();
  CacheStore store(tmp.path);
  LinkEngine engine(store, fast_options());

  LinkMapping mapping = engine.run(self_join(mock.url(), TopoRelation::Within, 4));
  CHECK(mapping.links.size() == 3);
  REQUIRE(mapping.excluded.size() == 2);  // once per side
  CHECK(mapping.excluded[0].id == "http://example.org/c");
  CHECK(mapping.excluded[0].reason == ExclusionReason::InvalidGeometry);
  bool sides_differ = mapping.excluded[0].side != mapping.excluded[1].side;
  CHECK(sides_differ);
  for (const auto& link : mapping.links) {
    CHECK(link.source_id != "http://example.org/c");
    CHECK(link.target_id != "http://example.org/c");
  }
  CHECK(mapping.stats.source_valid == 3);
  CHECK(mapping.stats.source_total == 4);
}

TEST_CASE("points within polygons across two distinct resources") {
  TempDir tmp;
  MockSparqlEndpoint points("id", "geo");
  points.set_rows({{"urn:p1", "POINT (1 1)"}, {"urn:p2", "POINT (5 5)"}, {"urn:p3", "POINT (9 9)"}});
  points.start();
  MockSparqlEndpoint polys("id", "geo");
  polys.set_rows({{"urn:poly1", geoltest::square_wkt(0, 0, 2)},
                  {"urn:poly2", geoltest::square_wkt(4, 4, 2)}});
  polys.start();

  CacheStore store(tmp.path);
  LinkEngine engine(store, fast_options());
  LinkTask task;
  task.source = spec_for(points.url(), 3);
  task.target = spec_for(polys.url(), 2);
  task.relation = TopoRelation::Within;
  LinkMapping mapping = engine.run(task);

  REQUIRE(mapping.links.size() == 2);
  CHECK(mapping.links[0] == Link{"urn:p1", "urn:poly1"});
  CHECK(mapping.links[1] == Link{"urn:p2", "urn:poly2"});
}

TEST_CASE("rows with missing or empty geometries are excluded, not fatal") {
  TempDir tmp;
  MockSparqlEndpoint mock("id", "geo");
  mock.set_rows({{"urn:ok", geoltest::square_wkt(0, 0, 1)},
                 {"urn:missing", ""},
                 {"urn:empty", "POINT EMPTY"},
                 {"urn:bad", "POLYGON ((snake"},
                 {"urn:unsupported", "GEOMETRYCOLLECTION (POINT (1 1))"}});
  mock.start();
  CacheStore store(tmp.path);
  LinkEngine engine(store, fast_options());

  LinkMapping mapping = engine.run(self_join(mock.url(), TopoRelation::Within, 5));
  CHECK(mapping.links.size() == 1);
  CHECK(mapping.stats.source_valid == 1);
  REQUIRE(mapping.excluded.size() == 8);  // four bad rows, once per side
  int missing = 0, empty = 0, parse = 0, unsupported = 0;
  for (const auto& ex : mapping.excluded) {
    if (ex.reason == ExclusionReason::MissingGeometry) ++missing;
    if (ex.reason == ExclusionReason::EmptyGeometry) ++empty;
    if (ex.reason == ExclusionReason::ParseFailure) ++parse;
    if (ex.reason == ExclusionReason::UnsupportedType) ++unsupported;
  }
  CHECK(missing == 2);
  CHECK(empty == 2);
  CHECK(parse == 2);
  CHECK(unsupported == 2);
}

TEST_CASE("candidate filter equals the quadratic box oracle and never loses a link") {
  std::mt19937_64 rng(91);
  std::uniform_real_distribution<double> pos(0.0, 50.0);
  std::uniform_real_distribution<double> size(0.2, 4.0);

  std::vector<std::pair<std::string, BoundingBox>> sources;
  std::vector<RTree<std::string>::Entry> target_entries;
  std::vector<std::pair<std::string, BoundingBox>> targets;
  for (int i = 0; i < 200; ++i) {
    double x = pos(rng), y = pos(rng);
    BoundingBox sb{x, y, x + size(rng), y + size(rng)};
    sources.emplace_back("s" + std::to_string(i), sb);
    x = pos(rng);
    y = pos(rng);
    BoundingBox tb{x, y, x + size(rng), y + size(rng)};
    targets.emplace_back("t" + std::to_string(i), tb);
    target_entries.push_back({tb, "t" + std::to_string(i)});
  }
  RTree<std::string> index = RTree<std::string>::bulk_load(target_entries);

  std::vector<std::pair<std::string, std::string>> got;
  candidate_pairs(sources, index,
                  [&](const std::string& s, const std::string& t) { got.emplace_back(s, t); });
  std::sort(got.begin(), got.end());

  std::vector<std::pair<std::string, std::string>> want;
  for (const auto& [sid, sb] : sources)
    for (const auto& [tid, tb] : targets)
      if (sb.intersects(tb)) want.emplace_back(sid, tid);
  std::sort(want.begin(), want.end());

  CHECK(got == want);
}

TEST_CASE("engine equals brute force on random geometry sets for every relation") {
  TempDir tmp;
  geoltest::GeometryGenerator gen(101);

  std::vector<std::pair<std::string, Geometry>> src_geoms, tgt_geoms;
  std::vector<MockSparqlEndpoint::Row> src_rows, tgt_rows;
  for (int i = 0; i < 40; ++i) {
    Geometry g = gen.next();
    src_geoms.emplace_back("urn:s" + std::to_string(i), g);
    src_rows.push_back({"urn:s" + std::to_string(i), serialize_wkt(g)});
    Geometry h = gen.next();
    tgt_geoms.emplace_back("urn:t" + std::to_string(i), h);
    tgt_rows.push_back({"urn:t" + std::to_string(i), serialize_wkt(h)});
  }
  MockSparqlEndpoint src_mock("id", "geo"), tgt_mock("id", "geo");
  src_mock.set_rows(src_rows);
  tgt_mock.set_rows(tgt_rows);
  src_mock.start();
  tgt_mock.start();

  CacheStore store(tmp.path);
  LinkEngine engine(store, fast_options());

  for (TopoRelation rel : kAllRelations) {
    LinkTask task;
    task.source = spec_for(src_mock.url(), 40);
    task.target = spec_for(tgt_mock.url(), 40);
    task.relation = rel;
    LinkMapping mapping = engine.run(task);
    std::vector<Link> expected = brute_force(rel, src_geoms, tgt_geoms);
    CAPTURE(relation_name(rel));
    CHECK(mapping.links == expected);
  }
}

TEST_CASE("disjoint is the complement of intersects over valid pairs") {
  TempDir tmp;
  MockSparqlEndpoint mock("id", "geo");
  mock.set_rows({{"urn:a", geoltest::square_wkt(0, 0, 2)},
                 {"urn:b", geoltest::square_wkt(1, 1, 2)},
                 {"urn:c", geoltest::square_wkt(10, 10, 2)}});
  mock.start();
  CacheStore store(tmp.path);
  LinkEngine engine(store, fast_options());

  LinkMapping disjoint = engine.run(self_join(mock.url(), TopoRelation::Disjoint, 3));
  LinkMapping intersects = engine.run(self_join(mock.url(), TopoRelation::Intersects, 3));
  CHECK(disjoint.links.size() + intersects.links.size() == 9);
  for (const auto& link : disjoint.links) {
    CHECK(std::find(intersects.links.begin(), intersects.links.end(), link) ==
          intersects.links.end());
  }
}

TEST_CASE("progress events traverse the six phases in order with monotone counters") {
  TempDir tmp;
  MockSparqlEndpoint mock("id", "geo");
  mock.set_rows(square_rows());
  mock.start();
  CacheStore store(tmp.path);
  LinkEngine engine(store, fast_options());

  std::vector<ProgressEvent> events;
  engine.run(self_join(mock.url(), TopoRelation::Within, 4),
             [&](const ProgressEvent& e) { events.push_back(e); });
  REQUIRE(!events.empty());

  int prev_phase = -1;
  std::int64_t prev_done = 0;
  std::vector<bool> seen(6, false);
  for (const auto& e : events) {
    int phase = static_cast<int>(e.phase);
    seen[static_cast<std::size_t>(phase)] = true;
    CHECK(e.done <= e.total);
    if (phase == prev_phase) {
      CHECK(e.done >= prev_done);
    } else {
      CHECK(phase > prev_phase);  // declared order, no going back
      prev_phase = phase;
    }
    prev_done = e.done;
  }
  for (bool s : seen) CHECK(s);
}

TEST_CASE("byte-identical output across repeated runs over the same cache") {
  TempDir tmp;
  MockSparqlEndpoint mock("id", "geo");
  mock.set_rows(square_rows());
  mock.start();
  CacheStore store(tmp.path);
  LinkEngine engine(store, fast_options());

  LinkTask task = self_join(mock.url(), TopoRelation::Intersects, 4);
  std::ostringstream first, second;
  write_links(engine.run(task), first);
  write_links(engine.run(task), second);
  CHECK(first.str() == second.str());
  CHECK(!first.str().empty());
}

TEST_CASE("write_links output format and ordering") {
  LinkMapping mapping;
  mapping.relation = TopoRelation::Within;
  std::ostringstream empty_out;
  CHECK(write_links(mapping, empty_out) == 0);
  CHECK(empty_out.str().empty());

  mapping.links = {{"urn:b", "urn:x"}, {"urn:a", "urn:y"}};
  std::sort(mapping.links.begin(), mapping.links.end());
  std::ostringstream out;
  write_links(mapping, out);
  CHECK(out.str() ==
        "<urn:a> <http://www.opengis.net/ont/geosparql#sfWithin> <urn:y> .\n"
        "<urn:b> <http://www.opengis.net/ont/geosparql#sfWithin> <urn:x> .\n");
}

TEST_CASE("covers and coveredby links use the egenhofer iris") {
  CHECK(relation_iri(TopoRelation::Covers) == "http://www.opengis.net/ont/geosparql#ehCovers");
  CHECK(relation_iri(TopoRelation::CoveredBy) ==
        "http://www.opengis.net/ont/geosparql#ehCoveredBy");
  CHECK(relation_iri(TopoRelation::Within) == "http://www.opengis.net/ont/geosparql#sfWithin");
}

TEST_CASE("duplicate ids collapse into set links and are counted") {
  TempDir tmp;
  MockSparqlEndpoint mock("id", "geo");
  mock.set_rows({{"urn:dup", geoltest::square_wkt(0, 0, 1)},
                 {"urn:dup", geoltest::square_wkt(0, 0, 1)},
                 {"urn:other", geoltest::square_wkt(4, 4, 1)}});
  mock.start();
  CacheStore store(tmp.path);
  LinkEngine engine(store, fast_options());

  LinkMapping mapping = engine.run(self_join(mock.url(), TopoRelation::Equals, 3));
  CHECK(mapping.stats.duplicate_ids == 2);  // once per side
  CHECK(mapping.links == std::vector<Link>{{"urn:dup", "urn:dup"}, {"urn:other", "urn:other"}});
}

TEST_CASE("streaming run reports the same link count without materializing") {
  TempDir tmp;
  MockSparqlEndpoint mock("id", "geo");
  mock.set_rows(square_rows());
  mock.start();
  CacheStore store(tmp.path);
  LinkEngine engine(store, fast_options());

  std::atomic<std::int64_t> streamed{0};
  LinkMapping mapping = engine.run_streaming(
      self_join(mock.url(), TopoRelation::Within, 4), {},
      [&](const Link&) { ++streamed; });
  CHECK(streamed.load() == 4);
  CHECK(mapping.stats.links_found == 4);
  CHECK(mapping.links.empty());
}

TEST_CASE("cancellation aborts the run") {
  TempDir tmp;
  MockSparqlEndpoint mock("id", "geo");
  mock.set_rows(square_rows());
  mock.start();
  CacheStore store(tmp.path);
  LinkEngine engine(store, fast_options());

  std::atomic<bool> cancel{true};
  CHECK_THROWS_AS(engine.run(self_join(mock.url(), TopoRelation::Within, 4), {}, &cancel),
                  CancelledError);
}

TEST_CASE("a limit beyond the end of data links whatever exists") {
  TempDir tmp;
  MockSparqlEndpoint mock("id", "geo");
  mock.set_rows(square_rows());  // 4 rows
  mock.start();
  CacheStore store(tmp.path);
  LinkEngine engine(store, fast_options());

  LinkMapping mapping = engine.run(self_join(mock.url(), TopoRelation::Within, 50));
  CHECK(mapping.links.size() == 4);
  CHECK(mapping.stats.source_total == 4);
}

TEST_CASE("limit all runs the task over the whole resource") {
  TempDir tmp;
  MockSparqlEndpoint mock("id", "geo");
  mock.set_rows(square_rows());
  mock.start();
  CacheStore store(tmp.path);
  LinkEngine engine(store, fast_options());

  LinkTask task;
  task.source = spec_for(mock.url(), 0);
  task.source.limit = std::nullopt;
  task.source.chunksize = 2;
  task.target = task.source;
  task.relation = TopoRelation::Within;
  LinkMapping mapping = engine.run(task);
  CHECK(mapping.links.size() == 4);
}

TEST_CASE("task output path writes the links file") {
  TempDir tmp;
  MockSparqlEndpoint mock("id", "geo");
  mock.set_rows(square_rows());
  mock.start();
  CacheStore store(tmp.path);
  LinkEngine engine(store, fast_options());

  LinkTask task = self_join(mock.url(), TopoRelation::Within, 4);
  task.output = (tmp.path / "links.nt").string();
  LinkMapping mapping = engine.run(task);
  std::ifstream in(task.output);
  std::stringstream body;
  body << in.rdbuf();
  std::ostringstream expect;
  write_links(mapping, expect);
  CHECK(body.str() == expect.str());
  CHECK(mapping.links.size() == 4);
}
