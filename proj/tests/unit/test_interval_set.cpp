#include <doctest.h>

#include <random>
#include <set>

#include "geol/interval_set.hpp"

using namespace geol;

namespace {

// Explicit index-set oracle for interval arithmetic.
std::set<std::int64_t> explode(const IntervalSet& s) {
  std::set<std::int64_t> out;
  for (const auto& iv : s.intervals())
    for (std::int64_t i = iv.lo; i <= iv.hi; ++i) out.insert(i);
  return out;
}

std::vector<Interval> pack(const std::set<std::int64_t>& indices, Interval request) {
  std::vector<Interval> out;
  for (std::int64_t i = request.lo; i <= request.hi; ++i) {
    if (indices.count(i)) continue;
    if (!out.empty() && out.back().hi == i - 1) {
      out.back().hi = i;
    } else {
      out.push_back({i, i});
    }
  }
  return out;
}

}  // namespace

TEST_CASE("empty cache misses the whole request") {
  IntervalSet s;
  CHECK(s.missing({0, 99}) == std::vector<Interval>{{0, 99}});
}

TEST_CASE("fully covered request has no gaps") {
  IntervalSet s;
  s.add(0, 199);
  CHECK(s.missing({50, 149}).empty());
  CHECK(s.contains(Interval{50, 149}));
}

TEST_CASE("interior gap is found") {
  IntervalSet s;
  s.add(0, 49);
  s.add(100, 149);
  CHECK(s.missing({0, 149}) == std::vector<Interval>{{50, 99}});
}

TEST_CASE("adjacent intervals coalesce") {
  IntervalSet s;
  s.add(0, 4);
  s.add(5, 9);
  CHECK(s.intervals() == std::vector<Interval>{{0, 9}});
  s.add(20, 29);
  s.add(10, 19);
  CHECK(s.intervals() == std::vector<Interval>{{0, 29}});
  CHECK(s.well_formed());
}

TEST_CASE("overlapping adds merge") {
  IntervalSet s;
  s.add(5, 15);
  s.add(0, 7);
  s.add(13, 20);
  CHECK(s.intervals() == std::vector<Interval>{{0, 20}});
}

TEST_CASE("covered clips to the request") {
  IntervalSet s;
  s.add(10, 20);
  s.add(30, 40);
  CHECK(s.covered({15, 35}) == std::vector<Interval>{{15, 20}, {30, 35}});
}

TEST_CASE("bad intervals are rejected") {
  IntervalSet s;
  CHECK_THROWS_AS(s.add(5, 4), Error);
  CHECK_THROWS_AS(s.add(-1, 4), Error);
}

TEST_CASE("random operations agree with the explicit index-set oracle") {
  std::mt19937_64 rng(61);
  std::uniform_int_distribution<std::int64_t> lo_dist(0, 400);
  std::uniform_int_distribution<std::int64_t> len_dist(1, 60);
  for (int round = 0; round < 100; ++round) {
    IntervalSet s;
    std::set<std::int64_t> model;
    for (int op = 0; op < 30; ++op) {
      std::int64_t lo = lo_dist(rng);
      std::int64_t hi = lo + len_dist(rng) - 1;
      s.add(lo, hi);
      for (std::int64_t i = lo; i <= hi; ++i) model.insert(i);
      REQUIRE(s.well_formed());
      REQUIRE(explode(s) == model);
    }
    for (int q = 0; q < 20; ++q) {
      std::int64_t lo = lo_dist(rng);
      Interval request{lo, lo + len_dist(rng) - 1};
      CHECK(s.missing(request) == pack(model, request));
    }
    CHECK(s.total_count() == static_cast<std::int64_t>(model.size()));
  }
}
