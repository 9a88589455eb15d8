#include <benchmark/benchmark.h>

#include "geol/topology.hpp"
#include "geol/wkt.hpp"

using namespace geol;

namespace {

PreparedGeometry square(double x, double y, double size) {
  return PreparedGeometry(Geometry::polygon({{{x, y},
                                              {x + size, y},
                                              {x + size, y + size},
                                              {x, y + size},
                                              {x, y}},
                                             {}}));
}

void BM_RelateIdenticalSquares(benchmark::State& state) {
  PreparedGeometry a = square(0, 0, 1);
  PreparedGeometry b = square(0, 0, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(relate(a, b));
  }
}
BENCHMARK(BM_RelateIdenticalSquares);

void BM_RelateDisjointSquares(benchmark::State& state) {
  PreparedGeometry a = square(0, 0, 1);
  PreparedGeometry b = square(100, 100, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(relate(a, b));
  }
}
BENCHMARK(BM_RelateDisjointSquares);

void BM_RelateOverlappingPolygons(benchmark::State& state) {
  // Two octagons with crossing boundaries.
  PreparedGeometry a(parse_wkt("POLYGON ((2 0, 6 0, 8 2, 8 6, 6 8, 2 8, 0 6, 0 2, 2 0))"));
  PreparedGeometry b(parse_wkt("POLYGON ((5 3, 9 3, 11 5, 11 9, 9 11, 5 11, 3 9, 3 5, 5 3))"));
  for (auto _ : state) {
    benchmark::DoNotOptimize(relate(a, b));
  }
}
BENCHMARK(BM_RelateOverlappingPolygons);

void BM_EvaluateWithinPointPolygon(benchmark::State& state) {
  PreparedGeometry point(Geometry::point({4, 4}));
  PreparedGeometry poly = square(0, 0, 8);
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate(TopoRelation::Within, point, poly));
  }
}
BENCHMARK(BM_EvaluateWithinPointPolygon);

void BM_PrepareGeometry(benchmark::State& state) {
  Geometry g = parse_wkt("POLYGON ((2 0, 6 0, 8 2, 8 6, 6 8, 2 8, 0 6, 0 2, 2 0))");
  for (auto _ : state) {
    benchmark::DoNotOptimize(PreparedGeometry(g));
  }
}
BENCHMARK(BM_PrepareGeometry);

}  // namespace
