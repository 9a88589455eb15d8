#include <benchmark/benchmark.h>

#include <string>

#include "geol/validity.hpp"
#include "geol/wkt.hpp"

using namespace geol;

namespace {

std::string big_polygon_wkt(int vertices) {
  // A convex fan approximating a circle.
  std::string out = "POLYGON ((";
  for (int i = 0; i <= vertices; ++i) {
    double angle = 2.0 * 3.14159265358979 * double(i % vertices) / double(vertices);
    out += std::to_string(100.0 + 50.0 * std::cos(angle)) + " " +
           std::to_string(100.0 + 50.0 * std::sin(angle));
    if (i != vertices) out += ", ";
  }
  out += "))";
  return out;
}

void BM_ParsePoint(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(parse_wkt("POINT (13.37 42.01)"));
  }
}
BENCHMARK(BM_ParsePoint);

void BM_ParsePolygon(benchmark::State& state) {
  std::string wkt = big_polygon_wkt(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(parse_wkt(wkt));
  }
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(wkt.size()));
}
BENCHMARK(BM_ParsePolygon)->Arg(16)->Arg(256)->Arg(1700);

void BM_ValidatePolygon(benchmark::State& state) {
  Geometry g = parse_wkt(big_polygon_wkt(static_cast<int>(state.range(0))));
  for (auto _ : state) {
    benchmark::DoNotOptimize(validate(g));
  }
}
BENCHMARK(BM_ValidatePolygon)->Arg(16)->Arg(256);

void BM_SerializeRoundTrip(benchmark::State& state) {
  Geometry g = parse_wkt(big_polygon_wkt(256));
  for (auto _ : state) {
    benchmark::DoNotOptimize(parse_wkt(serialize_wkt(g)));
  }
}
BENCHMARK(BM_SerializeRoundTrip);

}  // namespace
