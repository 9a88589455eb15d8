#include <benchmark/benchmark.h>

#include <random>

#include "geol/rtree.hpp"

using namespace geol;

namespace {

std::vector<RTree<std::uint32_t>::Entry> grid_entries(std::size_t n) {
  std::size_t side = 1;
  while (side * side < n) ++side;
  std::vector<RTree<std::uint32_t>::Entry> entries;
  entries.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    double x = 2.0 * double(i % side);
    double y = 2.0 * double(i / side);
    entries.push_back({{x, y, x + 1, y + 1}, static_cast<std::uint32_t>(i)});
  }
  return entries;
}

void BM_BulkLoad(benchmark::State& state) {
  auto entries = grid_entries(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto tree = RTree<std::uint32_t>::bulk_load(entries);
    benchmark::DoNotOptimize(tree.size());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BulkLoad)->Arg(1000)->Arg(10000)->Arg(100000);

void BM_QueryGrid(benchmark::State& state) {
  auto entries = grid_entries(static_cast<std::size_t>(state.range(0)));
  auto tree = RTree<std::uint32_t>::bulk_load(entries);
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<std::size_t> pick(0, entries.size() - 1);
  std::size_t hits = 0;
  for (auto _ : state) {
    const auto& box = entries[pick(rng)].box;
    tree.query(box, [&](std::uint32_t) { ++hits; });
  }
  benchmark::DoNotOptimize(hits);
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_QueryGrid)->Arg(10000)->Arg(100000);

void BM_InsertRandom(benchmark::State& state) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> pos(0.0, 1000.0);
  for (auto _ : state) {
    RTree<std::uint32_t> tree;
    for (std::uint32_t i = 0; i < state.range(0); ++i) {
      double x = pos(rng), y = pos(rng);
      tree.insert({x, y, x + 1, y + 1}, i);
    }
    benchmark::DoNotOptimize(tree.size());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_InsertRandom)->Arg(1000)->Arg(10000);

}  // namespace
