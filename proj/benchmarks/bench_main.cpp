#include <benchmark/benchmark.h>

#include "pjlab/chain.hpp"
#include "pjlab/criteria.hpp"
#include "pjlab/tower.hpp"

using namespace pjlab;

static void BM_ColorWindow(benchmark::State& state) {
    Window w{static_cast<u64>(state.range(0)), 16};
    for (auto _ : state) {
        auto c = build_coloring(PartitionSpec::e(), w);
        u64 sum = 0;
        for (u64 x = 0; x < w.cols; ++x)
            for (u64 y = 0; y < w.rows; ++y) sum += c.color({x, y}).is_a();
        benchmark::DoNotOptimize(sum);
    }
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations() * w.area()));
}
BENCHMARK(BM_ColorWindow)->Arg(256)->Arg(1024)->Arg(4096);

static void BM_BlockEnumeration(benchmark::State& state) {
    Window w{static_cast<u64>(state.range(0)), 16};
    auto c = build_coloring(PartitionSpec::e(), w);
    for (auto _ : state) {
        u64 points = 0;
        for (const auto& col : c.colors_in(w)) points += c.block_points(col, w).size();
        benchmark::DoNotOptimize(points);
    }
}
BENCHMARK(BM_BlockEnumeration)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

static void BM_TowerSearch(benchmark::State& state) {
    auto k = static_cast<u64>(state.range(0));
    Window w{static_cast<u64>(state.range(1)), 16};
    auto c = build_coloring(PartitionSpec::e(), w);
    for (auto _ : state) benchmark::DoNotOptimize(search_tower(c, k, k, w));
}
BENCHMARK(BM_TowerSearch)->Args({2, 256})->Args({3, 64})->Args({3, 256})->Unit(benchmark::kMillisecond);

static void BM_Refute(benchmark::State& state) {
    auto mode = state.range(0) == 0 ? RefuteMode::Sel : RefuteMode::ED;
    std::vector<RowFunction> f{RowFunction::parse("const:0"), RowFunction::parse("lin:1:1")};
    std::vector<u64> kvec{2, 2, 2};
    for (auto _ : state) benchmark::DoNotOptimize(refute_witness(f, kvec, mode, DFamily::CantorPairing));
}
BENCHMARK(BM_Refute)->Arg(0)->Arg(1);

static void BM_Table1(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(table1_all(Window{64, 64}));
}
BENCHMARK(BM_Table1)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
