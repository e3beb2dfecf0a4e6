#include <benchmark/benchmark.h>

#include "mobopt/hypervolume.hpp"
#include "mobopt/rng.hpp"

namespace {

std::vector<std::vector<double>> random_front(int points, int dim, std::uint64_t seed) {
    mobopt::Rng rng(seed);
    std::vector<std::vector<double>> front(static_cast<std::size_t>(points));
    for (auto& p : front) {
        p.resize(static_cast<std::size_t>(dim));
        for (auto& v : p)
            v = rng.uniform();
    }
    return front;
}

void BM_hypervolume_exact(benchmark::State& state) {
    const int points = static_cast<int>(state.range(0));
    const int dim = static_cast<int>(state.range(1));
    const auto front = random_front(points, dim, 7);
    const std::vector<double> ref(static_cast<std::size_t>(dim), 1.0);
    for (auto _ : state)
        benchmark::DoNotOptimize(mobopt::hypervolume_exact(front, ref));
}

void BM_hypervolume_mc(benchmark::State& state) {
    const auto front = random_front(10, 3, 11);
    const std::vector<double> ref(3, 1.0);
    const std::vector<double> lower(3, 0.0);
    const auto samples = static_cast<std::size_t>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(mobopt::hypervolume_mc(front, ref, lower, samples, 3));
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(samples));
}

} // namespace

BENCHMARK(BM_hypervolume_exact)
    ->Args({10, 2})
    ->Args({50, 2})
    ->Args({150, 2})
    ->Args({10, 3})
    ->Args({50, 3})
    ->Args({10, 4})
    ->Args({50, 4});
BENCHMARK(BM_hypervolume_mc)->Arg(1 << 12)->Arg(1 << 16);

BENCHMARK_MAIN();
