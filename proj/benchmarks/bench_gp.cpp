#include <benchmark/benchmark.h>

#include "mobopt/gp.hpp"

namespace {

using mobopt::BaseSamples;
using mobopt::GpFitOptions;
using mobopt::GpHyperparams;
using mobopt::Rng;
using mobopt::SingleGp;

Eigen::MatrixXd random_inputs(int m, int dim, std::uint64_t seed) {
    Rng rng(seed);
    Eigen::MatrixXd x(m, dim);
    for (int i = 0; i < m; ++i)
        for (int d = 0; d < dim; ++d)
            x(i, d) = rng.uniform();
    return x;
}

Eigen::VectorXd random_targets(int m, std::uint64_t seed) {
    Rng rng(seed);
    Eigen::VectorXd y(m);
    for (int i = 0; i < m; ++i)
        y(i) = rng.normal();
    return y;
}

void BM_gp_fit(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    const int dim = static_cast<int>(state.range(1));
    const Eigen::MatrixXd x = random_inputs(m, dim, 1);
    const Eigen::VectorXd y = random_targets(m, 2);
    GpFitOptions opt;
    opt.restarts = 2;
    opt.max_iters = 80;
    for (auto _ : state)
        benchmark::DoNotOptimize(SingleGp::fit(x, y, opt, Rng(3)));
}

void BM_gp_posterior(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    const int dim = static_cast<int>(state.range(1));
    const Eigen::MatrixXd x = random_inputs(m, dim, 4);
    const Eigen::VectorXd y = random_targets(m, 5);
    GpHyperparams hp;
    hp.log_lengthscales = Eigen::VectorXd::Constant(dim, std::log(0.4));
    const SingleGp gp(x, y, hp);
    Rng rng(6);
    Eigen::VectorXd query(dim);
    for (int d = 0; d < dim; ++d)
        query(d) = rng.uniform();
    double mean = 0.0, var = 0.0;
    for (auto _ : state) {
        gp.posterior(query, mean, var);
        benchmark::DoNotOptimize(mean);
        benchmark::DoNotOptimize(var);
    }
}

} // namespace

BENCHMARK(BM_gp_fit)->Args({20, 6})->Args({60, 6})->Args({60, 12})->Args({150, 12})
    ->Unit(benchmark::kMillisecond);
BENCHMARK(BM_gp_posterior)->Args({20, 6})->Args({60, 6})->Args({150, 12});
