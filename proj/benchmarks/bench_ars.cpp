#include <benchmark/benchmark.h>

#include "mobopt/acquisition.hpp"
#include "mobopt/ars.hpp"
#include "mobopt/gp.hpp"

namespace {

using namespace mobopt;

struct Fixture {
    GpModel model;
    BaseSamples base;
    ScalarizationWeights weights;
    Incumbent incumbent;

    explicit Fixture(int m, int dim, int q) {
        Rng rng(8);
        Eigen::MatrixXd x(m, dim);
        Eigen::MatrixXd y(m, 2);
        for (int i = 0; i < m; ++i) {
            for (int d = 0; d < dim; ++d)
                x(i, d) = rng.uniform();
            y(i, 0) = rng.normal();
            y(i, 1) = rng.normal();
        }
        GpHyperparams hp;
        hp.log_lengthscales = Eigen::VectorXd::Constant(dim, std::log(0.4));
        model = GpModel(
            std::vector<SingleGp>{SingleGp(x, y.col(0), hp), SingleGp(x, y.col(1), hp)});
        base = BaseSamples::quasi_random(q, 2);
        weights.lambda = Eigen::Vector2d(0.5, 0.5);
        incumbent.f_star_scalar = 0.0;
    }

    SurrogateReward surrogate() const { return {&model, &base, weights, incumbent}; }
};

void BM_mc_reward(benchmark::State& state) {
    const Fixture fx(static_cast<int>(state.range(0)), 6, 64);
    const SurrogateReward surrogate = fx.surrogate();
    Eigen::VectorXd x = Eigen::VectorXd::Constant(6, 0.4);
    for (auto _ : state)
        benchmark::DoNotOptimize(surrogate.at(x));
}

void BM_train_agent_step(benchmark::State& state) {
    const Fixture fx(60, 6, 32);
    const SurrogateReward surrogate = fx.surrogate();
    ArsConfig cfg;
    cfg.n_directions = static_cast<int>(state.range(0));
    cfg.top_k_fraction = 0.1;
    cfg.horizon = 4;
    cfg.max_train_steps = 1;
    const Eigen::VectorXd x0 = Eigen::VectorXd::Constant(6, 0.5);
    for (auto _ : state)
        benchmark::DoNotOptimize(train_agent(x0, surrogate, cfg, Rng(9)));
}

} // namespace

BENCHMARK(BM_mc_reward)->Arg(20)->Arg(60)->Arg(150);
BENCHMARK(BM_train_agent_step)->Arg(16)->Arg(48)->Arg(128)
    ->Unit(benchmark::kMillisecond);
