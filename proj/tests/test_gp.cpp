#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <numbers>

#include "mobopt/errors.hpp"
#include "mobopt/gp.hpp"
#include "oracles.hpp"

using namespace mobopt;

namespace {

GpHyperparams random_hypers(Rng& rng, int dim) {
    GpHyperparams hp;
    hp.log_lengthscales.resize(dim);
    for (int d = 0; d < dim; ++d)
        hp.log_lengthscales(d) = rng.uniform(std::log(0.1), std::log(2.0));
    hp.log_signal_variance = rng.uniform(std::log(0.2), std::log(5.0));
    hp.log_noise_variance = rng.uniform(std::log(1e-6), std::log(1e-1));
    return hp;
}

Eigen::MatrixXd random_inputs(Rng& rng, int m, int dim) {
    Eigen::MatrixXd x(m, dim);
    for (int i = 0; i < m; ++i)
        for (int d = 0; d < dim; ++d)
            x(i, d) = rng.uniform();
    return x;
}

} // namespace

TEST_SUITE_BEGIN("gp");

TEST_CASE("posterior matches the dense-solve oracle on random models") {
    Rng rng(31);
    for (int trial = 0; trial < 50; ++trial) {
        const int dim = 1 + static_cast<int>(rng.below(3));
        const int m = 2 + static_cast<int>(rng.below(4)); // up to 5 points
        const Eigen::MatrixXd x = random_inputs(rng, m, dim);
        Eigen::VectorXd y(m);
        for (int i = 0; i < m; ++i)
            y(i) = rng.normal();
        const GpHyperparams hp = random_hypers(rng, dim);

        const SingleGp gp(x, y, hp);

        // oracle works on standardized targets; reproduce the standardization
        const double mean = y.mean();
        double scale = std::sqrt((y.array() - mean).square().sum() / m);
        if (!(scale > 1e-12))
            scale = 1.0;
        oracles::DenseGpOracle oracle{x, (y.array() - mean) / scale, hp.lengthscales(),
                                      hp.signal_variance(), hp.noise_variance()};

        for (int q = 0; q < 3; ++q) {
            Eigen::VectorXd query(dim);
            for (int d = 0; d < dim; ++d)
                query(d) = rng.uniform();
            double mu = 0.0, var = 0.0;
            gp.posterior(query, mu, var);
            double mu_o = 0.0, var_o = 0.0;
            oracle.predict(query, mu_o, var_o);
            CHECK(mu == doctest::Approx(mean + scale * mu_o).epsilon(1e-8));
            CHECK(var ==
                  doctest::Approx(std::max(scale * scale * var_o, 1e-12)).epsilon(1e-8));
        }
    }
}

TEST_CASE("interpolation with vanishing noise") {
    Rng rng(32);
    const Eigen::MatrixXd x = random_inputs(rng, 4, 2);
    Eigen::VectorXd y(4);
    y << 0.3, -0.8, 1.2, 0.1;
    GpHyperparams hp;
    hp.log_lengthscales = Eigen::VectorXd::Constant(2, std::log(0.5));
    hp.log_signal_variance = 0.0;
    hp.log_noise_variance = std::log(1e-10);
    const SingleGp gp(x, y, hp);
    for (int i = 0; i < 4; ++i) {
        double mu = 0.0, var = 0.0;
        gp.posterior(x.row(i).transpose(), mu, var);
        CHECK(mu == doctest::Approx(y(i)).epsilon(1e-4));
        CHECK(var <= 1e-6);
    }
}

TEST_CASE("far queries revert to the prior variance") {
    Eigen::MatrixXd x(2, 1);
    x << 0.0, 0.01;
    Eigen::VectorXd y(2);
    y << 1.0, 1.1;
    GpHyperparams hp;
    hp.log_lengthscales = Eigen::VectorXd::Constant(1, std::log(0.01));
    hp.log_signal_variance = std::log(2.0);
    hp.log_noise_variance = std::log(1e-8);
    const SingleGp gp(x, y, hp);
    double mu = 0.0, var = 0.0;
    gp.posterior(Eigen::VectorXd::Constant(1, 1.0), mu, var); // 100 lengthscales away
    const double y_var = (y.array() - y.mean()).square().sum() / 2.0;
    CHECK(var == doctest::Approx(y_var * 2.0).epsilon(1e-3)); // de-standardized sv
}

TEST_CASE("fit recovers a smooth function from five points") {
    // 5 points from sin(2 pi x), fit, check posterior mean near targets
    Eigen::MatrixXd x(5, 1);
    x << 0.05, 0.25, 0.5, 0.7, 0.9;
    Eigen::VectorXd y(5);
    for (int i = 0; i < 5; ++i)
        y(i) = std::sin(2.0 * std::numbers::pi * x(i, 0));
    const SingleGp gp = SingleGp::fit(x, y, {}, Rng(5));
    CHECK(std::isfinite(gp.log_marginal_likelihood()));
    const double noise_level =
        std::sqrt(gp.hyperparams().noise_variance()) + 0.05;
    for (int i = 0; i < 5; ++i) {
        double mu = 0.0, var = 0.0;
        gp.posterior(x.row(i).transpose(), mu, var);
        CHECK(std::abs(mu - y(i)) < 3.0 * noise_level);
    }
}

TEST_CASE("constant targets produce a constant posterior mean") {
    Eigen::MatrixXd x(4, 1);
    x << 0.1, 0.4, 0.6, 0.9;
    const Eigen::VectorXd y = Eigen::VectorXd::Constant(4, 2.5);
    const SingleGp gp = SingleGp::fit(x, y, {}, Rng(6));
    double mu = 0.0, var = 0.0;
    gp.posterior(Eigen::VectorXd::Constant(1, 0.5), mu, var);
    CHECK(mu == doctest::Approx(2.5).epsilon(1e-6));
}

TEST_CASE("fit requires two observations") {
    Eigen::MatrixXd x(1, 1);
    x << 0.5;
    Eigen::VectorXd y(1);
    y << 1.0;
    CHECK_THROWS_AS(SingleGp::fit(x, y, {}, Rng(0)), ArgumentError);
}

TEST_CASE("duplicate rows engage the jitter ladder, extreme duplication throws") {
    Eigen::MatrixXd x(4, 1);
    x << 0.5, 0.5, 0.5, 0.5;
    Eigen::VectorXd y(4);
    y << 1.0, 1.0, 1.0, 1.0;
    GpHyperparams hp;
    hp.log_lengthscales = Eigen::VectorXd::Constant(1, std::log(0.5));
    hp.log_signal_variance = 0.0;
    // exactly zero noise: K is exactly rank 1 and the factorization needs jitter
    hp.log_noise_variance = -std::numeric_limits<double>::infinity();
    CHECK_NOTHROW(SingleGp(x, y, hp)); // jitter rescues it

    GpFitOptions no_jitter;
    no_jitter.jitter_start = 1e-30;
    no_jitter.jitter_max = 1e-29; // below rounding: the whole ladder fails
    CHECK_THROWS_AS(SingleGp(x, y, hp, no_jitter), ConditioningError);
}

TEST_CASE("single point log evidence closed form") {
    // one observation, unit noise, zero target: -0.5 log(2 pi (k(x,x)+1))
    Eigen::MatrixXd x(1, 1);
    x << 0.3;
    Eigen::VectorXd y(1);
    y << 0.0;
    GpHyperparams hp;
    hp.log_lengthscales = Eigen::VectorXd::Constant(1, std::log(0.7));
    hp.log_signal_variance = std::log(1.7);
    hp.log_noise_variance = 0.0;
    const auto lml = log_marginal_likelihood(x, y, hp);
    const double kxx = matern52(x.row(0).transpose(), x.row(0).transpose(), hp);
    CHECK(lml.value ==
          doctest::Approx(-0.5 * std::log(2.0 * std::numbers::pi * (kxx + 1.0)))
              .epsilon(1e-12));
}

TEST_CASE("log evidence matches the dense oracle") {
    Rng rng(33);
    for (int trial = 0; trial < 10; ++trial) {
        const int dim = 1 + static_cast<int>(rng.below(2));
        const int m = 3 + static_cast<int>(rng.below(3));
        const Eigen::MatrixXd x = random_inputs(rng, m, dim);
        Eigen::VectorXd y(m);
        for (int i = 0; i < m; ++i)
            y(i) = rng.normal();
        const GpHyperparams hp = random_hypers(rng, dim);
        const auto lml = log_marginal_likelihood(x, y, hp);
        oracles::DenseGpOracle oracle{x, y, hp.lengthscales(), hp.signal_variance(),
                                      hp.noise_variance()};
        CHECK(lml.value == doctest::Approx(oracle.log_evidence()).epsilon(1e-8));
    }
}

TEST_CASE("more noise is more likely on pure-noise data") {
    Rng rng(34);
    const Eigen::MatrixXd x = random_inputs(rng, 12, 1);
    Eigen::VectorXd y(12);
    for (int i = 0; i < 12; ++i)
        y(i) = rng.normal(); // no structure at all
    GpHyperparams hp;
    hp.log_lengthscales = Eigen::VectorXd::Constant(1, std::log(1.0));
    hp.log_signal_variance = std::log(0.05);
    hp.log_noise_variance = std::log(0.05);
    const double low = log_marginal_likelihood(x, y, hp).value;
    hp.log_noise_variance = std::log(1.0); // explains the variance as noise
    const double high = log_marginal_likelihood(x, y, hp).value;
    CHECK(high > low);
}

TEST_CASE("analytic gradients match central finite differences") {
    Rng rng(35);
    for (int trial = 0; trial < 20; ++trial) {
        const int dim = 1 + static_cast<int>(rng.below(3));
        const int m = 3 + static_cast<int>(rng.below(4));
        const Eigen::MatrixXd x = random_inputs(rng, m, dim);
        Eigen::VectorXd y(m);
        for (int i = 0; i < m; ++i)
            y(i) = rng.normal();
        const GpHyperparams hp = random_hypers(rng, dim);
        const auto lml = log_marginal_likelihood(x, y, hp);

        const double h = 1e-6;
        for (int p = 0; p < dim + 2; ++p) {
            auto shift = [&](double delta) {
                GpHyperparams hq = hp;
                if (p < dim)
                    hq.log_lengthscales(p) += delta;
                else if (p == dim)
                    hq.log_signal_variance += delta;
                else
                    hq.log_noise_variance += delta;
                return log_marginal_likelihood(x, y, hq).value;
            };
            const double fd = (shift(h) - shift(-h)) / (2.0 * h);
            const double scale = std::max({std::abs(fd), std::abs(lml.grad(p)), 1.0});
            CHECK(std::abs(lml.grad(p) - fd) / scale < 1e-5);
        }
    }
}

TEST_CASE("predictions are invariant under training-row reordering") {
    Rng rng(36);
    const int m = 6;
    const Eigen::MatrixXd x = random_inputs(rng, m, 2);
    Eigen::VectorXd y(m);
    for (int i = 0; i < m; ++i)
        y(i) = std::sin(3.0 * x(i, 0)) + 0.5 * x(i, 1);
    GpHyperparams hp;
    hp.log_lengthscales = Eigen::VectorXd::Constant(2, std::log(0.4));
    hp.log_signal_variance = 0.0;
    hp.log_noise_variance = std::log(1e-4);

    Eigen::MatrixXd x_rev = x.colwise().reverse();
    Eigen::VectorXd y_rev = y.reverse();
    const SingleGp a(x, y, hp);
    const SingleGp b(x_rev, y_rev, hp);
    for (int q = 0; q < 10; ++q) {
        Eigen::VectorXd query(2);
        query << rng.uniform(), rng.uniform();
        double mu_a, var_a, mu_b, var_b;
        a.posterior(query, mu_a, var_a);
        b.posterior(query, mu_b, var_b);
        CHECK(mu_a == doctest::Approx(mu_b).epsilon(1e-8));
        CHECK(var_a == doctest::Approx(var_b).epsilon(1e-8));
    }
}

TEST_CASE("sample_posterior is the reparameterized draw and is pure") {
    Rng rng(37);
    const Eigen::MatrixXd x = random_inputs(rng, 4, 2);
    Eigen::MatrixXd y(4, 2);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 2; ++j)
            y(i, j) = rng.normal();
    const GpModel model = GpModel::fit(x, y, {.restarts = 2, .max_iters = 40}, Rng(8));

    Eigen::VectorXd query(2);
    query << 0.3, 0.7;
    Rng base_rng(9);
    const BaseSamples base = BaseSamples::standard_normal(64, 2, base_rng);

    const Eigen::MatrixXd d1 = model.sample_posterior(query, base);
    const Eigen::MatrixXd d2 = model.sample_posterior(query, base);
    CHECK((d1 - d2).norm() == 0.0); // bit-identical

    Eigen::VectorXd mean, var;
    model.posterior(query, mean, var);
    for (int i = 0; i < base.count(); ++i)
        for (int j = 0; j < 2; ++j)
            CHECK(d1(i, j) ==
                  doctest::Approx(mean(j) + std::sqrt(var(j)) * base.z(i, j))
                      .epsilon(1e-14));

    // zero-variance rows equal the mean: a base row of zeros does too
    BaseSamples zero_base;
    zero_base.z = Eigen::MatrixXd::Zero(1, 2);
    const Eigen::MatrixXd d0 = model.sample_posterior(query, zero_base);
    CHECK(d0(0, 0) == doctest::Approx(mean(0)).epsilon(1e-14));
    CHECK(d0(0, 1) == doctest::Approx(mean(1)).epsilon(1e-14));
}

TEST_CASE("empirical mean of many draws approaches the posterior mean") {
    Rng rng(38);
    const Eigen::MatrixXd x = random_inputs(rng, 5, 1);
    Eigen::MatrixXd y(5, 1);
    for (int i = 0; i < 5; ++i)
        y(i, 0) = rng.normal();
    GpHyperparams hp;
    hp.log_lengthscales = Eigen::VectorXd::Constant(1, std::log(0.3));
    hp.log_signal_variance = 0.0;
    hp.log_noise_variance = std::log(1e-3);
    const GpModel model(std::vector<SingleGp>{SingleGp(x, y.col(0), hp)});

    Eigen::VectorXd query(1);
    query << 0.42;
    Rng base_rng(10);
    const BaseSamples base = BaseSamples::standard_normal(4096, 1, base_rng);
    const Eigen::MatrixXd draws = model.sample_posterior(query, base);
    Eigen::VectorXd mean, var;
    model.posterior(query, mean, var);
    const double empirical = draws.col(0).mean();
    CHECK(std::abs(empirical - mean(0)) <= 4.0 * std::sqrt(var(0) / 4096.0));
}

TEST_CASE("quasi base samples are deterministic with near-zero column mean") {
    const BaseSamples a = BaseSamples::quasi_random(512, 3);
    const BaseSamples b = BaseSamples::quasi_random(512, 3);
    CHECK((a.z - b.z).norm() == 0.0);
    for (int j = 0; j < 3; ++j)
        CHECK(std::abs(a.z.col(j).mean()) < 0.05);
}

TEST_SUITE_END();
