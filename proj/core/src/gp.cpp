#include "mobopt/gp.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <optional>

#include "mobopt/errors.hpp"
#include "mobopt/parallel.hpp"

namespace mobopt {

namespace {

constexpr double kSqrt5 = 2.2360679774997896;
constexpr double kVarianceFloor = 1e-12;

struct KernelParts {
    Eigen::MatrixXd k;      // noiseless kernel matrix
    Eigen::MatrixXd r;      // ARD-scaled distances
    Eigen::MatrixXd damp;   // exp(-sqrt5 * r)
};

KernelParts kernel_matrix(const Eigen::MatrixXd& X, const GpHyperparams& hp) {
    const auto m = X.rows();
    const Eigen::VectorXd ls = hp.lengthscales();
    const double sv = hp.signal_variance();

    KernelParts parts;
    parts.r.resize(m, m);
    for (Eigen::Index a = 0; a < m; ++a) {
        parts.r(a, a) = 0.0;
        for (Eigen::Index b = 0; b < a; ++b) {
            double s = 0.0;
            for (Eigen::Index d = 0; d < X.cols(); ++d) {
                const double diff = (X(a, d) - X(b, d)) / ls(d);
                s += diff * diff;
            }
            const double r = std::sqrt(s);
            parts.r(a, b) = r;
            parts.r(b, a) = r;
        }
    }
    parts.damp = (-kSqrt5 * parts.r.array()).exp();
    parts.k = sv *
              ((1.0 + kSqrt5 * parts.r.array() + (5.0 / 3.0) * parts.r.array().square()) *
               parts.damp.array())
                  .matrix();
    return parts;
}

/// Cholesky with jitter escalation; returns the jitter actually used.
double robust_cholesky(const Eigen::MatrixXd& ky, const GpFitOptions& opt,
                       Eigen::LLT<Eigen::MatrixXd>& llt) {
    llt.compute(ky);
    if (llt.info() == Eigen::Success)
        return 0.0;
    for (double jitter = opt.jitter_start; jitter <= opt.jitter_max * (1.0 + 1e-12);
         jitter *= 10.0) {
        Eigen::MatrixXd shifted = ky;
        shifted.diagonal().array() += jitter;
        llt.compute(shifted);
        if (llt.info() == Eigen::Success)
            return jitter;
    }
    throw ConditioningError("kernel matrix not positive definite at maximum jitter");
}

struct AdamState {
    Eigen::VectorXd m;
    Eigen::VectorXd v;
    int t = 0;
};

Eigen::VectorXd pack(const GpHyperparams& hp) {
    Eigen::VectorXd th(hp.log_lengthscales.size() + 2);
    th.head(hp.log_lengthscales.size()) = hp.log_lengthscales;
    th(th.size() - 2) = hp.log_signal_variance;
    th(th.size() - 1) = hp.log_noise_variance;
    return th;
}

GpHyperparams unpack(const Eigen::VectorXd& th) {
    GpHyperparams hp;
    hp.log_lengthscales = th.head(th.size() - 2);
    hp.log_signal_variance = th(th.size() - 2);
    hp.log_noise_variance = th(th.size() - 1);
    return hp;
}

void clamp_hypers(Eigen::VectorXd& th, const GpFitOptions& opt) {
    const Eigen::Index d = th.size() - 2;
    const double lo = std::log(opt.lengthscale_lower);
    const double hi = std::log(opt.lengthscale_upper);
    for (Eigen::Index i = 0; i < d; ++i)
        th(i) = std::clamp(th(i), lo, hi);
    th(d) = std::clamp(th(d), std::log(1e-8), std::log(1e3));
    th(d + 1) = std::clamp(th(d + 1), std::log(1e-10), std::log(10.0));
}

} // namespace

double GpHyperparams::signal_variance() const { return std::exp(log_signal_variance); }
double GpHyperparams::noise_variance() const { return std::exp(log_noise_variance); }

double matern52(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                const GpHyperparams& hp) {
    const Eigen::VectorXd ls = hp.lengthscales();
    double s = 0.0;
    for (Eigen::Index d = 0; d < a.size(); ++d) {
        const double diff = (a(d) - b(d)) / ls(d);
        s += diff * diff;
    }
    const double r = std::sqrt(s);
    return hp.signal_variance() * (1.0 + kSqrt5 * r + (5.0 / 3.0) * r * r) *
           std::exp(-kSqrt5 * r);
}

LogMarginalLikelihood log_marginal_likelihood(const Eigen::MatrixXd& X,
                                              const Eigen::VectorXd& y,
                                              const GpHyperparams& hp,
                                              const GpFitOptions& opt) {
    const Eigen::Index m = X.rows();
    const Eigen::Index d = X.cols();
    assert(y.size() == m);

    const KernelParts parts = kernel_matrix(X, hp);
    Eigen::MatrixXd ky = parts.k;
    ky.diagonal().array() += hp.noise_variance();

    Eigen::LLT<Eigen::MatrixXd> llt;
    robust_cholesky(ky, opt, llt);

    const Eigen::VectorXd alpha = llt.solve(y);
    const Eigen::MatrixXd l = llt.matrixL();

    LogMarginalLikelihood out;
    out.value = -0.5 * y.dot(alpha) - l.diagonal().array().log().sum() -
                0.5 * static_cast<double>(m) * std::log(2.0 * std::numbers::pi);

    // A = alpha alpha^T - Ky^-1; dL/dtheta = 0.5 tr(A dKy/dtheta).
    Eigen::MatrixXd a = alpha * alpha.transpose();
    a -= llt.solve(Eigen::MatrixXd::Identity(m, m));

    out.grad.resize(d + 2);
    const Eigen::VectorXd ls = hp.lengthscales();
    const Eigen::ArrayXXd common =
        hp.signal_variance() * (5.0 / 3.0) *
        (1.0 + kSqrt5 * parts.r.array()) * parts.damp.array();
    for (Eigen::Index dim = 0; dim < d; ++dim) {
        double g = 0.0;
        const double inv_ls2 = 1.0 / (ls(dim) * ls(dim));
        for (Eigen::Index p = 0; p < m; ++p) {
            for (Eigen::Index q = 0; q < p; ++q) {
                const double diff = X(p, dim) - X(q, dim);
                g += 2.0 * a(p, q) * common(p, q) * diff * diff * inv_ls2;
            }
        }
        out.grad(dim) = 0.5 * g;
    }
    out.grad(d) = 0.5 * a.cwiseProduct(parts.k).sum();
    out.grad(d + 1) = 0.5 * hp.noise_variance() * a.trace();
    return out;
}

SingleGp::SingleGp(Eigen::MatrixXd X, Eigen::VectorXd y, GpHyperparams hp,
                   const GpFitOptions& opt)
    : X_(std::move(X)), hp_(std::move(hp)) {
    assert(X_.rows() == y.size());
    y_mean_ = y.mean();
    const double var = (y.array() - y_mean_).square().sum() / static_cast<double>(y.size());
    y_scale_ = std::sqrt(var);
    if (!(y_scale_ > 1e-12))
        y_scale_ = 1.0; // constant targets: keep the mean, skip scaling
    y_std_ = (y.array() - y_mean_) / y_scale_;

    const KernelParts parts = kernel_matrix(X_, hp_);
    Eigen::MatrixXd ky = parts.k;
    ky.diagonal().array() += hp_.noise_variance();
    Eigen::LLT<Eigen::MatrixXd> llt;
    robust_cholesky(ky, opt, llt);
    chol_ = llt.matrixL();
    alpha_ = llt.solve(y_std_);
    lml_ = -0.5 * y_std_.dot(alpha_) - chol_.diagonal().array().log().sum() -
           0.5 * static_cast<double>(X_.rows()) * std::log(2.0 * std::numbers::pi);
}

SingleGp SingleGp::fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                       const GpFitOptions& opt, Rng rng) {
    if (X.rows() < 2)
        throw ArgumentError("gp fit needs at least two observations");
    const Eigen::Index d = X.cols();

    const double mean = y.mean();
    double scale =
        std::sqrt((y.array() - mean).square().sum() / static_cast<double>(y.size()));
    if (!(scale > 1e-12))
        scale = 1.0;
    const Eigen::VectorXd y_std = (y.array() - mean) / scale;

    double best_value = -std::numeric_limits<double>::infinity();
    Eigen::VectorXd best_theta;

    for (int restart = 0; restart < opt.restarts; ++restart) {
        Rng r = rng.stream("restart", static_cast<std::uint64_t>(restart));
        Eigen::VectorXd theta(d + 2);
        if (restart == 0) {
            theta.head(d).setConstant(std::log(0.5));
            theta(d) = 0.0;           // signal variance 1 for standardized targets
            theta(d + 1) = std::log(1e-3);
        } else {
            for (Eigen::Index i = 0; i < d; ++i)
                theta(i) = r.uniform(std::log(0.05), std::log(2.0));
            theta(d) = r.uniform(std::log(0.1), std::log(10.0));
            theta(d + 1) = r.uniform(std::log(1e-6), std::log(1e-1));
        }
        clamp_hypers(theta, opt);

        AdamState adam{Eigen::VectorXd::Zero(d + 2), Eigen::VectorXd::Zero(d + 2), 0};
        double value = -std::numeric_limits<double>::infinity();
        for (int it = 0; it < opt.max_iters; ++it) {
            LogMarginalLikelihood lml;
            try {
                lml = mobopt::log_marginal_likelihood(X, y_std, unpack(theta), opt);
            } catch (const ConditioningError&) {
                break; // abandon this restart
            }
            value = lml.value;
            ++adam.t;
            adam.m = 0.9 * adam.m + 0.1 * lml.grad;
            adam.v = 0.999 * adam.v.array() + 0.001 * lml.grad.array().square();
            const double bc1 = 1.0 - std::pow(0.9, adam.t);
            const double bc2 = 1.0 - std::pow(0.999, adam.t);
            theta.array() += opt.learning_rate * (adam.m.array() / bc1) /
                             ((adam.v.array() / bc2).sqrt() + 1e-8);
            clamp_hypers(theta, opt);
        }
        if (value > best_value) {
            best_value = value;
            best_theta = theta;
        }
    }
    if (!best_theta.size())
        throw ConditioningError("gp fit failed: no restart produced a valid model");
    return SingleGp(X, y, unpack(best_theta), opt);
}

void SingleGp::posterior(const Eigen::VectorXd& x, double& mean, double& variance) const {
    const Eigen::Index m = X_.rows();
    Eigen::VectorXd kstar(m);
    for (Eigen::Index i = 0; i < m; ++i)
        kstar(i) = matern52(X_.row(i).transpose(), x, hp_);
    const Eigen::VectorXd v =
        chol_.triangularView<Eigen::Lower>().solve(kstar);
    const double mean_std = kstar.dot(alpha_);
    double var_std = hp_.signal_variance() - v.squaredNorm();
    var_std = std::max(var_std, 0.0);
    mean = y_mean_ + y_scale_ * mean_std;
    variance = std::max(y_scale_ * y_scale_ * var_std, kVarianceFloor);
}

BaseSamples BaseSamples::standard_normal(int q, int n, Rng& rng) {
    if (q < 1)
        throw ArgumentError("base samples: q must be >= 1");
    BaseSamples b;
    b.z.resize(q, n);
    for (int i = 0; i < q; ++i)
        for (int j = 0; j < n; ++j)
            b.z(i, j) = rng.normal();
    return b;
}

BaseSamples BaseSamples::quasi_random(int q, int n) {
    if (q < 1)
        throw ArgumentError("base samples: q must be >= 1");
    static constexpr int primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29};
    BaseSamples b;
    b.z.resize(q, n);
    for (int j = 0; j < n; ++j) {
        const int base = primes[j % 10];
        for (int i = 0; i < q; ++i) {
            // van der Corput radical inverse, offset to avoid u = 0
            std::uint64_t k = static_cast<std::uint64_t>(i) + 1;
            double u = 0.0, denom = 1.0;
            while (k > 0) {
                denom *= base;
                u += static_cast<double>(k % base) / denom;
                k /= base;
            }
            b.z(i, j) = inverse_normal_cdf(u);
        }
    }
    return b;
}

GpModel GpModel::fit(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y,
                     const GpFitOptions& opt, const Rng& rng) {
    const int n = static_cast<int>(Y.cols());
    std::vector<SingleGp> gps;
    gps.reserve(static_cast<std::size_t>(n));
    std::vector<std::optional<SingleGp>> slots(static_cast<std::size_t>(n));
    std::exception_ptr error;
    std::mutex error_mutex;
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t j) {
        try {
            slots[j] = SingleGp::fit(X, Y.col(static_cast<Eigen::Index>(j)), opt,
                                     rng.stream("objective", j));
        } catch (...) {
            std::scoped_lock lock(error_mutex);
            if (!error)
                error = std::current_exception();
        }
    });
    if (error)
        std::rethrow_exception(error);
    for (auto& s : slots)
        gps.push_back(std::move(*s));
    return GpModel(std::move(gps));
}

void GpModel::posterior(const Eigen::VectorXd& x, Eigen::VectorXd& mean,
                        Eigen::VectorXd& variance) const {
    mean.resize(objective_count());
    variance.resize(objective_count());
    for (int j = 0; j < objective_count(); ++j)
        gps_[static_cast<std::size_t>(j)].posterior(x, mean(j), variance(j));
}

Eigen::MatrixXd GpModel::sample_posterior(const Eigen::VectorXd& x,
                                          const BaseSamples& base) const {
    Eigen::VectorXd mean, var;
    posterior(x, mean, var);
    Eigen::MatrixXd draws(base.z.rows(), objective_count());
    for (int j = 0; j < objective_count(); ++j)
        draws.col(j) = mean(j) + std::sqrt(var(j)) * base.z.col(j).array();
    return draws;
}

double inverse_normal_cdf(double p) {
    // Acklam's rational approximation, |relative error| < 1.15e-9.
    assert(p > 0.0 && p < 1.0);
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    if (p < plow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p > 1.0 - plow) {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

} // namespace mobopt
