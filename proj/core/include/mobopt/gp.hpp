#ifndef MOBOPT_GP_HPP
#define MOBOPT_GP_HPP

#include <Eigen/Core>
#include <vector>

#include "mobopt/rng.hpp"

namespace mobopt {

/// Kernel hyperparameters in log space: ARD lengthscales (unit-cube units),
/// signal variance, and observation noise variance.
struct GpHyperparams {
    Eigen::VectorXd log_lengthscales;
    double log_signal_variance = 0.0;
    double log_noise_variance = -6.0;

    Eigen::VectorXd lengthscales() const { return log_lengthscales.array().exp(); }
    double signal_variance() const;
    double noise_variance() const;
};

struct GpFitOptions {
    int restarts = 5;
    int max_iters = 200;
    double learning_rate = 0.08;
    double lengthscale_lower = 1e-3; // unit-cube units
    double lengthscale_upper = 10.0;
    double jitter_start = 1e-10;
    double jitter_max = 1e-4; // escalate x10; beyond this -> ConditioningError
};

/// Matern-5/2 ARD kernel value between two unit-cube points.
double matern52(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                const GpHyperparams& hp);

struct LogMarginalLikelihood {
    double value = 0.0;
    // Gradient w.r.t. [log_lengthscales..., log_signal_variance, log_noise_variance].
    Eigen::VectorXd grad;
};

/// Log evidence of standardized targets y under hyperparameters hp, with
/// analytic gradient in log space. Throws ConditioningError when the kernel
/// stays non-PD past the maximum jitter.
LogMarginalLikelihood log_marginal_likelihood(const Eigen::MatrixXd& X,
                                              const Eigen::VectorXd& y,
                                              const GpHyperparams& hp,
                                              const GpFitOptions& opt = {});

/// One objective's Gaussian-process posterior. Inputs live in the unit
/// cube; targets are standardized internally and de-standardized on
/// prediction. Immutable after construction.
class SingleGp {
public:
    /// Condition on data with fixed hyperparameters.
    SingleGp(Eigen::MatrixXd X, Eigen::VectorXd y, GpHyperparams hp,
             const GpFitOptions& opt = {});

    /// Maximize the marginal likelihood by multi-start Adam ascent on
    /// log-hyperparameters, then condition on the best point found.
    static SingleGp fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                        const GpFitOptions& opt, Rng rng);

    /// Latent posterior mean and variance at a unit-cube point,
    /// de-standardized to target units. Variance floored at 1e-12.
    void posterior(const Eigen::VectorXd& x, double& mean, double& variance) const;

    double log_marginal_likelihood() const { return lml_; }
    const GpHyperparams& hyperparams() const { return hp_; }
    const Eigen::MatrixXd& cholesky_factor() const { return chol_; }
    int training_size() const { return static_cast<int>(X_.rows()); }

private:
    Eigen::MatrixXd X_;
    Eigen::VectorXd y_std_;
    GpHyperparams hp_;
    Eigen::MatrixXd chol_;  // lower-triangular factor of K + noise*I (+jitter)
    Eigen::VectorXd alpha_; // (K + noise*I)^-1 y_std
    double y_mean_ = 0.0;
    double y_scale_ = 1.0;
    double lml_ = 0.0;
};

/// Fixed q x n matrix of standard-normal base draws, one column per
/// objective. Regenerated once per outer optimization sample and reused
/// for every reward evaluation within it.
struct BaseSamples {
    Eigen::MatrixXd z;

    int count() const { return static_cast<int>(z.rows()); }

    static BaseSamples standard_normal(int q, int n, Rng& rng);
    /// Low-discrepancy variant: van der Corput points per column through
    /// the inverse normal CDF.
    static BaseSamples quasi_random(int q, int n);
};

/// Independent per-objective GPs over a shared input set.
class GpModel {
public:
    GpModel() = default;
    explicit GpModel(std::vector<SingleGp> gps) : gps_(std::move(gps)) {}

    /// Fit one GP per column of Y (m x n). Objectives fit concurrently.
    static GpModel fit(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y,
                       const GpFitOptions& opt, const Rng& rng);

    int objective_count() const { return static_cast<int>(gps_.size()); }
    const SingleGp& gp(int j) const { return gps_[static_cast<std::size_t>(j)]; }

    void posterior(const Eigen::VectorXd& x, Eigen::VectorXd& mean,
                   Eigen::VectorXd& variance) const;

    /// Reparameterized draws: draw(i,j) = mean_j + sqrt(var_j) * base(i,j).
    /// Pure: identical inputs give bit-identical output.
    Eigen::MatrixXd sample_posterior(const Eigen::VectorXd& x,
                                     const BaseSamples& base) const;

private:
    std::vector<SingleGp> gps_;
};

/// Inverse standard-normal CDF (Acklam's rational approximation).
double inverse_normal_cdf(double p);

} // namespace mobopt

#endif
