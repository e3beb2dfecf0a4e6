#ifndef MOBOPT_ACQUISITION_HPP
#define MOBOPT_ACQUISITION_HPP

#include <Eigen/Core>
#include <vector>

#include "mobopt/gp.hpp"
#include "mobopt/objectives.hpp"
#include "mobopt/rng.hpp"

namespace mobopt {

/// Multiplier applied to non-improving reward instead of clamping it to zero.
constexpr double kNegativeImprovementPenalty = 1e-3;
/// Default augmentation weight of the Chebyshev scalarization.
constexpr double kDefaultRho = 0.005;

/// A point on the objective-weight simplex plus the augmentation weight.
struct ScalarizationWeights {
    Eigen::VectorXd lambda; // non-negative, sums to 1
    double rho = kDefaultRho;
};

/// Uniform draw from the (n-1)-simplex via exponential spacings. One draw
/// per outer-loop sample.
ScalarizationWeights draw_weights(Rng& rng, int n, double rho = kDefaultRho);

/// Augmented Chebyshev scalarization of a minimization-convention vector:
/// max_j(lambda_j f_j) + rho * sum_j(lambda_j f_j).
double chebyshev_scalarize(const Eigen::VectorXd& f_norm, const ScalarizationWeights& w);
double chebyshev_scalarize(const std::vector<double>& f_norm, const ScalarizationWeights& w);

/// Best scalarized objective observed so far under the current weights.
/// Frozen for the duration of one outer-loop sample.
struct Incumbent {
    double f_star_scalar = 0.0;
    std::vector<double> x_star;

    static Incumbent from_archive(const ParetoArchive& archive,
                                  const ScalarizationWeights& w);
};

/// Improvement reward: delta for improvements, a 1e-3 penalty slope
/// otherwise, where delta = incumbent - candidate (minimization).
double reward(double f_scalar, const Incumbent& incumbent);

/// Mean reward of the scalarized posterior draws at x (unit cube).
/// Deterministic given (model, x, base).
double mc_reward(const GpModel& model, const Eigen::VectorXd& x, const BaseSamples& base,
                 const ScalarizationWeights& w, const Incumbent& incumbent);

/// Monte-Carlo expected improvement, clamped at zero; the ParEGO-style
/// baseline's acquisition and a diagnostic for the reward above.
double q_expected_improvement(const GpModel& model, const Eigen::VectorXd& x,
                              const BaseSamples& base, const ScalarizationWeights& w,
                              const Incumbent& incumbent);

} // namespace mobopt

#endif
