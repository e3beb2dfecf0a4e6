#include "mobopt/acquisition.hpp"

#include <algorithm>
#include <cmath>

#include "mobopt/errors.hpp"

namespace mobopt {

ScalarizationWeights draw_weights(Rng& rng, int n, double rho) {
    if (n < 2)
        throw ArgumentError("draw_weights: need at least two objectives");
    ScalarizationWeights w;
    w.rho = rho;
    w.lambda.resize(n);
    double sum = 0.0;
    for (int j = 0; j < n; ++j) {
        double u = rng.uniform();
        while (u <= 0.0)
            u = rng.uniform();
        w.lambda(j) = -std::log(u);
        sum += w.lambda(j);
    }
    w.lambda /= sum;
    return w;
}

double chebyshev_scalarize(const Eigen::VectorXd& f_norm, const ScalarizationWeights& w) {
    if (f_norm.size() != w.lambda.size())
        throw DimensionError("chebyshev_scalarize: weight/objective length mismatch");
    const Eigen::ArrayXd weighted = w.lambda.array() * f_norm.array();
    return weighted.maxCoeff() + w.rho * weighted.sum();
}

double chebyshev_scalarize(const std::vector<double>& f_norm, const ScalarizationWeights& w) {
    return chebyshev_scalarize(
        Eigen::Map<const Eigen::VectorXd>(f_norm.data(),
                                          static_cast<Eigen::Index>(f_norm.size())),
        w);
}

Incumbent Incumbent::from_archive(const ParetoArchive& archive,
                                  const ScalarizationWeights& w) {
    if (archive.empty())
        throw ArgumentError("incumbent: archive is empty");
    Incumbent inc;
    bool first = true;
    for (const auto& e : archive.evaluations()) {
        const double s = chebyshev_scalarize(e.f_norm, w);
        if (first || s < inc.f_star_scalar) {
            inc.f_star_scalar = s;
            inc.x_star = e.x;
            first = false;
        }
    }
    return inc;
}

double reward(double f_scalar, const Incumbent& incumbent) {
    const double delta = incumbent.f_star_scalar - f_scalar;
    return delta > 0.0 ? delta : kNegativeImprovementPenalty * delta;
}

double mc_reward(const GpModel& model, const Eigen::VectorXd& x, const BaseSamples& base,
                 const ScalarizationWeights& w, const Incumbent& incumbent) {
    const Eigen::MatrixXd draws = model.sample_posterior(x, base);
    double acc = 0.0;
    for (Eigen::Index i = 0; i < draws.rows(); ++i)
        acc += reward(chebyshev_scalarize(draws.row(i).transpose(), w), incumbent);
    return acc / static_cast<double>(draws.rows());
}

double q_expected_improvement(const GpModel& model, const Eigen::VectorXd& x,
                              const BaseSamples& base, const ScalarizationWeights& w,
                              const Incumbent& incumbent) {
    const Eigen::MatrixXd draws = model.sample_posterior(x, base);
    double acc = 0.0;
    for (Eigen::Index i = 0; i < draws.rows(); ++i) {
        const double delta =
            incumbent.f_star_scalar - chebyshev_scalarize(draws.row(i).transpose(), w);
        acc += std::max(delta, 0.0);
    }
    return acc / static_cast<double>(draws.rows());
}

} // namespace mobopt
