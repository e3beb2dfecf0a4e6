#ifndef MOBOPT_TESTS_ORACLES_HPP
#define MOBOPT_TESTS_ORACLES_HPP

// Independent reference implementations used only by tests. These stay
// deliberately naive and share no code with the library paths they check.

#include <Eigen/Dense>
#include <cassert>
#include <cmath>
#include <vector>

namespace oracles {

/// Union volume of the boxes [p, ref] by inclusion-exclusion over all
/// non-empty subsets (hand geometry, exact for any dimension; fronts must
/// be small).
inline double hypervolume_inclusion_exclusion(
    const std::vector<std::vector<double>>& front, const std::vector<double>& ref) {
    std::vector<std::vector<double>> pts;
    for (const auto& p : front) {
        bool inside = true;
        for (std::size_t j = 0; j < ref.size(); ++j)
            inside = inside && p[j] <= ref[j];
        if (inside)
            pts.push_back(p);
    }
    const std::size_t k = pts.size();
    assert(k <= 20);
    double total = 0.0;
    for (std::size_t mask = 1; mask < (std::size_t{1} << k); ++mask) {
        std::vector<double> corner(ref.size(), -std::numeric_limits<double>::infinity());
        int bits = 0;
        for (std::size_t i = 0; i < k; ++i) {
            if (mask & (std::size_t{1} << i)) {
                ++bits;
                for (std::size_t j = 0; j < ref.size(); ++j)
                    corner[j] = std::max(corner[j], pts[i][j]);
            }
        }
        double vol = 1.0;
        for (std::size_t j = 0; j < ref.size(); ++j)
            vol *= std::max(ref[j] - corner[j], 0.0);
        total += (bits % 2 == 1 ? 1.0 : -1.0) * vol;
    }
    return total;
}

/// O(n^2) pairwise dominance filter; returns kept indices in input order.
inline std::vector<std::size_t> brute_force_front(
    const std::vector<std::vector<double>>& points) {
    auto dominated_by = [](const std::vector<double>& a, const std::vector<double>& b) {
        // does b dominate a?
        bool some_strict = false;
        for (std::size_t j = 0; j < a.size(); ++j) {
            if (b[j] > a[j])
                return false;
            if (b[j] < a[j])
                some_strict = true;
        }
        return some_strict;
    };
    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < points.size(); ++i) {
        bool dom = false;
        for (std::size_t j = 0; j < points.size() && !dom; ++j)
            dom = j != i && dominated_by(points[i], points[j]);
        if (!dom)
            kept.push_back(i);
    }
    return kept;
}

/// Textbook GP predictive equations evaluated with a generic dense solve,
/// on already-standardized targets.
struct DenseGpOracle {
    Eigen::MatrixXd x;        // m x d
    Eigen::VectorXd y;        // standardized targets
    Eigen::VectorXd ls;       // lengthscales
    double signal_variance;
    double noise_variance;

    double kernel(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const {
        double s = 0.0;
        for (Eigen::Index d = 0; d < a.size(); ++d) {
            const double diff = (a(d) - b(d)) / ls(d);
            s += diff * diff;
        }
        const double r = std::sqrt(s);
        const double sqrt5r = std::sqrt(5.0) * r;
        return signal_variance * (1.0 + sqrt5r + 5.0 * r * r / 3.0) * std::exp(-sqrt5r);
    }

    void predict(const Eigen::VectorXd& q, double& mean, double& var) const {
        const Eigen::Index m = x.rows();
        Eigen::MatrixXd big(m, m);
        for (Eigen::Index i = 0; i < m; ++i)
            for (Eigen::Index j = 0; j < m; ++j)
                big(i, j) = kernel(x.row(i).transpose(), x.row(j).transpose());
        big.diagonal().array() += noise_variance;
        const Eigen::MatrixXd inv = big.inverse(); // generic dense inverse
        Eigen::VectorXd kstar(m);
        for (Eigen::Index i = 0; i < m; ++i)
            kstar(i) = kernel(x.row(i).transpose(), q);
        mean = kstar.dot(inv * y);
        var = kernel(q, q) - kstar.dot(inv * kstar);
    }

    double log_evidence() const {
        const Eigen::Index m = x.rows();
        Eigen::MatrixXd big(m, m);
        for (Eigen::Index i = 0; i < m; ++i)
            for (Eigen::Index j = 0; j < m; ++j)
                big(i, j) = kernel(x.row(i).transpose(), x.row(j).transpose());
        big.diagonal().array() += noise_variance;
        const double quad = y.dot(big.inverse() * y);
        return -0.5 * quad - 0.5 * std::log(big.determinant()) -
               0.5 * static_cast<double>(m) * std::log(2.0 * M_PI);
    }
};

} // namespace oracles

#endif
