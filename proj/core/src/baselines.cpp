#include "mobopt/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "mobopt/errors.hpp"
#include "mobopt/parallel.hpp"

namespace mobopt {

std::vector<Eigen::VectorXd> latin_hypercube_unit(int n_points, int dim, Rng& rng) {
    if (n_points < 1)
        throw ArgumentError("latin_hypercube: n_points must be >= 1");
    std::vector<Eigen::VectorXd> pts(static_cast<std::size_t>(n_points),
                                     Eigen::VectorXd(dim));
    std::vector<int> perm(static_cast<std::size_t>(n_points));
    for (int d = 0; d < dim; ++d) {
        std::iota(perm.begin(), perm.end(), 0);
        // Fisher-Yates with our own stream for reproducibility
        for (int i = n_points - 1; i > 0; --i) {
            const auto j = static_cast<int>(rng.below(static_cast<std::uint64_t>(i) + 1));
            std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
        }
        for (int i = 0; i < n_points; ++i) {
            const double stratum = static_cast<double>(perm[static_cast<std::size_t>(i)]);
            pts[static_cast<std::size_t>(i)](d) =
                (stratum + rng.uniform()) / static_cast<double>(n_points);
        }
    }
    return pts;
}

std::vector<std::vector<double>> latin_hypercube(int n_points, const SearchSpace& space,
                                                 Rng& rng) {
    const auto unit = latin_hypercube_unit(n_points, space.dimension(), rng);
    std::vector<std::vector<double>> out;
    out.reserve(unit.size());
    for (const auto& u : unit)
        out.push_back(space.to_raw(std::vector<double>(u.data(), u.data() + u.size())));
    return out;
}

std::vector<double> random_point(const SearchSpace& space, Rng& rng) {
    std::vector<double> unit(static_cast<std::size_t>(space.dimension()));
    for (auto& u : unit)
        u = rng.uniform();
    return space.to_raw(unit);
}

namespace {

/// Derivative-free compass search on the unit cube, maximizing f.
double coordinate_refine(Eigen::VectorXd& x, double fx,
                         const std::function<double(const Eigen::VectorXd&)>& f,
                         double tolerance) {
    double step = 0.25;
    while (step >= tolerance) {
        bool improved = false;
        for (Eigen::Index d = 0; d < x.size(); ++d) {
            for (const double sign : {+1.0, -1.0}) {
                Eigen::VectorXd y = x;
                y(d) = std::clamp(y(d) + sign * step, 0.0, 1.0);
                if (y(d) == x(d))
                    continue;
                const double fy = f(y);
                if (fy > fx) {
                    x = std::move(y);
                    fx = fy;
                    improved = true;
                }
            }
        }
        if (!improved)
            step *= 0.5;
    }
    return fx;
}

} // namespace

ParegoProposal parego_propose(const GpModel& model, const SearchSpace& space,
                              const BaseSamples& base, const ScalarizationWeights& weights,
                              const Incumbent& incumbent, Rng rng,
                              const ParegoOptions& options) {
    const auto ei = [&](const Eigen::VectorXd& x) {
        return q_expected_improvement(model, x, base, weights, incumbent);
    };

    Rng start_rng = rng.stream("starts");
    const auto starts =
        latin_hypercube_unit(options.n_starts, space.dimension(), start_rng);

    std::vector<Eigen::VectorXd> refined(starts.size());
    std::vector<double> values(starts.size());
    parallel_for(starts.size(), [&](std::size_t i) {
        Eigen::VectorXd x = starts[i];
        values[i] = coordinate_refine(x, ei(x), ei, options.tolerance);
        refined[i] = std::move(x);
    });

    std::size_t best = 0;
    for (std::size_t i = 1; i < starts.size(); ++i)
        if (values[i] > values[best])
            best = i;

    ParegoProposal out;
    if (values[best] <= 0.0) {
        // EI identically zero over every start: nothing to exploit.
        Rng fb = rng.stream("fallback");
        out.x_unit.resize(space.dimension());
        for (int d = 0; d < space.dimension(); ++d)
            out.x_unit(d) = fb.uniform();
        out.ei = 0.0;
        out.fallback = true;
        return out;
    }
    out.x_unit = refined[best];
    out.ei = values[best];
    return out;
}

} // namespace mobopt
