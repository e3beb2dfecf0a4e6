#ifndef MOBOPT_BASELINES_HPP
#define MOBOPT_BASELINES_HPP

#include <Eigen/Core>
#include <vector>

#include "mobopt/acquisition.hpp"
#include "mobopt/gp.hpp"
#include "mobopt/objectives.hpp"
#include "mobopt/rng.hpp"
#include "mobopt/search_space.hpp"

namespace mobopt {

/// Latin-Hypercube design in the unit cube: every 1-D projection hits each
/// of the n strata exactly once, strata permuted independently per
/// dimension, position uniform within the stratum.
std::vector<Eigen::VectorXd> latin_hypercube_unit(int n_points, int dim, Rng& rng);

/// Latin-Hypercube design mapped to raw parameter units.
std::vector<std::vector<double>> latin_hypercube(int n_points, const SearchSpace& space,
                                                 Rng& rng);

/// Uniform point in raw units (log-uniform on log-scale parameters).
std::vector<double> random_point(const SearchSpace& space, Rng& rng);

struct ParegoOptions {
    int n_starts = 64;
    double tolerance = 1e-4; // coordinate step below which refinement stops
};

/// ParEGO-style step: maximize the scalarized Monte-Carlo expected
/// improvement by multi-start coordinate refinement. Returns the unit-cube
/// argmax; falls back to a uniform point when the EI surface is all zero.
struct ParegoProposal {
    Eigen::VectorXd x_unit;
    double ei = 0.0;
    bool fallback = false;
};

ParegoProposal parego_propose(const GpModel& model, const SearchSpace& space,
                              const BaseSamples& base, const ScalarizationWeights& weights,
                              const Incumbent& incumbent, Rng rng,
                              const ParegoOptions& options = {});

} // namespace mobopt

#endif
