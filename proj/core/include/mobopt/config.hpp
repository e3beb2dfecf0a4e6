#ifndef MOBOPT_CONFIG_HPP
#define MOBOPT_CONFIG_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mobopt/ars.hpp"
#include "mobopt/baselines.hpp"
#include "mobopt/evaluator.hpp"
#include "mobopt/gp.hpp"
#include "mobopt/problems.hpp"

namespace mobopt {

struct SolverSettings {
    std::string id = "ars"; // ars | parego | random
    ArsConfig ars;
    ParegoOptions parego;
    GpFitOptions gp;
    int base_samples = 64;          // q posterior draws per reward
    bool quasi_base_samples = false; // low-discrepancy base-sample upgrade
};

struct ProblemSettings {
    std::string id = "zdt1";
    std::map<std::string, double> params; // e.g. dim, objectives

    // external evaluator problems
    std::string command;
    double timeout_seconds = 3600.0;
    std::vector<Parameter> external_params;
    std::vector<Objective> external_objectives;

    std::optional<std::vector<double>> reference; // normalized-space override
};

struct RunConfig {
    ProblemSettings problem;
    SolverSettings solver;
    int budget = 150;  // J
    int n_priors = 10; // Latin-Hypercube prior evaluations
    std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
    std::string out_dir = "runs/out";

    void validate() const;
};

/// Load a TOML run configuration; unknown keys are rejected to catch typos.
RunConfig load_run_config(const std::string& path);

/// Build the runnable problem a config names (built-in or external).
Problem instantiate_problem(const ProblemSettings& settings);

} // namespace mobopt

#endif
