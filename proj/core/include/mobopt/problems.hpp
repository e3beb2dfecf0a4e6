#ifndef MOBOPT_PROBLEMS_HPP
#define MOBOPT_PROBLEMS_HPP

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mobopt/objectives.hpp"
#include "mobopt/search_space.hpp"

namespace mobopt {

/// A runnable optimization problem: the domain, the objective contract,
/// and a deterministic raw-units evaluator.
struct Problem {
    std::string id;
    SearchSpace space;
    ObjectiveSpec objectives;
    std::function<std::vector<double>(const std::vector<double>&)> evaluate;
    std::optional<std::vector<double>> known_optimum;
    std::vector<double> default_reference; // normalized minimization space
};

/// Multi-modal 2-D landscape over [0,30]^2 (sum of scaled Gaussian bumps
/// and pits); global minimum at (15, 5). Out-of-domain points are clipped
/// in with a warning.
double passino_landscape(double t0, double t1);

/// ZDT1 with d parameters in [0,1]; optimal front f2 = 1 - sqrt(f1).
std::vector<double> zdt1(const std::vector<double>& x);
/// f2 on the analytic ZDT1 front for a given f1.
double zdt1_front_f2(double f1);

/// DTLZ2 with n objectives; optimal points satisfy sum_j f_j^2 = 1.
std::vector<double> dtlz2(const std::vector<double>& x, int n_objectives);

/// Smooth stand-in for a train/prune/quantize evaluator: 12 parameters,
/// objectives (accuracy, rom_bytes, ram_bytes, flops) with microcontroller
/// constraints (1 MB ROM, 256 KB RAM, 1e9 FLOPs).
std::vector<double> synthetic_dnn_cost(const std::vector<double>& x);

Problem make_passino2d();
Problem make_zdt1(int dim = 6);
Problem make_dtlz2(int dim = 7, int n_objectives = 3);
Problem make_synthetic_dnn_cost();

/// Built-in problem registry keyed by id; `params` may carry problem
/// parameters such as "dim" or "objectives".
Problem make_problem(const std::string& id,
                     const std::map<std::string, double>& params = {});

} // namespace mobopt

#endif
