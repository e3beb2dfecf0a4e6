#ifndef MOBOPT_PARETO_HPP
#define MOBOPT_PARETO_HPP

#include <vector>

#include "mobopt/objectives.hpp"

namespace mobopt {

/// Pareto dominance in minimization convention: a <= b componentwise and
/// a < b in at least one component. Equal vectors dominate neither way.
bool dominates(const std::vector<double>& a, const std::vector<double>& b);

/// Non-dominated subset of a set of normalized objective vectors; returns
/// the indices of the kept vectors in input order.
std::vector<std::size_t> non_dominated_indices(const std::vector<std::vector<double>>& points);

/// Non-dominated subset of evaluations (by f_norm), stable by sample index.
std::vector<Evaluation> pareto_front(const std::vector<Evaluation>& evaluations,
                                     bool feasible_only);

} // namespace mobopt

#endif
