#include "mobopt/pareto.hpp"

#include <algorithm>

#include "mobopt/errors.hpp"

namespace mobopt {

bool dominates(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size())
        throw DimensionError("dominates: objective vectors differ in length");
    bool strict = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] > b[i])
            return false;
        if (a[i] < b[i])
            strict = true;
    }
    return strict;
}

std::vector<std::size_t> non_dominated_indices(const std::vector<std::vector<double>>& points) {
    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < points.size(); ++i) {
        bool dominated = false;
        for (std::size_t j = 0; j < points.size() && !dominated; ++j)
            dominated = (j != i) && dominates(points[j], points[i]);
        if (!dominated)
            kept.push_back(i);
    }
    return kept;
}

std::vector<Evaluation> pareto_front(const std::vector<Evaluation>& evaluations,
                                     bool feasible_only) {
    std::vector<const Evaluation*> pool;
    for (const auto& e : evaluations)
        if (!feasible_only || e.feasible)
            pool.push_back(&e);

    std::vector<Evaluation> front;
    for (const Evaluation* a : pool) {
        bool dominated = false;
        for (const Evaluation* b : pool) {
            if (a != b && dominates(b->f_norm, a->f_norm)) {
                dominated = true;
                break;
            }
        }
        if (!dominated)
            front.push_back(*a);
    }
    std::stable_sort(front.begin(), front.end(),
                     [](const Evaluation& a, const Evaluation& b) { return a.index < b.index; });
    return front;
}

} // namespace mobopt
