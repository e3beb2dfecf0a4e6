#include "mobopt/objectives.hpp"

#include <algorithm>
#include <set>

#include "mobopt/errors.hpp"
#include "mobopt/hypervolume.hpp"
#include "mobopt/pareto.hpp"

namespace mobopt {

ObjectiveSpec::ObjectiveSpec(std::vector<Objective> objectives)
    : objectives_(std::move(objectives)) {
    if (objectives_.size() < 2)
        throw ArgumentError("objective spec needs at least two objectives");
    std::set<std::string> names;
    for (const auto& o : objectives_) {
        if (!(o.normalizer > 0.0))
            throw ArgumentError("objective '" + o.name + "': normalizer must be positive");
        if (!names.insert(o.name).second)
            throw ArgumentError("duplicate objective name '" + o.name + "'");
    }
}

std::vector<double> ObjectiveSpec::normalize(const std::vector<double>& f_raw) const {
    if (f_raw.size() != objectives_.size())
        throw DimensionError("normalize: objective vector length mismatch");
    std::vector<double> f(f_raw.size());
    for (std::size_t i = 0; i < f_raw.size(); ++i) {
        const auto& o = objectives_[i];
        f[i] = (o.direction == Direction::Maximize ? -f_raw[i] : f_raw[i]) / o.normalizer;
    }
    return f;
}

bool ObjectiveSpec::feasible(const std::vector<double>& f_raw) const {
    if (f_raw.size() != objectives_.size())
        throw DimensionError("feasible: objective vector length mismatch");
    for (std::size_t i = 0; i < f_raw.size(); ++i) {
        const auto& o = objectives_[i];
        if (!o.constrained())
            continue;
        if (o.direction == Direction::Minimize && f_raw[i] > o.constraint_bound)
            return false;
        if (o.direction == Direction::Maximize && f_raw[i] < o.constraint_bound)
            return false;
    }
    return true;
}

const char* source_name(Source s) {
    switch (s) {
    case Source::Prior: return "prior";
    case Source::Solver: return "solver";
    case Source::Baseline: return "baseline";
    }
    return "unknown";
}

Source source_from_name(const std::string& name) {
    if (name == "prior")
        return Source::Prior;
    if (name == "solver")
        return Source::Solver;
    if (name == "baseline")
        return Source::Baseline;
    throw ArgumentError("unknown evaluation source '" + name + "'");
}

ParetoArchive::ParetoArchive(std::vector<double> reference_point)
    : reference_point_(std::move(reference_point)) {
    if (reference_point_.empty())
        throw ArgumentError("archive reference point must be non-empty");
}

void ParetoArchive::append(Evaluation e) {
    if (e.f_norm.size() != reference_point_.size())
        throw DimensionError("archive: evaluation does not match reference dimension");
    evaluations_.push_back(std::move(e));
}

std::vector<Evaluation> ParetoArchive::pareto_front(bool feasible_only) const {
    return mobopt::pareto_front(evaluations_, feasible_only);
}

double ParetoArchive::feasible_hypervolume() const {
    std::vector<std::vector<double>> pts;
    for (const auto& e : pareto_front(true))
        pts.push_back(e.f_norm);
    if (pts.empty())
        return 0.0;
    if (reference_point_.size() <= 4)
        return hypervolume_exact(pts, reference_point_);
    // Above 4 objectives fall back to a fixed-seed MC estimate.
    std::vector<double> lower(reference_point_.size());
    for (std::size_t j = 0; j < lower.size(); ++j) {
        double lo = reference_point_[j];
        for (const auto& p : pts)
            lo = std::min(lo, p[j]);
        lower[j] = lo;
    }
    return hypervolume_mc(pts, reference_point_, lower, 1 << 16, 0x9e3779b9u);
}

} // namespace mobopt
