#include "mobopt/search_space.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "mobopt/errors.hpp"

namespace mobopt {

SearchSpace::SearchSpace(std::vector<Parameter> params) : params_(std::move(params)) {
    if (params_.empty())
        throw ArgumentError("search space needs at least one parameter");
    std::set<std::string> names;
    for (const auto& p : params_) {
        if (!(p.lower < p.upper))
            throw ArgumentError("parameter '" + p.name + "': lower must be < upper");
        if (p.scale == Scale::Log && !(p.lower > 0.0))
            throw ArgumentError("parameter '" + p.name + "': log scale requires lower > 0");
        if (!names.insert(p.name).second)
            throw ArgumentError("duplicate parameter name '" + p.name + "'");
    }
}

std::vector<double> SearchSpace::to_unit(const std::vector<double>& raw) const {
    if (raw.size() != params_.size())
        throw DimensionError("point dimension does not match search space");
    std::vector<double> u(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        const auto& p = params_[i];
        if (p.scale == Scale::Log)
            u[i] = std::log(raw[i] / p.lower) / std::log(p.upper / p.lower);
        else
            u[i] = (raw[i] - p.lower) / (p.upper - p.lower);
    }
    return u;
}

std::vector<double> SearchSpace::to_raw(const std::vector<double>& unit) const {
    if (unit.size() != params_.size())
        throw DimensionError("point dimension does not match search space");
    std::vector<double> raw(unit.size());
    for (std::size_t i = 0; i < unit.size(); ++i) {
        const auto& p = params_[i];
        if (p.scale == Scale::Log)
            raw[i] = p.lower * std::pow(p.upper / p.lower, unit[i]);
        else
            raw[i] = p.lower + unit[i] * (p.upper - p.lower);
        raw[i] = std::clamp(raw[i], p.lower, p.upper);
    }
    return raw;
}

bool SearchSpace::contains(const std::vector<double>& raw) const {
    if (raw.size() != params_.size())
        return false;
    for (std::size_t i = 0; i < raw.size(); ++i)
        if (raw[i] < params_[i].lower || raw[i] > params_[i].upper)
            return false;
    return true;
}

std::vector<double> SearchSpace::clip(const std::vector<double>& raw) const {
    if (raw.size() != params_.size())
        throw DimensionError("point dimension does not match search space");
    std::vector<double> out(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i)
        out[i] = std::clamp(raw[i], params_[i].lower, params_[i].upper);
    return out;
}

} // namespace mobopt
