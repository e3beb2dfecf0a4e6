#ifndef MOBOPT_SEARCH_SPACE_HPP
#define MOBOPT_SEARCH_SPACE_HPP

#include <string>
#include <vector>

namespace mobopt {

enum class Scale { Linear, Log };

struct Parameter {
    std::string name;
    double lower = 0.0;
    double upper = 1.0;
    Scale scale = Scale::Linear;
};

/// The bounded search domain: an ordered list of named parameters, each
/// sampled on a linear or logarithmic scale. All solver math happens in
/// the unit cube; raw parameter units only appear at the evaluation and
/// persistence boundaries.
class SearchSpace {
public:
    explicit SearchSpace(std::vector<Parameter> params);

    int dimension() const { return static_cast<int>(params_.size()); }
    const std::vector<Parameter>& params() const { return params_; }
    const Parameter& param(int i) const { return params_[static_cast<std::size_t>(i)]; }

    /// Map a raw point into [0,1]^d (log-scale parameters by log position).
    std::vector<double> to_unit(const std::vector<double>& raw) const;
    /// Map a unit-cube point back to raw parameter units.
    std::vector<double> to_raw(const std::vector<double>& unit) const;

    bool contains(const std::vector<double>& raw) const;
    std::vector<double> clip(const std::vector<double>& raw) const;

private:
    std::vector<Parameter> params_;
};

} // namespace mobopt

#endif
