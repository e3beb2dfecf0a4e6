#ifndef MOBOPT_ERRORS_HPP
#define MOBOPT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mobopt {

/// Objective/parameter vectors of mismatched length.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Invalid argument value (empty sample budget, non-positive normalizer, ...).
class ArgumentError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Exact hypervolume requested for more objectives than supported.
class UnsupportedDimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Kernel matrix stayed non-positive-definite past the maximum jitter.
class ConditioningError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad or inconsistent run configuration.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A single objective evaluation failed; the run records it and continues.
class EvaluationFailure : public std::runtime_error {
public:
    enum class Kind { Timeout, Malformed, ProcessExit, NonFinite };

    EvaluationFailure(Kind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    Kind kind() const { return kind_; }

    const char* kind_name() const {
        switch (kind_) {
        case Kind::Timeout: return "timeout";
        case Kind::Malformed: return "malformed";
        case Kind::ProcessExit: return "process_exit";
        case Kind::NonFinite: return "non_finite";
        }
        return "unknown";
    }

private:
    Kind kind_;
};

} // namespace mobopt

#endif
