#ifndef MOBOPT_OBJECTIVES_HPP
#define MOBOPT_OBJECTIVES_HPP

#include <limits>
#include <string>
#include <vector>

namespace mobopt {

enum class Direction { Minimize, Maximize };

/// One objective in raw units. constraint_bound is the feasibility
/// threshold (<= bound for minimize, >= bound for maximize); the
/// unconstrained sentinel is +inf / -inf respectively. normalizer must be
/// positive; normalizing to the constraint makes "feasible" mean
/// "normalized cost <= 1".
struct Objective {
    std::string name;
    Direction direction = Direction::Minimize;
    double constraint_bound = std::numeric_limits<double>::infinity();
    double normalizer = 1.0;

    bool constrained() const {
        return direction == Direction::Minimize
                   ? constraint_bound != std::numeric_limits<double>::infinity()
                   : constraint_bound != -std::numeric_limits<double>::infinity();
    }
};

/// Ordered objective list plus the raw->normalized mapping. Internally all
/// objectives are minimized: maximize objectives are negated when
/// normalized, so every downstream consumer sees one convention.
class ObjectiveSpec {
public:
    explicit ObjectiveSpec(std::vector<Objective> objectives);

    int count() const { return static_cast<int>(objectives_.size()); }
    const std::vector<Objective>& objectives() const { return objectives_; }
    const Objective& objective(int i) const { return objectives_[static_cast<std::size_t>(i)]; }

    /// Normalized, minimization-convention objective vector.
    std::vector<double> normalize(const std::vector<double>& f_raw) const;

    /// Every constrained objective within its bound (checked in raw units).
    bool feasible(const std::vector<double>& f_raw) const;

private:
    std::vector<Objective> objectives_;
};

enum class Source { Prior, Solver, Baseline };

const char* source_name(Source s);
Source source_from_name(const std::string& name);

/// One evaluated point: raw parameters, raw and normalized objectives,
/// feasibility, provenance, and its sample number within the run.
struct Evaluation {
    std::vector<double> x;
    std::vector<double> f_raw;
    std::vector<double> f_norm;
    bool feasible = false;
    Source source = Source::Prior;
    int index = 0;
};

/// Append-only store of evaluations plus the normalized-space reference
/// point used for hypervolume. Single writer; all queries are pure.
class ParetoArchive {
public:
    explicit ParetoArchive(std::vector<double> reference_point);

    void append(Evaluation e);

    const std::vector<Evaluation>& evaluations() const { return evaluations_; }
    bool empty() const { return evaluations_.empty(); }
    std::size_t size() const { return evaluations_.size(); }
    const std::vector<double>& reference_point() const { return reference_point_; }

    /// Non-dominated subset (of the feasible subset when feasible_only),
    /// in stable sample-index order.
    std::vector<Evaluation> pareto_front(bool feasible_only) const;

    /// Feasible-front hypervolume against the archive's reference point.
    /// Exact for up to 4 objectives, Monte-Carlo above that.
    double feasible_hypervolume() const;

private:
    std::vector<Evaluation> evaluations_;
    std::vector<double> reference_point_;
};

} // namespace mobopt

#endif
