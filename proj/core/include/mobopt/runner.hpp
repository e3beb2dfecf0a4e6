#ifndef MOBOPT_RUNNER_HPP
#define MOBOPT_RUNNER_HPP

#include <Eigen/Core>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mobopt/config.hpp"
#include "mobopt/objectives.hpp"
#include "mobopt/problems.hpp"

namespace mobopt {

/// One line of the run trace. The persisted CSV carries the pinned columns
/// sample,feasible,hv,<objective names...>; the remaining fields land in
/// the archive and summary.
struct TraceRow {
    int sample = 0;
    std::vector<double> f_raw;  // empty for failed evaluations
    std::vector<double> f_norm;
    bool feasible = false;
    Eigen::VectorXd lambda;     // weights drawn for this sample, if any
    double hv = 0.0;            // feasible hypervolume after this sample
    double seconds = 0.0;
    bool failed = false;
    std::string failure_kind;
};

/// A persisted sample record: either a successful Evaluation or a failure
/// marker (kept out of the GP and the front but written to the archive).
struct SampleRecord {
    std::optional<Evaluation> evaluation;
    std::vector<double> x; // proposal, also present for failures
    Source source = Source::Prior;
    int index = 0;
    std::string failure_kind; // empty on success
};

struct SeedRunResult {
    std::uint64_t seed = 0;
    std::filesystem::path dir;
    double final_hv = 0.0;
    int n_failed = 0;
    int n_fallback = 0;
    double wall_seconds = 0.0;
};

/// Execute one seed of the outer loop: LHS priors, then per sample fit the
/// GPs, draw weights, propose, evaluate, append, and retrace the feasible
/// hypervolume. Writes archive.jsonl, trace.csv, and summary.json under
/// out_dir/seed_<seed>/. Fully deterministic per seed.
SeedRunResult run_seed(const Problem& problem, const RunConfig& config,
                       std::uint64_t seed);

/// Run every configured seed (independent, executed concurrently up to the
/// thread cap).
std::vector<SeedRunResult> run(const RunConfig& config);
std::vector<SeedRunResult> run(const Problem& problem, const RunConfig& config);

// Persistence (used by the CLI and the comparison report as well).
std::string format_double(double v); // shortest round-trip decimal
void write_archive_jsonl(const std::filesystem::path& path,
                         const std::vector<SampleRecord>& records,
                         const ObjectiveSpec& objectives);
std::vector<SampleRecord> read_archive_jsonl(const std::filesystem::path& path);
void write_trace_csv(const std::filesystem::path& path, const std::vector<TraceRow>& rows,
                     const ObjectiveSpec& objectives);

/// Feasible-front hypervolume of the successful records at a reference.
double archive_hypervolume(const std::vector<SampleRecord>& records,
                           const std::vector<double>& reference);

} // namespace mobopt

#endif
