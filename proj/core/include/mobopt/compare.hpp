#ifndef MOBOPT_COMPARE_HPP
#define MOBOPT_COMPARE_HPP

#include <filesystem>
#include <string>
#include <vector>

namespace mobopt {

struct RunStats {
    std::string label;
    std::vector<double> final_hvs; // one per seed, recomputed at the shared reference
    double median = 0.0;
    double q25 = 0.0;
    double q75 = 0.0;
    double iqr = 0.0;
};

struct ComparisonReport {
    std::vector<double> shared_reference; // componentwise max of feasible values
    std::vector<RunStats> runs;
};

/// Recompute every run's hypervolume traces under one shared reference
/// point (Definition-3 precondition for comparing fronts), then emit
/// hv_vs_sample.csv (per-sample median HV per run) and comparison.json
/// under out_dir. All runs must share the problem and normalization.
ComparisonReport compare_runs(const std::vector<std::filesystem::path>& run_dirs,
                              const std::filesystem::path& out_dir);

} // namespace mobopt

#endif
