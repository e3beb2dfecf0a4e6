#include "mobopt/compare.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <map>

#include <json.hpp>

#include "mobopt/errors.hpp"
#include "mobopt/hypervolume.hpp"
#include "mobopt/pareto.hpp"
#include "mobopt/runner.hpp"

namespace mobopt {

using nlohmann::ordered_json;

namespace {

struct SeedData {
    std::uint64_t seed = 0;
    std::vector<SampleRecord> records;
};

struct RunData {
    std::string label;
    ordered_json identity; // problem id + objective contract, must match
    int budget = 0;
    std::vector<SeedData> seeds;
};

RunData load_run(const std::filesystem::path& dir) {
    RunData run;
    run.label = dir.filename().string();
    if (run.label.empty())
        run.label = dir.parent_path().filename().string();

    std::vector<std::filesystem::path> seed_dirs;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.is_directory() && entry.path().filename().string().rfind("seed_", 0) == 0)
            seed_dirs.push_back(entry.path());
    std::sort(seed_dirs.begin(), seed_dirs.end());
    if (seed_dirs.empty())
        throw ConfigError("no seed_* directories under " + dir.string());

    for (const auto& seed_dir : seed_dirs) {
        std::ifstream in(seed_dir / "summary.json");
        if (!in)
            throw ConfigError("missing summary.json under " + seed_dir.string());
        ordered_json summary;
        in >> summary;
        ordered_json identity;
        identity["problem"] = summary.at("problem");
        identity["objectives"] = summary.at("objectives");
        if (run.identity.is_null())
            run.identity = identity;
        else if (run.identity != identity)
            throw ConfigError("seeds under " + dir.string() + " disagree on the problem");
        run.budget = std::max(run.budget, summary.at("budget").get<int>());

        SeedData seed;
        seed.seed = summary.at("seed").get<std::uint64_t>();
        seed.records = read_archive_jsonl(seed_dir / "archive.jsonl");
        run.seeds.push_back(std::move(seed));
    }
    return run;
}

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size();
    return m % 2 == 1 ? v[m / 2] : 0.5 * (v[m / 2 - 1] + v[m / 2]);
}

double quantile_of(std::vector<double> v, double q) {
    std::sort(v.begin(), v.end());
    const double pos = q * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return v[lo] * (1.0 - frac) + v[hi] * frac;
}

} // namespace

ComparisonReport compare_runs(const std::vector<std::filesystem::path>& run_dirs,
                              const std::filesystem::path& out_dir) {
    if (run_dirs.empty())
        throw ConfigError("compare: no run directories given");
    std::vector<RunData> runs;
    runs.reserve(run_dirs.size());
    for (const auto& dir : run_dirs)
        runs.push_back(load_run(dir));
    for (std::size_t i = 1; i < runs.size(); ++i)
        if (runs[i].identity != runs[0].identity)
            throw ConfigError("compare: runs '" + runs[0].label + "' and '" +
                              runs[i].label + "' were made on different problems");

    const std::size_t n =
        runs[0].identity.at("objectives").size();

    // Shared reference: componentwise max of feasible normalized values
    // across every run and seed.
    std::vector<double> reference(n, -std::numeric_limits<double>::infinity());
    bool any_feasible = false;
    for (const auto& run : runs)
        for (const auto& seed : run.seeds)
            for (const auto& rec : seed.records)
                if (rec.evaluation && rec.evaluation->feasible) {
                    any_feasible = true;
                    for (std::size_t j = 0; j < n; ++j)
                        reference[j] =
                            std::max(reference[j], rec.evaluation->f_norm[j]);
                }
    if (!any_feasible)
        throw ConfigError("compare: no feasible evaluation in any run");

    // Per-seed HV trace under the shared reference.
    int max_budget = 0;
    for (const auto& run : runs)
        max_budget = std::max(max_budget, run.budget);

    struct Traces {
        std::vector<std::vector<double>> per_seed; // [seed][sample]
    };
    std::vector<Traces> all_traces(runs.size());
    for (std::size_t r = 0; r < runs.size(); ++r) {
        for (const auto& seed : runs[r].seeds) {
            std::vector<Evaluation> prefix;
            std::vector<double> hv_trace;
            std::size_t next = 0;
            const int budget = runs[r].budget;
            for (int i = 0; i < budget; ++i) {
                while (next < seed.records.size() && seed.records[next].index <= i) {
                    if (seed.records[next].evaluation)
                        prefix.push_back(*seed.records[next].evaluation);
                    ++next;
                }
                std::vector<std::vector<double>> pts;
                for (const auto& e : pareto_front(prefix, true))
                    pts.push_back(e.f_norm);
                hv_trace.push_back(pts.empty() || n > 4
                                       ? (pts.empty() ? 0.0 : -1.0)
                                       : hypervolume_exact(pts, reference));
                if (n > 4 && !pts.empty()) {
                    std::vector<double> lower(n);
                    for (std::size_t j = 0; j < n; ++j) {
                        double lo = reference[j];
                        for (const auto& p : pts)
                            lo = std::min(lo, p[j]);
                        lower[j] = lo;
                    }
                    hv_trace.back() =
                        hypervolume_mc(pts, reference, lower, 1 << 16, 0x9e3779b9u);
                }
            }
            all_traces[r].per_seed.push_back(std::move(hv_trace));
        }
    }

    std::filesystem::create_directories(out_dir);

    // hv_vs_sample.csv: per-sample median per run.
    {
        std::ofstream csv(out_dir / "hv_vs_sample.csv", std::ios::binary);
        csv << "sample";
        for (const auto& run : runs)
            csv << ',' << run.label << "_median";
        csv << '\n';
        for (int i = 0; i < max_budget; ++i) {
            csv << i;
            for (std::size_t r = 0; r < runs.size(); ++r) {
                std::vector<double> at;
                for (const auto& t : all_traces[r].per_seed)
                    if (i < static_cast<int>(t.size()))
                        at.push_back(t[static_cast<std::size_t>(i)]);
                csv << ',';
                if (!at.empty())
                    csv << format_double(median_of(at));
            }
            csv << '\n';
        }
    }

    ComparisonReport report;
    report.shared_reference = reference;
    ordered_json stats_json = ordered_json::array();
    for (std::size_t r = 0; r < runs.size(); ++r) {
        RunStats stats;
        stats.label = runs[r].label;
        for (const auto& t : all_traces[r].per_seed)
            stats.final_hvs.push_back(t.back());
        stats.median = median_of(stats.final_hvs);
        stats.q25 = quantile_of(stats.final_hvs, 0.25);
        stats.q75 = quantile_of(stats.final_hvs, 0.75);
        stats.iqr = stats.q75 - stats.q25;
        ordered_json j;
        j["label"] = stats.label;
        j["final_hv_per_seed"] = stats.final_hvs;
        j["median_final_hv"] = stats.median;
        j["q25"] = stats.q25;
        j["q75"] = stats.q75;
        j["iqr"] = stats.iqr;
        stats_json.push_back(std::move(j));
        report.runs.push_back(std::move(stats));
    }

    ordered_json out;
    out["shared_reference"] = reference;
    out["problem"] = runs[0].identity.at("problem");
    out["runs"] = std::move(stats_json);
    std::ofstream json_out(out_dir / "comparison.json", std::ios::binary);
    json_out << out.dump(2) << '\n';

    return report;
}

} // namespace mobopt
