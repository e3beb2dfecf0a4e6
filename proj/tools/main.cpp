#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "mobopt/compare.hpp"
#include "mobopt/config.hpp"
#include "mobopt/errors.hpp"
#include "mobopt/runner.hpp"

namespace {

std::vector<double> parse_csv_vector(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(std::stod(item));
    if (out.empty())
        throw mobopt::ArgumentError("empty reference vector");
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-objective Bayesian optimization with an ARS policy ensemble"};
    app.require_subcommand(1);

    // run
    std::string config_path;
    std::string solver_override;
    std::string out_override;
    std::uint64_t seed_override = 0;
    bool seed_set = false;
    int budget_override = 0;
    auto* run_cmd = app.add_subcommand("run", "Execute an optimization run");
    run_cmd->add_option("--config", config_path, "TOML run configuration")
        ->required()
        ->check(CLI::ExistingFile);
    run_cmd->add_option("--seed", seed_override, "Run a single seed instead of the configured list")
        ->each([&seed_set](const std::string&) { seed_set = true; });
    run_cmd->add_option("--solver", solver_override, "Override the solver id (ars|parego|random)");
    run_cmd->add_option("--budget", budget_override, "Override the sample budget");
    run_cmd->add_option("--out", out_override, "Override the output directory");

    // compare
    std::vector<std::string> run_dirs;
    std::string compare_out;
    auto* compare_cmd = app.add_subcommand("compare", "Recompute hypervolume traces of finished runs under a shared reference point");
    compare_cmd->add_option("--runs", run_dirs, "Run directories to compare")
        ->required()
        ->expected(-1);
    compare_cmd->add_option("--out", compare_out, "Report output directory")->required();

    // hv
    std::string archive_path;
    std::string ref_text;
    auto* hv_cmd = app.add_subcommand("hv", "Feasible-front hypervolume of a persisted archive");
    hv_cmd->add_option("--archive", archive_path, "archive.jsonl file")
        ->required()
        ->check(CLI::ExistingFile);
    hv_cmd->add_option("--ref", ref_text, "Reference point, comma separated (normalized space)")
        ->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd) {
            mobopt::RunConfig config = mobopt::load_run_config(config_path);
            if (!solver_override.empty())
                config.solver.id = solver_override;
            if (budget_override > 0)
                config.budget = budget_override;
            if (!out_override.empty())
                config.out_dir = out_override;
            if (seed_set)
                config.seeds = {seed_override};
            config.validate();

            const auto results = mobopt::run(config);
            for (const auto& r : results)
                std::cout << "seed " << r.seed << ": final_hv="
                          << mobopt::format_double(r.final_hv) << " failed=" << r.n_failed
                          << " dir=" << r.dir.string() << '\n';
        } else if (*compare_cmd) {
            std::vector<std::filesystem::path> dirs(run_dirs.begin(), run_dirs.end());
            const auto report = mobopt::compare_runs(dirs, compare_out);
            for (const auto& r : report.runs)
                std::cout << r.label << ": median_final_hv="
                          << mobopt::format_double(r.median)
                          << " iqr=" << mobopt::format_double(r.iqr) << '\n';
        } else if (*hv_cmd) {
            const auto records = mobopt::read_archive_jsonl(archive_path);
            const auto ref = parse_csv_vector(ref_text);
            std::cout << mobopt::format_double(mobopt::archive_hypervolume(records, ref))
                      << '\n';
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
