#include "mobopt/runner.hpp"

#include <chrono>
#include <limits>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "mobopt/acquisition.hpp"
#include "mobopt/ars.hpp"
#include "mobopt/baselines.hpp"
#include "mobopt/errors.hpp"
#include "mobopt/hypervolume.hpp"
#include "mobopt/parallel.hpp"
#include "mobopt/pareto.hpp"
#include "mobopt/rng.hpp"

namespace mobopt {

using nlohmann::ordered_json;

namespace {

double elapsed_seconds(const std::chrono::steady_clock::time_point& start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

Eigen::VectorXd uniform_unit_point(int dim, Rng& rng) {
    Eigen::VectorXd x(dim);
    for (int d = 0; d < dim; ++d)
        x(d) = rng.uniform();
    return x;
}

struct SampleOutcome {
    std::vector<double> x_raw;
    Source source = Source::Solver;
    Eigen::VectorXd lambda;
    bool fallback = false;
};

/// One proposal of the configured solver for sample index i.
SampleOutcome propose_next(const Problem& problem, const RunConfig& config,
                           const ParetoArchive& archive, const Rng& master, int sample) {
    const SearchSpace& space = problem.space;
    const int n = problem.objectives.count();
    SampleOutcome out;

    if (config.solver.id == "random") {
        Rng rng = master.stream("solver", static_cast<std::uint64_t>(sample));
        out.x_raw = random_point(space, rng);
        out.source = Source::Baseline;
        return out;
    }

    // Informed solvers: fit the per-objective GPs on all successful samples.
    const auto& evals = archive.evaluations();
    const auto m = static_cast<Eigen::Index>(evals.size());
    Eigen::MatrixXd x_unit(m, space.dimension());
    Eigen::MatrixXd y_norm(m, n);
    for (Eigen::Index r = 0; r < m; ++r) {
        const auto u = space.to_unit(evals[static_cast<std::size_t>(r)].x);
        for (int d = 0; d < space.dimension(); ++d)
            x_unit(r, d) = u[static_cast<std::size_t>(d)];
        for (int j = 0; j < n; ++j)
            y_norm(r, j) = evals[static_cast<std::size_t>(r)].f_norm[static_cast<std::size_t>(j)];
    }

    GpModel model;
    try {
        model = GpModel::fit(x_unit, y_norm, config.solver.gp,
                             master.stream("gp", static_cast<std::uint64_t>(sample)));
    } catch (const ConditioningError& e) {
        std::cerr << "[mobopt] warn: sample " << sample << ": " << e.what()
                  << "; proposing uniformly at random\n";
        Rng rng = master.stream("gp_fallback", static_cast<std::uint64_t>(sample));
        const Eigen::VectorXd u = uniform_unit_point(space.dimension(), rng);
        out.x_raw = space.to_raw(std::vector<double>(u.data(), u.data() + u.size()));
        out.source = config.solver.id == "ars" ? Source::Solver : Source::Baseline;
        out.fallback = true;
        return out;
    }

    Rng lambda_rng = master.stream("lambda", static_cast<std::uint64_t>(sample));
    const ScalarizationWeights weights = draw_weights(lambda_rng, n);
    const Incumbent incumbent = Incumbent::from_archive(archive, weights);
    BaseSamples base;
    if (config.solver.quasi_base_samples) {
        base = BaseSamples::quasi_random(config.solver.base_samples, n);
    } else {
        Rng base_rng = master.stream("base", static_cast<std::uint64_t>(sample));
        base = BaseSamples::standard_normal(config.solver.base_samples, n, base_rng);
    }
    out.lambda = weights.lambda;

    Eigen::VectorXd x_unit_prop;
    if (config.solver.id == "ars") {
        const SurrogateReward surrogate{&model, &base, weights, incumbent};
        const Proposal p =
            ars_propose(archive, space, surrogate, config.solver.ars,
                        master.stream("ars", static_cast<std::uint64_t>(sample)));
        if (p.fallback)
            std::cerr << "[mobopt] warn: sample " << sample
                      << ": degenerate reward surface, proposing uniformly at random\n";
        x_unit_prop = p.x_unit;
        out.source = Source::Solver;
        out.fallback = p.fallback;
    } else { // parego
        const ParegoProposal p =
            parego_propose(model, space, base, weights, incumbent,
                           master.stream("parego", static_cast<std::uint64_t>(sample)),
                           config.solver.parego);
        if (p.fallback)
            std::cerr << "[mobopt] warn: sample " << sample
                      << ": flat EI surface, proposing uniformly at random\n";
        x_unit_prop = p.x_unit;
        out.source = Source::Baseline;
        out.fallback = p.fallback;
    }
    out.x_raw = space.to_raw(
        std::vector<double>(x_unit_prop.data(), x_unit_prop.data() + x_unit_prop.size()));
    return out;
}

ordered_json objectives_json(const ObjectiveSpec& objectives) {
    ordered_json arr = ordered_json::array();
    for (const auto& o : objectives.objectives()) {
        ordered_json j;
        j["name"] = o.name;
        j["direction"] = o.direction == Direction::Maximize ? "maximize" : "minimize";
        if (o.constrained())
            j["bound"] = o.constraint_bound;
        j["normalizer"] = o.normalizer;
        arr.push_back(std::move(j));
    }
    return arr;
}

} // namespace

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_archive_jsonl(const std::filesystem::path& path,
                         const std::vector<SampleRecord>& records,
                         const ObjectiveSpec& objectives) {
    (void)objectives;
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw ConfigError("cannot write archive file " + path.string());
    for (const auto& rec : records) {
        ordered_json j;
        j["index"] = rec.index;
        j["x"] = rec.x;
        if (rec.evaluation) {
            j["f_raw"] = rec.evaluation->f_raw;
            j["f_norm"] = rec.evaluation->f_norm;
            j["feasible"] = rec.evaluation->feasible;
        } else {
            j["failed"] = true;
            j["error"] = rec.failure_kind;
        }
        j["source"] = source_name(rec.source);
        out << j.dump() << '\n';
    }
}

std::vector<SampleRecord> read_archive_jsonl(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("cannot read archive file " + path.string());
    std::vector<SampleRecord> records;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        const auto j = ordered_json::parse(line);
        SampleRecord rec;
        rec.index = j.at("index").get<int>();
        rec.x = j.at("x").get<std::vector<double>>();
        rec.source = source_from_name(j.at("source").get<std::string>());
        if (j.contains("failed") && j["failed"].get<bool>()) {
            rec.failure_kind = j.value("error", "unknown");
        } else {
            Evaluation e;
            e.x = rec.x;
            e.f_raw = j.at("f_raw").get<std::vector<double>>();
            e.f_norm = j.at("f_norm").get<std::vector<double>>();
            e.feasible = j.at("feasible").get<bool>();
            e.source = rec.source;
            e.index = rec.index;
            rec.evaluation = std::move(e);
        }
        records.push_back(std::move(rec));
    }
    return records;
}

void write_trace_csv(const std::filesystem::path& path, const std::vector<TraceRow>& rows,
                     const ObjectiveSpec& objectives) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw ConfigError("cannot write trace file " + path.string());
    out << "sample,feasible,hv";
    for (const auto& o : objectives.objectives())
        out << ',' << o.name;
    out << '\n';
    for (const auto& row : rows) {
        out << row.sample << ',' << (row.feasible ? 1 : 0) << ','
            << format_double(row.hv);
        for (int j = 0; j < objectives.count(); ++j) {
            out << ',';
            if (!row.failed)
                out << format_double(row.f_raw[static_cast<std::size_t>(j)]);
        }
        out << '\n';
    }
}

double archive_hypervolume(const std::vector<SampleRecord>& records,
                           const std::vector<double>& reference) {
    std::vector<Evaluation> evals;
    for (const auto& rec : records)
        if (rec.evaluation)
            evals.push_back(*rec.evaluation);
    std::vector<std::vector<double>> pts;
    for (const auto& e : pareto_front(evals, true))
        pts.push_back(e.f_norm);
    if (pts.empty())
        return 0.0;
    if (reference.size() <= 4)
        return hypervolume_exact(pts, reference);
    std::vector<double> lower(reference.size());
    for (std::size_t j = 0; j < lower.size(); ++j) {
        double lo = reference[j];
        for (const auto& p : pts)
            lo = std::min(lo, p[j]);
        lower[j] = lo;
    }
    return hypervolume_mc(pts, reference, lower, 1 << 16, 0x9e3779b9u);
}

SeedRunResult run_seed(const Problem& problem, const RunConfig& config,
                       std::uint64_t seed) {
    config.validate();
    const auto t_run = std::chrono::steady_clock::now();
    const SearchSpace& space = problem.space;
    const ObjectiveSpec& objectives = problem.objectives;
    const int n = objectives.count();
    const std::vector<double>& reference = problem.default_reference;
    if (reference.size() != static_cast<std::size_t>(n))
        throw ConfigError("problem reference point does not match objective count");

    const Rng master(seed);
    ParetoArchive archive(reference);
    std::vector<SampleRecord> records;
    std::vector<TraceRow> trace;
    SeedRunResult result;
    result.seed = seed;

    auto evaluate_and_record = [&](const std::vector<double>& x_raw, Source source,
                                   int index, const Eigen::VectorXd& lambda,
                                   double seconds_so_far) {
        SampleRecord rec;
        rec.x = x_raw;
        rec.source = source;
        rec.index = index;
        TraceRow row;
        row.sample = index;
        row.lambda = lambda;
        try {
            const std::vector<double> f_raw = problem.evaluate(x_raw);
            if (f_raw.size() != static_cast<std::size_t>(n))
                throw EvaluationFailure(EvaluationFailure::Kind::Malformed,
                                        "evaluator returned wrong objective count");
            for (double v : f_raw)
                if (!std::isfinite(v))
                    throw EvaluationFailure(EvaluationFailure::Kind::NonFinite,
                                            "objective value is not finite");
            Evaluation e;
            e.x = x_raw;
            e.f_raw = f_raw;
            e.f_norm = objectives.normalize(f_raw);
            e.feasible = objectives.feasible(f_raw);
            e.source = source;
            e.index = index;
            row.f_raw = e.f_raw;
            row.f_norm = e.f_norm;
            row.feasible = e.feasible;
            rec.evaluation = e;
            archive.append(std::move(e));
        } catch (const EvaluationFailure& e) {
            std::cerr << "[mobopt] warn: sample " << index << " failed ("
                      << e.kind_name() << "): " << e.what() << '\n';
            rec.failure_kind = e.kind_name();
            row.failed = true;
            row.failure_kind = rec.failure_kind;
            ++result.n_failed;
        }
        row.hv = archive.feasible_hypervolume();
        row.seconds = seconds_so_far;
        records.push_back(std::move(rec));
        trace.push_back(std::move(row));
    };

    // Latin-Hypercube prior phase.
    {
        Rng prior_rng = master.stream("prior");
        const auto priors = latin_hypercube(config.n_priors, space, prior_rng);
        for (int i = 0; i < config.n_priors; ++i) {
            const auto t0 = std::chrono::steady_clock::now();
            evaluate_and_record(priors[static_cast<std::size_t>(i)], Source::Prior, i, {},
                                elapsed_seconds(t0));
        }
    }

    // Solver phase.
    for (int i = config.n_priors; i < config.budget; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        SampleOutcome outcome;
        if (archive.size() < 2 && config.solver.id != "random") {
            // Not enough successful samples to fit a GP yet.
            Rng rng = master.stream("bootstrap", static_cast<std::uint64_t>(i));
            outcome.x_raw = random_point(space, rng);
            outcome.source =
                config.solver.id == "ars" ? Source::Solver : Source::Baseline;
            outcome.fallback = true;
        } else {
            outcome = propose_next(problem, config, archive, master, i);
        }
        if (outcome.fallback)
            ++result.n_fallback;
        evaluate_and_record(outcome.x_raw, outcome.source, i, outcome.lambda,
                            elapsed_seconds(t0));
    }

    // Persist.
    const std::filesystem::path dir =
        std::filesystem::path(config.out_dir) / ("seed_" + std::to_string(seed));
    std::filesystem::create_directories(dir);
    write_archive_jsonl(dir / "archive.jsonl", records, objectives);
    write_trace_csv(dir / "trace.csv", trace, objectives);

    result.dir = dir;
    result.final_hv = trace.empty() ? 0.0 : trace.back().hv;
    result.wall_seconds = elapsed_seconds(t_run);

    ordered_json summary;
    summary["problem"] = problem.id;
    summary["solver"] = config.solver.id;
    summary["seed"] = seed;
    summary["budget"] = config.budget;
    summary["n_priors"] = config.n_priors;
    summary["objectives"] = objectives_json(objectives);
    summary["reference"] = reference;
    summary["final_hv"] = result.final_hv;
    ordered_json best;
    for (int j = 0; j < n; ++j) {
        const auto& o = objectives.objective(j);
        double best_v = std::numeric_limits<double>::quiet_NaN();
        for (const auto& rec : records) {
            if (!rec.evaluation)
                continue;
            const double v = rec.evaluation->f_raw[static_cast<std::size_t>(j)];
            if (std::isnan(best_v) ||
                (o.direction == Direction::Minimize ? v < best_v : v > best_v))
                best_v = v;
        }
        best[o.name] = best_v;
    }
    summary["best_per_objective"] = std::move(best);
    summary["n_failed"] = result.n_failed;
    summary["n_fallback"] = result.n_fallback;
    summary["wall_time_seconds"] = result.wall_seconds;
    std::ofstream out(dir / "summary.json", std::ios::binary);
    out << summary.dump(2) << '\n';

    return result;
}

std::vector<SeedRunResult> run(const Problem& problem, const RunConfig& config) {
    std::vector<SeedRunResult> results(config.seeds.size());
    parallel_for(config.seeds.size(), [&](std::size_t i) {
        results[i] = run_seed(problem, config, config.seeds[i]);
    });
    return results;
}

std::vector<SeedRunResult> run(const RunConfig& config) {
    const Problem problem = instantiate_problem(config.problem);
    if (!config.problem.command.empty()) {
        // External evaluators are single-in-flight: run seeds sequentially.
        std::vector<SeedRunResult> results;
        for (const auto seed : config.seeds)
            results.push_back(run_seed(problem, config, seed));
        return results;
    }
    return run(problem, config);
}

} // namespace mobopt
