#include "mobopt/config.hpp"

#include <algorithm>
#include <limits>
#include <set>

#include "mobopt/errors.hpp"
#include "mobopt/toml.hpp"

namespace mobopt {

namespace {

void expect_keys(const toml::Table& table, const std::set<std::string>& allowed,
                 const std::string& where) {
    for (const auto& [key, value] : table)
        if (!allowed.count(key))
            throw ConfigError("unknown key '" + key + "' in [" + where + "]");
}

double number_or(const toml::Table& t, const std::string& key, double fallback) {
    const auto it = t.find(key);
    return it == t.end() ? fallback : it->second.as_number();
}

int int_or(const toml::Table& t, const std::string& key, int fallback) {
    const auto it = t.find(key);
    return it == t.end() ? fallback : static_cast<int>(it->second.as_integer());
}

bool bool_or(const toml::Table& t, const std::string& key, bool fallback) {
    const auto it = t.find(key);
    return it == t.end() ? fallback : it->second.as_bool();
}

std::string string_or(const toml::Table& t, const std::string& key,
                      const std::string& fallback) {
    const auto it = t.find(key);
    return it == t.end() ? fallback : it->second.as_string();
}

std::vector<double> number_array(const toml::Value& v) {
    std::vector<double> out;
    for (const auto& item : v.as_array())
        out.push_back(item.as_number());
    return out;
}

Parameter parse_parameter(const toml::Table& t) {
    expect_keys(t, {"name", "lower", "upper", "scale"}, "problem.params");
    Parameter p;
    p.name = t.at("name").as_string();
    p.lower = t.at("lower").as_number();
    p.upper = t.at("upper").as_number();
    const std::string scale = string_or(t, "scale", "linear");
    if (scale == "linear")
        p.scale = Scale::Linear;
    else if (scale == "log")
        p.scale = Scale::Log;
    else
        throw ConfigError("parameter scale must be 'linear' or 'log', got '" + scale + "'");
    return p;
}

Objective parse_objective(const toml::Table& t) {
    expect_keys(t, {"name", "direction", "bound", "normalizer"}, "problem.objectives");
    Objective o;
    o.name = t.at("name").as_string();
    const std::string dir = string_or(t, "direction", "minimize");
    if (dir == "minimize")
        o.direction = Direction::Minimize;
    else if (dir == "maximize")
        o.direction = Direction::Maximize;
    else
        throw ConfigError("objective direction must be 'minimize' or 'maximize'");
    o.constraint_bound = o.direction == Direction::Minimize
                             ? std::numeric_limits<double>::infinity()
                             : -std::numeric_limits<double>::infinity();
    if (const auto it = t.find("bound"); it != t.end())
        o.constraint_bound = it->second.as_number();
    o.normalizer = number_or(t, "normalizer", 1.0);
    return o;
}

} // namespace

void RunConfig::validate() const {
    if (budget < 1)
        throw ConfigError("run: budget must be >= 1");
    if (n_priors < 1 || n_priors >= budget)
        throw ConfigError("run: need 1 <= n_priors < budget");
    if (seeds.empty())
        throw ConfigError("run: seeds must be non-empty");
    if (solver.id != "ars" && solver.id != "parego" && solver.id != "random")
        throw ConfigError("solver id must be one of ars|parego|random, got '" +
                          solver.id + "'");
    if (solver.base_samples < 1)
        throw ConfigError("solver: base_samples must be >= 1");
    solver.ars.validate();
}

RunConfig load_run_config(const std::string& path) {
    const toml::Value root = toml::parse_file(path);
    expect_keys(root.as_table(), {"problem", "solver", "run"}, "config");
    RunConfig cfg;

    if (const auto* problem = toml::find(root, "problem")) {
        const auto& t = problem->as_table();
        expect_keys(t,
                    {"id", "dim", "objectives", "command", "timeout_seconds", "params",
                     "reference"},
                    "problem");
        cfg.problem.id = string_or(t, "id", cfg.problem.id);
        if (const auto it = t.find("dim"); it != t.end())
            cfg.problem.params["dim"] = it->second.as_number();
        if (const auto it = t.find("objectives"); it != t.end()) {
            if (it->second.is_array()) {
                for (const auto& item : it->second.as_array())
                    cfg.problem.external_objectives.push_back(
                        parse_objective(item.as_table()));
            } else {
                cfg.problem.params["objectives"] = it->second.as_number();
            }
        }
        cfg.problem.command = string_or(t, "command", "");
        cfg.problem.timeout_seconds = number_or(t, "timeout_seconds", 3600.0);
        if (const auto it = t.find("params"); it != t.end())
            for (const auto& item : it->second.as_array())
                cfg.problem.external_params.push_back(parse_parameter(item.as_table()));
        if (const auto it = t.find("reference"); it != t.end())
            cfg.problem.reference = number_array(it->second);
    }

    if (const auto* solver = toml::find(root, "solver")) {
        const auto& t = solver->as_table();
        expect_keys(t, {"id", "base_samples", "quasi_base_samples", "ars", "parego", "gp"},
                    "solver");
        cfg.solver.id = string_or(t, "id", cfg.solver.id);
        cfg.solver.base_samples = int_or(t, "base_samples", cfg.solver.base_samples);
        cfg.solver.quasi_base_samples =
            bool_or(t, "quasi_base_samples", cfg.solver.quasi_base_samples);

        if (const auto it = t.find("ars"); it != t.end()) {
            const auto& a = it->second.as_table();
            expect_keys(a,
                        {"n_directions", "top_k_fraction", "horizon", "learning_rate",
                         "exploration_noise", "n_agents", "max_train_steps", "step_scale"},
                        "solver.ars");
            auto& ars = cfg.solver.ars;
            ars.n_directions = int_or(a, "n_directions", ars.n_directions);
            ars.top_k_fraction = number_or(a, "top_k_fraction", ars.top_k_fraction);
            ars.horizon = int_or(a, "horizon", ars.horizon);
            ars.learning_rate = number_or(a, "learning_rate", ars.learning_rate);
            ars.exploration_noise = number_or(a, "exploration_noise", ars.exploration_noise);
            ars.n_agents = int_or(a, "n_agents", ars.n_agents);
            ars.max_train_steps = int_or(a, "max_train_steps", ars.max_train_steps);
            ars.step_scale = number_or(a, "step_scale", ars.step_scale);
        }
        if (const auto it = t.find("parego"); it != t.end()) {
            const auto& pt = it->second.as_table();
            expect_keys(pt, {"n_starts", "tolerance"}, "solver.parego");
            cfg.solver.parego.n_starts = int_or(pt, "n_starts", cfg.solver.parego.n_starts);
            cfg.solver.parego.tolerance =
                number_or(pt, "tolerance", cfg.solver.parego.tolerance);
        }
        if (const auto it = t.find("gp"); it != t.end()) {
            const auto& g = it->second.as_table();
            expect_keys(g, {"restarts", "max_iters", "learning_rate"}, "solver.gp");
            cfg.solver.gp.restarts = int_or(g, "restarts", cfg.solver.gp.restarts);
            cfg.solver.gp.max_iters = int_or(g, "max_iters", cfg.solver.gp.max_iters);
            cfg.solver.gp.learning_rate =
                number_or(g, "learning_rate", cfg.solver.gp.learning_rate);
        }
    }

    if (const auto* run = toml::find(root, "run")) {
        const auto& t = run->as_table();
        expect_keys(t, {"budget", "n_priors", "seeds", "out_dir"}, "run");
        cfg.budget = int_or(t, "budget", cfg.budget);
        cfg.n_priors = int_or(t, "n_priors", cfg.n_priors);
        if (const auto it = t.find("seeds"); it != t.end()) {
            cfg.seeds.clear();
            for (const auto& s : it->second.as_array())
                cfg.seeds.push_back(static_cast<std::uint64_t>(s.as_integer()));
        }
        cfg.out_dir = string_or(t, "out_dir", cfg.out_dir);
    }

    cfg.validate();
    return cfg;
}

Problem instantiate_problem(const ProblemSettings& settings) {
    Problem problem = [&] {
        if (settings.id == "external") {
            if (settings.command.empty())
                throw ConfigError("external problem requires a command");
            if (settings.external_params.empty() || settings.external_objectives.empty())
                throw ConfigError("external problem requires params and objectives");
            SearchSpace space(settings.external_params);
            ObjectiveSpec objectives(settings.external_objectives);
            std::vector<double> reference(
                static_cast<std::size_t>(objectives.count()), 1.0);
            return make_external_problem(
                {settings.command, settings.timeout_seconds}, std::move(space),
                std::move(objectives), std::move(reference));
        }
        return make_problem(settings.id, settings.params);
    }();
    if (settings.reference) {
        if (settings.reference->size() !=
            static_cast<std::size_t>(problem.objectives.count()))
            throw ConfigError("reference override length does not match objectives");
        problem.default_reference = *settings.reference;
    }
    return problem;
}

} // namespace mobopt
