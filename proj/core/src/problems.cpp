#include "mobopt/problems.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>

#include "mobopt/errors.hpp"

namespace mobopt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct GaussianTerm {
    double amplitude;
    double width;
    double c0;
    double c1;
};

// Landscape coefficient table: amplitude * exp(-width * ((t0-c0)^2 + (t1-c1)^2)).
// The -4 pit at (15, 5) is the global minimum.
constexpr GaussianTerm kPassinoTerms[] = {
    {5.0, 0.10, 15.0, 20.0},
    {-2.0, 0.08, 20.0, 15.0},
    {3.0, 0.08, 25.0, 10.0},
    {2.0, 0.10, 10.0, 10.0},
    {-2.0, 0.50, 5.0, 10.0},
    {-4.0, 0.10, 15.0, 5.0},
    {-2.0, 0.50, 8.0, 25.0},
    {-2.0, 0.50, 21.0, 25.0},
    {2.0, 0.50, 25.0, 16.0},
    {2.0, 0.50, 5.0, 14.0},
};

} // namespace

double passino_landscape(double t0, double t1) {
    if (t0 < 0.0 || t0 > 30.0 || t1 < 0.0 || t1 > 30.0) {
        std::cerr << "[mobopt] warn: passino point (" << t0 << ", " << t1
                  << ") outside [0,30]^2, clipping\n";
        t0 = std::clamp(t0, 0.0, 30.0);
        t1 = std::clamp(t1, 0.0, 30.0);
    }
    double v = 0.0;
    for (const auto& term : kPassinoTerms) {
        const double d0 = t0 - term.c0;
        const double d1 = t1 - term.c1;
        v += term.amplitude * std::exp(-term.width * (d0 * d0 + d1 * d1));
    }
    return v;
}

std::vector<double> zdt1(const std::vector<double>& x) {
    if (x.empty())
        throw ArgumentError("zdt1: empty point");
    const double f1 = x[0];
    double s = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i)
        s += x[i];
    const double g =
        x.size() > 1 ? 1.0 + 9.0 * s / static_cast<double>(x.size() - 1) : 1.0;
    const double f2 = g * (1.0 - std::sqrt(f1 / g));
    return {f1, f2};
}

double zdt1_front_f2(double f1) { return 1.0 - std::sqrt(f1); }

std::vector<double> dtlz2(const std::vector<double>& x, int n_objectives) {
    const int d = static_cast<int>(x.size());
    if (n_objectives < 2 || d < n_objectives)
        throw ArgumentError("dtlz2: need dim >= n_objectives >= 2");
    double g = 0.0;
    for (int i = n_objectives - 1; i < d; ++i)
        g += (x[static_cast<std::size_t>(i)] - 0.5) * (x[static_cast<std::size_t>(i)] - 0.5);

    std::vector<double> f(static_cast<std::size_t>(n_objectives));
    constexpr double half_pi = 1.5707963267948966;
    for (int m = 0; m < n_objectives; ++m) {
        double v = 1.0 + g;
        for (int i = 0; i < n_objectives - 1 - m; ++i)
            v *= std::cos(x[static_cast<std::size_t>(i)] * half_pi);
        if (m > 0)
            v *= std::sin(x[static_cast<std::size_t>(n_objectives - 1 - m)] * half_pi);
        f[static_cast<std::size_t>(m)] = v;
    }
    return f;
}

std::vector<double> synthetic_dnn_cost(const std::vector<double>& x) {
    if (x.size() != 12)
        throw DimensionError("synthetic_dnn_cost: expects 12 parameters");
    const double epochs = x[0];
    const double batch_size = x[1];
    const double lr = x[2];
    const double momentum = x[3];
    const double lr_schedule = x[4];
    const double lr_gamma = x[5];
    const double weight_decay = x[6];
    const double pruning_start = x[7];
    const double pruning_end = x[8];
    const double pruning_steps = x[9];
    const double sparsity_conv = x[10];
    const double sparsity_linear = x[11];

    const double keep_conv = 1.0 - sparsity_conv;
    const double keep_linear = 1.0 - sparsity_linear;

    // Cost side: conv blocks scale quadratically with kept filters (both
    // input and output channels shrink), the classifier head bilinearly.
    const double rom_bytes =
        4.0e6 * keep_conv * keep_conv + 2.0e6 * keep_conv * keep_linear + 5.0e4;
    const double ram_bytes = 6.0e5 * keep_conv + 250.0 * batch_size + 1.0e4;
    const double flops =
        8.0e9 * keep_conv * keep_conv + 1.0e8 * keep_conv * keep_linear + 1.0e6;

    // Accuracy side: longer training and a well-tuned learning rate help; a
    // gradual pruning schedule softens the damage of aggressive sparsity.
    const double lr_decades = std::log10(lr) + 3.0; // 0 at the 1e-3 sweet spot
    const double schedule_quality =
        (pruning_end - pruning_start) * std::min(pruning_steps, 10.0) / 10.0;
    double logit = 1.2;
    logit += 1.1 * (epochs - 100.0) / 400.0;
    logit -= 0.9 * lr_decades * lr_decades / 4.0;
    logit += 0.25 * (momentum - 0.7) / 0.29;
    logit -= 2.2 * sparsity_conv * sparsity_conv * (1.6 - schedule_quality);
    logit -= 0.8 * sparsity_linear * sparsity_linear;
    logit -= 0.35 * std::pow((lr_gamma - 0.65) / 0.25, 2.0);
    logit -= 0.2 * std::pow((lr_schedule - 0.65) / 0.25, 2.0);
    logit -= 0.3 * (weight_decay - 0.6) / 0.39;
    const double accuracy = 1.0 / (1.0 + std::exp(-logit));

    return {accuracy, rom_bytes, ram_bytes, flops};
}

Problem make_passino2d() {
    Problem p{
        "passino2d",
        SearchSpace({{"theta0", 0.0, 30.0, Scale::Linear},
                     {"theta1", 0.0, 30.0, Scale::Linear}}),
        // Single-objective landscape; the scalar value is duplicated to fit
        // the n >= 2 objective contract without changing the argmin.
        ObjectiveSpec({{"value", Direction::Minimize, kInf, 5.0},
                       {"value_dup", Direction::Minimize, kInf, 5.0}}),
        {},
        std::vector<double>{15.0, 5.0},
        {1.0, 1.0},
    };
    p.evaluate = [](const std::vector<double>& x) {
        const double v = passino_landscape(x[0], x[1]);
        return std::vector<double>{v, v};
    };
    return p;
}

Problem make_zdt1(int dim) {
    if (dim < 2)
        throw ArgumentError("zdt1: dim must be >= 2");
    std::vector<Parameter> params;
    for (int i = 0; i < dim; ++i)
        params.push_back({"x" + std::to_string(i + 1), 0.0, 1.0, Scale::Linear});
    Problem p{
        "zdt1",
        SearchSpace(std::move(params)),
        ObjectiveSpec({{"f1", Direction::Minimize, kInf, 1.0},
                       {"f2", Direction::Minimize, kInf, 10.0}}),
        zdt1,
        std::nullopt,
        {1.0, 1.0},
    };
    return p;
}

Problem make_dtlz2(int dim, int n_objectives) {
    std::vector<Parameter> params;
    for (int i = 0; i < dim; ++i)
        params.push_back({"x" + std::to_string(i + 1), 0.0, 1.0, Scale::Linear});
    const double fmax = 1.0 + 0.25 * static_cast<double>(dim - n_objectives + 1);
    std::vector<Objective> objectives;
    for (int m = 0; m < n_objectives; ++m)
        objectives.push_back({"f" + std::to_string(m + 1), Direction::Minimize, kInf, fmax});
    Problem p{
        "dtlz2",
        SearchSpace(std::move(params)),
        ObjectiveSpec(std::move(objectives)),
        [n_objectives](const std::vector<double>& x) { return dtlz2(x, n_objectives); },
        std::nullopt,
        std::vector<double>(static_cast<std::size_t>(n_objectives), 1.0),
    };
    return p;
}

Problem make_synthetic_dnn_cost() {
    constexpr double kRomBound = 1048576.0;  // 1 MB
    constexpr double kRamBound = 262144.0;   // 256 KB
    constexpr double kFlopsBound = 1.0e9;
    Problem p{
        "synthetic_dnn_cost",
        SearchSpace({
            {"epochs", 100.0, 500.0, Scale::Linear},
            {"batch_size", 20.0, 200.0, Scale::Linear},
            {"learning_rate", 1e-5, 1e-2, Scale::Log},
            {"momentum", 0.7, 0.99, Scale::Log},
            {"lr_schedule", 0.4, 0.9, Scale::Linear},
            {"lr_gamma", 0.4, 0.9, Scale::Linear},
            {"weight_decay", 0.6, 0.99, Scale::Log},
            {"pruning_start", 0.0, 0.6, Scale::Linear},
            {"pruning_end", 0.8, 0.95, Scale::Linear},
            {"pruning_steps", 1.0, 20.0, Scale::Linear},
            {"sparsity_conv", 0.1, 0.99, Scale::Linear},
            {"sparsity_linear", 0.1, 0.99, Scale::Linear},
        }),
        ObjectiveSpec({
            {"accuracy", Direction::Maximize, -kInf, 1.0},
            {"rom_bytes", Direction::Minimize, kRomBound, kRomBound},
            {"ram_bytes", Direction::Minimize, kRamBound, kRamBound},
            {"flops", Direction::Minimize, kFlopsBound, kFlopsBound},
        }),
        synthetic_dnn_cost,
        std::nullopt,
        {1.0, 1.0, 1.0, 1.0},
    };
    return p;
}

Problem make_problem(const std::string& id, const std::map<std::string, double>& params) {
    auto get = [&params](const std::string& key, double fallback) {
        const auto it = params.find(key);
        return it == params.end() ? fallback : it->second;
    };
    if (id == "passino2d")
        return make_passino2d();
    if (id == "zdt1")
        return make_zdt1(static_cast<int>(get("dim", 6)));
    if (id == "dtlz2")
        return make_dtlz2(static_cast<int>(get("dim", 7)),
                          static_cast<int>(get("objectives", 3)));
    if (id == "synthetic_dnn_cost" || id == "dnn")
        return make_synthetic_dnn_cost();
    throw ConfigError("unknown problem id '" + id + "'");
}

} // namespace mobopt
