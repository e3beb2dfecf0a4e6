#include "mobopt/ars.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <numeric>

#include "mobopt/errors.hpp"
#include "mobopt/parallel.hpp"

namespace mobopt {

namespace {

constexpr double kSigmaFloor = 1e-8;

Eigen::VectorXd clip_unit(Eigen::VectorXd x) {
    for (Eigen::Index i = 0; i < x.size(); ++i)
        x(i) = std::clamp(x(i), 0.0, 1.0);
    return x;
}

Eigen::VectorXd to_unit_vec(const SearchSpace& space, const std::vector<double>& raw) {
    const auto u = space.to_unit(raw);
    return Eigen::Map<const Eigen::VectorXd>(u.data(), static_cast<Eigen::Index>(u.size()));
}

/// Lloyd's k-means on unit-cube points; returns centroids of the best of
/// `restarts` runs (k-means++ seeding, lowest within-cluster sum of squares).
std::vector<Eigen::VectorXd> kmeans(const std::vector<Eigen::VectorXd>& points, int k,
                                    int restarts, int iters, Rng& rng) {
    const std::size_t n = points.size();
    assert(n >= static_cast<std::size_t>(k));
    std::vector<Eigen::VectorXd> best_centroids;
    double best_inertia = std::numeric_limits<double>::infinity();

    for (int restart = 0; restart < restarts; ++restart) {
        // k-means++ seeding
        std::vector<Eigen::VectorXd> centroids;
        centroids.push_back(points[rng.below(n)]);
        std::vector<double> dist2(n);
        while (static_cast<int>(centroids.size()) < k) {
            double total = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                double d = std::numeric_limits<double>::infinity();
                for (const auto& c : centroids)
                    d = std::min(d, (points[i] - c).squaredNorm());
                dist2[i] = d;
                total += d;
            }
            if (total <= 0.0) {
                centroids.push_back(points[rng.below(n)]);
                continue;
            }
            double target = rng.uniform() * total;
            std::size_t pick = n - 1;
            for (std::size_t i = 0; i < n; ++i) {
                target -= dist2[i];
                if (target <= 0.0) {
                    pick = i;
                    break;
                }
            }
            centroids.push_back(points[pick]);
        }

        std::vector<int> assign(n, 0);
        for (int it = 0; it < iters; ++it) {
            bool changed = false;
            for (std::size_t i = 0; i < n; ++i) {
                int bestc = 0;
                double bestd = std::numeric_limits<double>::infinity();
                for (int c = 0; c < k; ++c) {
                    const double d = (points[i] - centroids[static_cast<std::size_t>(c)]).squaredNorm();
                    if (d < bestd) {
                        bestd = d;
                        bestc = c;
                    }
                }
                if (assign[i] != bestc) {
                    assign[i] = bestc;
                    changed = true;
                }
            }
            for (int c = 0; c < k; ++c) {
                Eigen::VectorXd sum = Eigen::VectorXd::Zero(points[0].size());
                int count = 0;
                for (std::size_t i = 0; i < n; ++i) {
                    if (assign[i] == c) {
                        sum += points[i];
                        ++count;
                    }
                }
                if (count > 0)
                    centroids[static_cast<std::size_t>(c)] = sum / count;
            }
            if (!changed)
                break;
        }

        double inertia = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            inertia += (points[i] - centroids[static_cast<std::size_t>(assign[i])]).squaredNorm();
        if (inertia < best_inertia) {
            best_inertia = inertia;
            best_centroids = centroids;
        }
    }
    return best_centroids;
}

} // namespace

int ArsConfig::top_k() const {
    const int b = static_cast<int>(
        std::ceil(top_k_fraction * static_cast<double>(n_directions) - 1e-12));
    return std::clamp(b, 1, n_directions);
}

void ArsConfig::validate() const {
    if (n_directions < 1)
        throw ArgumentError("ars config: n_directions must be >= 1");
    if (!(top_k_fraction > 0.0 && top_k_fraction <= 1.0))
        throw ArgumentError("ars config: top_k_fraction must be in (0, 1]");
    if (horizon < 1)
        throw ArgumentError("ars config: horizon must be >= 1");
    if (n_agents < 1)
        throw ArgumentError("ars config: n_agents must be >= 1");
    if (max_train_steps < 0)
        throw ArgumentError("ars config: max_train_steps must be >= 0");
    if (!(step_scale > 0.0))
        throw ArgumentError("ars config: step_scale must be positive");
}

PolicyParams PolicyParams::zeros(int dim) {
    PolicyParams p;
    p.w1 = Eigen::MatrixXd::Zero(kPolicyHiddenSize, dim);
    p.b1 = Eigen::VectorXd::Zero(kPolicyHiddenSize);
    p.w2 = Eigen::MatrixXd::Zero(dim, kPolicyHiddenSize);
    p.b2 = Eigen::VectorXd::Zero(dim);
    return p;
}

PolicyParams PolicyParams::gaussian(int dim, Rng& rng) {
    PolicyParams p = zeros(dim);
    auto fill = [&rng](auto& m) {
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            for (Eigen::Index r = 0; r < m.rows(); ++r)
                m(r, c) = rng.normal();
    };
    fill(p.w1);
    fill(p.b1);
    fill(p.w2);
    fill(p.b2);
    return p;
}

void PolicyParams::add_scaled(const PolicyParams& direction, double scale) {
    w1 += scale * direction.w1;
    b1 += scale * direction.b1;
    w2 += scale * direction.w2;
    b2 += scale * direction.b2;
}

ObservationNormalizer::ObservationNormalizer(int dim)
    : mean_(Eigen::VectorXd::Zero(dim)), m2_(Eigen::VectorXd::Zero(dim)) {}

void ObservationNormalizer::observe(const Eigen::VectorXd& state) {
    ++count_;
    const Eigen::VectorXd delta = state - mean_;
    mean_ += delta / static_cast<double>(count_);
    m2_ += delta.cwiseProduct(state - mean_);
}

Eigen::VectorXd ObservationNormalizer::variance() const {
    if (count_ < 2)
        return Eigen::VectorXd::Ones(mean_.size());
    return m2_ / static_cast<double>(count_);
}

Eigen::VectorXd ObservationNormalizer::normalize(const Eigen::VectorXd& state) const {
    if (count_ < 2)
        return state;
    return (state - mean_).cwiseQuotient((variance().array() + 1e-8).sqrt().matrix());
}

Eigen::VectorXd Policy::act(const Eigen::VectorXd& state) const {
    const Eigen::VectorXd z = normalizer.normalize(state);
    const Eigen::VectorXd hidden =
        (params.w1 * z + params.b1).cwiseMax(0.0);
    return (params.w2 * hidden + params.b2).array().tanh();
}

Rollout rollout(const PolicyParams& params, const ObservationNormalizer& normalizer,
                const Eigen::VectorXd& x0, int horizon, const SurrogateReward& surrogate,
                double step_scale) {
    const Policy policy{params, normalizer};
    Rollout out;
    out.states.reserve(static_cast<std::size_t>(horizon) + 1);
    out.states.push_back(clip_unit(x0));
    for (int t = 0; t < horizon; ++t) {
        const Eigen::VectorXd& x = out.states.back();
        Eigen::VectorXd next = clip_unit(x + step_scale * policy.act(x));
        const double r = surrogate.at(next);
        out.states.push_back(std::move(next));
        out.per_step_rewards.push_back(r);
        out.total_reward += r;
    }
    return out;
}

std::vector<std::size_t> top_directions(const std::vector<double>& reward_pos,
                                        const std::vector<double>& reward_neg, int b) {
    assert(reward_pos.size() == reward_neg.size());
    std::vector<std::size_t> order(reward_pos.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t c) {
        return std::max(reward_pos[a], reward_neg[a]) >
               std::max(reward_pos[c], reward_neg[c]);
    });
    order.resize(std::min<std::size_t>(order.size(), static_cast<std::size_t>(b)));
    return order;
}

void ars_update(PolicyParams& theta, const std::vector<PolicyParams>& directions,
                const std::vector<double>& reward_pos, const std::vector<double>& reward_neg,
                const ArsConfig& config) {
    if (directions.empty() || directions.size() != reward_pos.size() ||
        directions.size() != reward_neg.size())
        throw ArgumentError("ars_update: direction/reward count mismatch");

    const int b = std::min<int>(config.top_k(), static_cast<int>(directions.size()));
    const auto top = top_directions(reward_pos, reward_neg, b);

    // sigma_R over exactly the 2b rewards entering the update (population std).
    double sum = 0.0;
    for (auto k : top)
        sum += reward_pos[k] + reward_neg[k];
    const double mean = sum / (2.0 * static_cast<double>(b));
    double ss = 0.0;
    for (auto k : top) {
        ss += (reward_pos[k] - mean) * (reward_pos[k] - mean);
        ss += (reward_neg[k] - mean) * (reward_neg[k] - mean);
    }
    const double sigma = std::max(std::sqrt(ss / (2.0 * static_cast<double>(b))), kSigmaFloor);

    const double scale = config.learning_rate / (static_cast<double>(b) * sigma);
    for (auto k : top)
        theta.add_scaled(directions[k], scale * (reward_pos[k] - reward_neg[k]));
}

TrainedAgent train_agent_ex(const Eigen::VectorXd& x0, const SurrogateReward& surrogate,
                            const ArsConfig& config, Rng rng) {
    config.validate();
    const int dim = static_cast<int>(x0.size());
    PolicyParams theta = PolicyParams::zeros(dim);
    ObservationNormalizer normalizer(dim);
    bool saw_variation = false;

    const int n = config.n_directions;
    std::vector<PolicyParams> directions;
    std::vector<Rollout> rollouts_pos(static_cast<std::size_t>(n));
    std::vector<Rollout> rollouts_neg(static_cast<std::size_t>(n));
    std::vector<double> reward_pos(static_cast<std::size_t>(n));
    std::vector<double> reward_neg(static_cast<std::size_t>(n));

    for (int step = 0; step < config.max_train_steps; ++step) {
        directions.clear();
        directions.reserve(static_cast<std::size_t>(n));
        for (int k = 0; k < n; ++k)
            directions.push_back(PolicyParams::gaussian(dim, rng));

        // The 2N rollouts see a frozen normalizer, so they are pure and can
        // run in any order; each writes only its own slot.
        parallel_for(static_cast<std::size_t>(2 * n), [&](std::size_t idx) {
            const std::size_t k = idx / 2;
            PolicyParams perturbed = theta;
            const double sign = (idx % 2 == 0) ? 1.0 : -1.0;
            perturbed.add_scaled(directions[k], sign * config.exploration_noise);
            Rollout r = rollout(perturbed, normalizer, x0, config.horizon, surrogate,
                                config.step_scale);
            if (idx % 2 == 0) {
                reward_pos[k] = r.total_reward;
                rollouts_pos[k] = std::move(r);
            } else {
                reward_neg[k] = r.total_reward;
                rollouts_neg[k] = std::move(r);
            }
        });

        for (int k = 0; k < n && !saw_variation; ++k)
            saw_variation = std::abs(reward_pos[static_cast<std::size_t>(k)] -
                                     reward_neg[static_cast<std::size_t>(k)]) > 1e-12 ||
                            std::abs(reward_pos[static_cast<std::size_t>(k)] -
                                     reward_pos[0]) > 1e-12;

        ars_update(theta, directions, reward_pos, reward_neg, config);

        // Fold the states seen this step into the running statistics, in a
        // fixed order so training stays deterministic.
        for (int k = 0; k < n; ++k) {
            for (const auto& s : rollouts_pos[static_cast<std::size_t>(k)].states)
                normalizer.observe(s);
            for (const auto& s : rollouts_neg[static_cast<std::size_t>(k)].states)
                normalizer.observe(s);
        }
    }
    return TrainedAgent{Policy{std::move(theta), std::move(normalizer)},
                        config.max_train_steps, saw_variation};
}

Policy train_agent(const Eigen::VectorXd& x0, const SurrogateReward& surrogate,
                   const ArsConfig& config, Rng rng) {
    return train_agent_ex(x0, surrogate, config, std::move(rng)).policy;
}

std::vector<Eigen::VectorXd> select_initial_states(const ParetoArchive& archive,
                                                   const SearchSpace& space, int n_agents,
                                                   const ScalarizationWeights& weights,
                                                   Rng& rng) {
    if (archive.empty())
        throw ArgumentError("select_initial_states: archive is empty");

    const auto front = archive.pareto_front(true);
    if (front.empty()) {
        // No feasible point yet: fall back to the lowest-scalarized points.
        std::vector<std::pair<double, const Evaluation*>> scored;
        for (const auto& e : archive.evaluations())
            scored.emplace_back(chebyshev_scalarize(e.f_norm, weights), &e);
        std::stable_sort(scored.begin(), scored.end(),
                         [](const auto& a, const auto& b) { return a.first < b.first; });
        std::vector<Eigen::VectorXd> states;
        for (const auto& [s, e] : scored) {
            states.push_back(to_unit_vec(space, e->x));
            if (static_cast<int>(states.size()) == n_agents)
                break;
        }
        return states;
    }

    std::vector<Eigen::VectorXd> members;
    members.reserve(front.size());
    for (const auto& e : front)
        members.push_back(to_unit_vec(space, e.x));

    if (static_cast<int>(members.size()) == n_agents)
        return members;

    if (static_cast<int>(members.size()) < n_agents) {
        // Degenerate fronts (few non-dominated points) cannot seed the whole
        // ensemble; fill the open slots with k-means representatives of the
        // other evaluated points so the policies still compete across the
        // explored space.
        std::vector<Eigen::VectorXd> pool;
        auto collect = [&](bool feasible_only) {
            for (const auto& e : archive.evaluations()) {
                if (feasible_only && !e.feasible)
                    continue;
                const Eigen::VectorXd u = to_unit_vec(space, e.x);
                const bool taken =
                    std::any_of(members.begin(), members.end(), [&](const Eigen::VectorXd& m) {
                        return (m - u).lpNorm<Eigen::Infinity>() < 1e-12;
                    }) ||
                    std::any_of(pool.begin(), pool.end(), [&](const Eigen::VectorXd& m) {
                        return (m - u).lpNorm<Eigen::Infinity>() < 1e-12;
                    });
                if (!taken)
                    pool.push_back(u);
            }
        };
        collect(true);
        if (pool.empty())
            collect(false);
        const int missing = n_agents - static_cast<int>(members.size());
        if (pool.empty())
            return members;
        if (static_cast<int>(pool.size()) <= missing) {
            members.insert(members.end(), pool.begin(), pool.end());
            return members;
        }
        for (const auto& c : kmeans(pool, missing, 10, 100, rng)) {
            std::size_t nearest = 0;
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < pool.size(); ++i) {
                const double d = (pool[i] - c).squaredNorm();
                if (d < best) {
                    best = d;
                    nearest = i;
                }
            }
            const Eigen::VectorXd& pick = pool[nearest];
            if (std::none_of(members.begin(), members.end(), [&](const Eigen::VectorXd& m) {
                    return (m - pick).lpNorm<Eigen::Infinity>() < 1e-12;
                }))
                members.push_back(pick);
        }
        return members;
    }

    const auto centroids = kmeans(members, n_agents, 10, 100, rng);
    std::vector<Eigen::VectorXd> states;
    std::vector<std::size_t> used;
    for (const auto& c : centroids) {
        std::size_t nearest = 0;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < members.size(); ++i) {
            const double d = (members[i] - c).squaredNorm();
            if (d < best) {
                best = d;
                nearest = i;
            }
        }
        if (std::find(used.begin(), used.end(), nearest) == used.end()) {
            used.push_back(nearest);
            states.push_back(members[nearest]);
        }
    }
    return states;
}

std::vector<Proposal> ars_propose_batch(const ParetoArchive& archive,
                                        const SearchSpace& space,
                                        const SurrogateReward& surrogate,
                                        const ArsConfig& config, Rng rng, int batch) {
    config.validate();
    if (batch < 1)
        throw ArgumentError("ars_propose_batch: batch must be >= 1");

    Rng init_rng = rng.stream("init_states");
    const auto initial =
        select_initial_states(archive, space, config.n_agents, surrogate.weights, init_rng);

    struct Candidate {
        Eigen::VectorXd x;
        double reward;
    };
    std::vector<Candidate> candidates;

    std::vector<TrainedAgent> agents;
    agents.reserve(initial.size());
    for (std::size_t l = 0; l < initial.size(); ++l)
        agents.push_back(
            train_agent_ex(initial[l], surrogate, config, rng.stream("agent", l)));

    bool any_steps = false;
    bool any_variation = false;
    for (std::size_t l = 0; l < initial.size(); ++l) {
        any_steps = any_steps || agents[l].steps_run > 0;
        any_variation = any_variation || agents[l].saw_reward_variation;
        const Rollout greedy =
            rollout(agents[l].policy.params, agents[l].policy.normalizer, initial[l],
                    config.horizon, surrogate, config.step_scale);
        for (const auto& s : greedy.states)
            candidates.push_back({s, surrogate.at(s)});
    }

    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto& c : candidates) {
        lo = std::min(lo, c.reward);
        hi = std::max(hi, c.reward);
    }
    // A surrogate with no reward signal anywhere cannot rank candidates;
    // explore instead. A merely stationary greedy rollout is not degenerate.
    const bool degenerate = any_steps && !any_variation && hi - lo <= 1e-12;

    std::vector<Proposal> out;
    if (candidates.empty() || degenerate) {
        // Degenerate reward surface: explore uniformly instead.
        Rng fb = rng.stream("fallback");
        for (int i = 0; i < batch; ++i) {
            Proposal p;
            p.x_unit.resize(space.dimension());
            for (int d = 0; d < space.dimension(); ++d)
                p.x_unit(d) = fb.uniform();
            p.reward = 0.0;
            p.fallback = true;
            out.push_back(std::move(p));
        }
        return out;
    }

    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const Candidate& a, const Candidate& b) { return a.reward > b.reward; });
    for (const auto& c : candidates) {
        const bool duplicate = std::any_of(out.begin(), out.end(), [&](const Proposal& p) {
            return (p.x_unit - c.x).lpNorm<Eigen::Infinity>() < 1e-12;
        });
        if (duplicate)
            continue;
        Proposal p;
        p.x_unit = c.x;
        p.reward = c.reward;
        out.push_back(std::move(p));
        if (static_cast<int>(out.size()) == batch)
            break;
    }
    return out;
}

Proposal ars_propose(const ParetoArchive& archive, const SearchSpace& space,
                     const SurrogateReward& surrogate, const ArsConfig& config, Rng rng) {
    return ars_propose_batch(archive, space, surrogate, config, std::move(rng), 1).front();
}

} // namespace mobopt
