#ifndef MOBOPT_ARS_HPP
#define MOBOPT_ARS_HPP

#include <Eigen/Core>
#include <vector>

#include "mobopt/acquisition.hpp"
#include "mobopt/gp.hpp"
#include "mobopt/objectives.hpp"
#include "mobopt/rng.hpp"
#include "mobopt/search_space.hpp"

namespace mobopt {

/// Two-layer policy width; fixed by the method.
inline constexpr int kPolicyHiddenSize = 64;

struct ArsConfig {
    int n_directions = 3000;     // N
    double top_k_fraction = 0.01;
    int horizon = 4;             // H
    double learning_rate = 1e-3; // alpha
    double exploration_noise = 1e-2; // v
    int n_agents = 5;            // L
    int max_train_steps = 30;
    double step_scale = 0.1;     // delta, fraction of the unit range

    /// b = ceil(top_k_fraction * N), at least 1.
    int top_k() const;
    void validate() const;
};

/// Policy parameters theta, one weight/bias pair per layer. Zero at the
/// start of every training run.
struct PolicyParams {
    Eigen::MatrixXd w1; // hidden x d
    Eigen::VectorXd b1; // hidden
    Eigen::MatrixXd w2; // d x hidden
    Eigen::VectorXd b2; // d

    static PolicyParams zeros(int dim);
    /// i.i.d. standard-normal entries in every layer (a sampling direction).
    static PolicyParams gaussian(int dim, Rng& rng);

    void add_scaled(const PolicyParams& direction, double scale);
};

/// Per-dimension running statistics of states seen during one agent's
/// training. Reset for every outer-loop sample.
class ObservationNormalizer {
public:
    explicit ObservationNormalizer(int dim);

    void observe(const Eigen::VectorXd& state);
    Eigen::VectorXd normalize(const Eigen::VectorXd& state) const;

    long count() const { return count_; }
    const Eigen::VectorXd& mean() const { return mean_; }
    Eigen::VectorXd variance() const;

private:
    long count_ = 0;
    Eigen::VectorXd mean_;
    Eigen::VectorXd m2_;
};

/// A trained policy: parameters plus the observation statistics they were
/// trained under.
struct Policy {
    PolicyParams params;
    ObservationNormalizer normalizer;

    /// tanh(w2 relu(w1 normalize(x) + b1) + b2), componentwise in [-1, 1].
    Eigen::VectorXd act(const Eigen::VectorXd& state) const;
};

struct Rollout {
    std::vector<Eigen::VectorXd> states; // horizon + 1 points in [0,1]^d
    std::vector<double> per_step_rewards;
    double total_reward = 0.0;
};

/// Everything a reward evaluation needs, fixed for one outer-loop sample.
struct SurrogateReward {
    const GpModel* model = nullptr;
    const BaseSamples* base = nullptr;
    ScalarizationWeights weights;
    Incumbent incumbent;

    double at(const Eigen::VectorXd& x_unit) const {
        return mc_reward(*model, x_unit, *base, weights, incumbent);
    }
};

/// Step x_{t+1} = clip(x_t + delta * act(x_t)) for `horizon` steps,
/// scoring each visited state on the surrogate. Deterministic.
Rollout rollout(const PolicyParams& params, const ObservationNormalizer& normalizer,
                const Eigen::VectorXd& x0, int horizon, const SurrogateReward& surrogate,
                double step_scale);

/// One ARS parameter update from evaluated direction pairs: rank directions
/// by max(r+, r-), keep the top b, scale the update by alpha / (b * sigma_R)
/// with sigma_R the standard deviation of the 2b rewards used (floored at
/// 1e-8). Exposed separately so the arithmetic is testable with injected
/// directions and rewards.
void ars_update(PolicyParams& theta, const std::vector<PolicyParams>& directions,
                const std::vector<double>& reward_pos, const std::vector<double>& reward_neg,
                const ArsConfig& config);

/// Indices of the b directions an update would use, best first.
std::vector<std::size_t> top_directions(const std::vector<double>& reward_pos,
                                        const std::vector<double>& reward_neg, int b);

struct TrainedAgent {
    Policy policy;
    int steps_run = 0;
    /// Whether any two training rollouts disagreed on reward. When no agent
    /// ever saw variation, the surrogate carries no signal and the proposal
    /// falls back to uniform exploration.
    bool saw_reward_variation = false;
};

/// Train one agent from x0 against the frozen surrogate reward.
TrainedAgent train_agent_ex(const Eigen::VectorXd& x0, const SurrogateReward& surrogate,
                            const ArsConfig& config, Rng rng);
Policy train_agent(const Eigen::VectorXd& x0, const SurrogateReward& surrogate,
                   const ArsConfig& config, Rng rng);

/// Agent start states: k-means representatives of the feasible Pareto front
/// when it holds more members than agents, the whole front otherwise (with
/// open ensemble slots filled by k-means representatives of the remaining
/// evaluated points), or the lowest-scalarized archive points when no
/// feasible point exists yet. Always actual archive members, returned in
/// unit-cube coordinates.
std::vector<Eigen::VectorXd> select_initial_states(const ParetoArchive& archive,
                                                   const SearchSpace& space, int n_agents,
                                                   const ScalarizationWeights& weights,
                                                   Rng& rng);

struct Proposal {
    Eigen::VectorXd x_unit;
    double reward = 0.0;
    bool fallback = false; // degenerate reward surface, uniform point returned
};

/// Full solver step of one outer-loop sample: train the agent ensemble,
/// run one greedy rollout per trained agent, and return the visited state
/// with the highest surrogate reward.
Proposal ars_propose(const ParetoArchive& archive, const SearchSpace& space,
                     const SurrogateReward& surrogate, const ArsConfig& config, Rng rng);

/// Batched variant: the top `batch` distinct visited states.
std::vector<Proposal> ars_propose_batch(const ParetoArchive& archive,
                                        const SearchSpace& space,
                                        const SurrogateReward& surrogate,
                                        const ArsConfig& config, Rng rng, int batch);

} // namespace mobopt

#endif
