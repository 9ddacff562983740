#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "apsel/env.hpp"
#include "apsel/metrics.hpp"
#include "apsel/mlp.hpp"
#include "apsel/policies.hpp"
#include "apsel/random.hpp"
#include "apsel/replay_buffer.hpp"

namespace apsel {

struct AgentConfig {
    double lr_actor = 0.003;
    double lr_critic = 0.003;
    double gamma = 0.99;
    double tau = 0.003;
    std::size_t batch_size = 1024;
    std::size_t buffer_size = 1'000'000;
    double epsilon_start = 1.0;
    double epsilon_decay = 0.9999;
    double epsilon_min = 0.05;
    double noise_sigma = 0.1;
    std::optional<std::size_t> warmup_transitions;  // unset: batch_size
    std::vector<std::size_t> actor_hidden{512, 512};
    std::vector<std::size_t> critic_hidden{512, 512, 256};
    double final_layer_init = 3e-3;
    double reward_scale = 1.0;     // multiplies rewards inside the critic target only
    double actor_logit_l2 = 0.0;   // penalty on the actor's pre-sigmoid outputs, keeps them off saturation

    std::size_t resolved_warmup() const { return warmup_transitions.value_or(batch_size); }
    void validate() const;
};

enum class ActMode { Explore, Evaluate };

struct UpdateLosses {
    double critic_loss = 0.0;
    double actor_loss = 0.0;  // -mean Q(s, actor(s)) plus the logit penalty
};

/// Scores are kept strictly inside (0,1) after exploration noise.
inline constexpr double kScoreFloor = 1e-6;

/// Actor output (flat, vehicle-major) reshaped to vehicles x APs.
Eigen::MatrixXd scores_matrix(const Eigen::VectorXd& flat, std::size_t n_vehicles, std::size_t n_aps);
Eigen::VectorXd flatten_scores(const Eigen::MatrixXd& scores);

/// Centralized DDPG learner for the AP-selection environment. The actor's
/// sigmoid scores are the continuous action; their row-wise argmax is the
/// association sent to the environment.
class DdpgAgent {
public:
    DdpgAgent(std::size_t n_vehicles, std::size_t n_aps, AgentConfig config, std::uint64_t init_seed);

    /// In Explore mode: Gaussian score noise, then per-vehicle epsilon-greedy
    /// replacement by a random one-hot row, then one epsilon decay step.
    /// Evaluate mode is the plain argmax of the actor output.
    AssociationAction act(const Eigen::VectorXd& obs, RandomStream& rng, ActMode mode);

    void remember(Transition t);

    /// One minibatch step for critic and actor followed by soft target
    /// updates. Returns nullopt while the buffer holds fewer than the warmup
    /// number of transitions.
    std::optional<UpdateLosses> update(RandomStream& rng);

    /// Same step on an explicit batch.
    UpdateLosses update_on(const TransitionBatch& batch);

    std::size_t n_vehicles() const { return n_vehicles_; }
    std::size_t n_aps() const { return n_aps_; }
    std::size_t obs_dim() const { return Observation::flat_size(n_vehicles_, n_aps_); }
    std::size_t action_dim() const { return n_vehicles_ * n_aps_; }
    const AgentConfig& config() const { return config_; }

    /// max(epsilon_start * epsilon_decay^n, epsilon_min) after n exploring act() calls.
    double epsilon() const { return epsilon_; }
    std::uint64_t explore_calls() const { return explore_calls_; }
    void set_explore_calls(std::uint64_t n);

    const Mlp& actor() const { return actor_; }
    const Mlp& critic() const { return critic_; }
    const Mlp& target_actor() const { return target_actor_; }
    const Mlp& target_critic() const { return target_critic_; }
    Mlp& actor() { return actor_; }
    Mlp& critic() { return critic_; }
    Mlp& target_actor() { return target_actor_; }
    Mlp& target_critic() { return target_critic_; }
    Adam& actor_optimizer() { return actor_opt_; }
    Adam& critic_optimizer() { return critic_opt_; }
    const Adam& actor_optimizer() const { return actor_opt_; }
    const Adam& critic_optimizer() const { return critic_opt_; }
    const ReplayBuffer& buffer() const { return buffer_; }

    bool parameters_finite() const;

private:
    std::size_t n_vehicles_;
    std::size_t n_aps_;
    AgentConfig config_;
    Mlp actor_, critic_, target_actor_, target_critic_;
    Adam actor_opt_, critic_opt_;
    ReplayBuffer buffer_;
    double epsilon_;
    std::uint64_t explore_calls_ = 0;
};

/// Read-only evaluation policy over a trained actor.
class DdpgPolicy final : public Policy {
public:
    explicit DdpgPolicy(std::shared_ptr<const Mlp> actor) : actor_(std::move(actor)) {}
    PolicyKind kind() const override { return PolicyKind::Ddpg; }
    AssociationAction select(const Environment& env, RandomStream& rng) override;

private:
    std::shared_ptr<const Mlp> actor_;
};

struct TrainCallbacks {
    std::function<void(const MetricsRecord&)> on_episode;
    /// Called after every `checkpoint_every` episodes (0 disables).
    std::function<void(const DdpgAgent&, std::size_t episodes_done)> on_checkpoint;
    std::size_t checkpoint_every = 0;
};

struct TrainState {
    std::size_t episodes_done = 0;
    std::size_t updates = 0;
    std::vector<MetricsRecord> metrics;
};

/// Stream purposes for derive_seed(master, purpose, index).
enum class SeedPurpose : std::uint64_t { AgentInit = 1, TrainEnv = 2, Explore = 3, Replay = 4, EvalEnv = 5, EvalPolicy = 6 };

std::uint64_t purpose_seed(std::uint64_t master, SeedPurpose purpose, std::uint64_t index = 0);

/// Episodes of reset / act / step / remember / update. Episode e resets the
/// environment with purpose_seed(seed, TrainEnv, e). Throws std::runtime_error
/// if any network parameter becomes non-finite.
TrainState train(Environment& env, DdpgAgent& agent, std::size_t episodes, std::uint64_t seed,
                 const TrainCallbacks& callbacks = {});

}  // namespace apsel
