#include "apsel/ddpg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "apsel/errors.hpp"

namespace apsel {

void AgentConfig::validate() const
{
    auto require = [](bool ok, const char* what) {
        if (!ok)
            throw DomainError(std::string("agent: ") + what);
    };
    require(tau > 0.0 && tau <= 1.0, "tau must be in (0, 1]");
    require(gamma >= 0.0 && gamma <= 1.0, "gamma must be in [0, 1]");
    require(epsilon_min >= 0.0 && epsilon_min <= 1.0, "epsilon_min must be in [0, 1]");
    require(epsilon_start >= 0.0 && epsilon_start <= 1.0, "epsilon_start must be in [0, 1]");
    require(epsilon_decay > 0.0 && epsilon_decay <= 1.0, "epsilon_decay must be in (0, 1]");
    require(lr_actor > 0.0 && lr_critic > 0.0, "learning rates must be positive");
    require(batch_size > 0, "batch_size must be positive");
    require(buffer_size > 0, "buffer_size must be positive");
    require(noise_sigma >= 0.0, "noise_sigma must be non-negative");
    require(reward_scale > 0.0, "reward_scale must be positive");
    require(!actor_hidden.empty() && !critic_hidden.empty(), "hidden layer lists must not be empty");
    for (std::size_t w : actor_hidden)
        require(w > 0, "hidden widths must be positive");
    for (std::size_t w : critic_hidden)
        require(w > 0, "hidden widths must be positive");
}

Eigen::MatrixXd scores_matrix(const Eigen::VectorXd& flat, std::size_t n_vehicles, std::size_t n_aps)
{
    if (static_cast<std::size_t>(flat.size()) != n_vehicles * n_aps)
        throw UsageError("scores_matrix: size mismatch");
    Eigen::MatrixXd m(static_cast<Eigen::Index>(n_vehicles), static_cast<Eigen::Index>(n_aps));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            m(i, j) = flat(i * m.cols() + j);
    return m;
}

Eigen::VectorXd flatten_scores(const Eigen::MatrixXd& scores)
{
    Eigen::VectorXd flat(scores.size());
    for (Eigen::Index i = 0; i < scores.rows(); ++i)
        for (Eigen::Index j = 0; j < scores.cols(); ++j)
            flat(i * scores.cols() + j) = scores(i, j);
    return flat;
}

DdpgAgent::DdpgAgent(std::size_t n_vehicles, std::size_t n_aps, AgentConfig config, std::uint64_t init_seed)
    : n_vehicles_(n_vehicles), n_aps_(n_aps), config_(std::move(config)), buffer_(config_.buffer_size),
      epsilon_(std::max(config_.epsilon_start, config_.epsilon_min))
{
    if (n_vehicles == 0 || n_aps == 0)
        throw DomainError("DdpgAgent: counts must be positive");
    config_.validate();
    actor_ = make_actor(obs_dim(), action_dim(), config_.actor_hidden);
    critic_ = make_critic(obs_dim(), action_dim(), config_.critic_hidden);
    RandomStream rng(init_seed);
    actor_.initialize(rng, config_.final_layer_init);
    critic_.initialize(rng, config_.final_layer_init);
    target_actor_ = actor_;
    target_critic_ = critic_;
    actor_opt_ = Adam(actor_, config_.lr_actor);
    critic_opt_ = Adam(critic_, config_.lr_critic);
}

void DdpgAgent::set_explore_calls(std::uint64_t n)
{
    explore_calls_ = n;
    epsilon_ = std::max(config_.epsilon_start * std::pow(config_.epsilon_decay, static_cast<double>(n)),
                        config_.epsilon_min);
}

AssociationAction DdpgAgent::act(const Eigen::VectorXd& obs, RandomStream& rng, ActMode mode)
{
    Eigen::MatrixXd scores = scores_matrix(actor_forward(actor_, obs), n_vehicles_, n_aps_);
    if (mode == ActMode::Evaluate)
        return AssociationAction::from_scores(std::move(scores));

    for (Eigen::Index i = 0; i < scores.rows(); ++i)
        for (Eigen::Index j = 0; j < scores.cols(); ++j)
            scores(i, j) = std::clamp(scores(i, j) + rng.normal(0.0, config_.noise_sigma), kScoreFloor,
                                      1.0 - kScoreFloor);
    for (Eigen::Index i = 0; i < scores.rows(); ++i) {
        if (rng.uniform() < epsilon_) {
            scores.row(i).setConstant(kScoreFloor);
            scores(i, static_cast<Eigen::Index>(rng.index(n_aps_))) = 1.0 - kScoreFloor;
        }
    }
    set_explore_calls(explore_calls_ + 1);
    return AssociationAction::from_scores(std::move(scores));
}

void DdpgAgent::remember(Transition t)
{
    if (static_cast<std::size_t>(t.obs.size()) != obs_dim() || static_cast<std::size_t>(t.next_obs.size()) != obs_dim()
        || static_cast<std::size_t>(t.action_scores.size()) != action_dim())
        throw UsageError("DdpgAgent::remember: transition dimensions do not match the agent");
    buffer_.push(std::move(t));
}

std::optional<UpdateLosses> DdpgAgent::update(RandomStream& rng)
{
    if (buffer_.size() < std::max<std::size_t>(config_.resolved_warmup(), 1))
        return std::nullopt;
    return update_on(buffer_.sample(config_.batch_size, rng));
}

UpdateLosses DdpgAgent::update_on(const TransitionBatch& b)
{
    const Eigen::Index n = b.obs.cols();
    const Eigen::Index od = b.obs.rows();
    const Eigen::Index ad = b.actions.rows();
    const double inv_n = 1.0 / static_cast<double>(n);

    // Critic: regress Q(s, a) on r + gamma * (1 - done) * Q'(s', actor'(s')).
    Eigen::MatrixXd next_in(od + ad, n);
    next_in.topRows(od) = b.next_obs;
    next_in.bottomRows(ad) = target_actor_.predict(b.next_obs);
    const Eigen::RowVectorXd q_next = target_critic_.predict(next_in);
    const Eigen::RowVectorXd y = config_.reward_scale * b.rewards + config_.gamma * b.not_done.cwiseProduct(q_next);

    Eigen::MatrixXd in(od + ad, n);
    in.topRows(od) = b.obs;
    in.bottomRows(ad) = b.actions;
    const Eigen::RowVectorXd q = critic_.forward(in);
    const Eigen::RowVectorXd err = q - y;
    UpdateLosses losses;
    losses.critic_loss = err.squaredNorm() * inv_n;
    critic_opt_.step(critic_, critic_.backward(2.0 * inv_n * err));

    // Actor: ascend mean Q(s, actor(s)) through the critic's action gradient.
    const Eigen::MatrixXd a = actor_.forward(b.obs);
    in.bottomRows(ad) = a;
    const Eigen::RowVectorXd q_pi = critic_.forward(in);
    losses.actor_loss = -q_pi.mean();
    const MlpGradients critic_grads = critic_.backward(Eigen::RowVectorXd::Constant(n, -inv_n));
    Eigen::MatrixXd upstream = critic_grads.input.bottomRows(ad);
    if (config_.actor_logit_l2 > 0.0) {
        // d/da of l2 * logit(a)^2, with logit(a) = log(a / (1 - a)).
        const double l2 = config_.actor_logit_l2;
        for (Eigen::Index k = 0; k < a.size(); ++k) {
            const double p = std::clamp(a(k), 1e-15, 1.0 - 1e-15);
            const double logit = std::log(p / (1.0 - p));
            losses.actor_loss += l2 * logit * logit * inv_n;
            upstream(k) += 2.0 * l2 * logit / (p * (1.0 - p)) * inv_n;
        }
    }
    actor_opt_.step(actor_, actor_.backward(upstream));

    soft_update(target_critic_, critic_, config_.tau);
    soft_update(target_actor_, actor_, config_.tau);
    return losses;
}

bool DdpgAgent::parameters_finite() const
{
    return actor_.all_finite() && critic_.all_finite() && target_actor_.all_finite() && target_critic_.all_finite();
}

AssociationAction DdpgPolicy::select(const Environment& env, RandomStream&)
{
    return AssociationAction::from_scores(
        scores_matrix(actor_forward(*actor_, env.observe().flatten()), env.n_vehicles(), env.n_aps()));
}

std::uint64_t purpose_seed(std::uint64_t master, SeedPurpose purpose, std::uint64_t index)
{
    return derive_seed(master, static_cast<std::uint64_t>(purpose), index);
}

TrainState train(Environment& env, DdpgAgent& agent, std::size_t episodes, std::uint64_t seed,
                 const TrainCallbacks& callbacks)
{
    if (env.n_vehicles() != agent.n_vehicles() || env.n_aps() != agent.n_aps())
        throw UsageError("train: agent and environment dimensions differ");
    TrainState state;
    RandomStream explore(purpose_seed(seed, SeedPurpose::Explore));
    RandomStream replay(purpose_seed(seed, SeedPurpose::Replay));

    for (std::size_t e = 0; e < episodes; ++e) {
        Eigen::VectorXd obs = env.reset(purpose_seed(seed, SeedPurpose::TrainEnv, e)).flatten();
        EpisodeAccumulator acc;
        double loss_sum = 0.0;
        std::size_t loss_count = 0;
        bool done = false;
        while (!done) {
            AssociationAction action = agent.act(obs, explore, ActMode::Explore);
            StepResult step = env.step(action);
            Eigen::VectorXd next = step.obs.flatten();
            agent.remember({obs, flatten_scores(action.scores), step.reward, next, step.done});
            if (auto losses = agent.update(replay)) {
                loss_sum += losses->critic_loss;
                ++loss_count;
                ++state.updates;
                if (!agent.parameters_finite()) {
                    std::ostringstream msg;
                    msg << "train: non-finite network parameters at episode " << e << ", step " << env.steps()
                        << " (critic loss " << losses->critic_loss << ", actor loss " << losses->actor_loss << ")";
                    throw std::runtime_error(msg.str());
                }
            }
            acc.add(step);
            obs = std::move(next);
            done = step.done;
        }
        MetricsRecord record = acc.finish(e, env, loss_count ? loss_sum / static_cast<double>(loss_count) : 0.0);
        state.metrics.push_back(record);
        state.episodes_done = e + 1;
        if (callbacks.on_episode)
            callbacks.on_episode(record);
        if (callbacks.on_checkpoint && callbacks.checkpoint_every && state.episodes_done % callbacks.checkpoint_every == 0)
            callbacks.on_checkpoint(agent, state.episodes_done);
    }
    return state;
}

}  // namespace apsel
