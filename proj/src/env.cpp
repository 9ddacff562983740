#include "apsel/env.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "apsel/errors.hpp"
#include "apsel/policies.hpp"

namespace apsel {

Eigen::VectorXd Observation::flatten() const
{
    const Eigen::Index n_aps = ap_loads.size();
    const Eigen::Index cells = snr_matrix.size();
    Eigen::VectorXd flat(n_aps + 2 * cells);
    flat.head(n_aps) = ap_loads;
    Eigen::Index k = n_aps;
    for (const Eigen::MatrixXd* m : {&snr_matrix, &prev_assoc})
        for (Eigen::Index i = 0; i < m->rows(); ++i)
            for (Eigen::Index j = 0; j < m->cols(); ++j)
                flat(k++) = (*m)(i, j);
    return flat;
}

std::size_t argmax_row(const Eigen::MatrixXd& m, Eigen::Index row)
{
    Eigen::Index best = 0;
    for (Eigen::Index j = 1; j < m.cols(); ++j)
        if (m(row, j) > m(row, best))
            best = j;
    return static_cast<std::size_t>(best);
}

AssociationAction AssociationAction::from_scores(Eigen::MatrixXd scores)
{
    AssociationAction a;
    a.assoc.resize(static_cast<std::size_t>(scores.rows()));
    for (Eigen::Index i = 0; i < scores.rows(); ++i)
        a.assoc[static_cast<std::size_t>(i)] = argmax_row(scores, i);
    a.scores = std::move(scores);
    return a;
}

AssociationAction AssociationAction::from_indices(std::vector<std::size_t> assoc, std::size_t n_aps)
{
    AssociationAction a;
    a.scores = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(assoc.size()), static_cast<Eigen::Index>(n_aps));
    for (std::size_t i = 0; i < assoc.size(); ++i) {
        if (assoc[i] >= n_aps)
            throw UsageError("association index out of range");
        a.scores(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(assoc[i])) = 1.0;
    }
    a.assoc = std::move(assoc);
    return a;
}

void RewardConfig::validate() const
{
    if (!(handover_k > 0.0))
        throw DomainError("reward: handover_k must be positive");
    if (max_load && *max_load < 1)
        throw DomainError("reward: max_load must be at least 1");
}

std::string to_string(Outcome outcome)
{
    switch (outcome) {
    case Outcome::Ongoing: return "Ongoing";
    case Outcome::Success: return "Success";
    case Outcome::LowSnr: return "LowSnr";
    case Outcome::HighLoad: return "HighLoad";
    case Outcome::Timeout: return "Timeout";
    }
    return "Ongoing";
}

Outcome outcome_from_string(const std::string& text)
{
    for (Outcome o : {Outcome::Ongoing, Outcome::Success, Outcome::LowSnr, Outcome::HighLoad, Outcome::Timeout})
        if (to_string(o) == text)
            return o;
    throw DomainError("unknown outcome '" + text + "'");
}

double r_snr(double curr_snr)
{
    double s = std::clamp(curr_snr, 0.0, 1.0);
    return 2.0 * (std::exp(s) - 1.0) / (std::numbers::e - 1.0) - 1.0;
}

double r_ap_load(std::size_t curr_load, std::size_t max_load, double load_penalty)
{
    if (curr_load > max_load)
        throw DomainError("r_ap_load: load exceeds max_load");
    if (curr_load == max_load)
        return -1.0;
    double m = static_cast<double>(max_load);
    return load_penalty + std::exp(10.0 * (static_cast<double>(curr_load) - m) / m);
}

double r_handover(std::size_t handovers, double k)
{
    return -std::exp(-k * static_cast<double>(handovers));
}

Environment::Environment(Scenario scenario, ChannelParams channel, RewardConfig reward)
    : scenario_(std::move(scenario)), channel_(channel), reward_(reward)
{
    scenario_.validate();
    channel_.validate();
    reward_.validate();
    bounds_ = scenario_snr_bounds(scenario_.world_size_m, channel_);
    noise_w_ = noise_power(channel_.op_bandwidth_hz, channel_.noise_figure_db);
}

void Environment::refresh_snr()
{
    const Eigen::MatrixXd d = distance_matrix(world_);
    const double tx = channel_.effective_tx_power();
    raw_snr_.resize(d.rows(), d.cols());
    for (Eigen::Index i = 0; i < d.rows(); ++i)
        for (Eigen::Index j = 0; j < d.cols(); ++j)
            raw_snr_(i, j) = snr_db(tx, path_loss(d(i, j), channel_, rng_), noise_w_);
}

void Environment::recount_loads()
{
    loads_.assign(n_aps(), 0);
    for (std::size_t a : assoc_)
        ++loads_[a];
}

Observation Environment::reset(std::uint64_t seed)
{
    rng_ = RandomStream(seed);
    world_ = make_world(scenario_, rng_);
    refresh_snr();
    assoc_ = ssf_select(raw_snr_).assoc;
    recount_loads();
    handovers_.assign(n_vehicles(), 0);
    steps_ = 0;
    done_ = false;
    initialized_ = true;
    return observe();
}

Observation Environment::observe() const
{
    if (!initialized_)
        throw UsageError("environment used before reset");
    Observation obs;
    const auto nv = static_cast<Eigen::Index>(n_vehicles());
    const auto na = static_cast<Eigen::Index>(n_aps());
    obs.ap_loads.resize(na);
    for (Eigen::Index j = 0; j < na; ++j)
        obs.ap_loads(j) = static_cast<double>(loads_[static_cast<std::size_t>(j)]) / static_cast<double>(nv);
    obs.snr_matrix = raw_snr_.unaryExpr([&](double v) { return normalize_snr(v, bounds_); });
    obs.prev_assoc = Eigen::MatrixXd::Zero(nv, na);
    for (Eigen::Index i = 0; i < nv; ++i)
        obs.prev_assoc(i, static_cast<Eigen::Index>(assoc_[static_cast<std::size_t>(i)])) = 1.0;
    return obs;
}

StepResult Environment::step(const AssociationAction& action)
{
    if (!initialized_)
        throw UsageError("environment used before reset");
    if (done_)
        throw UsageError("step called on a finished episode");
    if (action.assoc.size() != n_vehicles())
        throw UsageError("action does not cover every vehicle");
    for (std::size_t a : action.assoc)
        if (a >= n_aps())
            throw UsageError("association index out of range");

    for (std::size_t i = 0; i < n_vehicles(); ++i)
        if (action.assoc[i] != assoc_[i])
            ++handovers_[i];
    assoc_ = action.assoc;
    recount_loads();

    const std::size_t max_load = reward_.resolved_max_load(n_vehicles());
    StepResult result;
    result.info.serving_snr_db.resize(n_vehicles());
    bool low_snr = false;
    bool high_load = false;
    double total = 0.0;
    for (std::size_t i = 0; i < n_vehicles(); ++i) {
        const std::size_t ap = assoc_[i];
        const double raw = raw_snr_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(ap));
        result.info.serving_snr_db[i] = raw;
        low_snr = low_snr || raw < reward_.snr_threshold_db;
        high_load = high_load || loads_[ap] > max_load;
        double load_term = loads_[ap] >= max_load ? -1.0 : r_ap_load(loads_[ap], max_load, reward_.load_penalty);
        total += reward_.w_snr * r_snr(normalize_snr(raw, bounds_)) + reward_.w_load * load_term
               + reward_.w_handover * r_handover(handovers_[i], reward_.handover_k);
    }
    result.reward = total / static_cast<double>(n_vehicles());

    world_ = step_vehicles(std::move(world_), scenario_.dt_s);
    world_ = step_aps(std::move(world_), scenario_.dt_s, rng_);
    refresh_snr();
    ++steps_;

    if (low_snr)
        result.outcome = Outcome::LowSnr;
    else if (high_load)
        result.outcome = Outcome::HighLoad;
    else if (world_.all_arrived())
        result.outcome = Outcome::Success;
    else if (steps_ >= scenario_.max_steps)
        result.outcome = Outcome::Timeout;

    if (result.outcome == Outcome::Success)
        result.reward += reward_.w_target * reward_.success_reward;
    else if (result.outcome != Outcome::Ongoing)
        result.reward += reward_.failure_reward;

    done_ = result.outcome != Outcome::Ongoing;
    result.done = done_;
    result.info.loads = loads_;
    result.info.handovers = handovers_;
    result.obs = observe();
    return result;
}

}  // namespace apsel
