#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "apsel/channel.hpp"
#include "apsel/random.hpp"
#include "apsel/world.hpp"

namespace apsel {

/// MDP state: normalized AP loads, normalized SNR matrix and the one-hot
/// association currently in force.
struct Observation {
    Eigen::VectorXd ap_loads;     // load / n_vehicles
    Eigen::MatrixXd snr_matrix;   // vehicles x APs, in [0,1]
    Eigen::MatrixXd prev_assoc;   // vehicles x APs, one-hot rows

    /// Loads, then the SNR matrix row-major, then the association row-major.
    Eigen::VectorXd flatten() const;

    static std::size_t flat_size(std::size_t n_vehicles, std::size_t n_aps)
    {
        return n_aps + 2 * n_vehicles * n_aps;
    }
};

/// Per-vehicle AP choice plus the continuous score matrix it was decoded from.
struct AssociationAction {
    std::vector<std::size_t> assoc;
    Eigen::MatrixXd scores;

    /// Row-wise argmax, ties to the lowest index.
    static AssociationAction from_scores(Eigen::MatrixXd scores);
    /// One-hot scores for a fixed index vector.
    static AssociationAction from_indices(std::vector<std::size_t> assoc, std::size_t n_aps);
};

/// Lowest-index argmax of a row.
std::size_t argmax_row(const Eigen::MatrixXd& m, Eigen::Index row);

struct RewardConfig {
    double w_snr = 1.0;
    double w_load = 1.0;
    double w_handover = 1.0;
    double w_target = 1.0;
    double load_penalty = 0.0;
    double handover_k = 0.5;
    double success_reward = 2500.0;
    double failure_reward = -2000.0;
    double snr_threshold_db = 22.0;
    std::optional<std::size_t> max_load;  // unset: number of vehicles

    std::size_t resolved_max_load(std::size_t n_vehicles) const { return max_load.value_or(n_vehicles); }
    void validate() const;
};

enum class Outcome { Ongoing, Success, LowSnr, HighLoad, Timeout };

std::string to_string(Outcome outcome);
Outcome outcome_from_string(const std::string& text);

/// SNR reward: maps a normalized SNR in [0,1] exponentially onto [-1,1].
double r_snr(double curr_snr);

/// AP-load reward for the load of the selected AP.
double r_ap_load(std::size_t curr_load, std::size_t max_load, double load_penalty);

/// Handover reward for a vehicle's cumulative handover count.
double r_handover(std::size_t handovers, double k);

struct StepInfo {
    std::vector<double> serving_snr_db;   // raw SNR of each vehicle's selected link
    std::vector<std::size_t> loads;
    std::vector<std::size_t> handovers;   // cumulative per vehicle
};

struct StepResult {
    Observation obs;
    double reward = 0.0;
    bool done = false;
    Outcome outcome = Outcome::Ongoing;
    StepInfo info;
};

/// Centralized AP-selection environment over all vehicles of a scenario.
///
/// A step charges the reward and checks the SNR/load constraints on the state
/// the action was chosen from (the SNR matrix of the current observation and
/// the loads the action produces), then moves the world and redraws the SNR
/// matrix for the next observation. Constraint violations end the episode
/// ahead of success; success needs every vehicle on its target after the move.
class Environment {
public:
    Environment(Scenario scenario, ChannelParams channel, RewardConfig reward);

    Observation reset(std::uint64_t seed);
    StepResult step(const AssociationAction& action);
    Observation observe() const;

    std::size_t n_vehicles() const { return scenario_.n_vehicles; }
    std::size_t n_aps() const { return scenario_.n_aps; }
    std::size_t obs_dim() const { return Observation::flat_size(n_vehicles(), n_aps()); }
    std::size_t action_dim() const { return n_vehicles() * n_aps(); }

    const Scenario& scenario() const { return scenario_; }
    const ChannelParams& channel() const { return channel_; }
    const RewardConfig& reward_config() const { return reward_; }
    const SnrBounds& snr_bounds() const { return bounds_; }
    const WorldState& world() const { return world_; }
    /// Raw SNR in dB, vehicles x APs, as observed at the current step.
    const Eigen::MatrixXd& raw_snr() const { return raw_snr_; }
    const std::vector<std::size_t>& assoc() const { return assoc_; }
    const std::vector<std::size_t>& loads() const { return loads_; }
    const std::vector<std::size_t>& handovers() const { return handovers_; }
    std::size_t steps() const { return steps_; }
    bool done() const { return done_; }
    bool initialized() const { return initialized_; }

private:
    void refresh_snr();
    void recount_loads();

    Scenario scenario_;
    ChannelParams channel_;
    RewardConfig reward_;
    SnrBounds bounds_;
    double noise_w_ = 0.0;

    RandomStream rng_;
    WorldState world_;
    Eigen::MatrixXd raw_snr_;
    std::vector<std::size_t> assoc_;
    std::vector<std::size_t> loads_;
    std::vector<std::size_t> handovers_;
    std::size_t steps_ = 0;
    bool done_ = false;
    bool initialized_ = false;
};

}  // namespace apsel
