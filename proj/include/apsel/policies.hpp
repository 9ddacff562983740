#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>

#include <Eigen/Core>

#include "apsel/env.hpp"
#include "apsel/random.hpp"

namespace apsel {

enum class PolicyKind { Random, StrongestSignalFirst, LeastLoadedFirst, Ddpg };

/// CLI spelling: ra, ssf, llf, ddpg.
std::string to_string(PolicyKind kind);
PolicyKind policy_from_string(const std::string& text);

/// Random allocation: every vehicle picks an AP uniformly and independently.
AssociationAction ra_select(std::size_t n_vehicles, std::size_t n_aps, RandomStream& rng);

/// Strongest signal first over a raw SNR matrix (vehicles x APs).
AssociationAction ssf_select(const Eigen::MatrixXd& snr_matrix);

/// Least loaded first. Vehicles are visited in index order against running
/// loads that start at `ap_loads` and absorb every move made earlier in the
/// pass. Ties go to the vehicle's previous AP, then to the lowest index.
AssociationAction llf_select(std::span<const std::size_t> ap_loads, std::span<const std::size_t> prev_assoc);

/// Common interface of the baselines and the learned agent.
class Policy {
public:
    virtual ~Policy() = default;
    virtual PolicyKind kind() const = 0;
    virtual AssociationAction select(const Environment& env, RandomStream& rng) = 0;
};

class RandomPolicy final : public Policy {
public:
    PolicyKind kind() const override { return PolicyKind::Random; }
    AssociationAction select(const Environment& env, RandomStream& rng) override;
};

class StrongestSignalPolicy final : public Policy {
public:
    PolicyKind kind() const override { return PolicyKind::StrongestSignalFirst; }
    AssociationAction select(const Environment& env, RandomStream& rng) override;
};

class LeastLoadedPolicy final : public Policy {
public:
    PolicyKind kind() const override { return PolicyKind::LeastLoadedFirst; }
    AssociationAction select(const Environment& env, RandomStream& rng) override;
};

/// Baseline policy for `kind`; throws UsageError for PolicyKind::Ddpg, which
/// needs a trained actor (see ddpg.hpp).
std::unique_ptr<Policy> make_baseline(PolicyKind kind);

}  // namespace apsel
