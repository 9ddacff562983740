#include "apsel/policies.hpp"

#include <vector>

#include "apsel/errors.hpp"

namespace apsel {

std::string to_string(PolicyKind kind)
{
    switch (kind) {
    case PolicyKind::Random: return "ra";
    case PolicyKind::StrongestSignalFirst: return "ssf";
    case PolicyKind::LeastLoadedFirst: return "llf";
    case PolicyKind::Ddpg: return "ddpg";
    }
    return "ra";
}

PolicyKind policy_from_string(const std::string& text)
{
    for (PolicyKind k : {PolicyKind::Random, PolicyKind::StrongestSignalFirst, PolicyKind::LeastLoadedFirst,
                         PolicyKind::Ddpg})
        if (to_string(k) == text)
            return k;
    throw UsageError("unknown policy '" + text + "' (expected ddpg, ra, ssf or llf)");
}

AssociationAction ra_select(std::size_t n_vehicles, std::size_t n_aps, RandomStream& rng)
{
    if (n_vehicles == 0 || n_aps == 0)
        throw DomainError("ra_select: counts must be positive");
    std::vector<std::size_t> assoc(n_vehicles);
    for (auto& a : assoc)
        a = rng.index(n_aps);
    return AssociationAction::from_indices(std::move(assoc), n_aps);
}

AssociationAction ssf_select(const Eigen::MatrixXd& snr_matrix)
{
    if (snr_matrix.size() == 0)
        throw DomainError("ssf_select: empty SNR matrix");
    std::vector<std::size_t> assoc(static_cast<std::size_t>(snr_matrix.rows()));
    for (Eigen::Index i = 0; i < snr_matrix.rows(); ++i)
        assoc[static_cast<std::size_t>(i)] = argmax_row(snr_matrix, i);
    return AssociationAction::from_indices(std::move(assoc), static_cast<std::size_t>(snr_matrix.cols()));
}

AssociationAction llf_select(std::span<const std::size_t> ap_loads, std::span<const std::size_t> prev_assoc)
{
    const std::size_t n_aps = ap_loads.size();
    if (n_aps == 0)
        throw DomainError("llf_select: no APs");
    std::vector<std::size_t> running(ap_loads.begin(), ap_loads.end());
    std::vector<std::size_t> assoc(prev_assoc.size());
    for (std::size_t i = 0; i < prev_assoc.size(); ++i) {
        const std::size_t prev = prev_assoc[i];
        if (prev >= n_aps)
            throw DomainError("llf_select: previous association out of range");
        std::size_t best = 0;
        for (std::size_t j = 1; j < n_aps; ++j)
            if (running[j] < running[best])
                best = j;
        if (running[prev] == running[best])
            best = prev;
        if (best != prev) {
            if (running[prev] > 0)
                --running[prev];
            ++running[best];
        }
        assoc[i] = best;
    }
    return AssociationAction::from_indices(std::move(assoc), n_aps);
}

AssociationAction RandomPolicy::select(const Environment& env, RandomStream& rng)
{
    return ra_select(env.n_vehicles(), env.n_aps(), rng);
}

AssociationAction StrongestSignalPolicy::select(const Environment& env, RandomStream&)
{
    return ssf_select(env.raw_snr());
}

AssociationAction LeastLoadedPolicy::select(const Environment& env, RandomStream&)
{
    return llf_select(env.loads(), env.assoc());
}

std::unique_ptr<Policy> make_baseline(PolicyKind kind)
{
    switch (kind) {
    case PolicyKind::Random: return std::make_unique<RandomPolicy>();
    case PolicyKind::StrongestSignalFirst: return std::make_unique<StrongestSignalPolicy>();
    case PolicyKind::LeastLoadedFirst: return std::make_unique<LeastLoadedPolicy>();
    case PolicyKind::Ddpg: break;
    }
    throw UsageError("make_baseline: the ddpg policy needs a trained agent");
}

}  // namespace apsel
