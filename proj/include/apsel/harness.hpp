#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "apsel/config.hpp"
#include "apsel/ddpg.hpp"
#include "apsel/metrics.hpp"
#include "apsel/policies.hpp"

namespace apsel {

inline constexpr const char* kTrainMetricsFile = "train_metrics.csv";
inline constexpr const char* kOutcomesFile = "outcomes.csv";
inline constexpr const char* kEvalMetricsFile = "eval_metrics.csv";
inline constexpr const char* kEvalSummaryFile = "eval_summary.csv";
inline constexpr const char* kCompareFile = "compare.csv";
inline constexpr const char* kCheckpointFile = "checkpoint.json";

/// Default checkpoint location: config.checkpoint or out_dir/checkpoint.json.
std::filesystem::path checkpoint_path(const RunConfig& config);

/// Header: episode, outcome, then running counts of each terminal outcome.
std::string outcomes_csv(const std::vector<MetricsRecord>& records);

std::string metrics_csv(const std::vector<MetricsRecord>& records);

struct TrainRun {
    TrainState state;
    std::filesystem::path checkpoint;
    double first_mean_reward = 0.0;  // over the first min(100, n) episodes
    double last_mean_reward = 0.0;   // over the last min(100, n) episodes
};

/// Trains a fresh agent (init seed derived from config.seed) and writes
/// train_metrics.csv, outcomes.csv and the final checkpoint into out_dir.
/// Intermediate checkpoints follow config.checkpoint_every.
TrainRun run_train(const RunConfig& config, std::ostream& log);

/// Builds one policy instance per trial. DDPG instances share the actor.
using PolicyFactory = std::function<std::unique_ptr<Policy>()>;

/// Factory for `kind`; DDPG loads config.checkpoint (usage error if unset).
PolicyFactory make_policy_factory(const RunConfig& config, PolicyKind kind);

/// One greedy episode. Trial i resets the environment with
/// purpose_seed(seed, EvalEnv, i) and draws policy randomness from
/// purpose_seed(seed, EvalPolicy, i), so trials are paired across policies.
MetricsRecord run_trial(Environment& env, Policy& policy, std::uint64_t seed, std::size_t trial);

/// `trials` episodes spread over `jobs` threads, returned in trial order.
std::vector<MetricsRecord> run_trials(const RunConfig& config, const PolicyFactory& factory);

/// Writes eval_metrics.csv and eval_summary.csv into out_dir.
EvalSummary run_eval(const RunConfig& config, std::ostream& log);

/// One summary row per policy over the same seeds; writes compare.csv.
std::vector<EvalSummary> run_compare(const RunConfig& config, const std::vector<PolicyKind>& policies,
                                     std::ostream& log);

}  // namespace apsel
