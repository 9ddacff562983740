#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "apsel/env.hpp"

namespace apsel {

/// One row of train_metrics.csv / eval_metrics.csv.
struct MetricsRecord {
    std::size_t episode_or_trial = 0;
    double cumulative_reward = 0.0;
    double critic_loss_mean = 0.0;  // 0 outside training or before the first update
    Outcome outcome = Outcome::Ongoing;
    std::size_t steps = 0;
    double mean_handovers = 0.0;    // per vehicle
    double mean_snr_db = 0.0;       // serving links, averaged over vehicles and steps
    std::size_t peak_ap_load = 0;
    double wall_time_s = 0.0;       // simulated episode duration, steps * dt
};

/// Folds StepResults of one episode into a MetricsRecord.
class EpisodeAccumulator {
public:
    void add(const StepResult& step);
    MetricsRecord finish(std::size_t index, const Environment& env, double critic_loss_mean = 0.0) const;

private:
    double reward_ = 0.0;
    double snr_sum_ = 0.0;
    std::size_t steps_ = 0;
    std::size_t peak_load_ = 0;
    Outcome outcome_ = Outcome::Ongoing;
};

/// Time needed to finish the navigation task: the step count of a successful
/// episode, the full horizon otherwise, in simulated seconds.
double completion_time_s(const MetricsRecord& r, const Scenario& scenario);

const std::vector<std::string>& metrics_csv_columns();
std::string metrics_csv_header();
void write_metrics_row(std::ostream& out, const MetricsRecord& r);
std::vector<MetricsRecord> read_metrics_csv(std::istream& in);

/// Shortest decimal form that round-trips the double.
std::string format_number(double v);

struct MeanStd {
    double mean = 0.0;
    double stddev = 0.0;  // sample standard deviation, 0 for a single value
};

MeanStd mean_std(const std::vector<double>& values);

/// Aggregate row over a set of evaluation trials.
struct EvalSummary {
    std::string policy;
    std::size_t trials = 0;
    MeanStd reward;
    MeanStd snr_db;
    MeanStd handovers;
    MeanStd steps;
    MeanStd completion_time_s;
    MeanStd peak_ap_load;
    double success_rate = 0.0;
};

EvalSummary summarize(const std::string& policy, const std::vector<MetricsRecord>& records, const Scenario& scenario);

const std::vector<std::string>& summary_csv_columns();
std::string summary_csv_header();
void write_summary_row(std::ostream& out, const EvalSummary& s);

}  // namespace apsel
