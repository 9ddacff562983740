#include "apsel/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "apsel/errors.hpp"

namespace apsel {

void EpisodeAccumulator::add(const StepResult& step)
{
    reward_ += step.reward;
    double snr = 0.0;
    for (double v : step.info.serving_snr_db)
        snr += v;
    if (!step.info.serving_snr_db.empty())
        snr_sum_ += snr / static_cast<double>(step.info.serving_snr_db.size());
    for (std::size_t load : step.info.loads)
        peak_load_ = std::max(peak_load_, load);
    ++steps_;
    outcome_ = step.outcome;
}

MetricsRecord EpisodeAccumulator::finish(std::size_t index, const Environment& env, double critic_loss_mean) const
{
    MetricsRecord r;
    r.episode_or_trial = index;
    r.cumulative_reward = reward_;
    r.critic_loss_mean = critic_loss_mean;
    r.outcome = outcome_;
    r.steps = steps_;
    const auto& h = env.handovers();
    r.mean_handovers = h.empty() ? 0.0
                                 : static_cast<double>(std::accumulate(h.begin(), h.end(), std::size_t{0}))
                                       / static_cast<double>(h.size());
    r.mean_snr_db = steps_ == 0 ? 0.0 : snr_sum_ / static_cast<double>(steps_);
    r.peak_ap_load = peak_load_;
    r.wall_time_s = static_cast<double>(steps_) * env.scenario().dt_s;
    return r;
}

double completion_time_s(const MetricsRecord& r, const Scenario& scenario)
{
    std::size_t steps = r.outcome == Outcome::Success ? r.steps : scenario.max_steps;
    return static_cast<double>(steps) * scenario.dt_s;
}

std::string format_number(double v)
{
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

const std::vector<std::string>& metrics_csv_columns()
{
    static const std::vector<std::string> cols{
        "episode_or_trial", "cumulative_reward", "critic_loss_mean", "outcome", "steps",
        "mean_handovers", "mean_snr_db", "peak_ap_load", "wall_time_s"};
    return cols;
}

namespace {

std::string join(const std::vector<std::string>& parts)
{
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i)
            out += ',';
        out += parts[i];
    }
    return out;
}

double parse_double(const std::string& s)
{
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw DomainError("metrics csv: bad number '" + s + "'");
    return v;
}

std::size_t parse_count(const std::string& s)
{
    std::size_t v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw DomainError("metrics csv: bad count '" + s + "'");
    return v;
}

}  // namespace

std::string metrics_csv_header()
{
    return join(metrics_csv_columns());
}

void write_metrics_row(std::ostream& out, const MetricsRecord& r)
{
    out << r.episode_or_trial << ',' << format_number(r.cumulative_reward) << ','
        << format_number(r.critic_loss_mean) << ',' << to_string(r.outcome) << ',' << r.steps << ','
        << format_number(r.mean_handovers) << ',' << format_number(r.mean_snr_db) << ',' << r.peak_ap_load
        << ',' << format_number(r.wall_time_s) << '\n';
}

std::vector<MetricsRecord> read_metrics_csv(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line) || line != metrics_csv_header())
        throw DomainError("metrics csv: unexpected header");
    std::vector<MetricsRecord> rows;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ','))
            f.push_back(cell);
        if (f.size() != metrics_csv_columns().size())
            throw DomainError("metrics csv: wrong field count");
        MetricsRecord r;
        r.episode_or_trial = parse_count(f[0]);
        r.cumulative_reward = parse_double(f[1]);
        r.critic_loss_mean = parse_double(f[2]);
        r.outcome = outcome_from_string(f[3]);
        r.steps = parse_count(f[4]);
        r.mean_handovers = parse_double(f[5]);
        r.mean_snr_db = parse_double(f[6]);
        r.peak_ap_load = parse_count(f[7]);
        r.wall_time_s = parse_double(f[8]);
        rows.push_back(r);
    }
    return rows;
}

MeanStd mean_std(const std::vector<double>& values)
{
    MeanStd out;
    if (values.empty())
        return out;
    const double n = static_cast<double>(values.size());
    out.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values)
            ss += (v - out.mean) * (v - out.mean);
        out.stddev = std::sqrt(ss / (n - 1.0));
    }
    return out;
}

EvalSummary summarize(const std::string& policy, const std::vector<MetricsRecord>& records, const Scenario& scenario)
{
    EvalSummary s;
    s.policy = policy;
    s.trials = records.size();
    auto collect = [&](auto field) {
        std::vector<double> v;
        v.reserve(records.size());
        for (const MetricsRecord& r : records)
            v.push_back(field(r));
        return mean_std(v);
    };
    s.reward = collect([](const MetricsRecord& r) { return r.cumulative_reward; });
    s.snr_db = collect([](const MetricsRecord& r) { return r.mean_snr_db; });
    s.handovers = collect([](const MetricsRecord& r) { return r.mean_handovers; });
    s.steps = collect([](const MetricsRecord& r) { return static_cast<double>(r.steps); });
    s.completion_time_s = collect([&](const MetricsRecord& r) { return completion_time_s(r, scenario); });
    s.peak_ap_load = collect([](const MetricsRecord& r) { return static_cast<double>(r.peak_ap_load); });
    if (!records.empty()) {
        auto ok = std::count_if(records.begin(), records.end(),
                                [](const MetricsRecord& r) { return r.outcome == Outcome::Success; });
        s.success_rate = static_cast<double>(ok) / static_cast<double>(records.size());
    }
    return s;
}

const std::vector<std::string>& summary_csv_columns()
{
    static const std::vector<std::string> cols{
        "policy", "trials", "reward_mean", "reward_std", "snr_db_mean", "snr_db_std",
        "handovers_mean", "handovers_std", "steps_mean", "steps_std", "completion_time_s_mean",
        "completion_time_s_std", "peak_ap_load_mean", "peak_ap_load_std", "success_rate"};
    return cols;
}

std::string summary_csv_header()
{
    return join(summary_csv_columns());
}

void write_summary_row(std::ostream& out, const EvalSummary& s)
{
    out << s.policy << ',' << s.trials;
    for (const MeanStd* m : {&s.reward, &s.snr_db, &s.handovers, &s.steps, &s.completion_time_s, &s.peak_ap_load})
        out << ',' << format_number(m->mean) << ',' << format_number(m->stddev);
    out << ',' << format_number(s.success_rate) << '\n';
}

}  // namespace apsel
