#include "apsel/harness.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <numeric>
#include <ostream>
#include <sstream>
#include <thread>

#include "apsel/checkpoint.hpp"
#include "apsel/errors.hpp"
#include "apsel/io.hpp"

namespace apsel {

namespace {

void ensure_out_dir(const std::filesystem::path& dir)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir))
        throw std::runtime_error("cannot create output directory " + dir.string());
}

double mean_reward(const std::vector<MetricsRecord>& records, std::size_t begin, std::size_t end)
{
    if (begin >= end)
        return 0.0;
    double sum = 0.0;
    for (std::size_t i = begin; i < end; ++i)
        sum += records[i].cumulative_reward;
    return sum / static_cast<double>(end - begin);
}

Environment make_env(const RunConfig& config)
{
    return Environment(config.scenario, config.channel, config.reward);
}

}  // namespace

std::filesystem::path checkpoint_path(const RunConfig& config)
{
    return config.checkpoint.value_or(config.out_dir / kCheckpointFile);
}

std::string metrics_csv(const std::vector<MetricsRecord>& records)
{
    std::ostringstream out;
    out << metrics_csv_header() << '\n';
    for (const MetricsRecord& r : records)
        write_metrics_row(out, r);
    return out.str();
}

std::string outcomes_csv(const std::vector<MetricsRecord>& records)
{
    std::ostringstream out;
    out << "episode,outcome,success,low_snr,high_load,timeout\n";
    std::size_t success = 0, low_snr = 0, high_load = 0, timeout = 0;
    for (const MetricsRecord& r : records) {
        switch (r.outcome) {
        case Outcome::Success: ++success; break;
        case Outcome::LowSnr: ++low_snr; break;
        case Outcome::HighLoad: ++high_load; break;
        case Outcome::Timeout: ++timeout; break;
        case Outcome::Ongoing: break;
        }
        out << r.episode_or_trial << ',' << to_string(r.outcome) << ',' << success << ',' << low_snr << ','
            << high_load << ',' << timeout << '\n';
    }
    return out.str();
}

TrainRun run_train(const RunConfig& config, std::ostream& log)
{
    config.validate();
    if (config.policy != PolicyKind::Ddpg)
        throw UsageError("train requires policy = ddpg");
    ensure_out_dir(config.out_dir);

    Environment env = make_env(config);
    DdpgAgent agent(config.scenario.n_vehicles, config.scenario.n_aps, config.agent,
                    purpose_seed(config.seed, SeedPurpose::AgentInit));
    TrainRun run;
    run.checkpoint = checkpoint_path(config);

    std::vector<MetricsRecord> so_far;
    TrainCallbacks callbacks;
    callbacks.on_episode = [&so_far](const MetricsRecord& r) { so_far.push_back(r); };
    callbacks.checkpoint_every = config.checkpoint_every;
    callbacks.on_checkpoint = [&](const DdpgAgent& a, std::size_t done) {
        save_checkpoint(a, {done, config.seed}, run.checkpoint);
        write_file_atomic(config.out_dir / kTrainMetricsFile, metrics_csv(so_far));
    };

    run.state = train(env, agent, config.episodes, config.seed, callbacks);
    save_checkpoint(agent, {run.state.episodes_done, config.seed}, run.checkpoint);
    write_file_atomic(config.out_dir / kTrainMetricsFile, metrics_csv(run.state.metrics));
    write_file_atomic(config.out_dir / kOutcomesFile, outcomes_csv(run.state.metrics));

    const std::size_t n = run.state.metrics.size();
    const std::size_t window = std::min<std::size_t>(100, n);
    run.first_mean_reward = mean_reward(run.state.metrics, 0, window);
    run.last_mean_reward = mean_reward(run.state.metrics, n - window, n);
    log << "trained " << n << " episodes, " << run.state.updates << " updates\n";
    if (n > 0)
        log << "mean reward: first " << window << " episodes " << format_number(run.first_mean_reward) << ", last "
            << window << " episodes " << format_number(run.last_mean_reward) << '\n';
    log << "checkpoint: " << run.checkpoint.string() << '\n';
    return run;
}

PolicyFactory make_policy_factory(const RunConfig& config, PolicyKind kind)
{
    if (kind != PolicyKind::Ddpg)
        return [kind] { return make_baseline(kind); };
    if (!config.checkpoint)
        throw UsageError("policy ddpg needs a checkpoint");
    LoadedCheckpoint loaded = load_checkpoint(*config.checkpoint, config.scenario.n_vehicles, config.scenario.n_aps);
    auto actor = std::make_shared<const Mlp>(loaded.agent.actor());
    return [actor] { return std::make_unique<DdpgPolicy>(actor); };
}

MetricsRecord run_trial(Environment& env, Policy& policy, std::uint64_t seed, std::size_t trial)
{
    env.reset(purpose_seed(seed, SeedPurpose::EvalEnv, trial));
    RandomStream rng(purpose_seed(seed, SeedPurpose::EvalPolicy, trial));
    EpisodeAccumulator acc;
    StepResult result;
    do {
        result = env.step(policy.select(env, rng));
        acc.add(result);
    } while (!result.done);
    return acc.finish(trial, env);
}

std::vector<MetricsRecord> run_trials(const RunConfig& config, const PolicyFactory& factory)
{
    std::vector<MetricsRecord> records(config.trials);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&] {
        try {
            Environment env = make_env(config);
            std::unique_ptr<Policy> policy = factory();
            for (std::size_t i = next++; i < config.trials; i = next++)
                records[i] = run_trial(env, *policy, config.seed, i);
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure)
                failure = std::current_exception();
            next = config.trials;
        }
    };

    const std::size_t jobs = std::min(config.jobs, config.trials);
    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t j = 0; j < jobs; ++j)
            pool.emplace_back(worker);
    }
    if (failure)
        std::rethrow_exception(failure);
    return records;
}

EvalSummary run_eval(const RunConfig& config, std::ostream& log)
{
    config.validate();
    const PolicyFactory factory = make_policy_factory(config, config.policy);
    ensure_out_dir(config.out_dir);
    const std::vector<MetricsRecord> records = run_trials(config, factory);
    const EvalSummary summary = summarize(to_string(config.policy), records, config.scenario);

    std::ostringstream summary_csv;
    summary_csv << summary_csv_header() << '\n';
    write_summary_row(summary_csv, summary);
    write_file_atomic(config.out_dir / kEvalMetricsFile, metrics_csv(records));
    write_file_atomic(config.out_dir / kEvalSummaryFile, summary_csv.str());

    log << to_string(config.policy) << ": " << summary.trials << " trials, success rate "
        << format_number(summary.success_rate) << ", handovers " << format_number(summary.handovers.mean)
        << ", SNR " << format_number(summary.snr_db.mean) << " dB\n";
    return summary;
}

std::vector<EvalSummary> run_compare(const RunConfig& config, const std::vector<PolicyKind>& policies,
                                     std::ostream& log)
{
    config.validate();
    if (policies.empty())
        throw UsageError("compare needs at least one policy");
    std::vector<PolicyFactory> factories;
    for (PolicyKind kind : policies)
        factories.push_back(make_policy_factory(config, kind));
    ensure_out_dir(config.out_dir);

    std::vector<EvalSummary> rows;
    std::ostringstream csv;
    csv << "scenario," << summary_csv_header() << '\n';
    for (std::size_t p = 0; p < policies.size(); ++p) {
        rows.push_back(summarize(to_string(policies[p]), run_trials(config, factories[p]), config.scenario));
        csv << config.scenario_selector.label() << ',';
        write_summary_row(csv, rows.back());
        log << to_string(policies[p]) << ": success rate " << format_number(rows.back().success_rate)
            << ", handovers " << format_number(rows.back().handovers.mean) << ", SNR "
            << format_number(rows.back().snr_db.mean) << " dB\n";
    }
    write_file_atomic(config.out_dir / kCompareFile, csv.str());
    return rows;
}

}  // namespace apsel
