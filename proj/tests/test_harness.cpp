#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <sstream>

#include "apsel/checkpoint.hpp"
#include "apsel/errors.hpp"
#include "apsel/harness.hpp"
#include "apsel/io.hpp"

using namespace apsel;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name)
{
    const fs::path d = fs::temp_directory_path() / "apsel_test_harness" / name;
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

RunConfig small_run(const fs::path& out)
{
    RunConfig c = config_from_key_values(parse_key_values(
        "scenario = 1\nscenario.n_vehicles = 2\nscenario.n_aps = 2\nscenario.ap_speed_mps = 0\n"
        "agent.actor_hidden = 16,16\nagent.critic_hidden = 16,16,8\nagent.batch_size = 16\n"
        "episodes = 20\ntrials = 12\nseed = 4\n"));
    c.out_dir = out;
    return c;
}

}  // namespace

TEST(Train, ZeroEpisodesWritesHeaderAndCheckpoint)
{
    RunConfig c = small_run(fresh_dir("zero"));
    c.episodes = 0;
    std::ostringstream log;
    const TrainRun run = run_train(c, log);
    EXPECT_EQ(read_file(c.out_dir / kTrainMetricsFile), metrics_csv_header() + "\n");
    EXPECT_NO_THROW(load_checkpoint(run.checkpoint, 2, 2));
}

TEST(Train, IdenticalRunsAreByteIdentical)
{
    RunConfig a = small_run(fresh_dir("det_a"));
    RunConfig b = small_run(fresh_dir("det_b"));
    std::ostringstream log;
    run_train(a, log);
    run_train(b, log);
    EXPECT_EQ(read_file(a.out_dir / kTrainMetricsFile), read_file(b.out_dir / kTrainMetricsFile));
    EXPECT_EQ(read_file(a.out_dir / kOutcomesFile), read_file(b.out_dir / kOutcomesFile));
    std::istringstream csv(read_file(a.out_dir / kTrainMetricsFile));
    EXPECT_EQ(read_metrics_csv(csv).size(), 20u);
}

TEST(Train, RequiresDdpgPolicy)
{
    RunConfig c = small_run(fresh_dir("policy"));
    c.policy = PolicyKind::StrongestSignalFirst;
    std::ostringstream log;
    EXPECT_THROW(run_train(c, log), UsageError);
}

TEST(Train, UnwritableOutDir)
{
    const fs::path base = fresh_dir("unwritable");
    write_file_atomic(base / "plain_file", "x");
    RunConfig c = small_run(base / "plain_file" / "sub");
    std::ostringstream log;
    EXPECT_THROW(run_train(c, log), std::runtime_error);
}

TEST(Outcomes, RunningCounts)
{
    std::vector<MetricsRecord> r(3);
    r[0].outcome = Outcome::LowSnr;
    r[1].episode_or_trial = 1;
    r[1].outcome = Outcome::Success;
    r[2].episode_or_trial = 2;
    r[2].outcome = Outcome::LowSnr;
    EXPECT_EQ(outcomes_csv(r), "episode,outcome,success,low_snr,high_load,timeout\n"
                               "0,LowSnr,0,1,0,0\n1,Success,1,1,0,0\n2,LowSnr,1,2,0,0\n");
}

TEST(Eval, DdpgNeedsCheckpoint)
{
    RunConfig c = small_run(fresh_dir("nockpt"));
    c.policy = PolicyKind::Ddpg;
    std::ostringstream log;
    EXPECT_THROW(run_eval(c, log), UsageError);
}

TEST(Eval, SingleTrialSummaryEqualsRecord)
{
    RunConfig c = small_run(fresh_dir("single"));
    c.policy = PolicyKind::StrongestSignalFirst;
    c.trials = 1;
    std::ostringstream log;
    const EvalSummary s = run_eval(c, log);
    std::istringstream csv(read_file(c.out_dir / kEvalMetricsFile));
    const auto rows = read_metrics_csv(csv);
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_EQ(s.reward.mean, rows[0].cumulative_reward);
    EXPECT_EQ(s.snr_db.mean, rows[0].mean_snr_db);
    EXPECT_EQ(s.handovers.mean, rows[0].mean_handovers);
    EXPECT_EQ(s.steps.mean, static_cast<double>(rows[0].steps));
}

TEST(Eval, ParallelMatchesSerialAndRepeats)
{
    RunConfig c = small_run(fresh_dir("parallel"));
    c.policy = PolicyKind::Random;
    c.trials = 30;
    std::ostringstream log;
    run_eval(c, log);
    const std::string serial = read_file(c.out_dir / kEvalMetricsFile);
    c.jobs = 4;
    run_eval(c, log);
    EXPECT_EQ(read_file(c.out_dir / kEvalMetricsFile), serial);
    run_eval(c, log);
    EXPECT_EQ(read_file(c.out_dir / kEvalMetricsFile), serial);
}

TEST(Eval, DdpgFromTrainedCheckpoint)
{
    RunConfig c = small_run(fresh_dir("ddpg_eval"));
    std::ostringstream log;
    const TrainRun run = run_train(c, log);
    c.policy = PolicyKind::Ddpg;
    c.checkpoint = run.checkpoint;
    const EvalSummary s = run_eval(c, log);
    EXPECT_EQ(s.trials, 12u);
}

TEST(Eval, SsfServesRowMaximum)
{
    Environment env(make_scenario1(6, 4, 20.0), ChannelParams{}, RewardConfig{});
    env.reset(purpose_seed(1, SeedPurpose::EvalEnv, 0));
    StrongestSignalPolicy ssf;
    RandomStream rng(1);
    StepResult r;
    do {
        const Eigen::MatrixXd snr = env.raw_snr();
        r = env.step(ssf.select(env, rng));
        for (Eigen::Index i = 0; i < snr.rows(); ++i)
            ASSERT_EQ(r.info.serving_snr_db[static_cast<std::size_t>(i)], snr.row(i).maxCoeff());
    } while (!r.done);
}

TEST(Eval, RandomHandsOverMoreThanSsfOnScenario2)
{
    RunConfig c = config_from_key_values(parse_key_values("scenario = 2\n"));
    const auto ra = run_trials(c, make_policy_factory(c, PolicyKind::Random));
    const auto ssf = run_trials(c, make_policy_factory(c, PolicyKind::StrongestSignalFirst));
    EXPECT_GT(summarize("ra", ra, c.scenario).handovers.mean, summarize("ssf", ssf, c.scenario).handovers.mean);
}

TEST(Compare, FourPoliciesFourRowsSharedWorlds)
{
    RunConfig c = small_run(fresh_dir("compare"));
    std::ostringstream log;
    const TrainRun run = run_train(c, log);
    c.checkpoint = run.checkpoint;
    const auto rows = run_compare(c, {PolicyKind::Random, PolicyKind::StrongestSignalFirst,
                                      PolicyKind::LeastLoadedFirst, PolicyKind::Ddpg}, log);
    ASSERT_EQ(rows.size(), 4u);
    std::size_t trials = 0;
    for (const EvalSummary& s : rows)
        trials += s.trials;
    EXPECT_EQ(trials, 4 * c.trials);
    const std::string csv = read_file(c.out_dir / kCompareFile);
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);

    // Paired seeds: the same trial index sees the same world whatever the policy.
    Environment a(c.scenario, c.channel, c.reward), b(c.scenario, c.channel, c.reward);
    a.reset(purpose_seed(c.seed, SeedPurpose::EvalEnv, 3));
    b.reset(purpose_seed(c.seed, SeedPurpose::EvalEnv, 3));
    EXPECT_EQ(a.raw_snr(), b.raw_snr());
    RandomPolicy ra;
    LeastLoadedPolicy llf;
    RandomStream r1(1), r2(2);
    while (!a.done() && !b.done()) {
        a.step(ra.select(a, r1));
        b.step(llf.select(b, r2));
        for (std::size_t j = 0; j < 2; ++j)
            ASSERT_EQ(a.world().aps[j].pose, b.world().aps[j].pose);
        for (std::size_t i = 0; i < 2; ++i)
            ASSERT_EQ(a.world().vehicles[i].pose, b.world().vehicles[i].pose);
    }
}

TEST(Compare, EmptyPolicyListIsUsageError)
{
    RunConfig c = small_run(fresh_dir("compare_empty"));
    std::ostringstream log;
    EXPECT_THROW(run_compare(c, {}, log), UsageError);
}
