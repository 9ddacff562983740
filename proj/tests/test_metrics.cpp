#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "apsel/errors.hpp"
#include "apsel/metrics.hpp"

using namespace apsel;

namespace {

MetricsRecord sample_record(std::size_t i)
{
    MetricsRecord r;
    r.episode_or_trial = i;
    r.cumulative_reward = -1234.5678901234567 + static_cast<double>(i);
    r.critic_loss_mean = 0.1 + 1e-17 * static_cast<double>(i);
    r.outcome = i % 2 ? Outcome::Success : Outcome::LowSnr;
    r.steps = 22 + i;
    r.mean_handovers = 1.0 / 3.0;
    r.mean_snr_db = 31.415926535897932;
    r.peak_ap_load = 3;
    r.wall_time_s = 22.0;
    return r;
}

}  // namespace

TEST(Csv, HeaderIsFieldNames)
{
    EXPECT_EQ(metrics_csv_header(),
              "episode_or_trial,cumulative_reward,critic_loss_mean,outcome,steps,mean_handovers,mean_snr_db,"
              "peak_ap_load,wall_time_s");
}

TEST(Csv, RoundTripFullPrecision)
{
    std::stringstream ss;
    ss << metrics_csv_header() << '\n';
    for (std::size_t i = 0; i < 5; ++i)
        write_metrics_row(ss, sample_record(i));
    const auto back = read_metrics_csv(ss);
    ASSERT_EQ(back.size(), 5u);
    for (std::size_t i = 0; i < 5; ++i) {
        const MetricsRecord want = sample_record(i);
        EXPECT_EQ(back[i].cumulative_reward, want.cumulative_reward);
        EXPECT_EQ(back[i].mean_handovers, want.mean_handovers);
        EXPECT_EQ(back[i].mean_snr_db, want.mean_snr_db);
        EXPECT_EQ(back[i].outcome, want.outcome);
        EXPECT_EQ(back[i].steps, want.steps);
    }
}

TEST(Csv, BadHeaderRejected)
{
    std::stringstream ss("a,b,c\n");
    EXPECT_THROW(read_metrics_csv(ss), DomainError);
}

TEST(FormatNumber, ShortestRoundTrip)
{
    EXPECT_EQ(format_number(0.1), "0.1");
    EXPECT_EQ(format_number(2500.0), "2500");
    EXPECT_EQ(std::stod(format_number(1.0 / 3.0)), 1.0 / 3.0);
}

TEST(MeanStd, SampleDeviation)
{
    const MeanStd m = mean_std({2, 4, 4, 4, 5, 5, 7, 9});
    EXPECT_DOUBLE_EQ(m.mean, 5.0);
    EXPECT_NEAR(m.stddev, std::sqrt(32.0 / 7.0), 1e-12);
    EXPECT_EQ(mean_std({3.0}).stddev, 0.0);
}

TEST(Summary, SingleTrialEqualsRecord)
{
    const Scenario s = make_scenario1(6, 4, 20.0);
    const MetricsRecord r = sample_record(1);
    const EvalSummary sum = summarize("ssf", {r}, s);
    EXPECT_EQ(sum.trials, 1u);
    EXPECT_EQ(sum.reward.mean, r.cumulative_reward);
    EXPECT_EQ(sum.snr_db.mean, r.mean_snr_db);
    EXPECT_EQ(sum.handovers.mean, r.mean_handovers);
    EXPECT_EQ(sum.steps.mean, static_cast<double>(r.steps));
    EXPECT_EQ(sum.peak_ap_load.mean, 3.0);
    EXPECT_EQ(sum.success_rate, 1.0);
    EXPECT_EQ(sum.reward.stddev, 0.0);
}

TEST(CompletionTime, CensoredAtHorizon)
{
    Scenario s = make_scenario1(6, 4, 20.0);
    s.dt_s = 0.5;
    MetricsRecord ok = sample_record(1);
    MetricsRecord bad = sample_record(0);
    EXPECT_DOUBLE_EQ(completion_time_s(ok, s), 0.5 * static_cast<double>(ok.steps));
    EXPECT_DOUBLE_EQ(completion_time_s(bad, s), 0.5 * 100.0);
}

TEST(Accumulator, FoldsEpisode)
{
    Environment env(make_scenario1(2, 2, 20.0), ChannelParams{}, RewardConfig{});
    env.reset(1);
    EpisodeAccumulator acc;
    StepResult a, b;
    a.reward = 1.5;
    a.info.serving_snr_db = {30.0, 20.0};
    a.info.loads = {2, 0};
    b.reward = -0.5;
    b.info.serving_snr_db = {40.0, 40.0};
    b.info.loads = {1, 1};
    b.outcome = Outcome::Timeout;
    acc.add(a);
    acc.add(b);
    const MetricsRecord r = acc.finish(7, env, 0.25);
    EXPECT_EQ(r.episode_or_trial, 7u);
    EXPECT_DOUBLE_EQ(r.cumulative_reward, 1.0);
    EXPECT_DOUBLE_EQ(r.mean_snr_db, 32.5);
    EXPECT_EQ(r.peak_ap_load, 2u);
    EXPECT_EQ(r.steps, 2u);
    EXPECT_EQ(r.outcome, Outcome::Timeout);
    EXPECT_EQ(r.critic_loss_mean, 0.25);
    EXPECT_DOUBLE_EQ(r.wall_time_s, 2.0);
}
