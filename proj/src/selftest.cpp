#include "apsel/selftest.hpp"

#include <cmath>
#include <sstream>

#include "apsel/channel.hpp"
#include "apsel/ddpg.hpp"
#include "apsel/env.hpp"
#include "apsel/policies.hpp"

namespace apsel {

namespace {

CheckResult near(const std::string& name, double got, double want, double tol)
{
    std::ostringstream d;
    d.precision(10);
    d << "got " << got << ", want " << want << " +- " << tol;
    return {name, std::abs(got - want) <= tol, d.str()};
}

CheckResult train_twice()
{
    Scenario s = make_scenario1(2, 2, 20.0);
    s.ap_speed_mps = 0.0;
    AgentConfig cfg;
    cfg.actor_hidden = {8, 8};
    cfg.critic_hidden = {8, 8, 4};
    cfg.batch_size = 8;
    auto run = [&] {
        Environment env(s, ChannelParams{}, RewardConfig{});
        DdpgAgent agent(2, 2, cfg, 7);
        return train(env, agent, 5, 11).metrics;
    };
    const auto a = run();
    const auto b = run();
    bool same = a.size() == b.size();
    for (std::size_t i = 0; same && i < a.size(); ++i)
        same = a[i].cumulative_reward == b[i].cumulative_reward && a[i].critic_loss_mean == b[i].critic_loss_mean
               && a[i].steps == b[i].steps;
    return {"train determinism", same, same ? "identical" : "metrics differ"};
}

}  // namespace

std::vector<CheckResult> run_selftest()
{
    const ChannelParams ch;
    std::vector<CheckResult> out;
    out.push_back(near("noise power", noise_power(2e7, 7.0), 4.0124e-13, 4.0124e-13 * 5e-4));
    out.push_back(near("path loss 5 m", two_slope_loss_db(5.0, ch), 60.4, 0.1));
    out.push_back(near("path loss 50 m", two_slope_loss_db(50.0, ch), 95.4, 0.1));
    out.push_back(near("r_snr(0)", r_snr(0.0), -1.0, 1e-12));
    out.push_back(near("r_snr(1)", r_snr(1.0), 1.0, 1e-12));
    out.push_back(near("r_snr(0.5)", r_snr(0.5), -0.2449, 1e-4));
    out.push_back(near("r_ap_load(6,6)", r_ap_load(6, 6, 0.0), -1.0, 1e-12));
    out.push_back(near("r_ap_load(0,6)", r_ap_load(0, 6, 0.0), std::exp(-10.0), 1e-9));
    out.push_back(near("r_handover(0)", r_handover(0, 0.5), -1.0, 1e-12));

    Eigen::MatrixXd snr(2, 3);
    snr << 1, 5, 5, 9, 2, 3;
    const AssociationAction a = ssf_select(snr);
    out.push_back({"ssf argmax", a.assoc == std::vector<std::size_t>{1, 0}, "ties go to the lowest index"});
    out.push_back(train_twice());
    return out;
}

}  // namespace apsel
