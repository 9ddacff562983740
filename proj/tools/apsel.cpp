// apsel: train, evaluate and compare AP-selection policies.

#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "apsel/config.hpp"
#include "apsel/errors.hpp"
#include "apsel/harness.hpp"
#include "apsel/selftest.hpp"

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kRuntime = 2, kSelfTest = 3 };

struct CommonOptions {
    std::string config;
    std::string scenario;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    std::optional<std::size_t> trials;
    std::optional<std::size_t> jobs;
    std::optional<std::string> checkpoint;
};

void add_common(CLI::App* cmd, CommonOptions& o)
{
    cmd->add_option("--config", o.config, "key = value config file");
    cmd->add_option("--scenario", o.scenario, "1, 2 or custom:<file>");
    cmd->add_option("--seed", o.seed, "master seed");
    cmd->add_option("--out-dir", o.out_dir, "output directory");
}

apsel::RunConfig resolve(const CommonOptions& o)
{
    std::optional<apsel::ScenarioSelector> selector;
    if (!o.scenario.empty())
        selector = apsel::ScenarioSelector::parse(o.scenario);
    apsel::KeyValues kv;
    if (!o.config.empty())
        kv = apsel::load_key_values(o.config);
    apsel::RunConfig c = apsel::config_from_key_values(kv, selector);
    if (o.seed) c.seed = *o.seed;
    if (o.out_dir) c.out_dir = *o.out_dir;
    if (o.trials) c.trials = *o.trials;
    if (o.jobs) c.jobs = *o.jobs;
    if (o.checkpoint) c.checkpoint = *o.checkpoint;
    c.validate();
    return c;
}

std::vector<apsel::PolicyKind> parse_policies(const std::string& list)
{
    std::vector<apsel::PolicyKind> out;
    std::istringstream in(list);
    std::string item;
    while (std::getline(in, item, ',')) {
        try {
            out.push_back(apsel::policy_from_string(item));
        } catch (const std::exception&) {
            throw apsel::UsageError("unknown policy '" + item + "'");
        }
    }
    if (out.empty())
        throw apsel::UsageError("--policies is empty");
    return out;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"AP selection for mobile vehicles: DDPG agent and baseline policies"};
    app.require_subcommand(1);

    CommonOptions train_opts;
    std::optional<std::size_t> episodes;
    std::optional<std::size_t> checkpoint_every;
    CLI::App* train_cmd = app.add_subcommand("train", "train a DDPG agent");
    add_common(train_cmd, train_opts);
    train_cmd->add_option("--episodes", episodes, "training episodes");
    train_cmd->add_option("--checkpoint", train_opts.checkpoint, "checkpoint file to write");
    train_cmd->add_option("--checkpoint-every", checkpoint_every, "save every N episodes (0 = only at the end)");

    CommonOptions eval_opts;
    std::string eval_policy;
    CLI::App* eval_cmd = app.add_subcommand("eval", "evaluate one policy over seeded trials");
    add_common(eval_cmd, eval_opts);
    eval_cmd->add_option("--policy", eval_policy, "ddpg, ra, ssf or llf")->required();
    eval_cmd->add_option("--checkpoint", eval_opts.checkpoint, "DDPG checkpoint");
    eval_cmd->add_option("--trials", eval_opts.trials, "number of trials");
    eval_cmd->add_option("--jobs", eval_opts.jobs, "worker threads");

    CommonOptions cmp_opts;
    std::string policies = "ra,ssf,llf,ddpg";
    CLI::App* cmp_cmd = app.add_subcommand("compare", "evaluate several policies on the same seeds");
    add_common(cmp_cmd, cmp_opts);
    cmp_cmd->add_option("--policies", policies, "comma separated list")->capture_default_str();
    cmp_cmd->add_option("--checkpoint", cmp_opts.checkpoint, "DDPG checkpoint");
    cmp_cmd->add_option("--trials", cmp_opts.trials, "number of trials");
    cmp_cmd->add_option("--jobs", cmp_opts.jobs, "worker threads");

    CLI::App* self_cmd = app.add_subcommand("selftest", "run the built-in consistency checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        if (*self_cmd) {
            bool ok = true;
            for (const apsel::CheckResult& r : apsel::run_selftest()) {
                std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << '\n';
                ok = ok && r.passed;
            }
            return ok ? kOk : kSelfTest;
        }
        if (*train_cmd) {
            apsel::RunConfig c = resolve(train_opts);
            if (episodes) c.episodes = *episodes;
            if (checkpoint_every) c.checkpoint_every = *checkpoint_every;
            c.policy = apsel::PolicyKind::Ddpg;
            apsel::run_train(c, std::cout);
        } else if (*eval_cmd) {
            apsel::RunConfig c = resolve(eval_opts);
            c.policy = parse_policies(eval_policy).front();
            apsel::run_eval(c, std::cout);
        } else if (*cmp_cmd) {
            const apsel::RunConfig c = resolve(cmp_opts);
            apsel::run_compare(c, parse_policies(policies), std::cout);
        }
    } catch (const apsel::UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const apsel::DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << '\n';
        return kRuntime;
    }
    return kOk;
}
