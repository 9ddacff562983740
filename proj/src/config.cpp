#include "apsel/config.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>
#include <vector>

#include "apsel/errors.hpp"
#include "apsel/io.hpp"
#include "apsel/metrics.hpp"

namespace apsel {

namespace {

std::string trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

double parse_double(const std::string& key, const std::string& v)
{
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size())
        throw UsageError("config: " + key + " expects a number, got '" + v + "'");
    return out;
}

std::uint64_t parse_u64(const std::string& key, const std::string& v)
{
    std::uint64_t out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size())
        throw UsageError("config: " + key + " expects a non-negative integer, got '" + v + "'");
    return out;
}

std::size_t parse_size(const std::string& key, const std::string& v)
{
    return static_cast<std::size_t>(parse_u64(key, v));
}

bool parse_bool(const std::string& key, const std::string& v)
{
    if (v == "true" || v == "1" || v == "yes")
        return true;
    if (v == "false" || v == "0" || v == "no")
        return false;
    throw UsageError("config: " + key + " expects true/false, got '" + v + "'");
}

std::vector<std::size_t> parse_size_list(const std::string& key, const std::string& v)
{
    std::vector<std::size_t> out;
    std::string item;
    std::istringstream in(v);
    while (std::getline(in, item, ','))
        out.push_back(parse_size(key, trim(item)));
    return out;
}

std::vector<Pose> parse_poses(const std::string& key, const std::string& v)
{
    std::vector<Pose> out;
    std::size_t pos = 0;
    while (true) {
        const auto open = v.find('(', pos);
        if (open == std::string::npos) {
            if (!trim(v.substr(pos)).empty())
                throw UsageError("config: " + key + " has trailing text");
            break;
        }
        if (!trim(v.substr(pos, open - pos)).empty())
            throw UsageError("config: " + key + " expects (x,y) pairs");
        const auto close = v.find(')', open);
        const auto comma = v.find(',', open);
        if (close == std::string::npos || comma == std::string::npos || comma > close)
            throw UsageError("config: " + key + " expects (x,y) pairs");
        out.push_back({parse_double(key, trim(v.substr(open + 1, comma - open - 1))),
                       parse_double(key, trim(v.substr(comma + 1, close - comma - 1)))});
        pos = close + 1;
    }
    return out;
}

std::string poses_to_string(const std::vector<Pose>& poses)
{
    std::string out;
    for (const Pose& p : poses) {
        if (!out.empty())
            out += ' ';
        out += "(" + format_number(p.x) + "," + format_number(p.y) + ")";
    }
    return out;
}

std::string sizes_to_string(const std::vector<std::size_t>& v)
{
    std::string out;
    for (std::size_t x : v) {
        if (!out.empty())
            out += ',';
        out += std::to_string(x);
    }
    return out;
}

bool has_prefix(const std::string& key, std::string_view prefix)
{
    return key.size() > prefix.size() && key.compare(0, prefix.size(), prefix) == 0;
}

void apply_channel(ChannelParams& c, const std::string& k, const std::string& v)
{
    const std::string key = "channel." + k;
    if (k == "tx_power") c.tx_power = parse_double(key, v);
    else if (k == "tx_power_as_mw") c.tx_power_as_mw = parse_bool(key, v);
    else if (k == "op_bandwidth_hz") c.op_bandwidth_hz = parse_double(key, v);
    else if (k == "frequency_hz") c.frequency_hz = parse_double(key, v);
    else if (k == "noise_figure_db") c.noise_figure_db = parse_double(key, v);
    else if (k == "breakpoint_m") c.breakpoint_m = parse_double(key, v);
    else if (k == "slope_pre") c.slope_pre = parse_double(key, v);
    else if (k == "slope_post") c.slope_post = parse_double(key, v);
    else if (k == "shadow_sigma_pre_db") c.shadow_sigma_pre_db = parse_double(key, v);
    else if (k == "shadow_sigma_post_db") c.shadow_sigma_post_db = parse_double(key, v);
    else if (k == "penetration_loss_db") c.penetration_loss_db = parse_double(key, v);
    else if (k == "fixed_shadow_db") c.fixed_shadow_db = parse_double(key, v);
    else if (k == "min_distance_m") c.min_distance_m = parse_double(key, v);
    else if (k == "shadow_enabled") c.shadow_enabled = parse_bool(key, v);
    else throw UsageError("config: unknown key " + key);
}

void apply_reward(RewardConfig& r, const std::string& k, const std::string& v)
{
    const std::string key = "reward." + k;
    if (k == "w_snr") r.w_snr = parse_double(key, v);
    else if (k == "w_load") r.w_load = parse_double(key, v);
    else if (k == "w_handover") r.w_handover = parse_double(key, v);
    else if (k == "w_target") r.w_target = parse_double(key, v);
    else if (k == "load_penalty") r.load_penalty = parse_double(key, v);
    else if (k == "handover_k") r.handover_k = parse_double(key, v);
    else if (k == "success_reward") r.success_reward = parse_double(key, v);
    else if (k == "failure_reward") r.failure_reward = parse_double(key, v);
    else if (k == "snr_threshold_db") r.snr_threshold_db = parse_double(key, v);
    else if (k == "max_load") r.max_load = parse_size(key, v);
    else throw UsageError("config: unknown key " + key);
}

void apply_agent(AgentConfig& a, const std::string& k, const std::string& v)
{
    const std::string key = "agent." + k;
    if (k == "lr_actor") a.lr_actor = parse_double(key, v);
    else if (k == "lr_critic") a.lr_critic = parse_double(key, v);
    else if (k == "gamma") a.gamma = parse_double(key, v);
    else if (k == "tau") a.tau = parse_double(key, v);
    else if (k == "batch_size") a.batch_size = parse_size(key, v);
    else if (k == "buffer_size") a.buffer_size = parse_size(key, v);
    else if (k == "epsilon_start") a.epsilon_start = parse_double(key, v);
    else if (k == "epsilon_decay") a.epsilon_decay = parse_double(key, v);
    else if (k == "epsilon_min") a.epsilon_min = parse_double(key, v);
    else if (k == "noise_sigma") a.noise_sigma = parse_double(key, v);
    else if (k == "warmup_transitions") a.warmup_transitions = parse_size(key, v);
    else if (k == "actor_hidden") a.actor_hidden = parse_size_list(key, v);
    else if (k == "critic_hidden") a.critic_hidden = parse_size_list(key, v);
    else if (k == "final_layer_init") a.final_layer_init = parse_double(key, v);
    else if (k == "reward_scale") a.reward_scale = parse_double(key, v);
    else if (k == "actor_logit_l2") a.actor_logit_l2 = parse_double(key, v);
    else throw UsageError("config: unknown key " + key);
}

const std::vector<std::string>& scenario_keys()
{
    static const std::vector<std::string> keys{"n_vehicles",   "n_aps",          "world_size_m",   "goal_radius_m",
                                               "dt_s",         "max_steps",      "vehicle_speed_mps", "ap_speed_mps",
                                               "vehicle_starts", "vehicle_targets", "ap_starts"};
    return keys;
}

}  // namespace

ScenarioSelector ScenarioSelector::parse(const std::string& text)
{
    ScenarioSelector s;
    if (text == "1") {
        s.name = ScenarioName::Scenario1;
    } else if (text == "2") {
        s.name = ScenarioName::Scenario2;
    } else if (text.rfind("custom:", 0) == 0 && text.size() > 7) {
        s.name = ScenarioName::Custom;
        s.custom_file = text.substr(7);
    } else {
        throw UsageError("scenario must be 1, 2 or custom:<file>, got '" + text + "'");
    }
    return s;
}

std::string ScenarioSelector::label() const
{
    switch (name) {
    case ScenarioName::Scenario1: return "1";
    case ScenarioName::Scenario2: return "2";
    case ScenarioName::Custom: return "custom:" + custom_file.string();
    }
    return "?";
}

void RunConfig::validate() const
{
    scenario.validate();
    channel.validate();
    reward.validate();
    agent.validate();
    if (trials < 1)
        throw DomainError("trials must be at least 1");
    if (jobs < 1)
        throw DomainError("jobs must be at least 1");
}

KeyValues parse_key_values(const std::string& text)
{
    KeyValues out;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        const std::string t = trim(line);
        if (t.empty())
            continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw UsageError("config line " + std::to_string(line_no) + ": expected key = value");
        const std::string key = trim(std::string_view(t).substr(0, eq));
        const std::string value = trim(std::string_view(t).substr(eq + 1));
        if (key.empty())
            throw UsageError("config line " + std::to_string(line_no) + ": empty key");
        if (!out.emplace(key, value).second)
            throw UsageError("config line " + std::to_string(line_no) + ": duplicate key " + key);
    }
    return out;
}

KeyValues load_key_values(const std::filesystem::path& path)
{
    std::string text;
    try {
        text = read_file(path);
    } catch (const std::runtime_error& e) {
        throw UsageError(std::string("config: ") + e.what());
    }
    return parse_key_values(text);
}

Scenario build_scenario(const ScenarioSelector& selector, const KeyValues& overrides)
{
    KeyValues kv;
    if (selector.name == ScenarioName::Custom) {
        // scenario.* keys in the main config still override the file.
        for (const auto& [k, v] : load_key_values(selector.custom_file))
            kv[has_prefix(k, "scenario.") ? k.substr(9) : k] = v;
    }
    for (const auto& [k, v] : overrides)
        kv[k] = v;
    for (const auto& [k, v] : kv)
        if (std::find(scenario_keys().begin(), scenario_keys().end(), k) == scenario_keys().end())
            throw UsageError("config: unknown key scenario." + k);

    auto get_size = [&](const std::string& k, std::size_t dflt) {
        const auto it = kv.find(k);
        return it == kv.end() ? dflt : parse_size("scenario." + k, it->second);
    };
    auto get_double = [&](const std::string& k, double dflt) {
        const auto it = kv.find(k);
        return it == kv.end() ? dflt : parse_double("scenario." + k, it->second);
    };

    Scenario s;
    const double world = get_double("world_size_m", 20.0);
    if (selector.name == ScenarioName::Custom) {
        for (const char* k : {"vehicle_starts", "vehicle_targets", "ap_starts"})
            if (!kv.count(k))
                throw UsageError(std::string("custom scenario is missing ") + k);
        s.name = ScenarioName::Custom;
        s.world_size_m = world;
        s.vehicle_starts = parse_poses("scenario.vehicle_starts", kv.at("vehicle_starts"));
        s.vehicle_targets = parse_poses("scenario.vehicle_targets", kv.at("vehicle_targets"));
        s.ap_starts = parse_poses("scenario.ap_starts", kv.at("ap_starts"));
        s.n_vehicles = get_size("n_vehicles", s.vehicle_starts.size());
        s.n_aps = get_size("n_aps", s.ap_starts.size());
    } else {
        const std::size_t nv = get_size("n_vehicles", 6);
        const std::size_t na = get_size("n_aps", 4);
        s = selector.name == ScenarioName::Scenario1 ? make_scenario1(nv, na, world) : make_scenario2(nv, na, world);
        if (kv.count("vehicle_starts"))
            s.vehicle_starts = parse_poses("scenario.vehicle_starts", kv.at("vehicle_starts"));
        if (kv.count("vehicle_targets"))
            s.vehicle_targets = parse_poses("scenario.vehicle_targets", kv.at("vehicle_targets"));
        if (kv.count("ap_starts"))
            s.ap_starts = parse_poses("scenario.ap_starts", kv.at("ap_starts"));
    }
    s.goal_radius_m = get_double("goal_radius_m", s.goal_radius_m);
    s.dt_s = get_double("dt_s", s.dt_s);
    s.max_steps = get_size("max_steps", s.max_steps);
    s.vehicle_speed_mps = get_double("vehicle_speed_mps", s.vehicle_speed_mps);
    s.ap_speed_mps = get_double("ap_speed_mps", s.ap_speed_mps);
    s.validate();
    return s;
}

RunConfig config_from_key_values(const KeyValues& kv, const std::optional<ScenarioSelector>& selector)
{
    RunConfig c;
    KeyValues scenario_kv;
    for (const auto& [k, v] : kv) {
        if (has_prefix(k, "channel.")) apply_channel(c.channel, k.substr(8), v);
        else if (has_prefix(k, "reward.")) apply_reward(c.reward, k.substr(7), v);
        else if (has_prefix(k, "agent.")) apply_agent(c.agent, k.substr(6), v);
        else if (has_prefix(k, "scenario.")) scenario_kv[k.substr(9)] = v;
        else if (k == "scenario") c.scenario_selector = ScenarioSelector::parse(v);
        else if (k == "policy") {
            try {
                c.policy = policy_from_string(v);
            } catch (const std::exception&) {
                throw UsageError("config: unknown policy '" + v + "'");
            }
        }
        else if (k == "episodes") c.episodes = parse_size(k, v);
        else if (k == "trials") c.trials = parse_size(k, v);
        else if (k == "seed") c.seed = parse_u64(k, v);
        else if (k == "out_dir") c.out_dir = v;
        else if (k == "checkpoint") c.checkpoint = v.empty() ? std::nullopt : std::optional<std::filesystem::path>(v);
        else if (k == "checkpoint_every") c.checkpoint_every = parse_size(k, v);
        else if (k == "jobs") c.jobs = parse_size(k, v);
        else throw UsageError("config: unknown key " + k);
    }
    if (selector)
        c.scenario_selector = *selector;
    c.scenario = build_scenario(c.scenario_selector, scenario_kv);
    c.validate();
    return c;
}

RunConfig load_config(const std::filesystem::path& path, const std::optional<ScenarioSelector>& selector)
{
    return config_from_key_values(load_key_values(path), selector);
}

std::string to_key_values(const RunConfig& c)
{
    std::ostringstream o;
    auto line = [&o](const std::string& k, const std::string& v) { o << k << " = " << v << '\n'; };
    auto num = [](double v) { return format_number(v); };
    auto flag = [](bool v) { return std::string(v ? "true" : "false"); };

    line("scenario", c.scenario_selector.label());
    line("policy", to_string(c.policy));
    line("episodes", std::to_string(c.episodes));
    line("trials", std::to_string(c.trials));
    line("seed", std::to_string(c.seed));
    line("out_dir", c.out_dir.string());
    if (c.checkpoint)
        line("checkpoint", c.checkpoint->string());
    line("checkpoint_every", std::to_string(c.checkpoint_every));
    line("jobs", std::to_string(c.jobs));

    const Scenario& s = c.scenario;
    line("scenario.n_vehicles", std::to_string(s.n_vehicles));
    line("scenario.n_aps", std::to_string(s.n_aps));
    line("scenario.world_size_m", num(s.world_size_m));
    line("scenario.goal_radius_m", num(s.goal_radius_m));
    line("scenario.dt_s", num(s.dt_s));
    line("scenario.max_steps", std::to_string(s.max_steps));
    line("scenario.vehicle_speed_mps", num(s.vehicle_speed_mps));
    line("scenario.ap_speed_mps", num(s.ap_speed_mps));
    line("scenario.vehicle_starts", poses_to_string(s.vehicle_starts));
    line("scenario.vehicle_targets", poses_to_string(s.vehicle_targets));
    line("scenario.ap_starts", poses_to_string(s.ap_starts));

    const ChannelParams& ch = c.channel;
    line("channel.tx_power", num(ch.tx_power));
    line("channel.tx_power_as_mw", flag(ch.tx_power_as_mw));
    line("channel.op_bandwidth_hz", num(ch.op_bandwidth_hz));
    line("channel.frequency_hz", num(ch.frequency_hz));
    line("channel.noise_figure_db", num(ch.noise_figure_db));
    line("channel.breakpoint_m", num(ch.breakpoint_m));
    line("channel.slope_pre", num(ch.slope_pre));
    line("channel.slope_post", num(ch.slope_post));
    line("channel.shadow_sigma_pre_db", num(ch.shadow_sigma_pre_db));
    line("channel.shadow_sigma_post_db", num(ch.shadow_sigma_post_db));
    line("channel.penetration_loss_db", num(ch.penetration_loss_db));
    line("channel.fixed_shadow_db", num(ch.fixed_shadow_db));
    line("channel.min_distance_m", num(ch.min_distance_m));
    line("channel.shadow_enabled", flag(ch.shadow_enabled));

    const RewardConfig& r = c.reward;
    line("reward.w_snr", num(r.w_snr));
    line("reward.w_load", num(r.w_load));
    line("reward.w_handover", num(r.w_handover));
    line("reward.w_target", num(r.w_target));
    line("reward.load_penalty", num(r.load_penalty));
    line("reward.handover_k", num(r.handover_k));
    line("reward.success_reward", num(r.success_reward));
    line("reward.failure_reward", num(r.failure_reward));
    line("reward.snr_threshold_db", num(r.snr_threshold_db));
    if (r.max_load)
        line("reward.max_load", std::to_string(*r.max_load));

    const AgentConfig& a = c.agent;
    line("agent.lr_actor", num(a.lr_actor));
    line("agent.lr_critic", num(a.lr_critic));
    line("agent.gamma", num(a.gamma));
    line("agent.tau", num(a.tau));
    line("agent.batch_size", std::to_string(a.batch_size));
    line("agent.buffer_size", std::to_string(a.buffer_size));
    line("agent.epsilon_start", num(a.epsilon_start));
    line("agent.epsilon_decay", num(a.epsilon_decay));
    line("agent.epsilon_min", num(a.epsilon_min));
    line("agent.noise_sigma", num(a.noise_sigma));
    if (a.warmup_transitions)
        line("agent.warmup_transitions", std::to_string(*a.warmup_transitions));
    line("agent.actor_hidden", sizes_to_string(a.actor_hidden));
    line("agent.critic_hidden", sizes_to_string(a.critic_hidden));
    line("agent.final_layer_init", num(a.final_layer_init));
    line("agent.reward_scale", num(a.reward_scale));
    line("agent.actor_logit_l2", num(a.actor_logit_l2));
    return o.str();
}

}  // namespace apsel
