#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "apsel/channel.hpp"
#include "apsel/ddpg.hpp"
#include "apsel/env.hpp"
#include "apsel/policies.hpp"
#include "apsel/world.hpp"

namespace apsel {

/// Which scenario generator to use: "1", "2" or "custom:<file>".
struct ScenarioSelector {
    ScenarioName name = ScenarioName::Scenario1;
    std::filesystem::path custom_file;

    static ScenarioSelector parse(const std::string& text);
    std::string label() const;
};

struct RunConfig {
    ScenarioSelector scenario_selector;
    Scenario scenario = make_scenario1(6, 4, 20.0);
    PolicyKind policy = PolicyKind::Ddpg;
    std::size_t episodes = 1000;
    std::size_t trials = 100;
    std::uint64_t seed = 1;
    ChannelParams channel;
    RewardConfig reward;
    AgentConfig agent;
    std::filesystem::path out_dir = ".";
    std::optional<std::filesystem::path> checkpoint;
    std::size_t checkpoint_every = 0;
    std::size_t jobs = 1;

    /// Throws DomainError for out-of-range values and UsageError for
    /// inconsistent combinations.
    void validate() const;
};

using KeyValues = std::map<std::string, std::string>;

/// Flat `key = value` text; `#` starts a comment. Duplicate keys and lines
/// without `=` are usage errors.
KeyValues parse_key_values(const std::string& text);
KeyValues load_key_values(const std::filesystem::path& path);

/// Applies keys on top of the defaults. Scenario geometry comes from the
/// `scenario` key (or `selector` when given), then scenario.* keys override.
/// Unknown keys are usage errors.
RunConfig config_from_key_values(const KeyValues& kv, const std::optional<ScenarioSelector>& selector = std::nullopt);
RunConfig load_config(const std::filesystem::path& path, const std::optional<ScenarioSelector>& selector = std::nullopt);

/// Builds a scenario from a selector plus scenario.* overrides. Custom files
/// use the same key format and must list vehicle_starts, vehicle_targets and
/// ap_starts as "(x,y) (x,y) ...".
Scenario build_scenario(const ScenarioSelector& selector, const KeyValues& overrides);

/// Round-trippable dump of every key.
std::string to_key_values(const RunConfig& config);

}  // namespace apsel
