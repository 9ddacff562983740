#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>

#include "apsel/ddpg.hpp"

namespace apsel {

inline constexpr int kCheckpointVersion = 1;

/// Hash over everything that fixes network shapes: fleet size, AP count and
/// hidden widths. Stored in the checkpoint and re-checked on load.
std::string config_hash(std::size_t n_vehicles, std::size_t n_aps, const AgentConfig& config);

struct CheckpointMeta {
    std::size_t episodes_trained = 0;
    std::uint64_t seed = 0;
};

/// Versioned JSON document with the config echo, layer dimensions,
/// activation tags, row-major parameters of all four networks, both
/// optimizers' moments and epsilon. Written to a temporary and renamed.
void save_checkpoint(const DdpgAgent& agent, const CheckpointMeta& meta, const std::filesystem::path& path);

struct LoadedCheckpoint {
    DdpgAgent agent;
    CheckpointMeta meta;
};

/// Restores an agent. Throws DomainError on a malformed file, a version
/// mismatch, or when the stored config hash does not match either the echoed
/// config or the expected fleet dimensions.
LoadedCheckpoint load_checkpoint(const std::filesystem::path& path, std::size_t expected_vehicles,
                                 std::size_t expected_aps);

}  // namespace apsel
