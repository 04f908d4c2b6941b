#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mces/env/env_config.hpp"
#include "mces/env/environment.hpp"

namespace mces::env {

/// Two-agent tiger problem with per-agent door-opening costs.
Environment make_tiger(const EnvConfig& config, std::size_t horizon);
/// Three agents, four houses in a row; agent i guards houses i and i+1.
Environment make_fire(const EnvConfig& config, std::size_t horizon);
/// `pairs` independent pairs of robots trying to face each other.
Environment make_alignment(const EnvConfig& config, std::size_t pairs, std::size_t horizon);

/// tiger, fire, align2, align4 from <data_dir>/<name>.cfg.
Environment make_environment(std::string_view name, std::size_t horizon,
                             const std::optional<std::filesystem::path>& data_dir = {});
std::vector<std::string> environment_names();

}  // namespace mces::env
