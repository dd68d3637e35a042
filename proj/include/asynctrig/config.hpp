/*
 Copyright 2026 The asynctrig Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "asynctrig/serialization.hpp"
#include "asynctrig/simulation.hpp"

namespace asynctrig {

struct RunConfig {
    SimConfig sim;
    std::string output_dir = "out";
    std::string prefix = "run";
    std::optional<std::string> preset;
};

/**
 * Sections: plant {A, B, K, D?, blocks, w_max?}, discretization {T, substeps?},
 * horizons {l_min, l_max, cap?}, mode, certificate {beta?, gamma?, gamma1?,
 * gamma2?}, partition {regions?}, simulation {x0, total_steps?, seed?,
 * disturbance?, periodic_horizon?}, output {dir?, prefix?}.
 */
RunConfig parse_config(const Json& j);
RunConfig load_config(const std::string& path);
Json config_to_json(const RunConfig& config);

/// FNV-1a 64 over the canonical JSON dump, as 16 hex digits.
std::string config_digest(const RunConfig& config);

const std::vector<std::string>& preset_names();
RunConfig make_preset(std::string_view name);

PlantModel example_plant();
PlantModel example_perturbed_plant();

/// Flag beats ASYNCTRIG_SEED, which beats the config value.
std::uint64_t resolve_seed(std::uint64_t config_seed, const char* env_value, std::optional<std::uint64_t> flag);

} // namespace asynctrig
