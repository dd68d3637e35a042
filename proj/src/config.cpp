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
#include "asynctrig/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <numbers>

#include "asynctrig/error.hpp"

namespace asynctrig {

namespace {

template <typename T>
T get_or(const Json& j, const char* key, T fallback)
{
    if (!j.contains(key))
        return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("field '") + key + "': " + e.what());
    }
}

const Json& section(const Json& j, const char* key)
{
    if (!j.contains(key) || !j.at(key).is_object())
        throw ConfigError(std::string("missing section '") + key + "'");
    return j.at(key);
}

Vector values(std::initializer_list<double> xs)
{
    Vector v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs)
        v(i++) = x;
    return v;
}

} // namespace

PlantModel example_plant()
{
    PlantModel p;
    p.a = Matrix{{0.0, 1.0}, {-2.0, 3.0}};
    p.b = Matrix{{0.0}, {1.0}};
    p.k = Matrix{{1.0, -4.0}};
    p.blocks = {1, 1};
    return p;
}

PlantModel example_perturbed_plant()
{
    PlantModel p = example_plant();
    p.d = Matrix{{1.0}, {1.0}};
    p.w_max = 1.0;
    return p;
}

RunConfig parse_config(const Json& j)
{
    if (!j.is_object())
        throw ConfigError("config must be a JSON object");
    RunConfig rc;
    auto& s = rc.sim;

    const auto& plant = section(j, "plant");
    s.plant.a = matrix_from_json(plant.at("A"));
    s.plant.b = matrix_from_json(plant.at("B"));
    s.plant.k = matrix_from_json(plant.at("K"));
    if (plant.contains("D"))
        s.plant.d = matrix_from_json(plant.at("D"));
    s.plant.blocks = get_or<std::vector<int>>(plant, "blocks", {});
    s.plant.w_max = get_or(plant, "w_max", 0.0);

    const auto& disc = section(j, "discretization");
    s.t = get_or(disc, "T", 0.0);
    s.substeps = get_or(disc, "substeps", 100);

    const auto& hz = section(j, "horizons");
    s.l_min = get_or(hz, "l_min", 1);
    s.l_max = get_or(hz, "l_max", 1);
    s.enumeration_cap = get_or<std::size_t>(hz, "cap", kDefaultEnumerationCap);

    if (!j.contains("mode") || !j.at("mode").is_string())
        throw ConfigError("missing 'mode'");
    s.mode = parse_mode(j.at("mode").get<std::string>());

    if (j.contains("certificate")) {
        const auto& c = j.at("certificate");
        s.beta = get_or(c, "beta", s.beta);
        s.gamma = get_or(c, "gamma", s.gamma);
        s.gamma1 = get_or(c, "gamma1", s.gamma1);
        s.gamma2 = get_or(c, "gamma2", s.gamma2);
    }
    if (j.contains("partition"))
        s.regions = get_or(j.at("partition"), "regions", s.regions);

    const auto& sim = section(j, "simulation");
    if (!sim.contains("x0"))
        throw ConfigError("missing simulation.x0");
    s.x0 = vector_from_json(sim.at("x0"));
    s.total_steps = get_or(sim, "total_steps", s.total_steps);
    s.seed = get_or<std::uint64_t>(sim, "seed", 0);
    if (sim.contains("disturbance")) {
        const auto& w = sim.at("disturbance");
        s.disturbance = {get_or(w, "amplitude", 0.0), get_or(w, "omega", 0.0), get_or(w, "phase", 0.0)};
    }
    if (sim.contains("periodic_horizon"))
        s.periodic_horizon = Horizon::parse(get_or<std::string>(sim, "periodic_horizon", ""));

    if (j.contains("output")) {
        rc.output_dir = get_or<std::string>(j.at("output"), "dir", rc.output_dir);
        rc.prefix = get_or<std::string>(j.at("output"), "prefix", rc.prefix);
    }
    if (j.contains("preset"))
        rc.preset = j.at("preset").get<std::string>();
    try {
        s.validate();
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    } catch (const DimensionError& e) {
        throw ConfigError(e.what());
    }
    return rc;
}

RunConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config '" + path + "'");
    Json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config '" + path + "': " + e.what());
    }
    return parse_config(j);
}

Json config_to_json(const RunConfig& rc)
{
    const auto& s = rc.sim;
    Json plant = {{"A", matrix_to_json(s.plant.a)},
                  {"B", matrix_to_json(s.plant.b)},
                  {"K", matrix_to_json(s.plant.k)},
                  {"blocks", s.plant.blocks},
                  {"w_max", s.plant.w_max}};
    if (s.plant.d.size() > 0)
        plant["D"] = matrix_to_json(s.plant.d);
    Json sim = {{"x0", vector_to_json(s.x0)},
                {"total_steps", s.total_steps},
                {"seed", s.seed},
                {"disturbance",
                 {{"amplitude", s.disturbance.amplitude},
                  {"omega", s.disturbance.omega},
                  {"phase", s.disturbance.phase}}}};
    if (!s.periodic_horizon.empty())
        sim["periodic_horizon"] = s.periodic_horizon.to_string();
    Json out = {{"plant", plant},
                {"discretization", {{"T", s.t}, {"substeps", s.substeps}}},
                {"horizons", {{"l_min", s.l_min}, {"l_max", s.l_max}, {"cap", s.enumeration_cap}}},
                {"mode", std::string(mode_name(s.mode))},
                {"certificate", {{"beta", s.beta}, {"gamma", s.gamma}, {"gamma1", s.gamma1}, {"gamma2", s.gamma2}}},
                {"partition", {{"regions", s.regions}}},
                {"simulation", sim},
                {"output", {{"dir", rc.output_dir}, {"prefix", rc.prefix}}}};
    if (rc.preset)
        out["preset"] = *rc.preset;
    return out;
}

std::string config_digest(const RunConfig& config)
{
    const std::string text = config_to_json(config).dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

const std::vector<std::string>& preset_names()
{
    static const std::vector<std::string> names = {"online-unperturbed", "offline-unperturbed", "online-perturbed",
                                                   "offline-perturbed"};
    return names;
}

RunConfig make_preset(std::string_view name)
{
    RunConfig rc;
    rc.preset = std::string(name);
    rc.prefix = std::string(name);
    auto& s = rc.sim;
    s.beta = 0.0;
    s.total_steps = 100;
    s.seed = 0;
    if (name == "online-unperturbed") {
        s.plant = example_plant();
        s.mode = TriggerMode::OnlineUnperturbed;
        s.t = 0.3;
        s.l_min = 1;
        s.l_max = 3;
        s.x0 = values({5.0, -2.0, 5.0, -2.0});
    } else if (name == "offline-unperturbed") {
        s.plant = example_plant();
        s.mode = TriggerMode::OfflineUnperturbed;
        s.t = 0.205;
        s.l_min = 1;
        s.l_max = 6;
        s.regions = 15;
        s.x0 = values({15.0, -1.5, 15.0, -1.5});
    } else if (name == "online-perturbed") {
        s.plant = example_perturbed_plant();
        s.mode = TriggerMode::OnlinePerturbed;
        s.t = 0.205;
        s.l_min = 1;
        s.l_max = 6;
        s.gamma = 0.35;
        s.x0 = values({5.0, -2.0});
        s.disturbance = {1.0, 5.0 * std::numbers::pi, 0.0};
    } else if (name == "offline-perturbed") {
        s.plant = example_perturbed_plant();
        s.mode = TriggerMode::OfflinePerturbed;
        s.t = 0.205;
        s.l_min = 3;
        s.l_max = 6;
        s.regions = 15;
        s.gamma1 = 0.35;
        s.gamma2 = 0.175;
        s.x0 = values({15.0, -1.5, 15.0, -1.5});
        s.disturbance = {1.0, 5.0 * std::numbers::pi, 0.0};
    } else {
        throw ConfigError("unknown preset '" + std::string(name) + "'");
    }
    s.validate();
    return rc;
}

std::uint64_t resolve_seed(std::uint64_t config_seed, const char* env_value, std::optional<std::uint64_t> flag)
{
    if (flag)
        return *flag;
    if (env_value != nullptr && *env_value != '\0') {
        std::uint64_t v = 0;
        const std::string_view text(env_value);
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (ec != std::errc() || ptr != text.data() + text.size())
            throw ConfigError("ASYNCTRIG_SEED must be a non-negative integer");
        return v;
    }
    return config_seed;
}

} // namespace asynctrig
