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
#include "asynctrig/cli.hpp"

#include <cstdlib>
#include <exception>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "asynctrig/error.hpp"
#include "asynctrig/serialization.hpp"

namespace asynctrig {

namespace {

struct Source {
    std::string config_path;
    std::string preset;
    std::optional<std::uint64_t> seed;
    std::string out_dir;
};

void add_source_options(CLI::App* cmd, Source& src)
{
    cmd->add_option("-c,--config", src.config_path, "JSON config file");
    cmd->add_option("-p,--preset", src.preset, "named preset instead of a config file");
}

void add_run_options(CLI::App* cmd, Source& src)
{
    cmd->add_option("--seed", src.seed, "tie-breaking seed (overrides ASYNCTRIG_SEED and the config)");
    cmd->add_option("-o,--out-dir", src.out_dir, "output directory");
}

RunConfig resolve(const Source& src)
{
    if (src.config_path.empty() == src.preset.empty())
        throw ConfigError("give exactly one of --config or --preset");
    RunConfig rc = src.preset.empty() ? load_config(src.config_path) : make_preset(src.preset);
    rc.sim.seed = resolve_seed(rc.sim.seed, std::getenv("ASYNCTRIG_SEED"), src.seed);
    if (!src.out_dir.empty())
        rc.output_dir = src.out_dir;
    return rc;
}

std::string csv_matrix(const Matrix& m)
{
    std::string out;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%s%.17g", j ? " " : "", m(i, j));
            out += buf;
        }
        out += "\n";
    }
    return out;
}

Json certificate_json(const Synthesis& s)
{
    if (s.unperturbed)
        return to_json(*s.unperturbed);
    if (s.online)
        return to_json(*s.online);
    if (s.offline)
        return to_json(*s.offline);
    throw ConfigError("periodic mode has no certificate");
}

} // namespace

RunOutcome run_pipeline(const RunConfig& config, bool plots)
{
    RunOutcome out;
    out.synthesis = synthesize(config.sim);
    out.trace = simulate(config.sim, out.synthesis);

    const std::filesystem::path dir = config.output_dir;
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir))
        throw IoError("cannot create output directory '" + dir.string() + "'");

    const auto trace_path = dir / (config.prefix + "_trace.csv");
    const auto decision_path = dir / (config.prefix + "_decisions.csv");
    write_text(trace_path, trace_csv(out.trace));
    write_text(decision_path, decision_csv(out.trace, config.sim.t));
    out.manifest.outputs = {trace_path.string(), decision_path.string()};
    if (plots)
        for (const auto& p : emit_plots(out.trace, dir, config.prefix))
            out.manifest.outputs.push_back(p.string());

    out.manifest.digest = config_digest(config);
    out.manifest.preset = config.preset;
    if (out.synthesis.lyapunov_matrix() != nullptr)
        out.manifest.certificate = summarize_certificate(out.synthesis);
    out.manifest.metrics = out.trace.metrics;
    const auto manifest_path = dir / (config.prefix + "_manifest.json");
    out.manifest.outputs.push_back(manifest_path.string());
    write_text(manifest_path, to_json(out.manifest).dump(2) + "\n");
    return out;
}

int exit_code_for_current_exception(std::ostream& err)
{
    try {
        throw;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const InfeasibleError& e) {
        err << "infeasible: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const ResourceError& e) {
        err << "resource cap: " << e.what() << "\n";
        return kExitResource;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitError;
    }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Self-triggered asynchronous sensor scheduling"};
    app.require_subcommand(1);

    Source src;

    auto* discretize_cmd = app.add_subcommand("discretize", "print A_T and B_T");
    add_source_options(discretize_cmd, src);
    std::optional<double> period;
    discretize_cmd->add_option("-T,--period", period, "sampling period override");

    auto* horizons_cmd = app.add_subcommand("horizons", "enumerate horizons with their idle metric");
    int m = 2, l_min = 1, l_max = 3;
    std::size_t cap = kDefaultEnumerationCap;
    horizons_cmd->add_option("--m", m, "sensor count")->required();
    horizons_cmd->add_option("--lmin", l_min, "shortest length")->required();
    horizons_cmd->add_option("--lmax", l_max, "longest length")->required();
    horizons_cmd->add_option("--cap", cap, "enumeration cap");

    auto* synth_cmd = app.add_subcommand("synthesize", "certificate JSON");
    add_source_options(synth_cmd, src);
    std::string json_out;
    synth_cmd->add_option("--json", json_out, "write JSON here instead of stdout");

    auto* partition_cmd = app.add_subcommand("partition", "conic regions JSON");
    int dim = 4, regions = 15;
    partition_cmd->add_option("--dim", dim, "ambient dimension");
    partition_cmd->add_option("--regions", regions, "region count");
    partition_cmd->add_option("--json", json_out, "write JSON here instead of stdout");

    auto* simulate_cmd = app.add_subcommand("simulate", "trace CSV and summary");
    add_source_options(simulate_cmd, src);
    add_run_options(simulate_cmd, src);
    std::vector<std::string> sweep;
    simulate_cmd->add_option("--sweep", sweep, "run several config files in parallel");

    auto* report_cmd = app.add_subcommand("report", "summary, CSVs and SVG plots");
    add_source_options(report_cmd, src);
    add_run_options(report_cmd, src);

    auto* preset_cmd = app.add_subcommand("preset", "run a named experiment end to end");
    std::string preset_name;
    preset_cmd->add_option("name", preset_name, "preset name")
        ->required()
        ->check(CLI::IsMember(preset_names()));
    add_run_options(preset_cmd, src);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*discretize_cmd) {
            RunConfig rc = resolve(src);
            const auto dp = discretize(rc.sim.plant, period.value_or(rc.sim.t));
            out << "A_T\n" << csv_matrix(dp.a_t) << "B_T\n" << csv_matrix(dp.b_t);
        } else if (*horizons_cmd) {
            for (const auto& h : enumerate_horizons(m, l_min, l_max, cap)) {
                char buf[40];
                std::snprintf(buf, sizeof buf, " %.17g\n", avg_idle_metric(h, m));
                out << h.to_string() << buf;
            }
        } else if (*synth_cmd) {
            const auto synthesis = synthesize(resolve(src).sim);
            const std::string text = certificate_json(synthesis).dump(2) + "\n";
            if (json_out.empty())
                out << text;
            else
                write_text(json_out, text);
        } else if (*partition_cmd) {
            const std::string text = to_json(make_partition(dim, regions)).dump(2) + "\n";
            if (json_out.empty())
                out << text;
            else
                write_text(json_out, text);
        } else if (*simulate_cmd && !sweep.empty()) {
            std::vector<RunConfig> runs;
            std::vector<SimConfig> sims;
            for (std::size_t i = 0; i < sweep.size(); ++i) {
                RunConfig rc = load_config(sweep[i]);
                rc.sim.seed = resolve_seed(rc.sim.seed, std::getenv("ASYNCTRIG_SEED"), src.seed);
                if (!src.out_dir.empty())
                    rc.output_dir = src.out_dir;
                rc.prefix += "_" + std::to_string(i);
                sims.push_back(rc.sim);
                runs.push_back(std::move(rc));
            }
            const auto traces = simulate_sweep(sims);
            for (std::size_t i = 0; i < runs.size(); ++i) {
                std::filesystem::create_directories(runs[i].output_dir);
                const auto path = std::filesystem::path(runs[i].output_dir) / (runs[i].prefix + "_trace.csv");
                write_text(path, trace_csv(traces[i]));
                out << path.string() << " utilization_reduction "
                    << traces[i].metrics.utilization_reduction << "\n";
            }
        } else if (*simulate_cmd || *report_cmd) {
            const auto outcome = run_pipeline(resolve(src), static_cast<bool>(*report_cmd));
            out << summary_text(outcome.manifest);
        } else if (*preset_cmd) {
            src.preset = preset_name;
            const auto outcome = run_pipeline(resolve(src), true);
            out << summary_text(outcome.manifest);
        }
    } catch (...) {
        return exit_code_for_current_exception(err);
    }
    return kExitOk;
}

} // namespace asynctrig
