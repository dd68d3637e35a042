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

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "asynctrig/config.hpp"
#include "asynctrig/simulation.hpp"

namespace asynctrig {

/// Header: step,t,x_1..x_n,xhat_1..xhat_n,u_1..u_p,action,V. LF line endings.
std::string trace_csv(const SimTrace& trace);
void write_text(const std::filesystem::path& path, const std::string& text);

/// One row per decision: step,tau,mode,horizon,metric,feasible_count,tie_count,inside_ellipsoid,region.
std::string decision_csv(const SimTrace& trace, double t);

/**
 * states.svg, lyapunov.svg (log10 V), sensors.svg (action per step). Each
 * polyline carries data-series and data-values holding the exact plotted
 * samples, so the files can be checked against the CSV.
 */
std::vector<std::filesystem::path> emit_plots(const SimTrace& trace, const std::filesystem::path& out_dir,
                                              const std::string& prefix = "run");

struct CertificateSummary {
    std::string kind;
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    std::optional<double> gamma;
    std::optional<double> gamma1;
    std::optional<double> gamma2;
    std::optional<double> mu;
    std::string sigma_star;
};

struct RunManifest {
    std::string digest;
    std::optional<std::string> preset;
    std::optional<CertificateSummary> certificate;
    SimMetrics metrics;
    std::vector<std::string> outputs;
};

CertificateSummary summarize_certificate(const Synthesis& synthesis);
Json to_json(const RunManifest& manifest);
std::string summary_text(const RunManifest& manifest);

} // namespace asynctrig
