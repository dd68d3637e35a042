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
#include "asynctrig/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>

#include "asynctrig/error.hpp"

namespace asynctrig {

namespace {

std::string num(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string px(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", x);
    return buf;
}

struct Series {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};

constexpr double kWidth = 800.0;
constexpr double kHeight = 400.0;
constexpr double kPad = 50.0;

const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

std::string render_svg(const std::string& title, const std::string& y_label, const std::vector<Series>& series,
                       bool steps)
{
    double x0 = HUGE_VAL, x1 = -HUGE_VAL, y0 = HUGE_VAL, y1 = -HUGE_VAL;
    for (const auto& s : series) {
        for (double v : s.x) {
            x0 = std::min(x0, v);
            x1 = std::max(x1, v);
        }
        for (double v : s.y) {
            y0 = std::min(y0, v);
            y1 = std::max(y1, v);
        }
    }
    if (!(x1 > x0))
        x1 = x0 + 1.0;
    if (!(y1 > y0)) {
        y0 -= 0.5;
        y1 += 0.5;
    }
    auto sx = [&](double v) { return kPad + (v - x0) / (x1 - x0) * (kWidth - 2 * kPad); };
    auto sy = [&](double v) { return kHeight - kPad - (v - y0) / (y1 - y0) * (kHeight - 2 * kPad); };

    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + px(kWidth) + "\" height=\"" +
           px(kHeight) + "\">\n";
    out += "<title>" + title + "</title>\n";
    out += "<rect x=\"0\" y=\"0\" width=\"" + px(kWidth) + "\" height=\"" + px(kHeight) + "\" fill=\"white\"/>\n";
    out += "<line x1=\"" + px(kPad) + "\" y1=\"" + px(kHeight - kPad) + "\" x2=\"" + px(kWidth - kPad) + "\" y2=\"" +
           px(kHeight - kPad) + "\" stroke=\"black\"/>\n";
    out += "<line x1=\"" + px(kPad) + "\" y1=\"" + px(kPad) + "\" x2=\"" + px(kPad) + "\" y2=\"" +
           px(kHeight - kPad) + "\" stroke=\"black\"/>\n";
    out += "<text x=\"" + px(kWidth / 2) + "\" y=\"" + px(kHeight - 10) + "\" text-anchor=\"middle\">t</text>\n";
    out += "<text x=\"12\" y=\"" + px(kHeight / 2) + "\">" + y_label + "</text>\n";
    out += "<text x=\"" + px(kPad) + "\" y=\"" + px(kPad - 8) + "\">" + num(y1) + "</text>\n";
    out += "<text x=\"" + px(kPad) + "\" y=\"" + px(kHeight - kPad + 16) + "\">" + num(y0) + "</text>\n";

    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        std::string points;
        std::string data;
        for (std::size_t i = 0; i < s.y.size(); ++i) {
            if (steps && i > 0)
                points += px(sx(s.x[i])) + "," + px(sy(s.y[i - 1])) + " ";
            points += px(sx(s.x[i])) + "," + px(sy(s.y[i])) + " ";
            data += (i ? " " : "") + num(s.y[i]);
        }
        out += "<polyline fill=\"none\" stroke=\"" + std::string(kColors[k % std::size(kColors)]) +
               "\" stroke-width=\"1.5\" data-series=\"" + s.name + "\" data-values=\"" + data + "\" points=\"" +
               points + "\"/>\n";
    }
    out += "</svg>\n";
    return out;
}

} // namespace

void write_text(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot write '" + path.string() + "'");
    out << text;
    if (!out)
        throw IoError("write failed for '" + path.string() + "'");
}

std::string trace_csv(const SimTrace& trace)
{
    std::string out = "step,t";
    for (int i = 1; i <= trace.state_dim; ++i)
        out += ",x_" + std::to_string(i);
    for (int i = 1; i <= trace.state_dim; ++i)
        out += ",xhat_" + std::to_string(i);
    for (int i = 1; i <= trace.input_dim; ++i)
        out += ",u_" + std::to_string(i);
    out += ",action,V\n";
    for (const auto& r : trace.steps) {
        out += std::to_string(r.step) + "," + num(r.t);
        for (Eigen::Index i = 0; i < r.x.size(); ++i)
            out += "," + num(r.x(i));
        for (Eigen::Index i = 0; i < r.xhat.size(); ++i)
            out += "," + num(r.xhat(i));
        for (Eigen::Index i = 0; i < r.u.size(); ++i)
            out += "," + num(r.u(i));
        out += "," + std::to_string(r.action) + "," + num(r.v) + "\n";
    }
    return out;
}

std::string decision_csv(const SimTrace& trace, double t)
{
    std::string out = "step,tau,mode,horizon,metric,feasible_count,tie_count,inside_ellipsoid,region\n";
    for (std::size_t k = 0; k < trace.decisions.size(); ++k) {
        const auto& d = trace.decisions[k];
        const auto step = trace.boundaries[k];
        out += std::to_string(step) + "," + num(static_cast<double>(step) * t) + "," + std::string(mode_name(d.mode)) +
               "," + d.horizon.to_string() + "," + num(d.metric) + "," + std::to_string(d.feasible_count) + "," +
               std::to_string(d.tie_count) + "," + (d.inside_ellipsoid ? "1" : "0") + "," +
               std::to_string(d.region) + "\n";
    }
    return out;
}

std::vector<std::filesystem::path> emit_plots(const SimTrace& trace, const std::filesystem::path& out_dir,
                                              const std::string& prefix)
{
    if (trace.steps.empty())
        throw DomainError("emit_plots: empty trace");
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec || !std::filesystem::is_directory(out_dir))
        throw IoError("cannot create output directory '" + out_dir.string() + "'");

    std::vector<double> t;
    for (const auto& r : trace.steps)
        t.push_back(r.t);

    std::vector<Series> states;
    for (int i = 0; i < trace.state_dim; ++i) {
        Series s{"x_" + std::to_string(i + 1), t, {}};
        for (const auto& r : trace.steps)
            s.y.push_back(r.x(i));
        states.push_back(std::move(s));
    }
    Series lyap{"log10_V", t, {}};
    for (const auto& r : trace.steps)
        lyap.y.push_back(std::log10(std::max(r.v, 1e-300)));
    Series sensors{"action", {}, {}};
    for (const auto& r : trace.steps) {
        sensors.x.push_back(static_cast<double>(r.step));
        sensors.y.push_back(r.action);
    }

    const std::vector<std::pair<std::string, std::string>> files = {
        {prefix + "_states.svg", render_svg("State evolution", "x", states, false)},
        {prefix + "_lyapunov.svg", render_svg("Lyapunov function", "log10 V", {lyap}, false)},
        {prefix + "_sensors.svg", render_svg("Sensor status", "sensor", {sensors}, true)}};
    std::vector<std::filesystem::path> out;
    for (const auto& [name, body] : files) {
        out.push_back(out_dir / name);
        write_text(out.back(), body);
    }
    return out;
}

CertificateSummary summarize_certificate(const Synthesis& synthesis)
{
    CertificateSummary s;
    const Matrix* p = synthesis.lyapunov_matrix();
    if (p == nullptr)
        throw DomainError("summarize_certificate: no certificate");
    const auto bounds = sym_eig_bounds(*p);
    s.lambda_min = bounds.min;
    s.lambda_max = bounds.max;
    s.sigma_star = synthesis.sigma_star()->to_string();
    s.mu = synthesis.mu();
    if (synthesis.unperturbed)
        s.kind = "unperturbed";
    if (synthesis.online) {
        s.kind = "perturbed-online";
        s.gamma = synthesis.online->gamma;
    }
    if (synthesis.offline) {
        s.kind = "perturbed-offline";
        s.gamma1 = synthesis.offline->gamma1;
        s.gamma2 = synthesis.offline->gamma2;
    }
    return s;
}

Json to_json(const RunManifest& m)
{
    Json metrics = {{"steps", m.metrics.steps},
                    {"readings", m.metrics.readings},
                    {"idle_fraction", m.metrics.idle_fraction},
                    {"utilization_reduction", m.metrics.utilization_reduction},
                    {"initial_V", m.metrics.initial_v},
                    {"final_V", m.metrics.final_v}};
    Json out = {{"digest", m.digest}, {"metrics", metrics}, {"outputs", m.outputs}};
    out["preset"] = m.preset ? Json(*m.preset) : Json(nullptr);
    if (m.certificate) {
        const auto& c = *m.certificate;
        Json cert = {{"kind", c.kind},
                     {"lambda_min", c.lambda_min},
                     {"lambda_max", c.lambda_max},
                     {"sigma_star", c.sigma_star}};
        auto put = [&](const char* key, const std::optional<double>& v) {
            if (v)
                cert[key] = *v;
        };
        put("gamma", c.gamma);
        put("gamma1", c.gamma1);
        put("gamma2", c.gamma2);
        put("mu", c.mu);
        out["certificate"] = cert;
    }
    return out;
}

std::string summary_text(const RunManifest& m)
{
    std::string out;
    auto line = [&](const std::string& key, const std::string& value) { out += key + ": " + value + "\n"; };
    if (m.preset)
        line("preset", *m.preset);
    line("digest", m.digest);
    if (m.certificate) {
        line("certificate", m.certificate->kind);
        line("sigma_star", m.certificate->sigma_star);
        line("lambda_min(P)", num(m.certificate->lambda_min));
        line("lambda_max(P)", num(m.certificate->lambda_max));
        if (m.certificate->mu)
            line("mu", num(*m.certificate->mu));
    }
    line("steps", std::to_string(m.metrics.steps));
    line("readings", std::to_string(m.metrics.readings));
    line("utilization_reduction", num(m.metrics.utilization_reduction));
    line("final_V", num(m.metrics.final_v));
    for (const auto& p : m.outputs)
        line("output", p);
    return out;
}

} // namespace asynctrig
