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
#include "asynctrig/serialization.hpp"

#include "asynctrig/error.hpp"

namespace asynctrig {

namespace {

template <typename T>
T field(const Json& j, const char* key)
{
    if (!j.contains(key))
        throw ConfigError(std::string("missing field '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("field '") + key + "': " + e.what());
    }
}

Horizon horizon_field(const Json& j, const char* key)
{
    return Horizon::parse(field<std::string>(j, key));
}

} // namespace

Json matrix_to_json(const Matrix& m)
{
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_json(const Json& j)
{
    if (!j.is_array() || j.empty() || !j.front().is_array())
        throw ConfigError("matrix must be a nonempty array of rows");
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = static_cast<Eigen::Index>(j.front().size());
    Matrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const auto& row = j[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
            throw ConfigError("matrix rows must have equal length");
        for (Eigen::Index c = 0; c < cols; ++c) {
            const auto& x = row[static_cast<std::size_t>(c)];
            if (!x.is_number())
                throw ConfigError("matrix entries must be numbers");
            m(r, c) = x.get<double>();
        }
    }
    return m;
}

Json vector_to_json(const Vector& v)
{
    Json out = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i)
        out.push_back(v(i));
    return out;
}

Vector vector_from_json(const Json& j)
{
    if (!j.is_array())
        throw ConfigError("vector must be an array");
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number())
            throw ConfigError("vector entries must be numbers");
        v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
    }
    return v;
}

Json to_json(const DiscretePlant& dp)
{
    return {{"T", dp.t}, {"A_T", matrix_to_json(dp.a_t)}, {"B_T", matrix_to_json(dp.b_t)}, {"blocks", dp.blocks}};
}

Json to_json(const UnperturbedCertificate& cert)
{
    return {{"kind", "unperturbed"},   {"P", matrix_to_json(cert.p)}, {"beta", cert.beta},
            {"T", cert.t},             {"sigma_star", cert.sigma_star.to_string()}};
}

Json to_json(const PerturbedOnlineCertificate& cert)
{
    return {{"kind", "perturbed-online"},
            {"P", matrix_to_json(cert.p)},
            {"M", matrix_to_json(cert.m)},
            {"gamma", cert.gamma},
            {"beta", cert.beta},
            {"T", cert.t},
            {"chi", cert.chi},
            {"C", cert.c},
            {"C_prime", cert.c_prime},
            {"varpi", cert.varpi},
            {"mu", cert.mu},
            {"psi", cert.psi},
            {"alpha", cert.alpha},
            {"sigma_star", cert.sigma_star.to_string()}};
}

Json to_json(const PerturbedOfflineCertificate& cert)
{
    return {{"kind", "perturbed-offline"},
            {"P", matrix_to_json(cert.p)},
            {"gamma1", cert.gamma1},
            {"gamma2", cert.gamma2},
            {"beta", cert.beta},
            {"T", cert.t},
            {"chi", cert.chi_linear},
            {"C", cert.c},
            {"C_prime", cert.c_prime},
            {"varpi", cert.varpi},
            {"mu", cert.mu},
            {"psi", cert.psi},
            {"scale", cert.scale},
            {"sigma_star", cert.sigma_star.to_string()}};
}

Json to_json(const ConicRegion& region)
{
    return {{"index", region.index},
            {"Q", matrix_to_json(region.q)},
            {"direction", vector_to_json(region.direction)},
            {"half_angle", region.half_angle}};
}

Json to_json(const std::vector<ConicRegion>& regions)
{
    Json list = Json::array();
    for (const auto& r : regions)
        list.push_back(to_json(r));
    return {{"dimension", regions.empty() ? 0 : regions.front().q.rows()}, {"regions", std::move(list)}};
}

Json to_json(const OfflineTable& table)
{
    Json entries = Json::array();
    for (std::size_t c = 0; c < table.entries.size(); ++c) {
        const auto& e = table.entries[c];
        Json horizons = Json::array();
        for (const auto& h : e.horizons)
            horizons.push_back(h.to_string());
        entries.push_back({{"region", c}, {"metric", e.metric}, {"fallback", e.fallback}, {"horizons", horizons}});
    }
    return {{"sensor_count", table.sensor_count}, {"entries", std::move(entries)}};
}

Json to_json(const TriggerDecision& d)
{
    return {{"horizon", d.horizon.to_string()},   {"metric", d.metric},
            {"feasible_count", d.feasible_count}, {"tie_count", d.tie_count},
            {"mode", std::string(mode_name(d.mode))}, {"inside_ellipsoid", d.inside_ellipsoid},
            {"region", d.region},                 {"fallback", d.fallback}};
}

UnperturbedCertificate unperturbed_from_json(const Json& j)
{
    UnperturbedCertificate cert;
    cert.p = matrix_from_json(j.at("P"));
    cert.beta = field<double>(j, "beta");
    cert.t = field<double>(j, "T");
    cert.sigma_star = horizon_field(j, "sigma_star");
    return cert;
}

PerturbedOnlineCertificate perturbed_online_from_json(const Json& j)
{
    PerturbedOnlineCertificate cert;
    cert.p = matrix_from_json(j.at("P"));
    cert.m = matrix_from_json(j.at("M"));
    cert.gamma = field<double>(j, "gamma");
    cert.beta = field<double>(j, "beta");
    cert.t = field<double>(j, "T");
    cert.chi = field<double>(j, "chi");
    cert.c = field<double>(j, "C");
    cert.c_prime = field<double>(j, "C_prime");
    cert.varpi = field<double>(j, "varpi");
    cert.mu = field<double>(j, "mu");
    cert.psi = field<double>(j, "psi");
    cert.alpha = field<double>(j, "alpha");
    cert.sigma_star = horizon_field(j, "sigma_star");
    return cert;
}

PerturbedOfflineCertificate perturbed_offline_from_json(const Json& j)
{
    PerturbedOfflineCertificate cert;
    cert.p = matrix_from_json(j.at("P"));
    cert.gamma1 = field<double>(j, "gamma1");
    cert.gamma2 = field<double>(j, "gamma2");
    cert.beta = field<double>(j, "beta");
    cert.t = field<double>(j, "T");
    cert.chi_linear = field<double>(j, "chi");
    cert.c = field<double>(j, "C");
    cert.c_prime = field<double>(j, "C_prime");
    cert.varpi = field<double>(j, "varpi");
    cert.mu = field<double>(j, "mu");
    cert.psi = field<double>(j, "psi");
    cert.scale = field<double>(j, "scale");
    cert.sigma_star = horizon_field(j, "sigma_star");
    return cert;
}

std::vector<ConicRegion> partition_from_json(const Json& j)
{
    std::vector<ConicRegion> out;
    for (const auto& r : j.at("regions"))
        out.push_back({field<int>(r, "index"), matrix_from_json(r.at("Q")), vector_from_json(r.at("direction")),
                       field<double>(r, "half_angle")});
    return out;
}

} // namespace asynctrig
