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
#include "asynctrig/trigger_engine.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "asynctrig/error.hpp"

namespace asynctrig {

namespace {

constexpr double kMetricTol = 1e-12;

std::size_t require_index(const HorizonBank& bank, const Horizon& sigma)
{
    const auto idx = bank.index_of(sigma);
    if (!idx)
        throw ConfigError("sigma* " + sigma.to_string() + " is not among the enumerated horizons");
    return *idx;
}

// Pick among the metric-argmax subset of the feasible indices.
TriggerDecision pick(const HorizonBank& bank, const std::vector<std::size_t>& feasible, std::size_t fallback_idx,
                     TriggerMode mode, std::uint64_t seed, std::uint64_t step)
{
    TriggerDecision d;
    d.mode = mode;
    if (feasible.empty()) {
        d.horizon = bank.horizon(fallback_idx);
        d.metric = bank.metric(fallback_idx);
        d.feasible_count = 1;
        d.tie_count = 1;
        d.fallback = true;
        return d;
    }
    double best = -HUGE_VAL;
    for (auto i : feasible)
        best = std::max(best, bank.metric(i));
    std::vector<std::size_t> ties;
    for (auto i : feasible)
        if (bank.metric(i) >= best - kMetricTol)
            ties.push_back(i);
    const auto chosen = ties[tie_break(seed, step, ties.size())];
    d.horizon = bank.horizon(chosen);
    d.metric = bank.metric(chosen);
    d.feasible_count = feasible.size();
    d.tie_count = ties.size();
    return d;
}

TriggerDecision idle_decision(int m, TriggerMode mode)
{
    TriggerDecision d;
    d.horizon = Horizon({0});
    d.metric = avg_idle_metric(d.horizon, m);
    d.feasible_count = 1;
    d.tie_count = 1;
    d.mode = mode;
    d.inside_ellipsoid = true;
    return d;
}

TriggerDecision table_pick(const Vector& eta, const OfflineTable& table, const std::vector<ConicRegion>& regions,
                           TriggerMode mode, std::uint64_t seed, std::uint64_t step)
{
    if (table.entries.size() != regions.size())
        throw DimensionError("offline table and partition disagree on region count");
    const int c = region_of(eta, regions);
    const auto& entry = table.entries[static_cast<std::size_t>(c)];
    if (entry.horizons.empty())
        throw DomainError("offline table entry is empty");
    TriggerDecision d;
    d.mode = mode;
    d.region = c;
    d.horizon = entry.horizons[tie_break(seed, step, entry.horizons.size())];
    d.metric = entry.metric;
    d.feasible_count = entry.horizons.size();
    d.tie_count = entry.horizons.size();
    d.fallback = entry.fallback;
    return d;
}

OfflineTable to_table(const HorizonBank& bank, const std::vector<RegionArgmax>& argmax)
{
    OfflineTable table;
    table.sensor_count = bank.sensor_count();
    for (const auto& r : argmax) {
        OfflineTableEntry entry;
        for (auto i : r.members)
            entry.horizons.push_back(bank.horizon(i));
        entry.metric = bank.metric(r.members.front());
        entry.fallback = r.fallback;
        table.entries.push_back(std::move(entry));
    }
    return table;
}

PerturbedScoreParams score_params(const PerturbedOnlineCertificate& cert)
{
    return {cert.p, cert.m, cert.gamma, cert.beta, disturbance_gain(cert.p, cert.m), cert.varpi, cert.c};
}

TriggerDecision perturbed_pick(const Vector& eta, const PerturbedOnlineCertificate& cert,
                               const PerturbedScoreParams& params, const HorizonBank& bank, std::size_t star,
                               std::uint64_t seed, std::uint64_t step, Exec exec)
{
    if (eta.dot(cert.p * eta) <= 1.0)
        return idle_decision(bank.sensor_count(), TriggerMode::OnlinePerturbed);
    const auto scores = exec == Exec::Parallel ? perturbed_scores_parallel(bank, params, eta)
                                               : perturbed_scores_serial(bank, params, eta);
    const double tol = 1e-12 * (1.0 + eta.squaredNorm() * spectral_norm(cert.p + cert.m));
    std::vector<std::size_t> feasible;
    for (std::size_t i = 0; i < scores.size(); ++i)
        if (scores[i] >= -tol)
            feasible.push_back(i);
    return pick(bank, feasible, star, TriggerMode::OnlinePerturbed, seed, step);
}

} // namespace

std::string_view mode_name(TriggerMode mode)
{
    switch (mode) {
    case TriggerMode::OnlineUnperturbed:
        return "online-unperturbed";
    case TriggerMode::OfflineUnperturbed:
        return "offline-unperturbed";
    case TriggerMode::OnlinePerturbed:
        return "online-perturbed";
    case TriggerMode::OfflinePerturbed:
        return "offline-perturbed";
    case TriggerMode::Periodic:
        return "periodic";
    }
    return "unknown";
}

TriggerMode parse_mode(std::string_view name)
{
    for (auto m : {TriggerMode::OnlineUnperturbed, TriggerMode::OfflineUnperturbed, TriggerMode::OnlinePerturbed,
                   TriggerMode::OfflinePerturbed, TriggerMode::Periodic})
        if (mode_name(m) == name)
            return m;
    throw ConfigError("unknown mode '" + std::string(name) + "'");
}

bool is_perturbed(TriggerMode mode)
{
    return mode == TriggerMode::OnlinePerturbed || mode == TriggerMode::OfflinePerturbed;
}

bool is_offline(TriggerMode mode)
{
    return mode == TriggerMode::OfflineUnperturbed || mode == TriggerMode::OfflinePerturbed;
}

std::size_t tie_break(std::uint64_t seed, std::uint64_t step, std::size_t count)
{
    if (count == 0)
        throw DomainError("tie_break: empty set");
    if (count == 1)
        return 0;
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(step), static_cast<std::uint32_t>(step >> 32)};
    std::mt19937_64 rng(seq);
    return static_cast<std::size_t>(rng() % count);
}

std::vector<std::size_t> sigma_star_candidates(const HorizonBank& bank, double beta)
{
    struct Candidate {
        std::size_t index;
        double radius;
    };
    std::vector<Candidate> pool;
    for (std::size_t i = 0; i < bank.size(); ++i) {
        const double radius = spectral_radius(bank.phi(i));
        const double limit = std::exp(-beta * static_cast<double>(bank.horizon(i).size()) * bank.period() / 2.0);
        if (radius < std::min(limit, kSchurBound))
            pool.push_back({i, std::round(radius * 1e12) / 1e12});
    }
    std::sort(pool.begin(), pool.end(), [&](const Candidate& a, const Candidate& b) {
        const double ma = bank.metric(a.index);
        const double mb = bank.metric(b.index);
        if (std::abs(ma - mb) > kMetricTol)
            return ma > mb;
        if (a.radius != b.radius)
            return a.radius < b.radius;
        return bank.horizon(a.index) < bank.horizon(b.index);
    });
    std::vector<std::size_t> out;
    out.reserve(pool.size());
    for (const auto& c : pool)
        out.push_back(c.index);
    return out;
}

TriggerDecision online_unperturbed_select(const Vector& eta, const UnperturbedCertificate& cert,
                                          const HorizonBank& bank, std::uint64_t seed, std::uint64_t step,
                                          Exec exec)
{
    const auto star = require_index(bank, cert.sigma_star);
    const auto scores = exec == Exec::Parallel ? decay_scores_parallel(bank, cert.p, cert.beta, eta)
                                               : decay_scores_serial(bank, cert.p, cert.beta, eta);
    const double tol = 1e-12 * eta.squaredNorm() * spectral_norm(cert.p);
    std::vector<std::size_t> feasible;
    for (std::size_t i = 0; i < scores.size(); ++i)
        if (scores[i] <= tol)
            feasible.push_back(i);
    return pick(bank, feasible, star, TriggerMode::OnlineUnperturbed, seed, step);
}

OfflineTable build_offline_table_unperturbed(const UnperturbedCertificate& cert, const HorizonBank& bank,
                                             const std::vector<ConicRegion>& regions, Exec exec)
{
    const auto star = require_index(bank, cert.sigma_star);
    std::vector<Matrix> forms;
    forms.reserve(bank.size());
    for (std::size_t i = 0; i < bank.size(); ++i) {
        const Matrix& phi = bank.phi(i);
        const double beta_bar = decay_factor(cert.beta, bank.horizon(i).size(), bank.period());
        forms.push_back(symmetrize(phi.transpose() * cert.p * phi - beta_bar * cert.p));
    }
    const PairPredicate feasible = [&](std::size_t i, std::size_t c) {
        return sprocedure_feasible_form(forms[i], regions[c].q).has_value();
    };
    const auto argmax = exec == Exec::Parallel ? region_argmax_parallel(bank, regions.size(), feasible, star)
                                               : region_argmax_serial(bank, regions.size(), feasible, star);
    return to_table(bank, argmax);
}

TriggerDecision offline_select(const Vector& eta, const OfflineTable& table, const std::vector<ConicRegion>& regions,
                               std::uint64_t seed, std::uint64_t step)
{
    return table_pick(eta, table, regions, TriggerMode::OfflineUnperturbed, seed, step);
}

TriggerDecision online_perturbed_select(const Vector& eta, const PerturbedOnlineCertificate& cert,
                                        const HorizonBank& bank, std::uint64_t seed, std::uint64_t step, Exec exec)
{
    const auto star = require_index(bank, cert.sigma_star);
    return perturbed_pick(eta, cert, score_params(cert), bank, star, seed, step, exec);
}

OfflineTable build_offline_table_perturbed(const PerturbedOfflineCertificate& cert, const HorizonBank& bank,
                                           const std::vector<ConicRegion>& regions, Exec exec)
{
    const auto star = require_index(bank, cert.sigma_star);
    const GrowthConstants growth{cert.c, cert.c_prime, cert.varpi};
    const PairPredicate feasible = [&](std::size_t i, std::size_t c) {
        const auto len = bank.horizon(i).size();
        return region_multiplier_offline(cert.p, cert.gamma1, cert.gamma2, bank.phi(i),
                                         decay_factor(cert.beta, len, bank.period()), growth.chi_linear(len),
                                         regions[c].q)
            .has_value();
    };
    const auto argmax = exec == Exec::Parallel ? region_argmax_parallel(bank, regions.size(), feasible, star)
                                               : region_argmax_serial(bank, regions.size(), feasible, star);
    return to_table(bank, argmax);
}

TriggerDecision offline_perturbed_select(const Vector& eta, const OfflineTable& table,
                                         const PerturbedOfflineCertificate& cert,
                                         const std::vector<ConicRegion>& regions, std::uint64_t seed,
                                         std::uint64_t step)
{
    if (eta.dot(cert.p * eta) <= 1.0)
        return idle_decision(table.sensor_count, TriggerMode::OfflinePerturbed);
    return table_pick(eta, table, regions, TriggerMode::OfflinePerturbed, seed, step);
}

PeriodicPolicy::PeriodicPolicy(Horizon horizon, int m) : horizon_(std::move(horizon)), m_(m)
{
    if (horizon_.empty())
        throw ConfigError("periodic policy needs a nonempty horizon");
}

TriggerDecision PeriodicPolicy::decide(const Vector&, std::uint64_t)
{
    TriggerDecision d;
    d.horizon = horizon_;
    d.metric = avg_idle_metric(horizon_, m_);
    d.feasible_count = 1;
    d.tie_count = 1;
    d.mode = TriggerMode::Periodic;
    return d;
}

OnlineUnperturbedPolicy::OnlineUnperturbedPolicy(UnperturbedCertificate cert, std::shared_ptr<const HorizonBank> bank,
                                                 std::uint64_t seed)
    : cert_(std::move(cert)), bank_(std::move(bank)), seed_(seed)
{
    require_index(*bank_, cert_.sigma_star);
}

TriggerDecision OnlineUnperturbedPolicy::decide(const Vector& eta, std::uint64_t step)
{
    return online_unperturbed_select(eta, cert_, *bank_, seed_, step);
}

OfflineUnperturbedPolicy::OfflineUnperturbedPolicy(UnperturbedCertificate cert, OfflineTable table,
                                                   std::vector<ConicRegion> regions, std::uint64_t seed)
    : cert_(std::move(cert)), table_(std::move(table)), regions_(std::move(regions)), seed_(seed)
{
}

TriggerDecision OfflineUnperturbedPolicy::decide(const Vector& eta, std::uint64_t step)
{
    return offline_select(eta, table_, regions_, seed_, step);
}

OnlinePerturbedPolicy::OnlinePerturbedPolicy(PerturbedOnlineCertificate cert, std::shared_ptr<const HorizonBank> bank,
                                             std::uint64_t seed)
    : cert_(std::move(cert)), bank_(std::move(bank)), seed_(seed)
{
    require_index(*bank_, cert_.sigma_star);
}

TriggerDecision OnlinePerturbedPolicy::decide(const Vector& eta, std::uint64_t step)
{
    return online_perturbed_select(eta, cert_, *bank_, seed_, step);
}

OfflinePerturbedPolicy::OfflinePerturbedPolicy(PerturbedOfflineCertificate cert, OfflineTable table,
                                               std::vector<ConicRegion> regions, std::uint64_t seed)
    : cert_(std::move(cert)), table_(std::move(table)), regions_(std::move(regions)), seed_(seed)
{
}

TriggerDecision OfflinePerturbedPolicy::decide(const Vector& eta, std::uint64_t step)
{
    return offline_perturbed_select(eta, table_, cert_, regions_, seed_, step);
}

} // namespace asynctrig
