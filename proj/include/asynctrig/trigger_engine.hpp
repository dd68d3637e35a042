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
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "asynctrig/certificate_synthesis.hpp"
#include "asynctrig/conic_partition.hpp"
#include "asynctrig/feasibility_kernels.hpp"
#include "asynctrig/horizon_space.hpp"

namespace asynctrig {

enum class TriggerMode { OnlineUnperturbed, OfflineUnperturbed, OnlinePerturbed, OfflinePerturbed, Periodic };

std::string_view mode_name(TriggerMode mode);
TriggerMode parse_mode(std::string_view name);
bool is_perturbed(TriggerMode mode);
bool is_offline(TriggerMode mode);

struct TriggerDecision {
    Horizon horizon;
    double metric = 0.0;
    std::size_t feasible_count = 0;
    std::size_t tie_count = 0;
    TriggerMode mode = TriggerMode::OnlineUnperturbed;
    bool inside_ellipsoid = false;
    int region = -1;
    bool fallback = false;  ///< feasible set came up empty numerically; sigma* used
};

struct OfflineTableEntry {
    std::vector<Horizon> horizons;
    double metric = 0.0;
    bool fallback = false;
};

struct OfflineTable {
    int sensor_count = 0;
    std::vector<OfflineTableEntry> entries;  ///< one per region, same order
};

/// Seeded uniform pick in [0, count), keyed by (seed, step).
std::size_t tie_break(std::uint64_t seed, std::uint64_t step, std::size_t count);

/**
 * sigma* candidates in preference order: Schur with radius below
 * e^{-beta |sigma| T / 2}, then larger metric, smaller radius, lexicographic.
 */
std::vector<std::size_t> sigma_star_candidates(const HorizonBank& bank, double beta);

TriggerDecision online_unperturbed_select(const Vector& eta, const UnperturbedCertificate& cert,
                                          const HorizonBank& bank, std::uint64_t seed, std::uint64_t step = 0,
                                          Exec exec = Exec::Serial);

OfflineTable build_offline_table_unperturbed(const UnperturbedCertificate& cert, const HorizonBank& bank,
                                             const std::vector<ConicRegion>& regions, Exec exec = Exec::Parallel);

TriggerDecision offline_select(const Vector& eta, const OfflineTable& table, const std::vector<ConicRegion>& regions,
                               std::uint64_t seed, std::uint64_t step = 0);

TriggerDecision online_perturbed_select(const Vector& eta, const PerturbedOnlineCertificate& cert,
                                        const HorizonBank& bank, std::uint64_t seed, std::uint64_t step = 0,
                                        Exec exec = Exec::Serial);

OfflineTable build_offline_table_perturbed(const PerturbedOfflineCertificate& cert, const HorizonBank& bank,
                                           const std::vector<ConicRegion>& regions, Exec exec = Exec::Parallel);

TriggerDecision offline_perturbed_select(const Vector& eta, const OfflineTable& table,
                                         const PerturbedOfflineCertificate& cert,
                                         const std::vector<ConicRegion>& regions, std::uint64_t seed,
                                         std::uint64_t step = 0);

/// Stateful wrapper the simulator calls at each horizon boundary.
class TriggerPolicy {
public:
    virtual ~TriggerPolicy() = default;
    virtual TriggerDecision decide(const Vector& eta, std::uint64_t step) = 0;
    virtual double lyapunov(const Vector& eta) const = 0;
    virtual TriggerMode mode() const = 0;
};

class PeriodicPolicy final : public TriggerPolicy {
public:
    PeriodicPolicy(Horizon horizon, int m);
    TriggerDecision decide(const Vector& eta, std::uint64_t step) override;
    double lyapunov(const Vector& eta) const override { return eta.squaredNorm(); }
    TriggerMode mode() const override { return TriggerMode::Periodic; }

private:
    Horizon horizon_;
    int m_;
};

class OnlineUnperturbedPolicy final : public TriggerPolicy {
public:
    OnlineUnperturbedPolicy(UnperturbedCertificate cert, std::shared_ptr<const HorizonBank> bank, std::uint64_t seed);
    TriggerDecision decide(const Vector& eta, std::uint64_t step) override;
    double lyapunov(const Vector& eta) const override { return eta.dot(cert_.p * eta); }
    TriggerMode mode() const override { return TriggerMode::OnlineUnperturbed; }

private:
    UnperturbedCertificate cert_;
    std::shared_ptr<const HorizonBank> bank_;
    std::uint64_t seed_;
};

class OfflineUnperturbedPolicy final : public TriggerPolicy {
public:
    OfflineUnperturbedPolicy(UnperturbedCertificate cert, OfflineTable table, std::vector<ConicRegion> regions,
                             std::uint64_t seed);
    TriggerDecision decide(const Vector& eta, std::uint64_t step) override;
    double lyapunov(const Vector& eta) const override { return eta.dot(cert_.p * eta); }
    TriggerMode mode() const override { return TriggerMode::OfflineUnperturbed; }

private:
    UnperturbedCertificate cert_;
    OfflineTable table_;
    std::vector<ConicRegion> regions_;
    std::uint64_t seed_;
};

class OnlinePerturbedPolicy final : public TriggerPolicy {
public:
    OnlinePerturbedPolicy(PerturbedOnlineCertificate cert, std::shared_ptr<const HorizonBank> bank,
                          std::uint64_t seed);
    TriggerDecision decide(const Vector& eta, std::uint64_t step) override;
    double lyapunov(const Vector& eta) const override { return eta.dot(cert_.p * eta); }
    TriggerMode mode() const override { return TriggerMode::OnlinePerturbed; }

private:
    PerturbedOnlineCertificate cert_;
    std::shared_ptr<const HorizonBank> bank_;
    std::uint64_t seed_;
};

class OfflinePerturbedPolicy final : public TriggerPolicy {
public:
    OfflinePerturbedPolicy(PerturbedOfflineCertificate cert, OfflineTable table, std::vector<ConicRegion> regions,
                           std::uint64_t seed);
    TriggerDecision decide(const Vector& eta, std::uint64_t step) override;
    double lyapunov(const Vector& eta) const override { return eta.dot(cert_.p * eta); }
    TriggerMode mode() const override { return TriggerMode::OfflinePerturbed; }

private:
    PerturbedOfflineCertificate cert_;
    OfflineTable table_;
    std::vector<ConicRegion> regions_;
    std::uint64_t seed_;
};

} // namespace asynctrig
