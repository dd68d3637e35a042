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

#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "asynctrig/certificate_synthesis.hpp"
#include "asynctrig/conic_partition.hpp"
#include "asynctrig/feasibility_kernels.hpp"
#include "asynctrig/plant_model.hpp"
#include "asynctrig/trigger_engine.hpp"

namespace asynctrig {

/// w(t) = amplitude * sin(omega t + phase), scalar or broadcast over D's columns.
struct DisturbanceSignal {
    double amplitude = 0.0;
    double omega = 0.0;
    double phase = 0.0;

    double operator()(double t) const { return amplitude * std::sin(omega * t + phase); }
    bool active() const { return amplitude != 0.0; }
};

struct SimConfig {
    PlantModel plant;
    double t = 0.3;
    int l_min = 1;
    int l_max = 3;
    TriggerMode mode = TriggerMode::OnlineUnperturbed;
    double beta = 0.0;
    double gamma = 0.35;
    double gamma1 = 0.35;
    double gamma2 = 0.175;
    int regions = 15;
    Vector x0;  ///< n entries (eta0 = [x0; x0]) or 2n entries (eta0 directly)
    int total_steps = 100;
    std::uint64_t seed = 0;
    int substeps = 100;
    DisturbanceSignal disturbance;
    Horizon periodic_horizon;  ///< periodic mode only
    std::size_t enumeration_cap = kDefaultEnumerationCap;

    void validate() const;
};

/// Offline pipeline output: everything a policy needs.
struct Synthesis {
    DiscretePlant dp;
    std::shared_ptr<const HorizonBank> bank;
    GrowthConstants growth;
    std::optional<UnperturbedCertificate> unperturbed;
    std::optional<PerturbedOnlineCertificate> online;
    std::optional<PerturbedOfflineCertificate> offline;
    std::vector<ConicRegion> regions;
    std::optional<OfflineTable> table;

    const Matrix* lyapunov_matrix() const;
    const Horizon* sigma_star() const;
    std::optional<double> mu() const;
};

Synthesis synthesize(const SimConfig& config, Exec exec = Exec::Parallel);

std::unique_ptr<TriggerPolicy> make_policy(const Synthesis& synthesis, const SimConfig& config);

struct StepRecord {
    std::size_t step = 0;
    double t = 0.0;
    Vector x;     ///< x(t_h)
    Vector xhat;  ///< held estimate after the reading at t_h
    Vector u;     ///< K xhat, held over [t_h, t_h + T)
    int action = 0;
    double v = 0.0;  ///< V(eta_h)
    Vector eta;      ///< [x(t_h); xhat(t_{h-1})]
};

struct SimMetrics {
    std::size_t steps = 0;
    std::size_t readings = 0;
    double idle_fraction = 0.0;
    double utilization_reduction = 0.0;
    double initial_v = 0.0;
    double final_v = 0.0;
};

struct SimTrace {
    int state_dim = 0;
    int input_dim = 0;
    int sensor_count = 0;
    std::vector<StepRecord> steps;
    std::vector<std::size_t> boundaries;  ///< step index at which each decision starts
    std::vector<TriggerDecision> decisions;
    Vector final_eta;
    SimMetrics metrics;
};

SimTrace simulate(const SimConfig& config);
SimTrace simulate(const SimConfig& config, const Synthesis& synthesis);
SimTrace simulate(const SimConfig& config, TriggerPolicy& policy);

/// Independent runs in parallel, each with isolated state.
std::vector<SimTrace> simulate_sweep(const std::vector<SimConfig>& configs);

SimMetrics utilization_metrics(const SimTrace& trace, int m);

/// int_0^T e^{A(T-s)} D w(t0 + s) ds by fixed-step RK4 on z' = A z + D w.
Vector disturbance_increment(const PlantModel& plant, const DisturbanceSignal& w, double t0, double t, int substeps);

/// Spectral radius of the fully sampled loop [[A_T + B_T K, 0], [I, 0]].
double full_sampling_radius(const PlantModel& plant, double t);

/// Largest periodic full-sampling interval keeping the loop Schur, by bisection.
double schur_threshold(const PlantModel& plant, double t_lo, double t_hi, double tol = 1e-6);

} // namespace asynctrig
