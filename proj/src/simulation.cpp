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
#include "asynctrig/simulation.hpp"

#include <exception>
#include <string>

#include "asynctrig/error.hpp"

namespace asynctrig {

void SimConfig::validate() const
{
    plant.validate();
    if (!(t > 0.0) || !std::isfinite(t))
        throw ConfigError("sampling period must be > 0");
    if (l_min < 1 || l_max < l_min)
        throw ConfigError("need 1 <= l_min <= l_max");
    if (total_steps < l_max)
        throw ConfigError("total_steps must be >= l_max");
    if (substeps < 1)
        throw ConfigError("substeps must be >= 1");
    if (x0.size() != plant.state_dim() && x0.size() != 2 * plant.state_dim())
        throw ConfigError("initial state must have n or 2n entries");
    if (is_offline(mode) && regions < 1)
        throw ConfigError("offline modes need at least one region");
    if (is_perturbed(mode) && !plant.perturbed())
        throw ConfigError("perturbed mode needs a disturbance matrix and w_max > 0");
    if (disturbance.active() && plant.d.size() == 0)
        throw ConfigError("disturbance signal given without a disturbance matrix");
    if (disturbance.active() && std::abs(disturbance.amplitude) > plant.w_max * (1.0 + 1e-12))
        throw ConfigError("disturbance amplitude exceeds w_max");
    if (mode == TriggerMode::Periodic && periodic_horizon.empty())
        throw ConfigError("periodic mode needs a horizon");
    if (mode == TriggerMode::Periodic && periodic_horizon.max_action() > plant.sensor_count())
        throw ConfigError("periodic horizon uses a sensor index above m");
}

const Matrix* Synthesis::lyapunov_matrix() const
{
    if (unperturbed)
        return &unperturbed->p;
    if (online)
        return &online->p;
    if (offline)
        return &offline->p;
    return nullptr;
}

const Horizon* Synthesis::sigma_star() const
{
    if (unperturbed)
        return &unperturbed->sigma_star;
    if (online)
        return &online->sigma_star;
    if (offline)
        return &offline->sigma_star;
    return nullptr;
}

std::optional<double> Synthesis::mu() const
{
    if (online)
        return online->mu;
    if (offline)
        return offline->mu;
    return std::nullopt;
}

Synthesis synthesize(const SimConfig& config, Exec exec)
{
    config.validate();
    Synthesis out;
    out.dp = discretize(config.plant, config.t);
    if (config.mode == TriggerMode::Periodic)
        return out;

    const int m = config.plant.sensor_count();
    out.bank = std::make_shared<const HorizonBank>(
        out.dp, enumerate_horizons(m, config.l_min, config.l_max, config.enumeration_cap), exec);
    const auto& bank = *out.bank;
    const auto candidates = sigma_star_candidates(bank, config.beta);
    if (candidates.empty())
        throw InfeasibleError("no horizon has a transition matrix with the required spectral radius");

    auto horizon_seconds = [&](std::size_t i) { return static_cast<double>(bank.horizon(i).size()) * config.t; };

    if (!is_perturbed(config.mode)) {
        const auto star = candidates.front();
        auto cert = synthesize_unperturbed(bank.phi(star), config.beta, horizon_seconds(star));
        cert.t = config.t;
        cert.sigma_star = bank.horizon(star);
        out.unperturbed = std::move(cert);
    } else {
        out.growth = growth_constants(out.dp, disturbance_step_bound(config.plant, config.t));
        std::string last_error = "no candidate horizon";
        for (auto star : candidates) {
            const auto len = bank.horizon(star).size();
            try {
                if (config.mode == TriggerMode::OnlinePerturbed) {
                    auto cert = synthesize_perturbed_online(bank.phi(star), config.beta, horizon_seconds(star),
                                                            out.growth.chi_squared(len), config.gamma, out.growth);
                    cert.t = config.t;
                    cert.sigma_star = bank.horizon(star);
                    out.online = std::move(cert);
                } else {
                    auto cert = synthesize_perturbed_offline(bank.phi(star), config.beta, horizon_seconds(star),
                                                             out.growth.chi_linear(len), config.gamma1, config.gamma2,
                                                             out.growth);
                    cert.t = config.t;
                    cert.sigma_star = bank.horizon(star);
                    out.offline = std::move(cert);
                }
                break;
            } catch (const InfeasibleError& e) {
                last_error = e.what();
            }
        }
        if (!out.online && !out.offline)
            throw InfeasibleError("perturbed synthesis failed for every candidate sigma*: " + last_error);
    }

    if (is_offline(config.mode)) {
        out.regions = make_partition(static_cast<int>(2 * config.plant.state_dim()), config.regions);
        out.table = config.mode == TriggerMode::OfflineUnperturbed
                        ? build_offline_table_unperturbed(*out.unperturbed, bank, out.regions, exec)
                        : build_offline_table_perturbed(*out.offline, bank, out.regions, exec);
    }
    return out;
}

std::unique_ptr<TriggerPolicy> make_policy(const Synthesis& synthesis, const SimConfig& config)
{
    switch (config.mode) {
    case TriggerMode::Periodic:
        return std::make_unique<PeriodicPolicy>(config.periodic_horizon, config.plant.sensor_count());
    case TriggerMode::OnlineUnperturbed:
        return std::make_unique<OnlineUnperturbedPolicy>(synthesis.unperturbed.value(), synthesis.bank, config.seed);
    case TriggerMode::OfflineUnperturbed:
        return std::make_unique<OfflineUnperturbedPolicy>(synthesis.unperturbed.value(), synthesis.table.value(),
                                                          synthesis.regions, config.seed);
    case TriggerMode::OnlinePerturbed:
        return std::make_unique<OnlinePerturbedPolicy>(synthesis.online.value(), synthesis.bank, config.seed);
    case TriggerMode::OfflinePerturbed:
        return std::make_unique<OfflinePerturbedPolicy>(synthesis.offline.value(), synthesis.table.value(),
                                                        synthesis.regions, config.seed);
    }
    throw ConfigError("unsupported mode");
}

Vector disturbance_increment(const PlantModel& plant, const DisturbanceSignal& w, double t0, double t, int substeps)
{
    const Eigen::Index n = plant.state_dim();
    Vector z = Vector::Zero(n);
    if (!w.active())
        return z;
    if (substeps < 1)
        throw DomainError("disturbance_increment: substeps must be >= 1");
    const Vector d = plant.d.rowwise().sum();
    const double h = t / substeps;
    auto f = [&](double s, const Vector& y) -> Vector { return plant.a * y + d * w(t0 + s); };
    for (int i = 0; i < substeps; ++i) {
        const double s = i * h;
        const Vector k1 = f(s, z);
        const Vector k2 = f(s + h / 2, z + h / 2 * k1);
        const Vector k3 = f(s + h / 2, z + h / 2 * k2);
        const Vector k4 = f(s + h, z + h * k3);
        z += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    }
    return z;
}

SimTrace simulate(const SimConfig& config)
{
    const auto synthesis = synthesize(config);
    return simulate(config, synthesis);
}

SimTrace simulate(const SimConfig& config, const Synthesis& synthesis)
{
    auto policy = make_policy(synthesis, config);
    return simulate(config, *policy);
}

SimTrace simulate(const SimConfig& config, TriggerPolicy& policy)
{
    config.validate();
    const auto& plant = config.plant;
    const Eigen::Index n = plant.state_dim();
    const auto dp = discretize(plant, config.t);
    std::vector<Matrix> steps_by_action;
    std::vector<SelectionPair> selections;
    for (int a = 0; a <= plant.sensor_count(); ++a) {
        steps_by_action.push_back(step_matrix(dp, a));
        selections.push_back(selection_matrices(a, plant.blocks));
    }

    SimTrace trace;
    trace.state_dim = static_cast<int>(n);
    trace.input_dim = static_cast<int>(plant.input_dim());
    trace.sensor_count = plant.sensor_count();
    trace.steps.reserve(static_cast<std::size_t>(config.total_steps));

    Vector eta = initial_collective_state(config.x0, n);
    const auto total = static_cast<std::size_t>(config.total_steps);
    std::size_t step = 0;
    while (step < total) {
        auto decision = policy.decide(eta, step);
        trace.boundaries.push_back(step);
        const Horizon horizon = decision.horizon;
        trace.decisions.push_back(std::move(decision));
        for (std::size_t j = 0; j < horizon.size() && step < total; ++j, ++step) {
            const int a = horizon[j];
            const auto& sel = selections[static_cast<std::size_t>(a)];
            StepRecord rec;
            rec.step = step;
            rec.t = static_cast<double>(step) * config.t;
            rec.x = eta.head(n);
            rec.xhat = sel.m_sel * eta.head(n) + sel.n_sel * eta.tail(n);
            rec.u = plant.k * rec.xhat;
            rec.action = a;
            rec.v = policy.lyapunov(eta);
            rec.eta = eta;
            Vector next = steps_by_action[static_cast<std::size_t>(a)] * eta;
            if (config.disturbance.active())
                next.head(n) += disturbance_increment(plant, config.disturbance, rec.t, config.t, config.substeps);
            trace.steps.push_back(std::move(rec));
            eta = std::move(next);
        }
    }
    trace.final_eta = eta;
    trace.metrics = utilization_metrics(trace, plant.sensor_count());
    trace.metrics.final_v = policy.lyapunov(eta);
    return trace;
}

std::vector<SimTrace> simulate_sweep(const std::vector<SimConfig>& configs)
{
    std::vector<SimTrace> out(configs.size());
    std::vector<std::exception_ptr> errors(configs.size());
    const auto count = static_cast<long>(configs.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (long i = 0; i < count; ++i) {
        const auto k = static_cast<std::size_t>(i);
        try {
            out[k] = simulate(configs[k], synthesize(configs[k], Exec::Serial));
        } catch (...) {
            errors[k] = std::current_exception();
        }
    }
    for (const auto& e : errors)
        if (e)
            std::rethrow_exception(e);
    return out;
}

SimMetrics utilization_metrics(const SimTrace& trace, int m)
{
    if (m < 1)
        throw DomainError("utilization_metrics: m must be >= 1");
    SimMetrics out;
    out.steps = trace.steps.size();
    for (const auto& rec : trace.steps)
        if (rec.action != 0)
            ++out.readings;
    if (out.steps > 0) {
        out.utilization_reduction =
            1.0 - static_cast<double>(out.readings) / (static_cast<double>(m) * static_cast<double>(out.steps));
        out.initial_v = trace.steps.front().v;
    }
    out.idle_fraction = out.utilization_reduction;
    out.final_v = trace.metrics.final_v;
    return out;
}

double full_sampling_radius(const PlantModel& plant, double t)
{
    const auto [a_t, b_t] = zoh_pair(plant.a, plant.b, t);
    const Eigen::Index n = plant.state_dim();
    Matrix full = Matrix::Zero(2 * n, 2 * n);
    full.topLeftCorner(n, n) = a_t + b_t * plant.k;
    full.bottomLeftCorner(n, n) = Matrix::Identity(n, n);
    return spectral_radius(full);
}

double schur_threshold(const PlantModel& plant, double t_lo, double t_hi, double tol)
{
    if (!(t_lo > 0.0) || !(t_hi > t_lo) || !(tol > 0.0))
        throw DomainError("schur_threshold: need 0 < t_lo < t_hi and tol > 0");
    if (full_sampling_radius(plant, t_lo) >= 1.0)
        throw DomainError("schur_threshold: loop is not Schur at the lower end of the range");
    if (full_sampling_radius(plant, t_hi) < 1.0)
        return t_hi;
    double lo = t_lo;
    double hi = t_hi;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        (full_sampling_radius(plant, mid) < 1.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace asynctrig
