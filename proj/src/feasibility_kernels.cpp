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
#include "asynctrig/feasibility_kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "asynctrig/certificate_synthesis.hpp"
#include "asynctrig/error.hpp"

namespace asynctrig {

namespace {

constexpr double kMetricTol = 1e-12;

double decay_score(const Matrix& phi, const Matrix& p, double beta_bar, const Vector& eta, double v)
{
    const Vector next = phi * eta;
    return next.dot(p * next) - beta_bar * v;
}

double perturbed_score(const Matrix& phi, const Matrix& pm, const PerturbedScoreParams& params, double beta_bar,
                       double chi_squared, const Vector& eta, double v)
{
    const Vector next = phi * eta;
    return -next.dot(pm * next) + (beta_bar - params.gamma) * v - chi_squared * params.gain + params.gamma;
}

double chi_squared_at(const PerturbedScoreParams& params, std::size_t length)
{
    return GrowthConstants{params.c, 0.0, params.varpi}.chi_squared(length);
}

void check_sigma_star(const HorizonBank& bank, std::size_t sigma_star)
{
    if (sigma_star >= bank.size())
        throw DomainError("region table: sigma* index out of range");
}

std::vector<std::size_t> argmax_of(const HorizonBank& bank, const std::vector<std::size_t>& feasible)
{
    double best = -HUGE_VAL;
    for (auto i : feasible)
        best = std::max(best, bank.metric(i));
    std::vector<std::size_t> out;
    for (auto i : feasible)
        if (bank.metric(i) >= best - kMetricTol)
            out.push_back(i);
    return out;
}

} // namespace

HorizonBank::HorizonBank(const DiscretePlant& dp, std::vector<Horizon> horizons, Exec exec)
    : m_(dp.sensor_count()), t_(dp.t), horizons_(std::move(horizons))
{
    if (horizons_.empty())
        throw DomainError("HorizonBank: no horizons");
    phi_ = exec == Exec::Parallel ? transitions_parallel(dp, horizons_) : transitions_serial(dp, horizons_);
    metric_.reserve(horizons_.size());
    for (const auto& h : horizons_)
        metric_.push_back(avg_idle_metric(h, m_));

    std::vector<std::size_t> order(horizons_.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return metric_[a] > metric_[b] + kMetricTol; });
    for (auto i : order) {
        if (levels_.empty() || std::abs(metric_[levels_.back().front()] - metric_[i]) > kMetricTol)
            levels_.emplace_back();
        levels_.back().push_back(i);
    }
    for (auto& level : levels_)
        std::sort(level.begin(), level.end());
}

std::optional<std::size_t> HorizonBank::index_of(const Horizon& sigma) const
{
    const auto it = std::find(horizons_.begin(), horizons_.end(), sigma);
    if (it == horizons_.end())
        return std::nullopt;
    return static_cast<std::size_t>(it - horizons_.begin());
}

std::vector<Matrix> transitions_serial(const DiscretePlant& dp, const std::vector<Horizon>& horizons)
{
    std::vector<Matrix> out;
    out.reserve(horizons.size());
    for (const auto& h : horizons)
        out.push_back(horizon_transition(dp, h));
    return out;
}

std::vector<Matrix> transitions_parallel(const DiscretePlant& dp, const std::vector<Horizon>& horizons)
{
    const auto n = static_cast<long>(horizons.size());
    std::vector<Matrix> out(horizons.size());
    std::vector<Matrix> steps;
    for (int a = 0; a <= dp.sensor_count(); ++a)
        steps.push_back(step_matrix(dp, a));
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) {
        const auto& h = horizons[static_cast<std::size_t>(i)];
        Matrix phi = steps[static_cast<std::size_t>(h[0])];
        for (std::size_t j = 1; j < h.size(); ++j)
            phi = (steps[static_cast<std::size_t>(h[j])] * phi).eval();
        out[static_cast<std::size_t>(i)] = std::move(phi);
    }
    return out;
}

std::vector<double> decay_scores_serial(const HorizonBank& bank, const Matrix& p, double beta, const Vector& eta)
{
    const double v = eta.dot(p * eta);
    std::vector<double> out(bank.size());
    for (std::size_t i = 0; i < bank.size(); ++i)
        out[i] = decay_score(bank.phi(i), p, decay_factor(beta, bank.horizon(i).size(), bank.period()), eta, v);
    return out;
}

std::vector<double> decay_scores_parallel(const HorizonBank& bank, const Matrix& p, double beta, const Vector& eta)
{
    const double v = eta.dot(p * eta);
    const auto n = static_cast<long>(bank.size());
    std::vector<double> out(bank.size());
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) {
        const auto k = static_cast<std::size_t>(i);
        out[k] = decay_score(bank.phi(k), p, decay_factor(beta, bank.horizon(k).size(), bank.period()), eta, v);
    }
    return out;
}

std::vector<double> perturbed_scores_serial(const HorizonBank& bank, const PerturbedScoreParams& params,
                                            const Vector& eta)
{
    const Matrix pm = params.p + params.m;
    const double v = eta.dot(params.p * eta);
    std::vector<double> out(bank.size());
    for (std::size_t i = 0; i < bank.size(); ++i) {
        const auto len = bank.horizon(i).size();
        out[i] = perturbed_score(bank.phi(i), pm, params, decay_factor(params.beta, len, bank.period()),
                                 chi_squared_at(params, len), eta, v);
    }
    return out;
}

std::vector<double> perturbed_scores_parallel(const HorizonBank& bank, const PerturbedScoreParams& params,
                                              const Vector& eta)
{
    const Matrix pm = params.p + params.m;
    const double v = eta.dot(params.p * eta);
    const auto n = static_cast<long>(bank.size());
    std::vector<double> out(bank.size());
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) {
        const auto k = static_cast<std::size_t>(i);
        const auto len = bank.horizon(k).size();
        out[k] = perturbed_score(bank.phi(k), pm, params, decay_factor(params.beta, len, bank.period()),
                                 chi_squared_at(params, len), eta, v);
    }
    return out;
}

std::vector<RegionArgmax> region_argmax_serial(const HorizonBank& bank, std::size_t regions,
                                               const PairPredicate& feasible, std::size_t sigma_star)
{
    check_sigma_star(bank, sigma_star);
    std::vector<RegionArgmax> out(regions);
    for (std::size_t c = 0; c < regions; ++c) {
        std::vector<std::size_t> ok;
        for (std::size_t i = 0; i < bank.size(); ++i)
            if (feasible(i, c))
                ok.push_back(i);
        if (ok.empty())
            out[c] = {{sigma_star}, true};
        else
            out[c].members = argmax_of(bank, ok);
    }
    return out;
}

std::vector<RegionArgmax> region_argmax_parallel(const HorizonBank& bank, std::size_t regions,
                                                 const PairPredicate& feasible, std::size_t sigma_star)
{
    check_sigma_star(bank, sigma_star);
    std::vector<RegionArgmax> out(regions);
    std::vector<std::size_t> open(regions);
    std::iota(open.begin(), open.end(), std::size_t{0});

    for (const auto& level : bank.levels()) {
        if (open.empty())
            break;
        const std::size_t width = level.size();
        const auto pairs = static_cast<long>(open.size() * width);
        std::vector<char> hit(open.size() * width, 0);
#pragma omp parallel for schedule(dynamic, 4)
        for (long q = 0; q < pairs; ++q) {
            const auto k = static_cast<std::size_t>(q);
            hit[k] = feasible(level[k % width], open[k / width]) ? 1 : 0;
        }
        std::vector<std::size_t> still_open;
        for (std::size_t r = 0; r < open.size(); ++r) {
            auto& members = out[open[r]].members;
            for (std::size_t j = 0; j < width; ++j)
                if (hit[r * width + j])
                    members.push_back(level[j]);
            if (members.empty())
                still_open.push_back(open[r]);
        }
        open.swap(still_open);
    }
    for (auto c : open)
        out[c] = {{sigma_star}, true};
    return out;
}

} // namespace asynctrig
