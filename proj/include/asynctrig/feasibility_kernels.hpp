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

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "asynctrig/horizon_space.hpp"
#include "asynctrig/matrix_core.hpp"
#include "asynctrig/plant_model.hpp"

namespace asynctrig {

enum class Exec { Serial, Parallel };

/// Enumerated horizons with their transition matrices and metrics.
/// Levels group horizon indices by equal metric, best metric first.
class HorizonBank {
public:
    HorizonBank() = default;
    HorizonBank(const DiscretePlant& dp, std::vector<Horizon> horizons, Exec exec = Exec::Parallel);

    std::size_t size() const noexcept { return horizons_.size(); }
    int sensor_count() const noexcept { return m_; }
    double period() const noexcept { return t_; }
    const Horizon& horizon(std::size_t i) const { return horizons_.at(i); }
    const Matrix& phi(std::size_t i) const { return phi_.at(i); }
    double metric(std::size_t i) const { return metric_.at(i); }
    const std::vector<Horizon>& horizons() const noexcept { return horizons_; }
    const std::vector<std::vector<std::size_t>>& levels() const noexcept { return levels_; }

    std::optional<std::size_t> index_of(const Horizon& sigma) const;

private:
    int m_ = 0;
    double t_ = 0.0;
    std::vector<Horizon> horizons_;
    std::vector<Matrix> phi_;
    std::vector<double> metric_;
    std::vector<std::vector<std::size_t>> levels_;
};

std::vector<Matrix> transitions_serial(const DiscretePlant& dp, const std::vector<Horizon>& horizons);
std::vector<Matrix> transitions_parallel(const DiscretePlant& dp, const std::vector<Horizon>& horizons);

/// zeta_sigma = eta^T (Phi^T P Phi - e^{-beta |sigma| T} P) eta for every horizon.
std::vector<double> decay_scores_serial(const HorizonBank& bank, const Matrix& p, double beta, const Vector& eta);
std::vector<double> decay_scores_parallel(const HorizonBank& bank, const Matrix& p, double beta, const Vector& eta);

struct PerturbedScoreParams {
    Matrix p;
    Matrix m;
    double gamma = 0.0;
    double beta = 0.0;
    double gain = 0.0;  ///< lambda_max(P M^-1 P + P)
    double varpi = 0.0;
    double c = 0.0;
};

/// (eta; 1)^T U_sigma (eta; 1) for every horizon, with chi taken at |sigma|.
std::vector<double> perturbed_scores_serial(const HorizonBank& bank, const PerturbedScoreParams& params,
                                            const Vector& eta);
std::vector<double> perturbed_scores_parallel(const HorizonBank& bank, const PerturbedScoreParams& params,
                                              const Vector& eta);

/// Per-region argmax sets over the horizons for which feasible(sigma, region) holds.
struct RegionArgmax {
    std::vector<std::size_t> members;  ///< ascending bank indices
    bool fallback = false;             ///< no horizon qualified; members = {sigma*}
};

using PairPredicate = std::function<bool(std::size_t sigma, std::size_t region)>;

/// Reference: evaluates every (sigma, region) pair.
std::vector<RegionArgmax> region_argmax_serial(const HorizonBank& bank, std::size_t regions,
                                               const PairPredicate& feasible, std::size_t sigma_star);
/// Walks metric levels best-first; pairs inside a level run under OpenMP.
std::vector<RegionArgmax> region_argmax_parallel(const HorizonBank& bank, std::size_t regions,
                                                 const PairPredicate& feasible, std::size_t sigma_star);

} // namespace asynctrig
