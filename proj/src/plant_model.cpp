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
#include "asynctrig/plant_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "asynctrig/error.hpp"

namespace asynctrig {

void PlantModel::validate() const
{
    require_square(a, "PlantModel.A");
    require_finite(a, "PlantModel.A");
    require_finite(b, "PlantModel.B");
    require_finite(k, "PlantModel.K");
    const Eigen::Index n = a.rows();
    if (n == 0)
        throw DimensionError("PlantModel: empty state");
    if (b.rows() != n)
        throw DimensionError("PlantModel: B must have n rows");
    if (k.rows() != b.cols() || k.cols() != n)
        throw DimensionError("PlantModel: K must be m_u x n");
    if (blocks.empty())
        throw DomainError("PlantModel: at least one sensor block is required");
    int total = 0;
    for (int bsize : blocks) {
        if (bsize < 1)
            throw DomainError("PlantModel: sensor block sizes must be >= 1");
        total += bsize;
    }
    if (total != n)
        throw DimensionError("PlantModel: sensor blocks sum to " + std::to_string(total) + ", state has " +
                             std::to_string(n));
    if (!(w_max >= 0.0) || !std::isfinite(w_max))
        throw DomainError("PlantModel: w_max must be finite and >= 0");
    if (w_max > 0.0) {
        if (d.rows() != n || d.cols() == 0)
            throw DimensionError("PlantModel: perturbed plant needs an n x n_w matrix D");
        require_finite(d, "PlantModel.D");
    } else if (d.size() != 0) {
        throw DomainError("PlantModel: D given but w_max is 0");
    }
}

DiscretePlant discretize(const PlantModel& plant, double t)
{
    plant.validate();
    auto [a_t, b_t] = zoh_pair(plant.a, plant.b, t);
    DiscretePlant dp;
    dp.t = t;
    dp.bk_t = b_t * plant.k;
    dp.a_t = std::move(a_t);
    dp.b_t = std::move(b_t);
    dp.blocks = plant.blocks;
    return dp;
}

SelectionPair selection_matrices(int action, std::span<const int> blocks)
{
    const int m = static_cast<int>(blocks.size());
    if (action < 0 || action > m)
        throw DomainError("selection_matrices: action " + std::to_string(action) + " outside {0.." +
                          std::to_string(m) + "}");
    const int n = std::accumulate(blocks.begin(), blocks.end(), 0);
    Matrix m_sel = Matrix::Zero(n, n);
    if (action > 0) {
        const int offset = std::accumulate(blocks.begin(), blocks.begin() + (action - 1), 0);
        const int size = blocks[static_cast<std::size_t>(action - 1)];
        m_sel.block(offset, offset, size, size).setIdentity();
    }
    Matrix n_sel = Matrix::Identity(n, n) - m_sel;
    return {std::move(m_sel), std::move(n_sel)};
}

Matrix step_matrix(const DiscretePlant& dp, int action)
{
    const auto [m_sel, n_sel] = selection_matrices(action, dp.blocks);
    const Eigen::Index n = dp.state_dim();
    Matrix out(2 * n, 2 * n);
    out.topLeftCorner(n, n) = dp.a_t + dp.bk_t * m_sel;
    out.topRightCorner(n, n) = dp.bk_t * n_sel;
    out.bottomLeftCorner(n, n) = m_sel;
    out.bottomRightCorner(n, n) = n_sel;
    return out;
}

Matrix horizon_transition(const DiscretePlant& dp, const Horizon& sigma)
{
    if (sigma.empty())
        throw DomainError("horizon_transition: empty horizon");
    Matrix phi = step_matrix(dp, sigma[0]);
    for (std::size_t j = 1; j < sigma.size(); ++j)
        phi = step_matrix(dp, sigma[j]) * phi;
    return phi;
}

Vector initial_collective_state(const Vector& x0, Eigen::Index n)
{
    if (x0.size() == 2 * n)
        return x0;
    if (x0.size() != n)
        throw DimensionError("initial state must have n or 2n entries");
    Vector eta(2 * n);
    eta << x0, x0;
    return eta;
}

namespace {

double simpson(const std::vector<double>& f, double h)
{
    const std::size_t panels = f.size() - 1;
    double acc = f.front() + f.back();
    for (std::size_t i = 1; i < panels; ++i)
        acc += (i % 2 == 1 ? 4.0 : 2.0) * f[i];
    return acc * h / 3.0;
}

} // namespace

double disturbance_step_bound(const PlantModel& plant, double t, int panels)
{
    plant.validate();
    if (!plant.perturbed())
        throw DomainError("disturbance_step_bound: plant is unperturbed (w_max = 0)");
    if (!(t > 0.0))
        throw DomainError("disturbance_step_bound: sampling interval must be positive");
    // Multiple of 4 so the half-resolution Simpson estimate is also valid.
    panels = (std::max(panels, 1000) + 3) / 4 * 4;

    const double h = t / panels;
    const Matrix step = mat_exp(plant.a, h);
    std::vector<double> f(static_cast<std::size_t>(panels) + 1);
    Matrix e_d = plant.d;
    for (int i = 0; i <= panels; ++i) {
        // Re-anchor periodically so the product recurrence does not drift.
        if (i % 64 == 0)
            e_d = mat_exp(plant.a, i * h) * plant.d;
        f[static_cast<std::size_t>(i)] = spectral_norm(e_d);
        e_d = step * e_d;
    }
    const double fine = simpson(f, h);
    std::vector<double> coarse_f;
    coarse_f.reserve(f.size() / 2 + 1);
    for (std::size_t i = 0; i < f.size(); i += 2)
        coarse_f.push_back(f[i]);
    const double coarse = simpson(coarse_f, 2.0 * h);
    const double err = std::abs(fine - coarse) / 15.0;
    return plant.w_max * (fine + err);
}

double GrowthConstants::chi_linear(std::size_t length) const
{
    double sum = 0.0;
    double pow = 1.0;
    for (std::size_t q = 0; q < length; ++q) {
        sum += pow;
        pow *= c;
    }
    return varpi * sum;
}

double GrowthConstants::chi_squared(std::size_t length) const
{
    const double lin = chi_linear(length);
    return lin * lin;
}

GrowthConstants growth_constants(const DiscretePlant& dp, double varpi)
{
    GrowthConstants g;
    g.varpi = varpi;
    for (int a = 0; a <= dp.sensor_count(); ++a) {
        const double norm = spectral_norm(step_matrix(dp, a));
        g.c = std::max(g.c, norm);
        if (a == 0)
            g.c_prime = norm;
    }
    return g;
}

} // namespace asynctrig
