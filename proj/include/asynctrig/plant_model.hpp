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

#include <span>
#include <vector>

#include "asynctrig/horizon_space.hpp"
#include "asynctrig/matrix_core.hpp"

namespace asynctrig {

/**
 * Continuous-time plant  x' = A x + B u + D w,  u = K xhat.
 *
 * `blocks` partitions the state among the m sensors (sensor i measures
 * block i). `w_max` bounds ||w(t)||_2; D is present iff w_max > 0.
 */
struct PlantModel {
    Matrix a;
    Matrix b;
    Matrix k;
    Matrix d;
    std::vector<int> blocks;
    double w_max = 0.0;

    Eigen::Index state_dim() const { return a.rows(); }
    Eigen::Index input_dim() const { return b.cols(); }
    int sensor_count() const { return static_cast<int>(blocks.size()); }
    bool perturbed() const { return w_max > 0.0; }

    /// Throws DimensionError / DomainError on inconsistent data.
    void validate() const;
};

struct DiscretePlant {
    double t = 0.0;
    Matrix a_t;
    Matrix b_t;
    Matrix bk_t;  ///< B_T K
    std::vector<int> blocks;

    Eigen::Index state_dim() const { return a_t.rows(); }
    int sensor_count() const { return static_cast<int>(blocks.size()); }
};

DiscretePlant discretize(const PlantModel& plant, double t);

struct SelectionPair {
    Matrix m_sel;  ///< identity on the sampled block
    Matrix n_sel;  ///< I - m_sel
};

SelectionPair selection_matrices(int action, std::span<const int> blocks);

/// Collective one-period map [[A_T + BK_T M, BK_T N], [M, N]] acting on (x, xhat_prev).
Matrix step_matrix(const DiscretePlant& dp, int action);

/// Ordered product Phi = step(sigma_l) ... step(sigma_1).
Matrix horizon_transition(const DiscretePlant& dp, const Horizon& sigma);

/// Collective initial state: [x0; x0] for an n-vector, used as-is for a 2n-vector.
Vector initial_collective_state(const Vector& x0, Eigen::Index n);

/**
 * Upper bound on || \int_0^T e^{As} D w(t+s) ds ||_2 given ||w|| <= w_max:
 * w_max times the composite-Simpson integral of ||e^{As} D||_2 plus a
 * Richardson estimate of the quadrature error.
 */
double disturbance_step_bound(const PlantModel& plant, double t, int panels = 1000);

struct GrowthConstants {
    double c = 0.0;        ///< max_a ||Atilde_(a)||_2
    double c_prime = 0.0;  ///< ||Atilde_(0)||_2
    double varpi = 0.0;

    /// varpi * sum_{q<l} C^q, the bound on the accumulated horizon disturbance.
    double chi_linear(std::size_t length) const;
    double chi_squared(std::size_t length) const;
};

GrowthConstants growth_constants(const DiscretePlant& dp, double varpi);

} // namespace asynctrig
