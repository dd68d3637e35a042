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

#include <optional>
#include <span>
#include <vector>

#include "asynctrig/matrix_core.hpp"

namespace asynctrig {

/// Double cone {x : x^T Q x >= 0} with Q = v v^T - cos^2(theta) I.
struct ConicRegion {
    int index = 0;
    Matrix q;
    Vector direction;
    double half_angle = 0.0;

    bool contains(const Vector& x, double rel_tol = 1e-12) const;
};

struct PartitionOptions {
    double margin = 0.05;
    int probe_count = 200'000;
    std::uint64_t probe_seed = 0x5eed'c0de;
};

Matrix cone_form(const Vector& direction, double half_angle);

/**
 * N regions covering R^dim. In the plane: directions at pi c / N and
 * half-angle pi / (2N) (1 + margin). Otherwise directions come from a Halton
 * sequence pushed through Box-Muller onto the sphere and the common
 * half-angle grows by (1 + margin) until every probe direction is covered.
 */
std::vector<ConicRegion> make_partition(int dim, int n_regions, const PartitionOptions& options = {});

/// Lowest region index whose form is >= -rel_tol ||x||^2; falls back to the
/// region with the largest normalized form.
int region_of(const Vector& x, std::span<const ConicRegion> regions);

/// Fraction-free check: every probe u has u^T Q_c u >= 0 for some c.
bool coverage_check(std::span<const ConicRegion> regions, std::span<const Vector> probes);

/**
 * S-procedure multiplier: some eps > 0 with
 * lambda_max(Phi^T P Phi - beta_bar P + eps Q_c) <= 1e-9.
 */
std::optional<double> sprocedure_feasible(const Matrix& phi, const Matrix& p, double beta_bar, const Matrix& q_c);

/// Same search on a precomputed decay form L = Phi^T P Phi - beta_bar P.
std::optional<double> sprocedure_feasible_form(const Matrix& decay_form, const Matrix& q_c);

} // namespace asynctrig
