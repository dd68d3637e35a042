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
#include "asynctrig/conic_partition.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include <Eigen/Eigenvalues>

#include "asynctrig/error.hpp"
#include "asynctrig/multiplier_search.hpp"

namespace asynctrig {

namespace {

double halton(std::uint64_t index, std::uint64_t base)
{
    double f = 1.0;
    double r = 0.0;
    while (index > 0) {
        f /= static_cast<double>(base);
        r += f * static_cast<double>(index % base);
        index /= base;
    }
    return r;
}

constexpr std::array<std::uint64_t, 16> kPrimes = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};

Vector sphere_point(std::uint64_t index, int dim)
{
    if (dim > static_cast<int>(kPrimes.size()))
        throw DomainError("make_partition: dimension above 16 is not supported");
    Vector z(dim);
    for (int k = 0; k < dim; k += 2) {
        const double u1 = halton(index, kPrimes[static_cast<std::size_t>(k)]);
        const double u2 = k + 1 < dim ? halton(index, kPrimes[static_cast<std::size_t>(k + 1)]) : 0.0;
        const double radius = std::sqrt(-2.0 * std::log(u1));
        z(k) = radius * std::cos(2.0 * std::numbers::pi * u2);
        if (k + 1 < dim)
            z(k + 1) = radius * std::sin(2.0 * std::numbers::pi * u2);
    }
    return z.normalized();
}

std::vector<Vector> probe_directions(int dim, int count, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    std::vector<Vector> probes;
    probes.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        Vector u(dim);
        for (int k = 0; k < dim; ++k)
            u(k) = normal(rng);
        probes.push_back(u.normalized());
    }
    return probes;
}

std::vector<ConicRegion> build_regions(const std::vector<Vector>& directions, double half_angle)
{
    std::vector<ConicRegion> regions;
    regions.reserve(directions.size());
    for (std::size_t c = 0; c < directions.size(); ++c)
        regions.push_back({static_cast<int>(c), cone_form(directions[c], half_angle), directions[c], half_angle});
    return regions;
}

} // namespace

bool ConicRegion::contains(const Vector& x, double rel_tol) const
{
    return x.dot(q * x) >= -rel_tol * x.squaredNorm();
}

Matrix cone_form(const Vector& direction, double half_angle)
{
    const Vector v = direction.normalized();
    const double c = std::cos(half_angle);
    return v * v.transpose() - c * c * Matrix::Identity(v.size(), v.size());
}

std::vector<ConicRegion> make_partition(int dim, int n_regions, const PartitionOptions& options)
{
    if (n_regions < 1)
        throw DomainError("make_partition: need at least one region");
    if (dim < 2)
        throw DomainError("make_partition: dimension must be >= 2");
    constexpr double right_angle = std::numbers::pi / 2.0;

    if (dim == 2) {
        std::vector<Vector> directions;
        for (int c = 0; c < n_regions; ++c) {
            const double angle = std::numbers::pi * c / n_regions;
            Vector v(2);
            v << std::cos(angle), std::sin(angle);
            directions.push_back(v);
        }
        const double half_angle = std::min(right_angle, std::numbers::pi / (2.0 * n_regions) * (1.0 + options.margin));
        return build_regions(directions, half_angle);
    }

    std::vector<Vector> directions;
    for (int c = 0; c < n_regions; ++c)
        directions.push_back(sphere_point(static_cast<std::uint64_t>(c) + 1, dim));
    const auto probes = probe_directions(dim, options.probe_count, options.probe_seed);

    double half_angle = std::min(right_angle, std::numbers::pi / (2.0 * n_regions));
    while (true) {
        auto regions = build_regions(directions, half_angle);
        if (coverage_check(regions, probes)) {
            // One more margin step past the first covering angle.
            half_angle = std::min(right_angle, half_angle * (1.0 + options.margin));
            return build_regions(directions, half_angle);
        }
        if (half_angle >= right_angle)
            throw DomainError("make_partition: coverage not reached at half-angle pi/2");
        half_angle = std::min(right_angle, half_angle * (1.0 + options.margin));
    }
}

int region_of(const Vector& x, std::span<const ConicRegion> regions)
{
    if (regions.empty())
        throw DomainError("region_of: empty partition");
    const double norm2 = x.squaredNorm();
    int best = 0;
    double best_value = -HUGE_VAL;
    for (const auto& region : regions) {
        const double value = x.dot(region.q * x);
        if (value >= -1e-12 * norm2)
            return region.index;
        if (value > best_value) {
            best_value = value;
            best = region.index;
        }
    }
    return best;
}

bool coverage_check(std::span<const ConicRegion> regions, std::span<const Vector> probes)
{
    for (const auto& u : probes) {
        bool covered = false;
        for (const auto& region : regions) {
            if (u.dot(region.q * u) >= 0.0) {
                covered = true;
                break;
            }
        }
        if (!covered)
            return false;
    }
    return true;
}

std::optional<double> sprocedure_feasible_form(const Matrix& decay_form, const Matrix& q_c)
{
    const Matrix l = symmetrize(decay_form);
    const Matrix q = symmetrize(q_c);
    Eigen::SelfAdjointEigenSolver<Matrix> solver;
    auto score = [&](double eps) {
        solver.compute(l + eps * q, Eigen::EigenvaluesOnly);
        return -solver.eigenvalues().maxCoeff();
    };
    const auto found = search_multiplier(score);
    if (!found)
        return std::nullopt;
    return found->epsilon;
}

std::optional<double> sprocedure_feasible(const Matrix& phi, const Matrix& p, double beta_bar, const Matrix& q_c)
{
    if (phi.rows() != p.rows() || q_c.rows() != p.rows())
        throw DimensionError("sprocedure_feasible: shape mismatch");
    return sprocedure_feasible_form(phi.transpose() * p * phi - beta_bar * p, q_c);
}

} // namespace asynctrig
