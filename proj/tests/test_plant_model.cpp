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
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "asynctrig/config.hpp"
#include "asynctrig/error.hpp"
#include "asynctrig/plant_model.hpp"
#include "support/oracles.hpp"

using namespace asynctrig;

namespace {

double power_norm(const Matrix& a)
{
    Vector v = Vector::Ones(a.cols());
    double lambda = 0.0;
    for (int i = 0; i < 5000; ++i) {
        Vector w = a.transpose() * (a * v);
        lambda = w.norm();
        v = w / lambda;
    }
    return std::sqrt(lambda);
}

} // namespace

TEST(PlantModel, ValidateShapes)
{
    auto p = example_plant();
    EXPECT_NO_THROW(p.validate());
    p.blocks = {1};
    EXPECT_ANY_THROW(p.validate());
    p = example_plant();
    p.w_max = 1.0;  // no D
    EXPECT_ANY_THROW(p.validate());
}

TEST(Discretize, MatchesOracles)
{
    const auto dp = discretize(example_plant(), 0.3);
    const auto plant = example_plant();
    EXPECT_LT((dp.a_t - oracle::taylor_exp(plant.a, 0.3)).cwiseAbs().maxCoeff(), 1e-13);
    EXPECT_LT((dp.b_t - oracle::simpson_zoh(plant.a, plant.b, 0.3, 10000)).cwiseAbs().maxCoeff(), 1e-8);
    EXPECT_LT((dp.bk_t - dp.b_t * plant.k).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(SelectionMatrices, Examples)
{
    const std::vector<int> b11 = {1, 1};
    auto s = selection_matrices(0, b11);
    EXPECT_EQ(s.m_sel, Matrix::Zero(2, 2));
    EXPECT_EQ(s.n_sel, Matrix::Identity(2, 2));
    s = selection_matrices(1, b11);
    EXPECT_EQ(s.m_sel, (Matrix{{1, 0}, {0, 0}}));
    EXPECT_EQ(s.n_sel, (Matrix{{0, 0}, {0, 1}}));
    const std::vector<int> b21 = {2, 1};
    s = selection_matrices(2, b21);
    EXPECT_EQ(s.m_sel, (Matrix{{0, 0, 0}, {0, 0, 0}, {0, 0, 1}}));
    EXPECT_EQ(s.n_sel, (Matrix{{1, 0, 0}, {0, 1, 0}, {0, 0, 0}}));
    EXPECT_THROW(selection_matrices(3, b21), DomainError);
}

TEST(SelectionMatrices, ComplementAndOrthogonal)
{
    const std::vector<int> blocks = {2, 1, 3};
    for (int a = 0; a <= 3; ++a) {
        const auto s = selection_matrices(a, blocks);
        EXPECT_EQ(s.m_sel + s.n_sel, Matrix::Identity(6, 6));
        EXPECT_EQ(s.m_sel * s.n_sel, Matrix::Zero(6, 6));
    }
}

TEST(StepMatrix, IdleAndFullSampling)
{
    const auto dp = discretize(example_plant(), 0.3);
    Matrix idle(4, 4);
    idle << dp.a_t, dp.bk_t, Matrix::Zero(2, 2), Matrix::Identity(2, 2);
    EXPECT_LT((step_matrix(dp, 0) - idle).cwiseAbs().maxCoeff(), 1e-15);

    auto one = example_plant();
    one.blocks = {2};
    const auto dp1 = discretize(one, 0.3);
    Matrix full(4, 4);
    full << dp1.a_t + dp1.bk_t, Matrix::Zero(2, 2), Matrix::Identity(2, 2), Matrix::Zero(2, 2);
    EXPECT_LT((step_matrix(dp1, 1) - full).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(StepMatrix, SecondSensorAgainstQuadrature)
{
    const auto plant = example_plant();
    const auto dp = discretize(plant, 0.297);
    const Matrix bt = oracle::simpson_zoh(plant.a, plant.b, 0.297, 10000);
    const Matrix expected = oracle::taylor_exp(plant.a, 0.297) + bt * plant.k * Matrix{{0, 0}, {0, 1}};
    EXPECT_LT((step_matrix(dp, 2).topLeftCorner(2, 2) - expected).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(StepMatrix, CollectiveFormMatchesComponentwiseUpdate)
{
    const auto plant = example_plant();
    const auto dp = discretize(plant, 0.25);
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 100; ++trial) {
        Vector x(2), xprev(2);
        x << g(rng), g(rng);
        xprev << g(rng), g(rng);
        const int a = trial % 3;
        Vector xhat = xprev;
        if (a > 0)
            xhat(a - 1) = x(a - 1);
        const Vector xnext = dp.a_t * x + dp.b_t * (plant.k * xhat);
        Vector eta(4);
        eta << x, xprev;
        const Vector out = step_matrix(dp, a) * eta;
        EXPECT_LT((out.head(2) - xnext).cwiseAbs().maxCoeff(), 1e-10);
        EXPECT_LT((out.tail(2) - xhat).cwiseAbs().maxCoeff(), 1e-10);
    }
}

TEST(HorizonTransition, OrderingAndComposition)
{
    const auto dp = discretize(example_plant(), 0.3);
    EXPECT_EQ(horizon_transition(dp, Horizon({2})), step_matrix(dp, 2));
    EXPECT_LT((horizon_transition(dp, Horizon({1, 2})) - step_matrix(dp, 2) * step_matrix(dp, 1)).cwiseAbs().maxCoeff(),
              1e-14);
    const Horizon a({0, 1, 2}), b({2, 0});
    const Matrix composed = horizon_transition(dp, b) * horizon_transition(dp, a);
    EXPECT_LT((horizon_transition(dp, a.concat(b)) - composed).cwiseAbs().maxCoeff(), 1e-9);
    const auto& blocks = dp.blocks;
    EXPECT_LT((horizon_transition(dp, a) - oracle::direct_transition(dp.a_t, dp.bk_t, blocks, a.actions()))
                  .cwiseAbs()
                  .maxCoeff(),
              1e-12);
    EXPECT_THROW(horizon_transition(dp, Horizon()), DomainError);
}

TEST(HorizonTransition, MotivationalHorizonIsSchur)
{
    const auto dp = discretize(example_plant(), 0.297);
    EXPECT_LT(spectral_radius(horizon_transition(dp, Horizon::parse("0012222"))), 1.0);
}

TEST(InitialState, DuplicatesOrPassesThrough)
{
    Vector x(2);
    x << 5, -2;
    EXPECT_EQ(initial_collective_state(x, 2), (Vector(4) << 5, -2, 5, -2).finished());
    Vector eta(4);
    eta << 15, -1.5, 15, -1.5;
    EXPECT_EQ(initial_collective_state(eta, 2), eta);
    EXPECT_THROW(initial_collective_state(Vector::Zero(3), 2), DimensionError);
}

TEST(DisturbanceBound, BasicCases)
{
    auto p = example_perturbed_plant();
    p.d = Matrix::Zero(2, 1);
    EXPECT_EQ(disturbance_step_bound(p, 0.2), 0.0);

    PlantModel z;
    z.a = Matrix::Zero(2, 2);
    z.b = Matrix{{0.0}, {1.0}};
    z.k = Matrix{{1.0, 1.0}};
    z.d = Matrix::Identity(2, 2);
    z.blocks = {1, 1};
    z.w_max = 1.0;
    EXPECT_NEAR(disturbance_step_bound(z, 0.37), 0.37, 1e-12);

    EXPECT_THROW(disturbance_step_bound(example_plant(), 0.2), DomainError);
}

TEST(DisturbanceBound, MatchesTrapezoidOracle)
{
    const auto p = example_perturbed_plant();
    const double t = 0.205;
    const int panels = 100000;
    const double h = t / panels;
    double acc = 0.0;
    for (int i = 0; i <= panels; ++i) {
        const double w = (i == 0 || i == panels) ? 0.5 : 1.0;
        acc += w * (oracle::taylor_exp(p.a, i * h) * p.d).norm();
    }
    acc *= h;
    const double varpi = disturbance_step_bound(p, t);
    EXPECT_NEAR(varpi, acc, 1e-4 * acc);
    EXPECT_GE(varpi, acc * (1 - 1e-9));
}

TEST(GrowthConstants, GeometricSums)
{
    const GrowthConstants g{2.0, 1.0, 1.0};
    EXPECT_DOUBLE_EQ(g.chi_linear(1), 1.0);
    EXPECT_DOUBLE_EQ(g.chi_squared(1), 1.0);
    EXPECT_DOUBLE_EQ(g.chi_linear(3), 7.0);
    EXPECT_DOUBLE_EQ(g.chi_squared(3), 49.0);
}

TEST(GrowthConstants, MatchPowerIteration)
{
    const auto plant = example_perturbed_plant();
    const auto dp = discretize(plant, 0.205);
    const auto g = growth_constants(dp, disturbance_step_bound(plant, 0.205));
    double c = 0.0;
    for (int a = 0; a <= 2; ++a)
        c = std::max(c, power_norm(step_matrix(dp, a)));
    EXPECT_NEAR(g.c, c, 1e-6);
    EXPECT_NEAR(g.c_prime, power_norm(step_matrix(dp, 0)), 1e-6);
}

TEST(GrowthConstants, AggregatedDisturbanceBound)
{
    const auto plant = example_perturbed_plant();
    const auto dp = discretize(plant, 0.205);
    const double varpi = disturbance_step_bound(plant, 0.205);
    const auto g = growth_constants(dp, varpi);
    std::mt19937_64 rng(23);
    std::uniform_int_distribution<int> len(1, 6), act(0, 2);
    std::uniform_real_distribution<double> mag(0.0, 1.0);
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<int> sigma(static_cast<std::size_t>(len(rng)));
        for (auto& a : sigma)
            a = act(rng);
        Vector acc = Vector::Zero(4);
        for (int a : sigma) {
            Vector w = Vector::Zero(4);
            w.head(2) = oracle::random_unit(rng, 2) * varpi * mag(rng);
            acc = step_matrix(dp, a) * acc + w;
        }
        EXPECT_LE(acc.norm(), g.chi_linear(sigma.size()) * (1 + 1e-12));
    }
}
