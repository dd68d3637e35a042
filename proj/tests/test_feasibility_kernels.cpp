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
#include <random>

#include <gtest/gtest.h>
#include <omp.h>

#include "asynctrig/config.hpp"
#include "asynctrig/feasibility_kernels.hpp"
#include "asynctrig/simulation.hpp"
#include "support/oracles.hpp"

using namespace asynctrig;

namespace {

class Threads : public ::testing::Environment {
public:
    void SetUp() override { omp_set_num_threads(4); }
};

const auto* const kEnv = ::testing::AddGlobalTestEnvironment(new Threads);

} // namespace

TEST(Bank, TransitionsSerialEqualsParallelAndOracle)
{
    const auto dp = discretize(example_plant(), 0.205);
    const auto hs = enumerate_horizons(2, 1, 6);
    const auto a = transitions_serial(dp, hs);
    const auto b = transitions_parallel(dp, hs);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_LT((a[i] - b[i]).cwiseAbs().maxCoeff(), 1e-12 * (1 + a[i].cwiseAbs().maxCoeff()));
        if (i % 37 == 0)
            EXPECT_LT((a[i] - oracle::direct_transition(dp.a_t, dp.bk_t, dp.blocks, hs[i].actions()))
                          .cwiseAbs()
                          .maxCoeff(),
                      1e-10 * (1 + a[i].cwiseAbs().maxCoeff()));
    }
}

TEST(Bank, LevelsPartitionByMetric)
{
    const HorizonBank bank(discretize(example_plant(), 0.3), enumerate_horizons(2, 1, 3));
    std::size_t total = 0;
    double prev = 2.0;
    for (const auto& level : bank.levels()) {
        total += level.size();
        const double m = bank.metric(level.front());
        EXPECT_LT(m, prev);
        prev = m;
        for (auto i : level)
            EXPECT_DOUBLE_EQ(bank.metric(i), m);
    }
    EXPECT_EQ(total, bank.size());
    EXPECT_EQ(bank.index_of(Horizon({1, 2})).value(), 3u + 5u);
    EXPECT_FALSE(bank.index_of(Horizon({0, 0, 0, 0})).has_value());
}

TEST(Scores, SerialEqualsParallel)
{
    const auto s = synthesize(make_preset("online-perturbed").sim, Exec::Serial);
    const auto& c = *s.online;
    const PerturbedScoreParams params{c.p, c.m, c.gamma, c.beta, disturbance_gain(c.p, c.m), c.varpi, c.c};
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const Vector eta = oracle::random_unit(rng, 4) * 10.0;
        EXPECT_EQ(decay_scores_serial(*s.bank, c.p, 0.1, eta), decay_scores_parallel(*s.bank, c.p, 0.1, eta));
        EXPECT_EQ(perturbed_scores_serial(*s.bank, params, eta), perturbed_scores_parallel(*s.bank, params, eta));
    }
}

TEST(RegionArgmax, SerialEqualsParallelOnSyntheticPredicate)
{
    const HorizonBank bank(discretize(example_plant(), 0.3), enumerate_horizons(2, 1, 4));
    const auto star = bank.index_of(Horizon({1, 2})).value();
    for (unsigned seed = 0; seed < 10; ++seed) {
        std::mt19937_64 rng(seed);
        std::vector<std::vector<char>> ok(bank.size(), std::vector<char>(6));
        for (auto& row : ok)
            for (auto& v : row)
                v = (rng() % 100) < (seed * 3) ? 1 : 0;
        const PairPredicate pred = [&](std::size_t i, std::size_t c) { return ok[i][c] != 0; };
        const auto a = region_argmax_serial(bank, 6, pred, star);
        const auto b = region_argmax_parallel(bank, 6, pred, star);
        for (std::size_t c = 0; c < 6; ++c) {
            EXPECT_EQ(a[c].members, b[c].members);
            EXPECT_EQ(a[c].fallback, b[c].fallback);
            if (a[c].fallback)
                EXPECT_EQ(a[c].members, std::vector<std::size_t>{star});
        }
    }
}

TEST(RegionArgmax, SerialEqualsParallelOnRealTable)
{
    auto cfg = make_preset("offline-unperturbed").sim;
    cfg.l_max = 4;
    cfg.regions = 6;
    const auto s = synthesize(cfg, Exec::Serial);
    const auto serial = build_offline_table_unperturbed(*s.unperturbed, *s.bank, s.regions, Exec::Serial);
    const auto parallel = build_offline_table_unperturbed(*s.unperturbed, *s.bank, s.regions, Exec::Parallel);
    ASSERT_EQ(serial.entries.size(), parallel.entries.size());
    for (std::size_t c = 0; c < serial.entries.size(); ++c) {
        EXPECT_EQ(serial.entries[c].horizons, parallel.entries[c].horizons);
        EXPECT_EQ(serial.entries[c].metric, parallel.entries[c].metric);
    }
}
