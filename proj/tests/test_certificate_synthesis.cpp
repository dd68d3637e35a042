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

#include "asynctrig/certificate_synthesis.hpp"
#include "asynctrig/config.hpp"
#include "asynctrig/error.hpp"
#include "asynctrig/serialization.hpp"
#include "asynctrig/simulation.hpp"
#include "support/oracles.hpp"

using namespace asynctrig;

namespace {

Matrix printed_p()
{
    return Matrix{{4.5107, -0.3699, -0.7505, -1.3990},
                  {-0.3699, 5.0824, 0.4709, -1.3114},
                  {-0.7505, 0.4709, 6.2863, 0.2754},
                  {-1.3990, -1.3114, 0.2754, 2.0002}};
}

Matrix printed_m()
{
    return Matrix{{9.6164, -0.2298, -2.4446, -2.3527},
                  {-0.2298, 10.7068, 1.3307, -3.6711},
                  {-2.4446, 1.3307, 10.9375, 0.6381},
                  {-2.3527, -3.6711, 0.6381, 4.5667}};
}

double gain_oracle(const Matrix& p, const Matrix& m)
{
    const oracle::LMatrix pl = p.cast<long double>();
    const oracle::LMatrix g = pl * m.cast<long double>().inverse() * pl + pl;
    Eigen::SelfAdjointEigenSolver<oracle::LMatrix> es((g + g.transpose()) / 2.0L);
    return static_cast<double>(es.eigenvalues().maxCoeff());
}

const Synthesis& online_synthesis()
{
    static const Synthesis s = synthesize(make_preset("online-perturbed").sim, Exec::Serial);
    return s;
}

const Synthesis& offline_synthesis()
{
    static const Synthesis s = synthesize(make_preset("offline-perturbed").sim);
    return s;
}

Matrix random_schur(std::mt19937_64& rng, int n, double radius)
{
    std::normal_distribution<double> g;
    Matrix a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            a(i, j) = g(rng);
    return a * (radius / spectral_radius(a));
}

} // namespace

TEST(Unperturbed, ScalarLyapunov)
{
    const auto cert = synthesize_unperturbed(0.5 * Matrix::Identity(2, 2), 0.0, 0.6);
    EXPECT_LT((cert.p - 4.0 / 3.0 * Matrix::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Unperturbed, ExampleHorizonCertificate)
{
    const auto dp = discretize(example_plant(), 0.3);
    const Matrix phi = horizon_transition(dp, Horizon({1, 2}));
    auto cert = synthesize_unperturbed(phi, 0.0, 0.6);
    cert.t = 0.3;
    cert.sigma_star = Horizon({1, 2});
    EXPECT_GT(oracle::min_eig(cert.p), 0.0L);
    EXPECT_GT(oracle::min_eig(cert.p - phi.transpose() * cert.p * phi), 0.0L);
    EXPECT_LT(oracle::lyapunov_residual(phi, 1.0, Matrix::Identity(4, 4), cert.p), 1e-8 * cert.p.norm());
    EXPECT_TRUE(verify_unperturbed(cert, phi));
}

TEST(Unperturbed, BeyondSchurThresholdIsInfeasible)
{
    auto plant = example_plant();
    plant.blocks = {2};
    const auto dp = discretize(plant, 0.7);
    EXPECT_THROW(synthesize_unperturbed(step_matrix(dp, 1), 0.0, 0.7), InfeasibleError);
}

TEST(Unperturbed, DecayImpliedByNonPositiveZeta)
{
    const auto dp = discretize(example_plant(), 0.3);
    const Matrix phi_star = horizon_transition(dp, Horizon({1, 2}));
    const auto cert = synthesize_unperturbed(phi_star, 0.01, 0.6);
    std::mt19937_64 rng(31);
    int checked = 0;
    for (const auto& sigma : enumerate_horizons(2, 1, 3)) {
        const Matrix phi = horizon_transition(dp, sigma);
        const double bb = decay_factor(0.01, sigma.size(), 0.3);
        for (int i = 0; i < 1000; ++i) {
            const Vector eta = oracle::random_unit(rng, 4);
            const double v = eta.dot(cert.p * eta);
            const double zeta = eta.dot((phi.transpose() * cert.p * phi - bb * cert.p) * eta);
            if (zeta <= 0.0) {
                const Vector next = phi * eta;
                EXPECT_LE(next.dot(cert.p * next), bb * v + 1e-9);
                ++checked;
            }
        }
    }
    EXPECT_GT(checked, 1000);
}

TEST(VerifyLmiPair, IdentityCasesUnderImplementedSign)
{
    const Matrix i4 = Matrix::Identity(2, 2);
    const Matrix zero = Matrix::Zero(2, 2);
    // LMI1 here is -Phi^T (P+M) Phi + (beta_bar - gamma) P >= 0.
    EXPECT_FALSE(verify_lmi_pair(i4, i4, 2.0, 0.2, zero, 1.0));
    EXPECT_TRUE(verify_lmi_pair(i4, i4, 0.5, 0.2, zero, 1.0));
    // LMI2 needs gamma / chi >= 2 for P = M = I.
    EXPECT_FALSE(verify_lmi_pair(i4, i4, 0.5, 1.0, zero, 1.0));
}

TEST(VerifyLmiPair, PrintedPairThresholdOnChi)
{
    const Matrix p = printed_p(), m = printed_m();
    const double gain = gain_oracle(p, m);
    EXPECT_NEAR(disturbance_gain(p, m), gain, 1e-9 * gain);
    EXPECT_NEAR(gain, 10.405, 5e-3);
    const Matrix zero = Matrix::Zero(4, 4);
    EXPECT_TRUE(verify_lmi_pair(p, m, 0.35, 0.99 * 0.35 / gain, zero, 1.0, 1e-6));
    EXPECT_FALSE(verify_lmi_pair(p, m, 0.35, 1.01 * 0.35 / gain, zero, 1.0, 1e-6));
}

TEST(PerturbedOnline, ZeroPhiToy)
{
    const auto cert = synthesize_perturbed_online(Matrix::Zero(1, 1), 0.0, 0.2, 1.0, 0.5);
    EXPECT_TRUE(verify_lmi_pair(cert.p, cert.m, 0.5, 1.0, Matrix::Zero(1, 1), 1.0));
    EXPECT_THROW(synthesize_perturbed_online(Matrix::Zero(1, 1), 0.0, 0.2, 1.0, 0.0), DomainError);
    EXPECT_THROW(synthesize_perturbed_online(Matrix::Zero(1, 1), 0.0, 0.2, 1.0, 1.5), InfeasibleError);
}

TEST(PerturbedOnline, SelfVerifiesOnRandomSchur)
{
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> r(0.05, 0.75);
    for (int trial = 0; trial < 50; ++trial) {
        const Matrix phi = random_schur(rng, 4, r(rng));
        const auto cert = synthesize_perturbed_online(phi, 0.0, 1.0, 2.0, 0.35);
        EXPECT_TRUE(verify_lmi_pair(cert.p, cert.m, 0.35, 2.0, phi, 1.0));
    }
}

TEST(PerturbedOnline, PresetCertificateVerifies)
{
    const auto& s = online_synthesis();
    ASSERT_TRUE(s.online.has_value());
    const auto& c = *s.online;
    const Matrix phi = horizon_transition(s.dp, c.sigma_star);
    EXPECT_TRUE(verify_lmi_pair(c.p, c.m, c.gamma, c.chi, phi, decay_factor(c.beta, c.sigma_star.size(), c.t)));
    EXPECT_NEAR(c.chi, s.growth.chi_squared(c.sigma_star.size()), 1e-9 * c.chi);
}

TEST(PerturbedOnline, SerializationRoundTripReverifies)
{
    const auto& c = *online_synthesis().online;
    const auto back = perturbed_online_from_json(Json::parse(to_json(c).dump()));
    const Matrix phi = horizon_transition(online_synthesis().dp, back.sigma_star);
    EXPECT_TRUE(verify_lmi_pair(back.p, back.m, back.gamma, back.chi, phi, 1.0));
    EXPECT_EQ(back.sigma_star, c.sigma_star);
    EXPECT_EQ(back.mu, c.mu);
}

TEST(USigma, BasicCasesAndSign)
{
    const Matrix i2 = Matrix::Identity(2, 2);
    const Matrix u = build_u_sigma(i2, i2, 1.0, Matrix::Zero(2, 2), 1.0, 0.0);
    Vector e(3);
    e << 3.0, -7.0, 1.0;
    EXPECT_NEAR(e.dot(u * e), 1.0, 1e-15);
    const Matrix big = build_u_sigma(i2, i2, 1.0, Matrix::Zero(2, 2), 1.0, 100.0);
    EXPECT_LT(e.dot(big * e), 0.0);
    EXPECT_THROW(disturbance_gain(i2, Matrix::Zero(2, 2)), DomainError);
}

TEST(USigma, SummandRecomputation)
{
    const auto& s = online_synthesis();
    const auto& c = *s.online;
    const double gain = gain_oracle(c.p, c.m);
    std::mt19937_64 rng(43);
    std::uniform_int_distribution<std::size_t> pick(0, s.bank->size() - 1);
    std::uniform_real_distribution<double> logr(0.0, 4.0);
    for (int i = 0; i < 100; ++i) {
        const auto k = pick(rng);
        const auto len = s.bank->horizon(k).size();
        const Matrix& phi = s.bank->phi(k);
        const Vector eta = oracle::random_unit(rng, 4) * std::pow(10.0, logr(rng));
        Vector e(5);
        e << eta, 1.0;
        const double chi2 = s.growth.chi_squared(len);
        const double form = e.dot(build_u_sigma(c.p, c.m, c.gamma, phi, 1.0, chi2) * e);
        const Vector y = phi * eta;
        const double direct = -y.dot((c.p + c.m) * y) + (1.0 - c.gamma) * eta.dot(c.p * eta) - chi2 * gain + c.gamma;
        EXPECT_EQ(form >= 0.0, direct >= 0.0);
        EXPECT_NEAR(form, direct, 1e-9 * (1.0 + std::abs(direct)));
    }
}

TEST(USigma, StepInequalityMonteCarlo)
{
    const auto& s = online_synthesis();
    const auto& c = *s.online;
    std::mt19937_64 rng(47);
    std::uniform_int_distribution<std::size_t> pick(0, s.bank->size() - 1);
    std::uniform_real_distribution<double> logv(0.0, 6.0), unit(0.0, 1.0);
    int feasible = 0;
    for (int i = 0; i < 1000; ++i) {
        const auto k = pick(rng);
        const auto len = s.bank->horizon(k).size();
        const Matrix& phi = s.bank->phi(k);
        Vector eta = oracle::random_unit(rng, 4);
        eta *= std::sqrt(std::pow(10.0, logv(rng)) / eta.dot(c.p * eta));
        const double v = eta.dot(c.p * eta);
        Vector e(5);
        e << eta, 1.0;
        if (e.dot(build_u_sigma(c.p, c.m, c.gamma, phi, 1.0, s.growth.chi_squared(len)) * e) < 0.0)
            continue;
        ++feasible;
        const Vector w = oracle::random_unit(rng, 4) * s.growth.chi_linear(len) * unit(rng);
        const Vector next = phi * eta + w;
        EXPECT_LE(next.dot(c.p * next), v + 1e-9 * v);
    }
    EXPECT_GT(feasible, 100);
}

TEST(PerturbedOffline, ToyScalingAndSignCheck)
{
    const auto cert = synthesize_perturbed_offline(Matrix::Zero(2, 2), 0.0, 0.5, 1.0, 0.2, 0.1);
    const Matrix u = assemble_offline_u(cert.p, Matrix::Zero(2, 2), 1.0, 0.2, 0.1, 1.0);
    EXPECT_GE(oracle::min_eig(u), -1e-9L);
    EXPECT_THROW(synthesize_perturbed_offline(Matrix::Zero(2, 2), 0.0, 0.5, 1.0, 0.1, 0.2), InfeasibleError);
}

TEST(PerturbedOffline, PresetCertificateVerifies)
{
    const auto& s = offline_synthesis();
    ASSERT_TRUE(s.offline.has_value());
    const auto& c = *s.offline;
    const Matrix phi = horizon_transition(s.dp, c.sigma_star);
    EXPECT_TRUE(verify_perturbed_offline(c, phi));
    EXPECT_GE(oracle::min_eig(assemble_offline_u(c.p, phi, 1.0, c.gamma1, c.gamma2, c.chi_linear)), -1e-9L);
    const auto back = perturbed_offline_from_json(Json::parse(to_json(c).dump()));
    EXPECT_TRUE(verify_perturbed_offline(back, phi));
}

TEST(UC, ZeroMultiplierAndRegionCheck)
{
    const auto& s = offline_synthesis();
    const auto& c = *s.offline;
    const Matrix phi = horizon_transition(s.dp, c.sigma_star);
    const auto& q = s.regions.front().q;
    EXPECT_EQ(build_u_c(c.p, c.gamma1, c.gamma2, phi, 1.0, c.chi_linear, q, 0.0),
              assemble_offline_u(c.p, phi, 1.0, c.gamma1, c.gamma2, c.chi_linear));
    const auto found = region_multiplier_offline(c.p, c.gamma1, c.gamma2, phi, 1.0, c.chi_linear, q);
    ASSERT_TRUE(found.has_value());
    EXPECT_GE(oracle::min_eig(build_u_c(c.p, c.gamma1, c.gamma2, phi, 1.0, c.chi_linear, q, found->epsilon)),
              -1e-9L);
}

TEST(UC, WholeSpaceRegionMatchesGlobalCondition)
{
    const Matrix p = Matrix::Identity(2, 2) * 0.1;
    const Matrix q = Matrix::Identity(2, 2);
    const Matrix good = 0.3 * Matrix::Identity(2, 2);
    const Matrix bad = 1.2 * Matrix::Identity(2, 2);
    EXPECT_GE(oracle::min_eig(assemble_offline_u(p, good, 1.0, 0.2, 0.1, 0.5)), 0.0L);
    EXPECT_LT(oracle::min_eig(assemble_offline_u(p, bad, 1.0, 0.2, 0.1, 0.5)), 0.0L);
    const auto found = region_multiplier_offline(p, 0.2, 0.1, good, 1.0, 0.5, q);
    ASSERT_TRUE(found.has_value());
    EXPECT_LT(found->epsilon, 1e-6);
    EXPECT_FALSE(region_multiplier_offline(p, 0.2, 0.1, bad, 1.0, 0.5, q).has_value());
}

TEST(UC, RegionFeasibleImpliesPointwiseDecay)
{
    const auto& s = offline_synthesis();
    const auto& c = *s.offline;
    std::mt19937_64 rng(53);
    for (std::size_t r = 0; r < s.regions.size(); ++r) {
        const auto& region = s.regions[r];
        for (const auto& sigma : s.table->entries[r].horizons) {
            const Matrix& phi = s.bank->phi(*s.bank->index_of(sigma));
            const auto found = region_multiplier_offline(c.p, c.gamma1, c.gamma2, phi, 1.0,
                                                         s.growth.chi_linear(sigma.size()), region.q);
            if (!found)
                continue;  // sigma* fallback entry
            const Matrix block = -phi.transpose() * c.p * phi + (1.0 - c.gamma1) * c.p;
            int sampled = 0;
            while (sampled < 200) {
                const Vector x = oracle::random_unit(rng, 4);
                if (!region.contains(x))
                    continue;
                ++sampled;
                EXPECT_GE(x.dot(block * x), -1e-9 * c.p.norm());
            }
        }
    }
}

TEST(UltimateBound, Examples)
{
    auto b = ultimate_bound(Matrix::Identity(2, 2), 0.0, 1.0);
    EXPECT_DOUBLE_EQ(b.mu, 1.0);
    EXPECT_DOUBLE_EQ(b.psi, 1.0);
    b = ultimate_bound(Matrix{{1.0, 0.0}, {0.0, 4.0}}, 0.0, 1.0);
    EXPECT_DOUBLE_EQ(b.mu, 4.0);
    EXPECT_DOUBLE_EQ(b.psi, 4.0);
}

TEST(UltimateBound, Monotone)
{
    const Matrix p{{2.0, 0.3}, {0.3, 1.0}};
    double prev = 0.0;
    for (double varpi = 0.0; varpi < 3.0; varpi += 0.25) {
        const double mu = ultimate_bound(p, 0.7, varpi).mu;
        EXPECT_GE(mu, prev);
        prev = mu;
    }
    prev = 0.0;
    for (double cp = 0.0; cp < 3.0; cp += 0.25) {
        const double mu = ultimate_bound(p, cp, 0.4).mu;
        EXPECT_GE(mu, prev);
        prev = mu;
    }
}
