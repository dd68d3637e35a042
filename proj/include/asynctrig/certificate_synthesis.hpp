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

#include <cmath>
#include <optional>

#include "asynctrig/horizon_space.hpp"
#include "asynctrig/matrix_core.hpp"
#include "asynctrig/multiplier_search.hpp"
#include "asynctrig/plant_model.hpp"

namespace asynctrig {

/// Quadratic Lyapunov certificate for the disturbance-free loop:
/// Phi*^T P Phi* - e^{-beta |sigma*| T} P < 0.
struct UnperturbedCertificate {
    Matrix p;
    double beta = 0.0;
    double t = 0.0;
    Horizon sigma_star;
};

/// Certificate for online triggering under bounded disturbances.
struct PerturbedOnlineCertificate {
    Matrix p;
    Matrix m;
    double gamma = 0.0;
    double beta = 0.0;
    double t = 0.0;
    double chi = 0.0;  ///< squared accumulated-disturbance bound at |sigma*|
    double c = 0.0;
    double c_prime = 0.0;
    double varpi = 0.0;
    double mu = 0.0;
    double psi = 0.0;
    double alpha = 0.0;  ///< M = alpha P
    Horizon sigma_star;
};

/// Certificate for offline (region-table) triggering under bounded disturbances.
struct PerturbedOfflineCertificate {
    Matrix p;
    double gamma1 = 0.0;
    double gamma2 = 0.0;
    double beta = 0.0;
    double t = 0.0;
    double chi_linear = 0.0;
    double c = 0.0;
    double c_prime = 0.0;
    double varpi = 0.0;
    double mu = 0.0;
    double psi = 0.0;
    double scale = 1.0;
    Horizon sigma_star;
};

inline double decay_factor(double beta, std::size_t length, double t)
{
    return std::exp(-beta * static_cast<double>(length) * t);
}

/// P from the discrete Lyapunov equation at rate e^{-beta * horizon_seconds} with Q = I.
/// Throws InfeasibleError if spectral_radius(phi_star) >= e^{-beta * horizon_seconds / 2}.
UnperturbedCertificate synthesize_unperturbed(const Matrix& phi_star, double beta, double horizon_seconds);

bool verify_unperturbed(const UnperturbedCertificate& cert, const Matrix& phi_star, double margin = kPsdTol);

struct UltimateBound {
    double mu;   ///< E(P, mu) contains every post-transient state
    double psi;  ///< squared radius of the smallest ball containing E(P, mu)
};

UltimateBound ultimate_bound(const Matrix& p, double c_prime, double varpi);

/**
 * True iff
 *   -Phi^T (P + M) Phi + (beta_bar - gamma) P  >= 0   and
 *   [[M, P], [P, (gamma / chi) I - P]]          >= 0.
 *
 * The first block is the one whose positivity the ultimate-boundedness
 * argument needs (it is the top block of U_sigma).
 */
bool verify_lmi_pair(const Matrix& p, const Matrix& m, double gamma, double chi, const Matrix& phi, double beta_bar,
                     double tol = kPsdTol);

/**
 * Structured search with M = alpha P: for alpha = 2^k, k in [-6, 6], P0 solves
 * the Lyapunov equation at rate (beta_bar - gamma) / (1 + alpha), then P = s P0
 * with s = 0.9 (gamma / chi) / ((1 + 1/alpha) lambda_max(P0)). The alpha with
 * the smallest ultimate bound mu wins.
 */
PerturbedOnlineCertificate synthesize_perturbed_online(const Matrix& phi_star, double beta, double horizon_seconds,
                                                       double chi, double gamma, const GrowthConstants& growth = {});

/// The (2n+1)-square matrix of the online perturbed feasibility test.
Matrix build_u_sigma(const Matrix& p, const Matrix& m, double gamma, const Matrix& phi, double beta_bar,
                     double chi_squared);

/// lambda_max(P M^{-1} P + P); throws DomainError for singular M.
double disturbance_gain(const Matrix& p, const Matrix& m);

/// 3x3-block matrix [[-Phi^T P Phi + (bb - g1) P, *, *], [-P Phi, (g2/chi) I - P, *], [0, 0, g1 - g2]].
Matrix assemble_offline_u(const Matrix& p, const Matrix& phi, double beta_bar, double gamma1, double gamma2,
                          double chi_linear);

PerturbedOfflineCertificate synthesize_perturbed_offline(const Matrix& phi_star, double beta, double horizon_seconds,
                                                         double chi_linear, double gamma1, double gamma2,
                                                         const GrowthConstants& growth = {});

bool verify_perturbed_offline(const PerturbedOfflineCertificate& cert, const Matrix& phi_star, double tol = kPsdTol);

/// Region-restricted U_c: assemble_offline_u minus epsilon Q_c on the leading block (S-procedure in >= form).
Matrix build_u_c(const Matrix& p, double gamma1, double gamma2, const Matrix& phi, double beta_bar,
                 double chi_linear, const Matrix& q_c, double epsilon);

/// Line search on epsilon maximizing lambda_min(U_c); present iff the maximum is >= -1e-9.
std::optional<MultiplierResult> region_multiplier_offline(const Matrix& p, double gamma1, double gamma2,
                                                          const Matrix& phi, double beta_bar, double chi_linear,
                                                          const Matrix& q_c);

} // namespace asynctrig
