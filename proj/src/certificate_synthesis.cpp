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
#include "asynctrig/certificate_synthesis.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "asynctrig/error.hpp"

namespace asynctrig {

namespace {

double lambda_min(const Matrix& s)
{
    Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetrize(s), Eigen::EigenvaluesOnly);
    return solver.eigenvalues()(0);
}

void require_same_shape(const Matrix& a, const Matrix& b, const char* what)
{
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionError(std::string(what) + ": shape mismatch");
}

} // namespace

UnperturbedCertificate synthesize_unperturbed(const Matrix& phi_star, double beta, double horizon_seconds)
{
    require_square(phi_star, "synthesize_unperturbed");
    if (beta < 0.0)
        throw DomainError("synthesize_unperturbed: beta must be >= 0");
    const double rate = std::exp(-beta * horizon_seconds);
    const double bound = std::exp(-beta * horizon_seconds / 2.0);
    const double radius = spectral_radius(phi_star);
    if (!(radius < bound))
        throw InfeasibleError("synthesize_unperturbed: spectral radius " + std::to_string(radius) +
                              " is not below the required bound " + std::to_string(bound));
    UnperturbedCertificate cert;
    cert.p = solve_discrete_lyapunov(phi_star, rate, Matrix::Identity(phi_star.rows(), phi_star.cols()));
    cert.beta = beta;
    const Matrix decay = phi_star.transpose() * cert.p * phi_star - rate * cert.p;
    if (!is_psd(-decay - kPsdTol * Matrix::Identity(decay.rows(), decay.cols()), 0.0))
        throw InfeasibleError("synthesize_unperturbed: Lyapunov solution fails the strict decay check");
    return cert;
}

bool verify_unperturbed(const UnperturbedCertificate& cert, const Matrix& phi_star, double margin)
{
    if (cert.sigma_star.empty())
        return false;
    const double rate = decay_factor(cert.beta, cert.sigma_star.size(), cert.t);
    const Matrix decay = phi_star.transpose() * cert.p * phi_star - rate * cert.p;
    const Eigen::Index n = decay.rows();
    return is_psd(cert.p - margin * Matrix::Identity(n, n), 0.0) &&
           is_psd(-decay - margin * Matrix::Identity(n, n), 0.0);
}

UltimateBound ultimate_bound(const Matrix& p, double c_prime, double varpi)
{
    const auto [lmin, lmax] = sym_eig_bounds(p);
    if (!(lmin > 0.0))
        throw DomainError("ultimate_bound: P must be positive definite");
    const double root = c_prime / lmin + varpi;
    const double mu = lmax * root * root;
    return {mu, mu / lmin};
}

bool verify_lmi_pair(const Matrix& p, const Matrix& m, double gamma, double chi, const Matrix& phi, double beta_bar,
                     double tol)
{
    require_same_shape(p, m, "verify_lmi_pair");
    require_same_shape(p, phi, "verify_lmi_pair");
    const Eigen::Index n = p.rows();
    const Matrix first = -phi.transpose() * (p + m) * phi + (beta_bar - gamma) * p;
    if (!is_psd(first, tol))
        return false;
    if (chi <= 0.0)
        return is_psd(m, tol);
    Matrix second(2 * n, 2 * n);
    second.topLeftCorner(n, n) = m;
    second.topRightCorner(n, n) = p;
    second.bottomLeftCorner(n, n) = p;
    second.bottomRightCorner(n, n) = (gamma / chi) * Matrix::Identity(n, n) - p;
    return is_psd(second, tol);
}

PerturbedOnlineCertificate synthesize_perturbed_online(const Matrix& phi_star, double beta, double horizon_seconds,
                                                       double chi, double gamma, const GrowthConstants& growth)
{
    require_square(phi_star, "synthesize_perturbed_online");
    if (!(gamma > 0.0))
        throw DomainError("synthesize_perturbed_online: gamma must be > 0");
    if (chi < 0.0)
        throw DomainError("synthesize_perturbed_online: chi must be >= 0");
    const double beta_bar = std::exp(-beta * horizon_seconds);
    const double radius = spectral_radius(phi_star);
    const Eigen::Index n = phi_star.rows();
    const Matrix id = Matrix::Identity(n, n);

    std::optional<PerturbedOnlineCertificate> best;
    for (int k = -6; k <= 6; ++k) {
        const double alpha = std::ldexp(1.0, k);
        const double rate = (beta_bar - gamma) / (1.0 + alpha);
        if (!(rate > 0.0) || radius * radius >= rate)
            continue;
        Matrix p0;
        try {
            p0 = solve_discrete_lyapunov(phi_star, std::min(rate, 1.0), id);
        } catch (const InfeasibleError&) {
            continue;
        }
        const double lmax = sym_eig_bounds(p0).max;
        double scale = 1.0;
        if (chi > 0.0)
            scale = 0.9 * (gamma / chi) / ((1.0 + 1.0 / alpha) * lmax);
        const Matrix p = scale * p0;
        const Matrix m = alpha * p;
        if (!verify_lmi_pair(p, m, gamma, chi, phi_star, beta_bar))
            continue;
        const auto bound = ultimate_bound(p, growth.c_prime, growth.varpi);
        if (!best || bound.mu < best->mu) {
            PerturbedOnlineCertificate cert;
            cert.p = p;
            cert.m = m;
            cert.gamma = gamma;
            cert.beta = beta;
            cert.chi = chi;
            cert.c = growth.c;
            cert.c_prime = growth.c_prime;
            cert.varpi = growth.varpi;
            cert.mu = bound.mu;
            cert.psi = bound.psi;
            cert.alpha = alpha;
            best = std::move(cert);
        }
    }
    if (!best)
        throw InfeasibleError("synthesize_perturbed_online: no alpha in 2^[-6,6] satisfies both LMIs (spectral radius " +
                              std::to_string(radius) + ", beta_bar " + std::to_string(beta_bar) + ", gamma " +
                              std::to_string(gamma) + ")");
    return *best;
}

double disturbance_gain(const Matrix& p, const Matrix& m)
{
    require_same_shape(p, m, "disturbance_gain");
    Eigen::FullPivLU<Matrix> lu(m);
    if (!lu.isInvertible())
        throw DomainError("disturbance_gain: M is singular");
    const Matrix inner = p * lu.solve(p) + p;
    return sym_eig_bounds(symmetrize(inner)).max;
}

Matrix build_u_sigma(const Matrix& p, const Matrix& m, double gamma, const Matrix& phi, double beta_bar,
                     double chi_squared)
{
    require_same_shape(p, phi, "build_u_sigma");
    const double gain = disturbance_gain(p, m);
    const Eigen::Index n = p.rows();
    Matrix u = Matrix::Zero(n + 1, n + 1);
    u.topLeftCorner(n, n) = symmetrize(-phi.transpose() * (p + m) * phi + (beta_bar - gamma) * p);
    u(n, n) = -chi_squared * gain + gamma;
    return u;
}

Matrix assemble_offline_u(const Matrix& p, const Matrix& phi, double beta_bar, double gamma1, double gamma2,
                          double chi_linear)
{
    require_same_shape(p, phi, "assemble_offline_u");
    if (!(chi_linear > 0.0))
        throw DomainError("assemble_offline_u: chi must be > 0");
    const Eigen::Index n = p.rows();
    Matrix u = Matrix::Zero(2 * n + 1, 2 * n + 1);
    const Matrix p_phi = p * phi;
    u.topLeftCorner(n, n) = symmetrize(-phi.transpose() * p_phi + (beta_bar - gamma1) * p);
    u.block(n, 0, n, n) = -p_phi;
    u.block(0, n, n, n) = -p_phi.transpose();
    u.block(n, n, n, n) = (gamma2 / chi_linear) * Matrix::Identity(n, n) - p;
    u(2 * n, 2 * n) = gamma1 - gamma2;
    return u;
}

PerturbedOfflineCertificate synthesize_perturbed_offline(const Matrix& phi_star, double beta, double horizon_seconds,
                                                         double chi_linear, double gamma1, double gamma2,
                                                         const GrowthConstants& growth)
{
    require_square(phi_star, "synthesize_perturbed_offline");
    if (!(gamma1 > 0.0) || !(gamma2 > 0.0))
        throw DomainError("synthesize_perturbed_offline: gamma1 and gamma2 must be > 0");
    const double beta_bar = std::exp(-beta * horizon_seconds);
    const double rate = beta_bar - gamma1;
    const double radius = spectral_radius(phi_star);
    if (!(rate > 0.0) || radius * radius >= rate)
        throw InfeasibleError("synthesize_perturbed_offline: spectral radius " + std::to_string(radius) +
                              " leaves no Lyapunov ansatz at rate beta_bar - gamma1 = " + std::to_string(rate));
    const Eigen::Index n = phi_star.rows();
    Matrix p0 = solve_discrete_lyapunov(phi_star, rate, Matrix::Identity(n, n));
    p0 /= sym_eig_bounds(p0).max;

    constexpr int grid = 121;
    for (int i = 0; i < grid; ++i) {
        // 1e6 down to 1e-6: the first (largest) passing scale is kept.
        const double scale = std::pow(10.0, 6.0 - 12.0 * i / (grid - 1));
        const Matrix p = scale * p0;
        if (lambda_min(assemble_offline_u(p, phi_star, beta_bar, gamma1, gamma2, chi_linear)) >= -kPsdTol) {
            PerturbedOfflineCertificate cert;
            cert.p = p;
            cert.gamma1 = gamma1;
            cert.gamma2 = gamma2;
            cert.beta = beta;
            cert.chi_linear = chi_linear;
            cert.c = growth.c;
            cert.c_prime = growth.c_prime;
            cert.varpi = growth.varpi;
            const auto bound = ultimate_bound(p, growth.c_prime, growth.varpi);
            cert.mu = bound.mu;
            cert.psi = bound.psi;
            cert.scale = scale;
            return cert;
        }
    }
    throw InfeasibleError("synthesize_perturbed_offline: no scaling in [1e-6, 1e6] makes U positive semidefinite");
}

bool verify_perturbed_offline(const PerturbedOfflineCertificate& cert, const Matrix& phi_star, double tol)
{
    const double beta_bar = decay_factor(cert.beta, cert.sigma_star.size(), cert.t);
    return is_psd(cert.p, 0.0) &&
           lambda_min(assemble_offline_u(cert.p, phi_star, beta_bar, cert.gamma1, cert.gamma2, cert.chi_linear)) >=
               -tol;
}

Matrix build_u_c(const Matrix& p, double gamma1, double gamma2, const Matrix& phi, double beta_bar,
                 double chi_linear, const Matrix& q_c, double epsilon)
{
    require_same_shape(p, q_c, "build_u_c");
    Matrix u = assemble_offline_u(p, phi, beta_bar, gamma1, gamma2, chi_linear);
    u.topLeftCorner(p.rows(), p.cols()) -= epsilon * symmetrize(q_c);
    return u;
}

std::optional<MultiplierResult> region_multiplier_offline(const Matrix& p, double gamma1, double gamma2,
                                                          const Matrix& phi, double beta_bar, double chi_linear,
                                                          const Matrix& q_c)
{
    const Matrix base = assemble_offline_u(p, phi, beta_bar, gamma1, gamma2, chi_linear);
    const Eigen::Index n = p.rows();
    const Matrix q = symmetrize(q_c);
    Matrix work = base;
    return search_multiplier([&](double eps) {
        work.topLeftCorner(n, n) = base.topLeftCorner(n, n) - eps * q;
        return lambda_min(work);
    });
}

} // namespace asynctrig
