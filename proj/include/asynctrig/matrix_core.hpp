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
#include <string_view>

#include <Eigen/Dense>

namespace asynctrig {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr double kPsdTol = 1e-9;
inline constexpr double kSchurBound = 1.0 - 1e-9;

/// Builds a rows x cols matrix from row-major entries; rejects NaN/Inf.
Matrix make_matrix(Eigen::Index rows, Eigen::Index cols, std::span<const double> row_major);

void require_finite(const Matrix& m, std::string_view what);
void require_square(const Matrix& m, std::string_view what);

Matrix symmetrize(const Matrix& s);

/**
 * Matrix exponential e^{A t} by scaling and squaring with a degree-13
 * Padé approximant (Higham 2005). Accurate to roughly machine precision
 * for the small dense matrices used here.
 */
Matrix mat_exp(const Matrix& a, double t);

struct ZohPair {
    Matrix a_t;  ///< e^{A T}
    Matrix b_t;  ///< \int_0^T e^{A s} B ds
};

/// Zero-order-hold pair from one exponential of [[A, B], [0, 0]] T.
ZohPair zoh_pair(const Matrix& a, const Matrix& b, double t);

/// max |lambda_i| of a general square matrix.
double spectral_radius(const Matrix& m);

struct EigBounds {
    double min;
    double max;
};

/// Extreme eigenvalues of a symmetric matrix. Asymmetry beyond sym_tol
/// (relative to the largest entry) is a DomainError.
EigBounds sym_eig_bounds(const Matrix& s, double sym_tol = 1e-9);

double spectral_norm(const Matrix& m);

/**
 * Solves Phi^T P Phi - rho P = -Q through the Kronecker-vectorized system
 * (Phi^T (x) Phi^T - rho I) vec(P) = -vec(Q).
 *
 * Throws InfeasibleError when spectral_radius(Phi)^2 >= rho or the linear
 * system is singular; the returned P is symmetrized.
 */
Matrix solve_discrete_lyapunov(const Matrix& phi, double rho, const Matrix& q);

bool is_psd(const Matrix& s, double tol = kPsdTol);

inline bool is_schur(const Matrix& m, double bound = kSchurBound) { return spectral_radius(m) < bound; }

} // namespace asynctrig
