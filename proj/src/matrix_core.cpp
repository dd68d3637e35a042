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
#include "asynctrig/matrix_core.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "asynctrig/error.hpp"

namespace asynctrig {

Matrix make_matrix(Eigen::Index rows, Eigen::Index cols, std::span<const double> row_major)
{
    if (rows < 0 || cols < 0 || static_cast<std::size_t>(rows * cols) != row_major.size())
        throw DimensionError("make_matrix: expected " + std::to_string(rows * cols) + " entries, got " +
                             std::to_string(row_major.size()));
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j)
            m(i, j) = row_major[static_cast<std::size_t>(i * cols + j)];
    require_finite(m, "make_matrix");
    return m;
}

void require_finite(const Matrix& m, std::string_view what)
{
    if (!m.allFinite())
        throw DomainError(std::string(what) + ": matrix has non-finite entries");
}

void require_square(const Matrix& m, std::string_view what)
{
    if (m.rows() != m.cols())
        throw DimensionError(std::string(what) + ": expected square matrix, got " + std::to_string(m.rows()) + "x" +
                             std::to_string(m.cols()));
}

Matrix symmetrize(const Matrix& s)
{
    return 0.5 * (s + s.transpose());
}

Matrix mat_exp(const Matrix& a, double t)
{
    require_square(a, "mat_exp");
    if (!std::isfinite(t))
        throw DomainError("mat_exp: non-finite time");
    const Eigen::Index n = a.rows();
    if (n == 0)
        return a;

    constexpr std::array<double, 14> b = {64764752532480000.0,
                                          32382376266240000.0,
                                          7771770303897600.0,
                                          1187353796428800.0,
                                          129060195264000.0,
                                          10559470521600.0,
                                          670442572800.0,
                                          33522128640.0,
                                          1323241920.0,
                                          40840800.0,
                                          960960.0,
                                          16380.0,
                                          182.0,
                                          1.0};
    constexpr double theta13 = 5.371920351148152;

    Matrix x = a * t;
    const double norm1 = x.cwiseAbs().colwise().sum().maxCoeff();
    int squarings = 0;
    if (norm1 > theta13) {
        squarings = static_cast<int>(std::ceil(std::log2(norm1 / theta13)));
        x /= std::ldexp(1.0, squarings);
    }

    const Matrix id = Matrix::Identity(n, n);
    const Matrix x2 = x * x;
    const Matrix x4 = x2 * x2;
    const Matrix x6 = x4 * x2;
    // Normalized so the constant term is exactly 1; exp of a nilpotent argument then keeps an exact identity.
    std::array<double, 14> c{};
    for (std::size_t k = 0; k < b.size(); ++k)
        c[k] = b[k] / b[0];
    const Matrix u = x * (x6 * (c[13] * x6 + c[11] * x4 + c[9] * x2) + c[7] * x6 + c[5] * x4 + c[3] * x2 + c[1] * id);
    const Matrix v = x6 * (c[12] * x6 + c[10] * x4 + c[8] * x2) + c[6] * x6 + c[4] * x4 + c[2] * x2 + id;

    Matrix r = (v - u).partialPivLu().solve(v + u);
    for (int i = 0; i < squarings; ++i)
        r = r * r;
    return r;
}

ZohPair zoh_pair(const Matrix& a, const Matrix& b, double t)
{
    require_square(a, "zoh_pair");
    if (b.rows() != a.rows())
        throw DimensionError("zoh_pair: B must have as many rows as A");
    if (!(t > 0.0))
        throw DomainError("zoh_pair: sampling interval must be positive");
    const Eigen::Index n = a.rows();
    const Eigen::Index m = b.cols();
    Matrix aug = Matrix::Zero(n + m, n + m);
    aug.topLeftCorner(n, n) = a;
    aug.topRightCorner(n, m) = b;
    const Matrix e = mat_exp(aug, t);
    return {e.topLeftCorner(n, n), e.topRightCorner(n, m)};
}

double spectral_radius(const Matrix& m)
{
    require_square(m, "spectral_radius");
    if (m.rows() == 0)
        return 0.0;
    Eigen::EigenSolver<Matrix> solver(m, false);
    if (solver.info() != Eigen::Success)
        throw DomainError("spectral_radius: eigenvalue iteration did not converge");
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

EigBounds sym_eig_bounds(const Matrix& s, double sym_tol)
{
    require_square(s, "sym_eig_bounds");
    const double scale = std::max(1.0, s.cwiseAbs().maxCoeff());
    if ((s - s.transpose()).cwiseAbs().maxCoeff() > sym_tol * scale)
        throw DomainError("sym_eig_bounds: matrix is not symmetric");
    Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetrize(s), Eigen::EigenvaluesOnly);
    const auto& ev = solver.eigenvalues();
    return {ev(0), ev(ev.size() - 1)};
}

double spectral_norm(const Matrix& m)
{
    if (m.size() == 0)
        return 0.0;
    const Matrix gram = m.transpose() * m;
    Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetrize(gram), Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(0.0, solver.eigenvalues().maxCoeff()));
}

Matrix solve_discrete_lyapunov(const Matrix& phi, double rho, const Matrix& q)
{
    require_square(phi, "solve_discrete_lyapunov");
    if (q.rows() != phi.rows() || q.cols() != phi.cols())
        throw DimensionError("solve_discrete_lyapunov: Q must match Phi");
    if (!(rho > 0.0 && rho <= 1.0))
        throw DomainError("solve_discrete_lyapunov: rate must lie in (0, 1]");

    const double radius = spectral_radius(phi);
    if (radius * radius >= rho)
        throw InfeasibleError("solve_discrete_lyapunov: spectral radius " + std::to_string(radius) +
                              " is not below sqrt(rate) = " + std::to_string(std::sqrt(rho)));

    const Eigen::Index n = phi.rows();
    const Matrix pt = phi.transpose();
    Matrix lhs(n * n, n * n);
    // Column-major vec: vec(Phi^T P Phi) = (Phi^T kron Phi^T) vec(P).
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            lhs.block(i * n, j * n, n, n) = pt(i, j) * pt;
    lhs -= rho * Matrix::Identity(n * n, n * n);

    const Eigen::Map<const Vector> rhs_q(q.data(), n * n);
    Eigen::FullPivLU<Matrix> lu(lhs);
    if (!lu.isInvertible())
        throw InfeasibleError("solve_discrete_lyapunov: singular Kronecker system (spectral radius " +
                              std::to_string(radius) + ")");
    const Vector vec_p = lu.solve(-rhs_q);
    Matrix p = Eigen::Map<const Matrix>(vec_p.data(), n, n);
    return symmetrize(p);
}

bool is_psd(const Matrix& s, double tol)
{
    require_square(s, "is_psd");
    if (s.rows() == 0)
        return true;
    Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetrize(s), Eigen::EigenvaluesOnly);
    return solver.eigenvalues()(0) >= -tol;
}

} // namespace asynctrig
