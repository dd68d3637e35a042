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

// Test-only reference implementations. Deliberately naive and independent of
// the library's algorithms.

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using LMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;

/// Truncated Taylor series in long double, after halving t until ||A t|| < 0.5.
inline Matrix taylor_exp(const Matrix& a, double t)
{
    LMatrix x = (a * t).cast<long double>();
    int squarings = 0;
    long double norm = 0;
    for (Eigen::Index i = 0; i < x.rows(); ++i)
        norm = std::max(norm, x.row(i).cwiseAbs().sum());
    while (norm > 0.5L) {
        x /= 2.0L;
        norm /= 2.0L;
        ++squarings;
    }
    LMatrix sum = LMatrix::Identity(x.rows(), x.cols());
    LMatrix term = sum;
    for (int k = 1; k < 40; ++k) {
        term = (term * x / static_cast<long double>(k)).eval();
        sum += term;
    }
    for (int i = 0; i < squarings; ++i)
        sum = (sum * sum).eval();
    return sum.cast<double>();
}

/// Composite Simpson for int_0^t e^{A s} ds B.
inline Matrix simpson_zoh(const Matrix& a, const Matrix& b, double t, int panels = 2000)
{
    const double h = t / panels;
    Matrix acc = Matrix::Zero(a.rows(), a.cols());
    for (int i = 0; i <= panels; ++i) {
        const double w = (i == 0 || i == panels) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        acc += w * taylor_exp(a, i * h);
    }
    return acc * (h / 3.0) * b;
}

/// ||Phi^T P Phi - rho P + Q||_max.
inline double lyapunov_residual(const Matrix& phi, double rho, const Matrix& q, const Matrix& p)
{
    return (phi.transpose() * p * phi - rho * p + q).cwiseAbs().maxCoeff();
}

/// All sequences over {0..m} with lengths l_min..l_max, recursive construction.
inline std::vector<std::vector<int>> brute_horizons(int m, int l_min, int l_max)
{
    std::vector<std::vector<int>> out;
    std::function<void(std::vector<int>&, int)> rec = [&](std::vector<int>& cur, int len) {
        if (static_cast<int>(cur.size()) == len) {
            out.push_back(cur);
            return;
        }
        for (int a = 0; a <= m; ++a) {
            cur.push_back(a);
            rec(cur, len);
            cur.pop_back();
        }
    };
    for (int len = l_min; len <= l_max; ++len) {
        std::vector<int> cur;
        rec(cur, len);
    }
    return out;
}

/// Product of per-step maps built directly from the collective-state equations.
inline Matrix direct_transition(const Matrix& a_t, const Matrix& bk_t, const std::vector<int>& blocks,
                                const std::vector<int>& sigma)
{
    const Eigen::Index n = a_t.rows();
    Matrix phi = Matrix::Identity(2 * n, 2 * n);
    for (int a : sigma) {
        Matrix msel = Matrix::Zero(n, n);
        if (a > 0) {
            int off = 0;
            for (int s = 1; s < a; ++s)
                off += blocks[static_cast<std::size_t>(s - 1)];
            for (int i = 0; i < blocks[static_cast<std::size_t>(a - 1)]; ++i)
                msel(off + i, off + i) = 1.0;
        }
        const Matrix nsel = Matrix::Identity(n, n) - msel;
        Matrix step(2 * n, 2 * n);
        step << a_t + bk_t * msel, bk_t * nsel, msel, nsel;
        phi = step * phi;
    }
    return phi;
}

inline Vector random_unit(std::mt19937_64& rng, Eigen::Index dim)
{
    std::normal_distribution<double> g;
    Vector v(dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        v(i) = g(rng);
    return v.normalized();
}

/// Smallest eigenvalue, computed in long double.
inline long double min_eig(const Matrix& s)
{
    Eigen::SelfAdjointEigenSolver<LMatrix> es(s.cast<long double>());
    return es.eigenvalues().minCoeff();
}

} // namespace oracle
