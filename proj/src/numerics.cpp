// SPDX-License-Identifier: Apache-2.0
//
// dpris - dual-polarized RIS-fed holographic MIMO link simulator
// Copyright (C) 2026 The dpris authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "dpris/numerics.hpp"

#include <Eigen/Eigenvalues>
#include <gsl/gsl_integration.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <stdexcept>

namespace dpris
{

SymmetricEigen symmetric_eigendecomposition(const RealMatrix &M)
{
    if (M.rows() != M.cols())
        throw std::invalid_argument("symmetric_eigendecomposition: matrix is not square");

    const Eigen::Index n = M.rows();
    if (n == 0)
        return {RealVector(0), RealMatrix(0, 0)};

    const double scale = std::max(M.cwiseAbs().maxCoeff(), 1.0);
    if ((M - M.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw std::invalid_argument("symmetric_eigendecomposition: matrix is not symmetric");

    Eigen::SelfAdjointEigenSolver<RealMatrix> solver(M);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("symmetric_eigendecomposition: solver did not converge");

    // Eigen returns ascending order; reverse to descending.
    SymmetricEigen out;
    out.values = solver.eigenvalues().reverse();
    out.vectors = solver.eigenvectors().rowwise().reverse();
    return out;
}

double det2_hermitian_form(const Eigen::Matrix2cd &G, double lambda_v, double lambda_h, double rho)
{
    // det(I + rho G L G^H) = 1 + rho tr(G L G^H) + rho^2 lv lh |det G|^2;
    // every term is non-negative, so nothing cancels.
    const double tr = lambda_v * (std::norm(G(0, 0)) + std::norm(G(1, 0))) +
                      lambda_h * (std::norm(G(0, 1)) + std::norm(G(1, 1)));
    const double det = std::norm(G(0, 0) * G(1, 1) - G(0, 1) * G(1, 0));
    return 1.0 + rho * tr + rho * rho * lambda_v * lambda_h * det;
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double linear_to_db(double linear)
{
    if (!(linear > 0.0))
        throw std::invalid_argument("linear_to_db: value must be positive");
    return 10.0 * std::log10(linear);
}

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double watts_to_dbm(double watts)
{
    if (!(watts > 0.0))
        throw std::invalid_argument("watts_to_dbm: value must be positive");
    return 10.0 * std::log10(watts) + 30.0;
}

QuadratureRule gauss_legendre(std::size_t n, double a, double b)
{
    if (n == 0)
        throw std::invalid_argument("gauss_legendre: need at least one node");

    std::unique_ptr<gsl_integration_glfixed_table, decltype(&gsl_integration_glfixed_table_free)> table(
        gsl_integration_glfixed_table_alloc(n), &gsl_integration_glfixed_table_free);
    if (!table)
        throw std::runtime_error("gauss_legendre: table allocation failed");

    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        gsl_integration_glfixed_point(a, b, i, &rule.nodes[i], &rule.weights[i], table.get());
    return rule;
}

double integrate_hemisphere(const std::function<double(double, double)> &f, std::size_t n_theta, std::size_t n_phi)
{
    const auto theta = gauss_legendre(n_theta, 0.0, pi / 2.0);
    const auto phi = gauss_legendre(n_phi, 0.0, 2.0 * pi);

    double sum = 0.0;
    for (std::size_t i = 0; i < n_theta; ++i)
    {
        double inner = 0.0;
        for (std::size_t k = 0; k < n_phi; ++k)
            inner += phi.weights[k] * f(theta.nodes[i], phi.nodes[k]);
        sum += theta.weights[i] * std::sin(theta.nodes[i]) * inner;
    }
    return sum;
}

double RandomStream::normal()
{
    if (has_cached_)
    {
        has_cached_ = false;
        return cached_;
    }
    // 1 - u lies in (0, 1], so the log is finite.
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * pi * u2;
    cached_ = radius * std::sin(angle);
    has_cached_ = true;
    return radius * std::cos(angle);
}

Complex RandomStream::complex_normal()
{
    const double re = normal();
    const double im = normal();
    return {re * M_SQRT1_2, im * M_SQRT1_2};
}

void RandomStream::fill_complex_normal(ComplexVector &out)
{
    for (Eigen::Index i = 0; i < out.size(); ++i)
        out(i) = complex_normal();
}

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

RandomStream SeededStreamFactory::stream(std::uint64_t index) const
{
    return RandomStream(splitmix64(splitmix64(master_seed_) ^ splitmix64(index + 0x632BE59BD9B4E019ULL)));
}

} // namespace dpris
