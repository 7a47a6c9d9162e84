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

#pragma once

#include <Eigen/Core>

#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace dpris
{

using Vec3 = Eigen::Vector3d;
using RealVector = Eigen::VectorXd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using Complex = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;

// ---- Symmetric eigendecomposition ----------------------------------------

struct SymmetricEigen
{
    RealVector values;  // descending
    RealMatrix vectors; // column k belongs to values(k), orthonormal
};

// Throws std::invalid_argument for non-square input or asymmetry above
// 1e-12 * max|M_ij|.
SymmetricEigen symmetric_eigendecomposition(const RealMatrix &M);

// ---- 2x2 Hermitian determinant -------------------------------------------

// det(I_2 + rho * G * diag(lambda_v, lambda_h) * G^H) via the expansion
// (1 + rho A11)(1 + rho A22) - rho^2 |A12|^2 with A = G Lambda G^H.
double det2_hermitian_form(const Eigen::Matrix2cd &G, double lambda_v, double lambda_h, double rho);

// ---- Level conversions ----------------------------------------------------

double db_to_linear(double db);
double linear_to_db(double linear); // std::invalid_argument for linear <= 0
double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);  // std::invalid_argument for watts <= 0

inline double deg_to_rad(double deg) { return deg * pi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / pi; }

// ---- Quadrature -----------------------------------------------------------

struct QuadratureRule
{
    std::vector<double> nodes;
    std::vector<double> weights;
};

// n-point Gauss-Legendre rule mapped to [a, b].
QuadratureRule gauss_legendre(std::size_t n, double a, double b);

// Integral of f(theta, phi) sin(theta) over the hemisphere theta in [0, pi/2],
// phi in [0, 2 pi), by a product Gauss-Legendre rule.
double integrate_hemisphere(const std::function<double(double, double)> &f, std::size_t n_theta, std::size_t n_phi);

// ---- Random streams -------------------------------------------------------

// One reproducible random stream. The engine is std::mt19937_64, whose output
// sequence is fixed by the standard; the uniform/normal transforms are written
// out here because the standard library distributions are implementation
// defined.
class RandomStream
{
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Standard normal, Box-Muller.
    double normal();

    // Circularly-symmetric CN(0, 1): (g1 + j g2) / sqrt(2).
    Complex complex_normal();

    void fill_complex_normal(ComplexVector &out);

private:
    std::mt19937_64 engine_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

// Hands out stream(i) as a pure function of (master_seed, i), so trial i sees
// the same numbers no matter how trials are distributed over workers.
class SeededStreamFactory
{
public:
    explicit SeededStreamFactory(std::uint64_t master_seed) : master_seed_(master_seed) {}

    std::uint64_t master_seed() const noexcept { return master_seed_; }
    RandomStream stream(std::uint64_t index) const;

private:
    std::uint64_t master_seed_;
};

std::uint64_t splitmix64(std::uint64_t x);

} // namespace dpris
