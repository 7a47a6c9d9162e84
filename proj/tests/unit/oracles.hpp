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

// Reference implementations used by the tests. Each one is written directly
// from the model formulas with plain loops and std::complex, and shares no
// code with the library.

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

namespace oracle
{

using cd = std::complex<double>;
constexpr double pi = 3.14159265358979323846;

struct P3
{
    double x, y, z;
};

inline double norm(P3 a) { return std::sqrt(a.x * a.x + a.y * a.y + a.z * a.z); }

// kappa (r.n)^(kappa/2 - 1), zero behind the feed.
inline double feed_pattern(double kappa, double cos_angle)
{
    if (cos_angle < 0.0)
        return 0.0;
    return kappa * std::pow(cos_angle, kappa / 2.0 - 1.0);
}

// b_n for a feed at f with boresight nb and an element at q.
inline cd nusw(P3 f, P3 nb, double kappa, P3 q, double area, double lambda)
{
    const P3 d{f.x - q.x, f.y - q.y, f.z - q.z};
    const double D = norm(d);
    const double c = (-d.x * nb.x - d.y * nb.y - d.z * nb.z) / D; // direction feed -> element
    const double g = feed_pattern(kappa, c);
    const double a = -d.x * area / D;
    const double mag = std::sqrt(g * a / (4.0 * pi * D * D));
    return std::polar(mag, -2.0 * pi * D / lambda);
}

inline double amplitude(double phi0, double xi, double tau)
{
    const double t = std::tan(phi0 / 2.0);
    const cd e1 = std::exp(cd(0.0, 2.0 * std::atan((t + tau) / std::cos(xi))));
    const cd e2 = std::exp(cd(0.0, 2.0 * std::atan((t - tau) / std::cos(xi))));
    return std::abs(e1 - e2) / 2.0;
}

inline double sinc(double x) { return x == 0.0 ? 1.0 : std::sin(pi * x) / (pi * x); }

// det(I + rho G diag(lv, lh) G^H) by forming the matrix explicitly.
inline double det_hermitian(const cd G[2][2], double lv, double lh, double rho)
{
    const double lam[2] = {lv, lh};
    cd M[2][2];
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
        {
            cd s = (i == j) ? cd(1.0, 0.0) : cd(0.0, 0.0);
            for (int k = 0; k < 2; ++k)
                s += rho * G[i][k] * lam[k] * std::conj(G[j][k]);
            M[i][j] = s;
        }
    return (M[0][0] * M[1][1] - M[0][1] * M[1][0]).real();
}

// |M00 M11| + |M01 M10| for the same matrix; the rounding error of
// det_hermitian is a small multiple of eps times this.
inline double det_hermitian_scale(const cd G[2][2], double lv, double lh, double rho)
{
    const double lam[2] = {lv, lh};
    cd M[2][2];
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
        {
            cd s = (i == j) ? cd(1.0, 0.0) : cd(0.0, 0.0);
            for (int k = 0; k < 2; ++k)
                s += rho * G[i][k] * lam[k] * std::conj(G[j][k]);
            M[i][j] = s;
        }
    return std::abs(M[0][0] * M[1][1]) + std::abs(M[0][1] * M[1][0]);
}

// Double sum over element pairs.
inline double O_double_sum(const std::vector<double> &amp, const std::vector<double> &bmag,
                           const std::vector<std::vector<double>> &R, double beta0, const std::vector<double> &d,
                           double alpha)
{
    double s = 0.0;
    const std::size_t n = amp.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            s += amp[i] * amp[j] * bmag[i] * bmag[j] * R[i][j] * beta0 *
                 std::sqrt(std::pow(d[i], -alpha) * std::pow(d[j], -alpha));
    return s;
}

inline double equal_bound(double ov, double oh, double rho, double l)
{
    return std::log2(1.0 + rho * (ov + oh) / 2.0 + rho * rho * ov * oh * (l * l + (1 - l) * (1 - l)) / 4.0);
}

inline double bound37(double ov, double oh, double lv, double rho, double l)
{
    const double lh = 1.0 - lv;
    return std::log2(1.0 + rho * (lh * oh + lv * ov) + rho * rho * lh * lv * oh * ov * (l * l + (1 - l) * (1 - l)));
}

inline double single_bound(double ov, double rho, double l) { return std::log2(1.0 + rho * (1.0 - l) * ov); }

// Location of the first sign change of equal_bound - 2 single_bound on a
// uniform grid of step h over (0, 1); returns the bracket [lo, hi] or
// {-1, -1} when there is none.
struct Bracket
{
    double lo, hi;
    int changes;
};

inline Bracket threshold_bracket(double ov, double oh, double rho, double h)
{
    Bracket b{-1.0, -1.0, 0};
    const long n = std::lround(1.0 / h);
    double prev = equal_bound(ov, oh, rho, 0.0) - 2.0 * single_bound(ov, rho, 0.0);
    for (long i = 1; i <= n; ++i)
    {
        const double l = static_cast<double>(i) * h;
        const double cur = equal_bound(ov, oh, rho, l) - 2.0 * single_bound(ov, rho, l);
        if ((prev < 0.0) != (cur < 0.0))
        {
            if (b.changes == 0)
                b = {l - h, l, 0};
            ++b.changes;
        }
        prev = cur;
    }
    return b;
}

// Least-squares slope of y against x.
inline double slope(const std::vector<double> &x, const std::vector<double> &y)
{
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(y.size());
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
}

} // namespace oracle
