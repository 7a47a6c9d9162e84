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

#include "dpris/channel.hpp"
#include "dpris/errors.hpp"

#include <cmath>
#include <stdexcept>

namespace dpris
{

double normalized_sinc(double x)
{
    if (x == 0.0)
        return 1.0;
    const double px = pi * x;
    return std::sin(px) / px;
}

RealMatrix correlation_matrix(const RisGeometry &geometry)
{
    const auto n = static_cast<Eigen::Index>(geometry.element_count());
    const auto &q = geometry.positions();
    RealMatrix R(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
    {
        R(i, i) = 1.0;
        for (Eigen::Index k = i + 1; k < n; ++k)
        {
            const double d = (q[static_cast<std::size_t>(i)] - q[static_cast<std::size_t>(k)]).norm();
            R(i, k) = R(k, i) = normalized_sinc(2.0 * d / geometry.wavelength());
        }
    }
    return R;
}

RealMatrix correlation_sqrt(const RealMatrix &R)
{
    const auto eig = symmetric_eigendecomposition(R);
    if (eig.values.size() == 0)
        return RealMatrix(0, 0);

    const double top = eig.values(0);
    const double bottom = eig.values(eig.values.size() - 1);
    if (bottom < -1e-8 * top)
        throw model_inconsistency("correlation matrix is not positive semidefinite",
                                  {{"min_eigenvalue", bottom}, {"max_eigenvalue", top}});

    RealVector root(eig.values.size());
    for (Eigen::Index i = 0; i < root.size(); ++i)
        root(i) = eig.values(i) < 1e-12 * top ? 0.0 : std::sqrt(eig.values(i));
    return eig.vectors * root.asDiagonal();
}

void PathlossInputs::validate() const
{
    if (!(unit_pathloss > 0.0) || !std::isfinite(unit_pathloss))
        throw std::invalid_argument("PathlossInputs: unit pathloss must be positive");
    if (!(exponent >= 0.0) || !std::isfinite(exponent))
        throw std::invalid_argument("PathlossInputs: pathloss exponent must be finite and non-negative");
    if (!(xpd_coefficient >= 0.0 && xpd_coefficient <= 1.0))
        throw std::invalid_argument("PathlossInputs: XPD coefficient must lie in [0, 1]");
}

PathlossVectors pathloss_vector(const PathlossInputs &inputs, const RisGeometry &geometry, const Vec3 &ue_position)
{
    inputs.validate();
    const auto n = static_cast<Eigen::Index>(geometry.element_count());
    PathlossVectors out;
    out.distances.resize(n);
    RealVector large_scale(n);
    for (Eigen::Index i = 0; i < n; ++i)
    {
        const double d = (ue_position - geometry.position(static_cast<std::size_t>(i))).norm();
        if (!(d > 0.0))
            throw std::invalid_argument("pathloss_vector: UE coincides with an RIS element");
        out.distances(i) = d;
        large_scale(i) = inputs.unit_pathloss * std::pow(d, -inputs.exponent);
    }
    const double l = inputs.xpd_coefficient;
    out.vv = large_scale * (1.0 - l);
    out.hh = out.vv;
    out.vh = large_scale * l;
    out.hv = out.vh;
    return out;
}

ChannelStatistics build_channel_statistics(const RisGeometry &geometry, const PathlossInputs &inputs,
                                           const Vec3 &ue_position)
{
    ChannelStatistics stats;
    stats.inputs = inputs;
    stats.pathloss = pathloss_vector(inputs, geometry, ue_position);
    stats.correlation = correlation_matrix(geometry);
    stats.correlation_sqrt = correlation_sqrt(stats.correlation);
    return stats;
}

SpatialCorrelation spatial_correlation(const RisGeometry &geometry)
{
    SpatialCorrelation c;
    c.correlation = correlation_matrix(geometry);
    c.correlation_sqrt = correlation_sqrt(c.correlation);
    return c;
}

ChannelStatistics build_channel_statistics(const RisGeometry &geometry, const PathlossInputs &inputs,
                                           const Vec3 &ue_position, const SpatialCorrelation &correlation)
{
    const auto n = static_cast<Eigen::Index>(geometry.element_count());
    if (correlation.correlation.rows() != n || correlation.correlation.cols() != n ||
        correlation.correlation_sqrt.rows() != n || correlation.correlation_sqrt.cols() != n)
        throw std::invalid_argument("build_channel_statistics: correlation size does not match the grid");
    ChannelStatistics stats;
    stats.inputs = inputs;
    stats.pathloss = pathloss_vector(inputs, geometry, ue_position);
    stats.correlation = correlation.correlation;
    stats.correlation_sqrt = correlation.correlation_sqrt;
    return stats;
}

namespace
{
ComplexVector correlated_block(const ChannelStatistics &stats, const RealVector &beta, RandomStream &rng)
{
    ComplexVector w(static_cast<Eigen::Index>(stats.size()));
    rng.fill_complex_normal(w);
    ComplexVector h = stats.correlation_sqrt.cast<Complex>() * w;
    return h.cwiseProduct(beta.cwiseSqrt().cast<Complex>());
}
} // namespace

ChannelSample sample_channel(const ChannelStatistics &stats, RandomStream &rng)
{
    ChannelSample s;
    s.vv = correlated_block(stats, stats.pathloss.vv, rng);
    s.vh = correlated_block(stats, stats.pathloss.vh, rng);
    s.hv = correlated_block(stats, stats.pathloss.hv, rng);
    s.hh = correlated_block(stats, stats.pathloss.hh, rng);
    return s;
}

} // namespace dpris
