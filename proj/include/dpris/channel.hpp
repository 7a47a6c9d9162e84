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

#include "dpris/geometry.hpp"
#include "dpris/numerics.hpp"

namespace dpris
{

// R(n1, n2) = sinc(2 |q_n1 - q_n2| / lambda), normalized sinc.
RealMatrix correlation_matrix(const RisGeometry &geometry);

double normalized_sinc(double x);

// Spectral square root L = U diag(sqrt(max(ev, 0))) with L L^T = R after
// clipping eigenvalues below 1e-12 * ev_max. Throws model_inconsistency if
// any eigenvalue is below -1e-8 * ev_max (R not PSD).
RealMatrix correlation_sqrt(const RealMatrix &R);

struct PathlossInputs
{
    double unit_pathloss = 1.0715193052376065e-05; // beta0, linear (-49.7 dB)
    double exponent = 4.0;                         // alpha
    double xpd_coefficient = 0.2;                  // l_RU in [0, 1]

    void validate() const;
    double xpd() const { return (1.0 - xpd_coefficient) / xpd_coefficient; }
};

struct PathlossVectors
{
    RealVector vv, vh, hv, hh; // beta_n^(ji)
    RealVector distances;      // d_n, element -> UE
};

// Co-pol beta0 d_n^-alpha (1 - l), cross-pol beta0 d_n^-alpha l.
// Throws std::invalid_argument if the UE coincides with an element.
PathlossVectors pathloss_vector(const PathlossInputs &inputs, const RisGeometry &geometry, const Vec3 &ue_position);

struct ChannelStatistics
{
    PathlossInputs inputs;
    PathlossVectors pathloss;
    RealMatrix correlation;
    RealMatrix correlation_sqrt;

    std::size_t size() const noexcept { return static_cast<std::size_t>(pathloss.distances.size()); }
};

ChannelStatistics build_channel_statistics(const RisGeometry &geometry, const PathlossInputs &inputs,
                                           const Vec3 &ue_position);

// R and its square root depend on the grid only; sweeps that move the feed,
// the UE or the pathloss can compute them once.
struct SpatialCorrelation
{
    RealMatrix correlation;
    RealMatrix correlation_sqrt;
};

SpatialCorrelation spatial_correlation(const RisGeometry &geometry);

// Same as above with a precomputed R and L (must match the grid size).
ChannelStatistics build_channel_statistics(const RisGeometry &geometry, const PathlossInputs &inputs,
                                           const Vec3 &ue_position, const SpatialCorrelation &correlation);

// h^(ji) as row vectors over the RIS elements.
struct ChannelSample
{
    ComplexVector vv, vh, hv, hh;
};

// Draws the four blocks in the order VV, VH, HV, HH, each as
// sqrt(beta^(ji)) .* (L w) with w ~ CN(0, I) consumed from `rng`.
ChannelSample sample_channel(const ChannelStatistics &stats, RandomStream &rng);

} // namespace dpris
