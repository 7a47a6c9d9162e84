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

#include "dpris/feed.hpp"
#include "dpris/geometry.hpp"
#include "dpris/numerics.hpp"

#include <cstdint>
#include <string>
#include <string_view>

namespace dpris
{

// Angle-dependent reflection amplitude of an element whose normal-incidence
// phase shift is phi0:
//   A(xi, tau) = | e^{2j atan((t + tau)/cos xi)} - e^{2j atan((t - tau)/cos xi)} | / 2,
//   t = tan(phi0 / 2).
struct AmplitudeModel
{
    double normal_incidence_phase = pi / 2.0;
    // Added to every tau before evaluating A; 0 keeps the model literal.
    double tau_offset = 0.0;
    IncidenceConvention convention = IncidenceConvention::AxisParallel;

    void validate() const;
};

// Throws std::invalid_argument when elevation is outside [0, pi/2).
double reflection_amplitude(const AmplitudeModel &model, double elevation, double tau);

struct ElementAmplitudes
{
    RealVector v;
    RealVector h;
};

ElementAmplitudes element_amplitudes(const RisGeometry &geometry, const FeedSpec &feed, const AmplitudeModel &model);

struct PhaseProfile
{
    RealVector v; // radians in [0, 2 pi)
    RealVector h;
};

// phi_n^(V) = phi_n^(H) = 2 pi D_n / lambda (mod 2 pi): cancels the feed
// propagation phase so every element's contribution arrives co-phased.
PhaseProfile optimal_phases(const RisGeometry &geometry, const FeedSpec &feed);

enum class PhaseScheme
{
    Optimal,
    OptimalWithAdjustment, // additionally removes the co-pol feed phases
    Random,                // i.i.d. uniform on [0, 2 pi)
};

PhaseScheme parse_phase_scheme(std::string_view name); // std::invalid_argument on unknown
std::string to_string(PhaseScheme scheme);

PhaseProfile phase_strategy(PhaseScheme kind, const RisGeometry &geometry, const FeedSpec &feed, std::uint64_t seed);

// Wraps an angle to [0, 2 pi).
double wrap_phase(double angle);

// Reflection coefficients Gamma_n^(i) = A_n^(i) e^{j phi_n^(i)}; the block
// diagonal matrix diag(Gamma^(V), Gamma^(H)) is represented by its diagonals.
class RisConfiguration
{
public:
    RisConfiguration() = default;
    RisConfiguration(RealVector amplitudes_v, RealVector amplitudes_h, RealVector phases_v, RealVector phases_h);
    RisConfiguration(const ElementAmplitudes &amplitudes, const PhaseProfile &phases)
        : RisConfiguration(amplitudes.v, amplitudes.h, phases.v, phases.h) {}

    std::size_t size() const noexcept { return static_cast<std::size_t>(amplitudes_v_.size()); }
    const RealVector &amplitudes_v() const noexcept { return amplitudes_v_; }
    const RealVector &amplitudes_h() const noexcept { return amplitudes_h_; }
    const RealVector &phases_v() const noexcept { return phases_v_; }
    const RealVector &phases_h() const noexcept { return phases_h_; }

    ComplexVector coefficients_v() const;
    ComplexVector coefficients_h() const;

private:
    RealVector amplitudes_v_, amplitudes_h_, phases_v_, phases_h_;
};

} // namespace dpris
