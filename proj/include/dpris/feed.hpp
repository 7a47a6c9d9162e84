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

// Dual-polarized feed. One radiation pattern serves both polarizations:
// G(r) = kappa (r.n)^(kappa/2 - 1) in the front hemisphere of n, 0 behind.
struct FeedSpec
{
    Vec3 position = Vec3(-0.05, 0.0, 0.0);
    Vec3 boresight = Vec3::UnitX(); // unit main-lobe direction n
    double gain = 10.0;             // kappa, linear, >= 2
    double copol_phase_v = pi / 2.0;
    double copol_phase_h = pi / 4.0;

    void validate() const;
};

// n = (cos eta, cos beta, cos gamma) from the direction angles to the x, y and
// z axes. Throws std::invalid_argument if the result is not a unit vector.
Vec3 boresight_from_direction_angles(double eta, double beta, double gamma);

// Unit vector from `from` towards `target`.
Vec3 boresight_towards(const Vec3 &from, const Vec3 &target);

double feed_gain(const FeedSpec &feed, const Vec3 &direction);

// Shared NUSW coefficient b_n of element n:
// sqrt(G_n A_n / (4 pi D_n^2)) exp(-j 2 pi D_n / lambda), with A_n the
// element area projected towards the feed. Throws degenerate_geometry when
// the feed is in the plane of or behind the reflecting face.
Complex nusw_coefficient(const RisGeometry &geometry, const FeedSpec &feed, std::size_t element_index);

// Feed -> RIS propagation. The cross-polarized blocks b^(VH), b^(HV) are zero
// and not stored.
struct PropagationMatrix
{
    ComplexVector shared; // b_n
    ComplexVector copol_v; // e^{j phi_VV} b_n
    ComplexVector copol_h; // e^{j phi_HH} b_n

    std::size_t size() const noexcept { return static_cast<std::size_t>(shared.size()); }
};

PropagationMatrix build_propagation_matrix(const RisGeometry &geometry, const FeedSpec &feed);

// sum_n |b_n|^2; the fraction of radiated power landing on the RIS.
double captured_power_fraction(const PropagationMatrix &pm);

} // namespace dpris
