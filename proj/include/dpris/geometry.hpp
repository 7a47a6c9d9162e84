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

#include "dpris/numerics.hpp"

#include <cstddef>
#include <vector>

namespace dpris
{

/*!
 * Planar RIS lying in the y-z plane, surface normal +x. Elements sit on a
 * rows x cols grid centred on the origin; index n = row * cols + col, rows
 * advance along z and columns along y.
 */
class RisGeometry
{
public:
    RisGeometry() = default;
    RisGeometry(std::size_t rows, std::size_t cols, double pitch, double wavelength);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t element_count() const noexcept { return positions_.size(); }
    double pitch() const noexcept { return pitch_; }
    double wavelength() const noexcept { return wavelength_; }
    double element_area() const noexcept { return pitch_ * pitch_; }
    double aperture() const noexcept { return static_cast<double>(element_count()) * element_area(); }
    const std::vector<Vec3> &positions() const noexcept { return positions_; }
    const Vec3 &position(std::size_t n) const { return positions_.at(n); }
    static Vec3 surface_normal() { return Vec3::UnitX(); }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    double pitch_ = 0.0;
    double wavelength_ = 0.0;
    std::vector<Vec3> positions_;
};

RisGeometry build_ris_grid(std::size_t rows, std::size_t cols, double pitch, double wavelength);

// (radius, zenith, azimuth) in the physics convention.
struct SphericalPlacement
{
    double radius = 1.0;
    double zenith = 0.0;
    double azimuth = 0.0;

    // Throws std::invalid_argument unless radius > 0, zenith in [0, pi],
    // azimuth in [0, 2 pi).
    void validate() const;
};

Vec3 spherical_to_cartesian(const SphericalPlacement &p);

// How the two in-plane incidence tilts are assigned to the polarizations.
//   AxisParallel:   tau_v = |d.u_z| / |d.u_x|, tau_h = |d.u_y| / |d.u_x|
//                   (tilt measured in the plane containing the element axis)
//   AxisOrthogonal: tau_v = |d.u_y| / |d.u_x|, tau_h = |d.u_z| / |d.u_x|
// V elements are oriented along z and H elements along y.
enum class IncidenceConvention
{
    AxisParallel,
    AxisOrthogonal,
};

struct IncidenceDecomposition
{
    double elevation = 0.0; // angle between incidence direction and the normal
    double tau_v = 0.0;
    double tau_h = 0.0;
    double distance = 0.0;
};

// Decomposes the feed -> element incidence direction for element n.
// Throws degenerate_geometry when the feed lies in the RIS plane.
IncidenceDecomposition incidence_decomposition(const RisGeometry &geometry, const Vec3 &feed_position,
                                               std::size_t element_index,
                                               IncidenceConvention convention = IncidenceConvention::AxisParallel);

} // namespace dpris
