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

#include "dpris/geometry.hpp"
#include "dpris/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace dpris
{

RisGeometry::RisGeometry(std::size_t rows, std::size_t cols, double pitch, double wavelength)
    : rows_(rows), cols_(cols), pitch_(pitch), wavelength_(wavelength)
{
    if (rows == 0 || cols == 0)
        throw std::invalid_argument("RisGeometry: rows and cols must be at least 1");
    if (!(pitch > 0.0) || !std::isfinite(pitch))
        throw std::invalid_argument("RisGeometry: pitch must be positive");
    if (!(wavelength > 0.0) || !std::isfinite(wavelength))
        throw std::invalid_argument("RisGeometry: wavelength must be positive");

    const double y0 = 0.5 * static_cast<double>(cols - 1);
    const double z0 = 0.5 * static_cast<double>(rows - 1);
    positions_.reserve(rows * cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            positions_.emplace_back(0.0, (static_cast<double>(c) - y0) * pitch, (static_cast<double>(r) - z0) * pitch);
}

RisGeometry build_ris_grid(std::size_t rows, std::size_t cols, double pitch, double wavelength)
{
    return RisGeometry(rows, cols, pitch, wavelength);
}

void SphericalPlacement::validate() const
{
    if (!(radius > 0.0))
        throw std::invalid_argument("SphericalPlacement: radius must be positive");
    if (!(zenith >= 0.0 && zenith <= pi))
        throw std::invalid_argument("SphericalPlacement: zenith must lie in [0, pi]");
    if (!(azimuth >= 0.0 && azimuth < 2.0 * pi))
        throw std::invalid_argument("SphericalPlacement: azimuth must lie in [0, 2 pi)");
}

Vec3 spherical_to_cartesian(const SphericalPlacement &p)
{
    const double s = std::sin(p.zenith);
    return {p.radius * s * std::cos(p.azimuth), p.radius * s * std::sin(p.azimuth), p.radius * std::cos(p.zenith)};
}

IncidenceDecomposition incidence_decomposition(const RisGeometry &geometry, const Vec3 &feed_position,
                                               std::size_t element_index, IncidenceConvention convention)
{
    if (element_index >= geometry.element_count())
        throw std::out_of_range("incidence_decomposition: element index " + std::to_string(element_index) +
                                " out of range");

    const Vec3 offset = feed_position - geometry.position(element_index);
    const double distance = offset.norm();
    if (!(distance > 0.0))
        throw degenerate_geometry("incidence_decomposition: feed coincides with an element");

    const Vec3 d = offset / distance;
    const double normal = std::abs(d.x());
    if (normal == 0.0)
        throw degenerate_geometry("incidence_decomposition: feed lies in the RIS plane");

    const double tilt_y = std::abs(d.y()) / normal;
    const double tilt_z = std::abs(d.z()) / normal;

    IncidenceDecomposition out;
    out.elevation = std::acos(std::min(normal, 1.0));
    out.distance = distance;
    if (convention == IncidenceConvention::AxisParallel)
    {
        out.tau_v = tilt_z;
        out.tau_h = tilt_y;
    }
    else
    {
        out.tau_v = tilt_y;
        out.tau_h = tilt_z;
    }
    return out;
}

} // namespace dpris
