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

#include "dpris/feed.hpp"
#include "dpris/errors.hpp"

#include <cmath>
#include <stdexcept>

namespace dpris
{

void FeedSpec::validate() const
{
    if (!(gain >= 2.0) || !std::isfinite(gain))
        throw std::invalid_argument("FeedSpec: gain must be finite and >= 2");
    if (std::abs(boresight.norm() - 1.0) > 1e-9)
        throw std::invalid_argument("FeedSpec: boresight must be a unit vector");
    if (!position.allFinite())
        throw std::invalid_argument("FeedSpec: position must be finite");
}

Vec3 boresight_from_direction_angles(double eta, double beta, double gamma)
{
    Vec3 n(std::cos(eta), std::cos(beta), std::cos(gamma));
    if (std::abs(n.norm() - 1.0) > 1e-9)
        throw std::invalid_argument("boresight_from_direction_angles: cosines do not form a unit vector");
    // Clean up the residue of cos(pi/2).
    for (int i = 0; i < 3; ++i)
        if (std::abs(n(i)) < 1e-15)
            n(i) = 0.0;
    return n.normalized();
}

Vec3 boresight_towards(const Vec3 &from, const Vec3 &target)
{
    const Vec3 d = target - from;
    const double len = d.norm();
    if (!(len > 0.0))
        throw std::invalid_argument("boresight_towards: points coincide");
    return d / len;
}

double feed_gain(const FeedSpec &feed, const Vec3 &direction)
{
    const double c = direction.dot(feed.boresight);
    if (c < 0.0)
        return 0.0;
    return feed.gain * std::pow(c, feed.gain / 2.0 - 1.0);
}

Complex nusw_coefficient(const RisGeometry &geometry, const FeedSpec &feed, std::size_t element_index)
{
    const Vec3 &q = geometry.position(element_index);
    const Vec3 offset = feed.position - q; // q_F - q_n
    const double distance = offset.norm();
    if (!(distance > 0.0))
        throw degenerate_geometry("nusw_coefficient: feed coincides with an element");

    const double projected = -offset.x() * geometry.element_area() / distance;
    if (projected < 0.0)
        throw degenerate_geometry("nusw_coefficient: feed is behind the reflecting face");
    if (projected == 0.0)
        throw degenerate_geometry("nusw_coefficient: feed lies in the RIS plane");

    const double gain = feed_gain(feed, -offset / distance);
    const double magnitude = std::sqrt(gain * projected / (4.0 * pi * distance * distance));
    return std::polar(magnitude, -2.0 * pi * distance / geometry.wavelength());
}

PropagationMatrix build_propagation_matrix(const RisGeometry &geometry, const FeedSpec &feed)
{
    const auto n = static_cast<Eigen::Index>(geometry.element_count());
    PropagationMatrix pm;
    pm.shared.resize(n);
    for (Eigen::Index i = 0; i < n; ++i)
        pm.shared(i) = nusw_coefficient(geometry, feed, static_cast<std::size_t>(i));

    pm.copol_v = std::polar(1.0, feed.copol_phase_v) * pm.shared;
    pm.copol_h = std::polar(1.0, feed.copol_phase_h) * pm.shared;
    return pm;
}

double captured_power_fraction(const PropagationMatrix &pm) { return pm.shared.squaredNorm(); }

} // namespace dpris
