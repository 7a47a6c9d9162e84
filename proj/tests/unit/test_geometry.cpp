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

#include "catch_amalgamated.hpp"
#include "oracles.hpp"

#include "dpris/errors.hpp"
#include "dpris/geometry.hpp"

#include <cmath>

using namespace dpris;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace
{
constexpr double lambda = 0.0115;
}

TEST_CASE("grid construction", "[geometry]")
{
    const RisGeometry one = build_ris_grid(1, 1, lambda / 3.0, lambda);
    REQUIRE(one.element_count() == 1);
    CHECK(one.position(0).norm() == 0.0);
    CHECK_THAT(one.element_area(), WithinRel(lambda * lambda / 9.0, 1e-15));

    const RisGeometry g = build_ris_grid(10, 10, lambda / 3.0, lambda);
    REQUIRE(g.element_count() == 100);
    CHECK_THAT(g.aperture(), WithinRel(100.0 * lambda * lambda / 9.0, 1e-14));
    double ymin = 1, ymax = -1, zmin = 1, zmax = -1;
    Vec3 centroid = Vec3::Zero();
    for (const auto &q : g.positions())
    {
        CHECK(q.x() == 0.0);
        ymin = std::min(ymin, q.y());
        ymax = std::max(ymax, q.y());
        zmin = std::min(zmin, q.z());
        zmax = std::max(zmax, q.z());
        centroid += q;
    }
    CHECK(centroid.norm() < 1e-15);
    // Outer element edges span 10 pitches.
    CHECK_THAT(ymax - ymin + lambda / 3.0, WithinRel(10.0 * lambda / 3.0, 1e-12));
    CHECK_THAT(zmax - zmin + lambda / 3.0, WithinRel(10.0 * lambda / 3.0, 1e-12));
    for (std::size_t r = 0; r < 10; ++r)
        for (std::size_t c = 0; c + 1 < 10; ++c)
            CHECK_THAT((g.position(r * 10 + c) - g.position(r * 10 + c + 1)).norm(), WithinRel(lambda / 3.0, 1e-12));

    const RisGeometry two = build_ris_grid(2, 1, 0.5 * lambda, lambda);
    CHECK_THAT((two.position(0) - two.position(1)).norm(), WithinRel(lambda / 2.0, 1e-14));

    CHECK_THROWS_AS(build_ris_grid(0, 3, 0.1, lambda), std::invalid_argument);
    CHECK_THROWS_AS(build_ris_grid(3, 3, 0.0, lambda), std::invalid_argument);
    CHECK_THROWS_AS(build_ris_grid(3, 3, 0.1, -1.0), std::invalid_argument);
}

TEST_CASE("spherical placements", "[geometry]")
{
    const Vec3 f = spherical_to_cartesian({0.05, pi / 2.0, pi});
    CHECK_THAT(f.x(), WithinAbs(-0.05, 1e-16));
    CHECK_THAT(f.y(), WithinAbs(0.0, 1e-16));
    CHECK_THAT(f.z(), WithinAbs(0.0, 1e-16));

    const Vec3 p = spherical_to_cartesian({1.0, 0.0, 1.234});
    CHECK_THAT(p.z(), WithinAbs(1.0, 1e-16));
    CHECK_THAT(p.head<2>().norm(), WithinAbs(0.0, 1e-16));

    const Vec3 u = spherical_to_cartesian({50.0, pi / 3.0, 0.0});
    CHECK_THAT(u.x(), WithinRel(25.0 * std::sqrt(3.0), 1e-14));
    CHECK_THAT(u.y(), WithinAbs(0.0, 1e-14));
    CHECK_THAT(u.z(), WithinRel(25.0, 1e-14));

    CHECK_THROWS_AS(SphericalPlacement({0.0, 0.0, 0.0}).validate(), std::invalid_argument);
    CHECK_THROWS_AS(SphericalPlacement({1.0, 4.0, 0.0}).validate(), std::invalid_argument);
    CHECK_THROWS_AS(SphericalPlacement({1.0, 1.0, 2.0 * pi}).validate(), std::invalid_argument);
}

TEST_CASE("incidence decomposition", "[geometry]")
{
    const RisGeometry one = build_ris_grid(1, 1, lambda / 3.0, lambda);
    const IncidenceDecomposition n = incidence_decomposition(one, Vec3(-0.05, 0.0, 0.0), 0);
    CHECK(n.elevation == 0.0);
    CHECK(n.tau_v == 0.0);
    CHECK(n.tau_h == 0.0);
    CHECK_THAT(n.distance, WithinRel(0.05, 1e-15));

    // 45 degrees in the x-y plane: the tilt lies along y.
    const Vec3 f = Vec3(-1.0, 1.0, 0.0) / std::sqrt(2.0) * 0.3;
    const IncidenceDecomposition o = incidence_decomposition(one, f, 0, IncidenceConvention::AxisOrthogonal);
    CHECK_THAT(o.elevation, WithinAbs(pi / 4.0, 1e-14));
    CHECK_THAT(o.tau_v, WithinAbs(1.0, 1e-14));
    CHECK_THAT(o.tau_h, WithinAbs(0.0, 1e-14));
    const IncidenceDecomposition p = incidence_decomposition(one, f, 0, IncidenceConvention::AxisParallel);
    CHECK_THAT(p.elevation, WithinAbs(pi / 4.0, 1e-14));
    CHECK_THAT(p.tau_v, WithinAbs(0.0, 1e-14));
    CHECK_THAT(p.tau_h, WithinAbs(1.0, 1e-14));

    CHECK_THROWS_AS(incidence_decomposition(one, Vec3(0.0, 0.1, 0.0), 0), degenerate_geometry);
    CHECK_THROWS_AS(incidence_decomposition(one, f, 1), std::out_of_range);
}

TEST_CASE("mirroring the feed across the x-z plane", "[geometry]")
{
    const RisGeometry g = build_ris_grid(6, 6, lambda / 3.0, lambda);
    const Vec3 f = spherical_to_cartesian({0.1, pi / 3.0, 0.8 * pi});
    Vec3 m = f;
    m.y() = -m.y();
    for (auto conv : {IncidenceConvention::AxisParallel, IncidenceConvention::AxisOrthogonal})
        for (std::size_t k = 0; k < g.element_count(); ++k)
        {
            // Element k mirrors to the element with the same row and opposite column.
            const std::size_t r = k / 6, c = k % 6;
            const std::size_t km = r * 6 + (5 - c);
            const auto a = incidence_decomposition(g, f, k, conv);
            const auto b = incidence_decomposition(g, m, km, conv);
            CHECK_THAT(a.elevation, WithinAbs(b.elevation, 1e-13));
            CHECK_THAT(a.tau_v, WithinAbs(b.tau_v, 1e-12));
            CHECK_THAT(a.tau_h, WithinAbs(b.tau_h, 1e-12));
            CHECK_THAT(a.distance, WithinRel(b.distance, 1e-13));
            CHECK(a.elevation < pi / 2.0);
            CHECK(a.distance > 0.0);
        }
    // With the grid symmetric, an on-axis (y = 0) mirror leaves each element's own values unchanged.
    const Vec3 on_axis = spherical_to_cartesian({0.1, pi / 3.0, pi});
    Vec3 on_axis_m = on_axis;
    on_axis_m.y() = -on_axis_m.y();
    for (std::size_t k = 0; k < g.element_count(); ++k)
    {
        const auto a = incidence_decomposition(g, on_axis, k);
        const auto b = incidence_decomposition(g, on_axis_m, k);
        CHECK_THAT(a.tau_v, WithinAbs(b.tau_v, 1e-12));
        CHECK_THAT(a.tau_h, WithinAbs(b.tau_h, 1e-12));
    }
}
