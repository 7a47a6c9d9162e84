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

#include "dpris/ris.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dpris
{

void AmplitudeModel::validate() const
{
    if (!std::isfinite(std::tan(normal_incidence_phase / 2.0)) ||
        std::abs(std::remainder(normal_incidence_phase - pi, 2.0 * pi)) < 1e-12)
        throw std::invalid_argument("AmplitudeModel: normal-incidence phase must not be pi");
    if (!std::isfinite(tau_offset))
        throw std::invalid_argument("AmplitudeModel: tau offset must be finite");
}

double reflection_amplitude(const AmplitudeModel &model, double elevation, double tau)
{
    if (!(elevation >= 0.0 && elevation < pi / 2.0))
        throw std::invalid_argument("reflection_amplitude: elevation must lie in [0, pi/2)");

    const double t = std::tan(model.normal_incidence_phase / 2.0);
    const double c = std::cos(elevation);
    const Complex plus = std::polar(1.0, 2.0 * std::atan((t + tau) / c));
    const Complex minus = std::polar(1.0, 2.0 * std::atan((t - tau) / c));
    return std::min(std::abs(plus - minus) / 2.0, 1.0);
}

ElementAmplitudes element_amplitudes(const RisGeometry &geometry, const FeedSpec &feed, const AmplitudeModel &model)
{
    model.validate();
    const auto n = static_cast<Eigen::Index>(geometry.element_count());
    ElementAmplitudes out{RealVector(n), RealVector(n)};
    for (Eigen::Index i = 0; i < n; ++i)
    {
        const auto inc = incidence_decomposition(geometry, feed.position, static_cast<std::size_t>(i), model.convention);
        out.v(i) = reflection_amplitude(model, inc.elevation, inc.tau_v + model.tau_offset);
        out.h(i) = reflection_amplitude(model, inc.elevation, inc.tau_h + model.tau_offset);
    }
    return out;
}

double wrap_phase(double angle)
{
    double w = std::fmod(angle, 2.0 * pi);
    if (w < 0.0)
        w += 2.0 * pi;
    if (w >= 2.0 * pi)
        w = 0.0;
    return w;
}

PhaseProfile optimal_phases(const RisGeometry &geometry, const FeedSpec &feed)
{
    const auto n = static_cast<Eigen::Index>(geometry.element_count());
    PhaseProfile out{RealVector(n), RealVector(n)};
    for (Eigen::Index i = 0; i < n; ++i)
    {
        const double d = (feed.position - geometry.position(static_cast<std::size_t>(i))).norm();
        out.v(i) = wrap_phase(2.0 * pi * d / geometry.wavelength());
    }
    out.h = out.v;
    return out;
}

PhaseScheme parse_phase_scheme(std::string_view name)
{
    if (name == "optimal")
        return PhaseScheme::Optimal;
    if (name == "optimal-with-adjustment")
        return PhaseScheme::OptimalWithAdjustment;
    if (name == "random")
        return PhaseScheme::Random;
    throw std::invalid_argument("unknown phase scheme '" + std::string(name) + "'");
}

std::string to_string(PhaseScheme scheme)
{
    switch (scheme)
    {
    case PhaseScheme::Optimal:
        return "optimal";
    case PhaseScheme::OptimalWithAdjustment:
        return "optimal-with-adjustment";
    case PhaseScheme::Random:
        return "random";
    }
    return "unknown";
}

PhaseProfile phase_strategy(PhaseScheme kind, const RisGeometry &geometry, const FeedSpec &feed, std::uint64_t seed)
{
    switch (kind)
    {
    case PhaseScheme::Optimal:
        return optimal_phases(geometry, feed);
    case PhaseScheme::OptimalWithAdjustment:
    {
        auto p = optimal_phases(geometry, feed);
        for (Eigen::Index i = 0; i < p.v.size(); ++i)
        {
            p.v(i) = wrap_phase(p.v(i) - feed.copol_phase_v);
            p.h(i) = wrap_phase(p.h(i) - feed.copol_phase_h);
        }
        return p;
    }
    case PhaseScheme::Random:
    {
        const auto n = static_cast<Eigen::Index>(geometry.element_count());
        PhaseProfile p{RealVector(n), RealVector(n)};
        RandomStream rng(splitmix64(seed));
        for (Eigen::Index i = 0; i < n; ++i)
            p.v(i) = 2.0 * pi * rng.uniform();
        for (Eigen::Index i = 0; i < n; ++i)
            p.h(i) = 2.0 * pi * rng.uniform();
        return p;
    }
    }
    throw std::invalid_argument("phase_strategy: unknown scheme");
}

RisConfiguration::RisConfiguration(RealVector amplitudes_v, RealVector amplitudes_h, RealVector phases_v,
                                   RealVector phases_h)
    : amplitudes_v_(std::move(amplitudes_v)), amplitudes_h_(std::move(amplitudes_h)), phases_v_(std::move(phases_v)),
      phases_h_(std::move(phases_h))
{
    const auto n = amplitudes_v_.size();
    if (amplitudes_h_.size() != n || phases_v_.size() != n || phases_h_.size() != n)
        throw std::invalid_argument("RisConfiguration: vector lengths differ");
    for (Eigen::Index i = 0; i < n; ++i)
    {
        if (!(amplitudes_v_(i) >= 0.0 && amplitudes_v_(i) <= 1.0) ||
            !(amplitudes_h_(i) >= 0.0 && amplitudes_h_(i) <= 1.0))
            throw std::invalid_argument("RisConfiguration: amplitudes must lie in [0, 1]");
        if (!std::isfinite(phases_v_(i)) || !std::isfinite(phases_h_(i)))
            throw std::invalid_argument("RisConfiguration: phases must be finite");
    }
}

ComplexVector RisConfiguration::coefficients_v() const
{
    ComplexVector out(amplitudes_v_.size());
    for (Eigen::Index i = 0; i < out.size(); ++i)
        out(i) = std::polar(amplitudes_v_(i), phases_v_(i));
    return out;
}

ComplexVector RisConfiguration::coefficients_h() const
{
    ComplexVector out(amplitudes_h_.size());
    for (Eigen::Index i = 0; i < out.size(); ++i)
        out(i) = std::polar(amplitudes_h_(i), phases_h_(i));
    return out;
}

} // namespace dpris
