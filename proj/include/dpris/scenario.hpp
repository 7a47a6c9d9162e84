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

#include "dpris/capacity.hpp"
#include "dpris/config.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace dpris
{

enum class BoresightMode
{
    Fixed,        // from the direction angles (eta, beta, gamma)
    TowardOrigin, // main lobe aimed at the RIS centre
};

enum class SnrReference
{
    Transmit, // rho = P / sigma^2 as given
    Receive,  // given value is the mean receive SNR; rho = value / ((O_V + O_H) / 2)
};

enum class AllocationMode
{
    Optimal,
    Equal,
    Fixed,
};

/*!
 * One fully specified link. Defaults: 26 GHz, lambda = 1.15 cm,
 * sigma^2 = -96 dBm, beta0 = -49.7 dB,
 * alpha = 4, (lambda/3)^2 elements, co-pol phases (90, 45) deg, UE at
 * (50 m, 60 deg, 0), feed at (0.05 m, 90 deg, 180 deg) facing +x.
 * Angles are radians here; the text form uses degrees.
 */
struct Scenario
{
    std::size_t rows = 10;
    std::size_t cols = 10;
    double pitch_wavelengths = 1.0 / 3.0;
    double wavelength = 0.0115;
    double carrier_ghz = 26.0;

    SphericalPlacement feed_placement{0.05, pi / 2.0, pi};
    BoresightMode boresight_mode = BoresightMode::Fixed;
    double feed_eta = 0.0;
    double feed_beta = pi / 2.0;
    double feed_gamma = pi / 2.0;
    double feed_gain_db = 10.0;
    double copol_phase_v = pi / 2.0;
    double copol_phase_h = pi / 4.0;

    AmplitudeModel amplitude;
    PhaseScheme phase_scheme = PhaseScheme::Optimal;
    std::uint64_t phase_seed = 1;
    std::size_t random_draws = 1000;

    double beta0_db = -49.7;
    double pathloss_exponent = 4.0;
    double xpd_coeff = 0.2;
    SphericalPlacement ue_placement{50.0, pi / 3.0, 0.0};

    double noise_dbm = -96.0;
    double power_dbm = 43.0;
    std::optional<double> snr_db; // overrides power_dbm when set
    SnrReference snr_reference = SnrReference::Transmit;

    AllocationMode allocation_mode = AllocationMode::Optimal;
    double fixed_lambda_v = 0.5;

    std::size_t trials = 10000;
    std::uint64_t seed = 1;
    unsigned workers = 1;

    // Applies one `key = value`; std::invalid_argument for unknown keys or
    // malformed values.
    void set(const std::string &key, const std::string &value);
    // Every key with its current value, in canonical text form.
    KeyValueConfig echo() const;
    static std::vector<std::string> keys();

    static Scenario from_config(const KeyValueConfig &cfg);

    RisGeometry geometry() const;
    FeedSpec feed() const;
    PathlossInputs pathloss() const;
    Vec3 ue_position() const;
    LinkModel build() const;
    LinkBudget budget(const LinkModel &link) const;
    PowerAllocation allocation(const LinkModel &link, const LinkBudget &budget) const;
    MonteCarloOptions mc_options() const { return {trials, seed, workers}; }
};

} // namespace dpris
