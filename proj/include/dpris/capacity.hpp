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

#include "dpris/channel.hpp"
#include "dpris/feed.hpp"
#include "dpris/geometry.hpp"
#include "dpris/numerics.hpp"
#include "dpris/ris.hpp"

#include <array>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace dpris
{

// ---- Domain types ---------------------------------------------------------

// Transmit power fractions on the V and H feed ports.
struct PowerAllocation
{
    double lambda_v = 0.5;
    double lambda_h = 0.5;

    static PowerAllocation equal() { return {0.5, 0.5}; }
    void validate() const;
};

// rho = P / sigma^2. Power and noise are optional echoes (NaN when unknown).
struct LinkBudget
{
    double snr = 1.0;
    double noise_variance = std::numeric_limits<double>::quiet_NaN();
    double transmit_power = std::numeric_limits<double>::quiet_NaN();

    static LinkBudget from_snr(double rho);
    static LinkBudget from_power(double transmit_power_w, double noise_variance_w);
    void validate() const;
};

// G = H Gamma B, 2x2. Row = UE polarization (V, H), column = feed polarization.
struct EquivalentChannel
{
    Eigen::Matrix2cd G = Eigen::Matrix2cd::Zero();
};

// E|G_ij|^2.
struct ChannelMoments
{
    double g11 = 0.0;
    double g12 = 0.0;
    double g21 = 0.0;
    double g22 = 0.0;
};

// ---- Link model -----------------------------------------------------------

// Everything the capacity estimators need, precomputed once per scenario.
struct LinkModel
{
    RisGeometry geometry;
    FeedSpec feed;
    AmplitudeModel amplitude_model;
    ElementAmplitudes amplitudes;
    PropagationMatrix propagation;
    PhaseScheme phase_scheme = PhaseScheme::Optimal;
    RisConfiguration configuration;
    ChannelStatistics statistics;
    Vec3 ue_position = Vec3::Zero();
    double o_v = 0.0;
    double o_h = 0.0;
};

LinkModel build_link(const RisGeometry &geometry, const FeedSpec &feed, const AmplitudeModel &amplitude_model,
                     PhaseScheme phase_scheme, std::uint64_t phase_seed, const PathlossInputs &pathloss,
                     const Vec3 &ue_position);

LinkModel build_link(const RisGeometry &geometry, const FeedSpec &feed, const AmplitudeModel &amplitude_model,
                     PhaseScheme phase_scheme, std::uint64_t phase_seed, const PathlossInputs &pathloss,
                     const Vec3 &ue_position, const SpatialCorrelation &correlation);

// ---- Channel evaluation ---------------------------------------------------

EquivalentChannel equivalent_channel(const ChannelSample &sample, const RisConfiguration &config,
                                     const PropagationMatrix &pm);

// E|G_ij|^2 for an arbitrary configuration, evaluated as quadratic forms over R.
ChannelMoments exact_moments(const RisConfiguration &config, const PropagationMatrix &pm,
                             const ChannelStatistics &stats);

// sum_{n1,n2} A_n1 A_n2 |b_n1| |b_n2| R(n1,n2) beta0 sqrt(d_n1^-a d_n2^-a),
// computed as v^T R v with v_n = A_n |b_n| sqrt(beta0 d_n^-a).
double compute_O(const RealVector &amplitudes, const PropagationMatrix &pm, const ChannelStatistics &stats);

// ---- Closed-form bounds and allocation -----------------------------------

// l^2 + (1 - l)^2.
double xpd_factor(double l_ru);

double moment_upper_bound(const ChannelMoments &moments, const PowerAllocation &allocation,
                          const LinkBudget &budget);

double closed_form_upper_bound(double o_v, double o_h, const PowerAllocation &allocation, const LinkBudget &budget,
                               double l_ru);

// Unclipped stationary point lambda_0 of the closed-form bound along
// lambda_v + lambda_h = 1.
double allocation_stationary_point(double o_v, double o_h, const LinkBudget &budget, double l_ru);

PowerAllocation optimal_power_allocation(double o_v, double o_h, const LinkBudget &budget, double l_ru);

// Maximizer of moment_upper_bound along lambda_v + lambda_h = 1. Reduces to
// optimal_power_allocation when the moments come from optimal phases.
PowerAllocation moment_optimal_allocation(const ChannelMoments &moments, const LinkBudget &budget);

double equal_allocation_lower_bound(double o_v, double o_h, const LinkBudget &budget, double l_ru);

double single_pol_upper_bound(double o_v, const LinkBudget &budget, double l_ru);

struct ThresholdCoefficients
{
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
};

ThresholdCoefficients xpd_threshold_coefficients(double o_v, double o_h, const LinkBudget &budget);

// Smallest l_RU above which the equal-allocation dual bound exceeds twice the
// single-polarized bound. Throws model_inconsistency (with a, b, c and the
// discriminant in the payload) when no such crossing exists in (0, 1).
double xpd_threshold(double o_v, double o_h, const LinkBudget &budget);

// Least-squares slope of capacity against log2(rho) over the points with rho
// in [window_low, window_high]. Throws std::invalid_argument with fewer than
// two points in the window.
double multiplexing_gain(std::span<const double> rhos, std::span<const double> capacities,
                         double window_low = 1e4, double window_high = 1e6);

// ---- Monte Carlo ----------------------------------------------------------

struct McEstimate
{
    double mean = 0.0;
    double std_error = 0.0;
};

struct MonteCarloOptions
{
    std::size_t trials = 10000;
    std::uint64_t master_seed = 1;
    unsigned workers = 1; // 0 = hardware concurrency
};

struct MonteCarloResult
{
    std::vector<double> snr;
    std::vector<McEstimate> dual;   // E log2 det(I + rho G Lambda G^H)
    std::vector<McEstimate> single; // E log2(1 + rho |G11|^2)
    std::vector<double> moment_bound; // moment_upper_bound on the sample moments
    std::array<McEstimate, 4> moments{}; // |G11|^2, |G12|^2, |G21|^2, |G22|^2
    std::size_t trials = 0;
    std::uint64_t master_seed = 0;

    ChannelMoments moment_means() const { return {moments[0].mean, moments[1].mean, moments[2].mean, moments[3].mean}; }
};

// Trial t draws its fading from SeededStreamFactory(master_seed).stream(t) in
// the same order as sample_channel; all snr values share the samples. The
// reduction runs in trial order, so results do not depend on `workers`.
MonteCarloResult run_monte_carlo(const LinkModel &link, const PowerAllocation &allocation,
                                 std::span<const double> snrs, const MonteCarloOptions &options);

McEstimate ergodic_capacity_mc(const LinkModel &link, const PowerAllocation &allocation, const LinkBudget &budget,
                               const MonteCarloOptions &options);

McEstimate single_pol_capacity_mc(const LinkModel &link, const LinkBudget &budget, const MonteCarloOptions &options);

// ---- Report ---------------------------------------------------------------

struct CapacityReport
{
    McEstimate mc_estimate;
    double upper_bound = 0.0;  // closed form from O^(V), O^(H); exact moments if phases are not optimal
    double moment_bound = 0.0; // from Monte Carlo moments
    std::array<McEstimate, 4> moment_estimates{};
    ChannelMoments exact_moments;
    double o_v = 0.0;
    double o_h = 0.0;
    PowerAllocation allocation;
    LinkBudget budget;
    McEstimate single_mc;
    double single_upper_bound = 0.0;
    double captured_power = 0.0;
    std::size_t trials = 0;
    std::uint64_t seed = 0;
};

CapacityReport evaluate_capacity(const LinkModel &link, const PowerAllocation &allocation, const LinkBudget &budget,
                                 const MonteCarloOptions &options);

} // namespace dpris
