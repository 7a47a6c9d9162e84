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

#include "dpris/scenario.hpp"
#include "dpris/errors.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

namespace dpris
{

namespace
{

struct KeySpec
{
    const char *name;
    std::function<void(Scenario &, const std::string &)> set;
    std::function<std::string(const Scenario &)> get; // empty: not echoed
};

std::size_t parse_count(const std::string &v, const std::string &key, long long min_value)
{
    const long long n = parse_integer(v, key);
    if (n < min_value)
        throw std::invalid_argument(key + ": must be at least " + std::to_string(min_value));
    return static_cast<std::size_t>(n);
}

std::uint64_t parse_seed(const std::string &v, const std::string &key)
{
    const long long n = parse_integer(v, key);
    if (n < 0)
        throw std::invalid_argument(key + ": must be non-negative");
    return static_cast<std::uint64_t>(n);
}

double parse_deg(const std::string &v, const std::string &key) { return deg_to_rad(parse_double(v, key)); }

std::string deg(double rad)
{
    // Round to 1e-9 deg so that 90 deg echoes as "90".
    const double d = rad_to_deg(rad);
    const double r = std::round(d * 1e9) / 1e9;
    return format_double(r == 0.0 ? 0.0 : r);
}

// The spherical validator wants azimuth in [0, 2 pi); accept any value and wrap.
double wrap_azimuth(double rad) { return wrap_phase(rad); }

const std::vector<KeySpec> &key_table()
{
    static const std::vector<KeySpec> table = {
        {"elements",
         [](Scenario &s, const std::string &v) {
             const std::size_t n = parse_count(v, "elements", 1);
             const auto side = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(n))));
             if (side * side != n)
                 throw std::invalid_argument("elements: " + v + " is not a perfect square; set rows and cols");
             s.rows = s.cols = side;
         },
         nullptr},
        {"rows", [](Scenario &s, const std::string &v) { s.rows = parse_count(v, "rows", 1); },
         [](const Scenario &s) { return std::to_string(s.rows); }},
        {"cols", [](Scenario &s, const std::string &v) { s.cols = parse_count(v, "cols", 1); },
         [](const Scenario &s) { return std::to_string(s.cols); }},
        {"pitch_wavelengths",
         [](Scenario &s, const std::string &v) { s.pitch_wavelengths = parse_double(v, "pitch_wavelengths"); },
         [](const Scenario &s) { return format_double(s.pitch_wavelengths); }},
        {"wavelength_m", [](Scenario &s, const std::string &v) { s.wavelength = parse_double(v, "wavelength_m"); },
         [](const Scenario &s) { return format_double(s.wavelength); }},
        {"carrier_ghz", [](Scenario &s, const std::string &v) { s.carrier_ghz = parse_double(v, "carrier_ghz"); },
         [](const Scenario &s) { return format_double(s.carrier_ghz); }},
        {"feed_r_m", [](Scenario &s, const std::string &v) { s.feed_placement.radius = parse_double(v, "feed_r_m"); },
         [](const Scenario &s) { return format_double(s.feed_placement.radius); }},
        {"feed_theta_deg",
         [](Scenario &s, const std::string &v) { s.feed_placement.zenith = parse_deg(v, "feed_theta_deg"); },
         [](const Scenario &s) { return deg(s.feed_placement.zenith); }},
        {"feed_phi_deg",
         [](Scenario &s, const std::string &v) {
             s.feed_placement.azimuth = wrap_azimuth(parse_deg(v, "feed_phi_deg"));
         },
         [](const Scenario &s) { return deg(s.feed_placement.azimuth); }},
        {"feed_boresight",
         [](Scenario &s, const std::string &v) {
             if (v == "fixed")
                 s.boresight_mode = BoresightMode::Fixed;
             else if (v == "origin")
                 s.boresight_mode = BoresightMode::TowardOrigin;
             else
                 throw std::invalid_argument("feed_boresight: expected 'fixed' or 'origin'");
         },
         [](const Scenario &s) { return std::string(s.boresight_mode == BoresightMode::Fixed ? "fixed" : "origin"); }},
        {"feed_eta_deg", [](Scenario &s, const std::string &v) { s.feed_eta = parse_deg(v, "feed_eta_deg"); },
         [](const Scenario &s) { return deg(s.feed_eta); }},
        {"feed_beta_deg", [](Scenario &s, const std::string &v) { s.feed_beta = parse_deg(v, "feed_beta_deg"); },
         [](const Scenario &s) { return deg(s.feed_beta); }},
        {"feed_gamma_deg", [](Scenario &s, const std::string &v) { s.feed_gamma = parse_deg(v, "feed_gamma_deg"); },
         [](const Scenario &s) { return deg(s.feed_gamma); }},
        {"feed_gain_db", [](Scenario &s, const std::string &v) { s.feed_gain_db = parse_double(v, "feed_gain_db"); },
         [](const Scenario &s) { return format_double(s.feed_gain_db); }},
        {"copol_phase_v_deg",
         [](Scenario &s, const std::string &v) { s.copol_phase_v = parse_deg(v, "copol_phase_v_deg"); },
         [](const Scenario &s) { return deg(s.copol_phase_v); }},
        {"copol_phase_h_deg",
         [](Scenario &s, const std::string &v) { s.copol_phase_h = parse_deg(v, "copol_phase_h_deg"); },
         [](const Scenario &s) { return deg(s.copol_phase_h); }},
        {"phi0_deg",
         [](Scenario &s, const std::string &v) { s.amplitude.normal_incidence_phase = parse_deg(v, "phi0_deg"); },
         [](const Scenario &s) { return deg(s.amplitude.normal_incidence_phase); }},
        {"tau_offset", [](Scenario &s, const std::string &v) { s.amplitude.tau_offset = parse_double(v, "tau_offset"); },
         [](const Scenario &s) { return format_double(s.amplitude.tau_offset); }},
        {"incidence_convention",
         [](Scenario &s, const std::string &v) {
             if (v == "axis-parallel")
                 s.amplitude.convention = IncidenceConvention::AxisParallel;
             else if (v == "axis-orthogonal")
                 s.amplitude.convention = IncidenceConvention::AxisOrthogonal;
             else
                 throw std::invalid_argument("incidence_convention: expected 'axis-parallel' or 'axis-orthogonal'");
         },
         [](const Scenario &s) {
             return std::string(s.amplitude.convention == IncidenceConvention::AxisParallel ? "axis-parallel"
                                                                                            : "axis-orthogonal");
         }},
        {"phase_scheme", [](Scenario &s, const std::string &v) { s.phase_scheme = parse_phase_scheme(v); },
         [](const Scenario &s) { return to_string(s.phase_scheme); }},
        {"phase_seed", [](Scenario &s, const std::string &v) { s.phase_seed = parse_seed(v, "phase_seed"); },
         [](const Scenario &s) { return std::to_string(s.phase_seed); }},
        {"random_draws", [](Scenario &s, const std::string &v) { s.random_draws = parse_count(v, "random_draws", 1); },
         [](const Scenario &s) { return std::to_string(s.random_draws); }},
        {"beta0_db", [](Scenario &s, const std::string &v) { s.beta0_db = parse_double(v, "beta0_db"); },
         [](const Scenario &s) { return format_double(s.beta0_db); }},
        {"pathloss_exponent",
         [](Scenario &s, const std::string &v) { s.pathloss_exponent = parse_double(v, "pathloss_exponent"); },
         [](const Scenario &s) { return format_double(s.pathloss_exponent); }},
        {"xpd_coeff", [](Scenario &s, const std::string &v) { s.xpd_coeff = parse_double(v, "xpd_coeff"); },
         [](const Scenario &s) { return format_double(s.xpd_coeff); }},
        {"ue_r_m", [](Scenario &s, const std::string &v) { s.ue_placement.radius = parse_double(v, "ue_r_m"); },
         [](const Scenario &s) { return format_double(s.ue_placement.radius); }},
        {"ue_theta_deg", [](Scenario &s, const std::string &v) { s.ue_placement.zenith = parse_deg(v, "ue_theta_deg"); },
         [](const Scenario &s) { return deg(s.ue_placement.zenith); }},
        {"ue_phi_deg",
         [](Scenario &s, const std::string &v) { s.ue_placement.azimuth = wrap_azimuth(parse_deg(v, "ue_phi_deg")); },
         [](const Scenario &s) { return deg(s.ue_placement.azimuth); }},
        {"noise_dbm", [](Scenario &s, const std::string &v) { s.noise_dbm = parse_double(v, "noise_dbm"); },
         [](const Scenario &s) { return format_double(s.noise_dbm); }},
        {"power_dbm", [](Scenario &s, const std::string &v) { s.power_dbm = parse_double(v, "power_dbm"); },
         [](const Scenario &s) { return format_double(s.power_dbm); }},
        {"snr_db",
         [](Scenario &s, const std::string &v) {
             if (v.empty() || v == "none")
                 s.snr_db.reset();
             else
                 s.snr_db = parse_double(v, "snr_db");
         },
         [](const Scenario &s) { return s.snr_db ? format_double(*s.snr_db) : std::string("none"); }},
        {"snr_reference",
         [](Scenario &s, const std::string &v) {
             if (v == "transmit")
                 s.snr_reference = SnrReference::Transmit;
             else if (v == "receive")
                 s.snr_reference = SnrReference::Receive;
             else
                 throw std::invalid_argument("snr_reference: expected 'transmit' or 'receive'");
         },
         [](const Scenario &s) { return std::string(s.snr_reference == SnrReference::Transmit ? "transmit" : "receive"); }},
        {"allocation",
         [](Scenario &s, const std::string &v) {
             if (v == "optimal")
                 s.allocation_mode = AllocationMode::Optimal;
             else if (v == "equal")
                 s.allocation_mode = AllocationMode::Equal;
             else
             {
                 const double lv = parse_double(v, "allocation");
                 if (!(lv >= 0.0 && lv <= 1.0))
                     throw std::invalid_argument("allocation: lambda_v must lie in [0, 1]");
                 s.allocation_mode = AllocationMode::Fixed;
                 s.fixed_lambda_v = lv;
             }
         },
         [](const Scenario &s) {
             switch (s.allocation_mode)
             {
             case AllocationMode::Optimal:
                 return std::string("optimal");
             case AllocationMode::Equal:
                 return std::string("equal");
             default:
                 return format_double(s.fixed_lambda_v);
             }
         }},
        {"trials", [](Scenario &s, const std::string &v) { s.trials = parse_count(v, "trials", 1); },
         [](const Scenario &s) { return std::to_string(s.trials); }},
        {"seed", [](Scenario &s, const std::string &v) { s.seed = parse_seed(v, "seed"); },
         [](const Scenario &s) { return std::to_string(s.seed); }},
        // Worker count never changes results, so it is not echoed.
        {"workers",
         [](Scenario &s, const std::string &v) { s.workers = static_cast<unsigned>(parse_count(v, "workers", 0)); },
         nullptr},
    };
    return table;
}

} // namespace

void Scenario::set(const std::string &key, const std::string &value)
{
    for (const auto &k : key_table())
        if (key == k.name)
        {
            k.set(*this, trim(value));
            return;
        }
    throw std::invalid_argument("unknown scenario key '" + key + "'");
}

KeyValueConfig Scenario::echo() const
{
    KeyValueConfig cfg;
    for (const auto &k : key_table())
        if (k.get)
            cfg.set(k.name, k.get(*this));
    return cfg;
}

std::vector<std::string> Scenario::keys()
{
    std::vector<std::string> out;
    for (const auto &k : key_table())
        out.emplace_back(k.name);
    return out;
}

Scenario Scenario::from_config(const KeyValueConfig &cfg)
{
    Scenario s;
    // `elements` first so explicit rows/cols can refine it.
    if (auto v = cfg.get("elements"))
        s.set("elements", *v);
    for (const auto &[k, v] : cfg.entries())
        if (k != "elements")
            s.set(k, v);
    return s;
}

RisGeometry Scenario::geometry() const
{
    if (!(pitch_wavelengths > 0.0))
        throw std::invalid_argument("pitch_wavelengths must be positive");
    return build_ris_grid(rows, cols, pitch_wavelengths * wavelength, wavelength);
}

FeedSpec Scenario::feed() const
{
    feed_placement.validate();
    FeedSpec f;
    f.position = spherical_to_cartesian(feed_placement);
    f.boresight = boresight_mode == BoresightMode::Fixed ? boresight_from_direction_angles(feed_eta, feed_beta, feed_gamma)
                                                         : boresight_towards(f.position, Vec3::Zero());
    f.gain = db_to_linear(feed_gain_db);
    f.copol_phase_v = copol_phase_v;
    f.copol_phase_h = copol_phase_h;
    f.validate();
    return f;
}

PathlossInputs Scenario::pathloss() const
{
    PathlossInputs p;
    p.unit_pathloss = db_to_linear(beta0_db);
    p.exponent = pathloss_exponent;
    p.xpd_coefficient = xpd_coeff;
    p.validate();
    return p;
}

Vec3 Scenario::ue_position() const
{
    ue_placement.validate();
    return spherical_to_cartesian(ue_placement);
}

LinkModel Scenario::build() const
{
    return build_link(geometry(), feed(), amplitude, phase_scheme, phase_seed, pathloss(), ue_position());
}

LinkBudget Scenario::budget(const LinkModel &link) const
{
    if (snr_reference == SnrReference::Receive)
    {
        if (!snr_db)
            throw std::invalid_argument("snr_reference=receive requires snr_db");
        const double gain = 0.5 * (link.o_v + link.o_h);
        if (!(gain > 0.0))
            throw model_inconsistency("receive-referenced SNR needs a non-zero mean channel gain",
                                      {{"o_v", link.o_v}, {"o_h", link.o_h}});
        return LinkBudget::from_snr(db_to_linear(*snr_db) / gain);
    }
    if (snr_db)
        return LinkBudget::from_snr(db_to_linear(*snr_db));
    return LinkBudget::from_power(dbm_to_watts(power_dbm), dbm_to_watts(noise_dbm));
}

PowerAllocation Scenario::allocation(const LinkModel &link, const LinkBudget &budget) const
{
    switch (allocation_mode)
    {
    case AllocationMode::Equal:
        return PowerAllocation::equal();
    case AllocationMode::Fixed:
        return {fixed_lambda_v, 1.0 - fixed_lambda_v};
    case AllocationMode::Optimal:
        break;
    }
    // Random phases: the closed form does not apply, so maximize the moment
    // bound of the link's own configuration.
    if (link.phase_scheme == PhaseScheme::Random)
        return moment_optimal_allocation(exact_moments(link.configuration, link.propagation, link.statistics),
                                         budget);
    if (link.o_v == 0.0 && link.o_h == 0.0)
        return PowerAllocation::equal();
    return optimal_power_allocation(link.o_v, link.o_h, budget, xpd_coeff);
}

} // namespace dpris
