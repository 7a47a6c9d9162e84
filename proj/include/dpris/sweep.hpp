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

#include "dpris/config.hpp"
#include "dpris/scenario.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace dpris
{

enum class SweepAxis
{
    FeedGain,        // feed_gain_db
    ElementCount,    // elements (perfect squares)
    Snr,             // snr_db
    Xpd,             // xpd_coeff
    FeedAngles,      // feed_theta_deg x feed_phi_deg, 2-D
    PowerAllocation, // lambda_v
    PhaseScheme,     // scheme names
};

enum class SweepOutput
{
    DualMc,
    DualUb,
    DualUbEqual,
    SingleMc,
    SingleUb,
    Allocation,
    Threshold,
    OValues,
    Captured,
    Amplitudes,
};

SweepAxis parse_sweep_axis(const std::string &name);
std::string to_string(SweepAxis axis);
SweepOutput parse_sweep_output(const std::string &name);
std::string to_string(SweepOutput output);

/*!
 * A sweep file is a scenario config with five extra keys:
 *   axis    = feed-gain | element-count | snr | xpd | feed-angles | power-allocation | phase-scheme
 *   grid    = comma list, or start:step:stop
 *   grid2   = second grid (feed-angles only: azimuth in degrees)
 *   outputs = comma list of dual-mc, dual-ub, dual-ub-equal, single-mc, single-ub,
 *             allocation, threshold, o-values, captured, amplitudes
 *   series  = key: v1, v2, ...  (optional outer loop over one scenario key)
 *   title   = free text
 * All other keys go to the scenario.
 */
struct SweepSpec
{
    SweepAxis axis = SweepAxis::Snr;
    std::vector<std::string> grid;
    std::vector<std::string> grid2;
    std::vector<SweepOutput> outputs;
    std::string series_key; // empty: no series
    std::vector<std::string> series;
    std::string title;
    Scenario scenario;

    static SweepSpec from_config(const KeyValueConfig &cfg);
    static SweepSpec load(const std::filesystem::path &path);

    // Throws std::invalid_argument for empty or non-monotone grids.
    void validate() const;
    // Sweep keys plus the full scenario echo.
    KeyValueConfig echo() const;
    bool wants(SweepOutput o) const;
};

// Expands "a,b,c" or "start:step:stop" into canonical number strings.
std::vector<std::string> expand_grid(const std::string &text);

struct ResultRow
{
    std::vector<std::string> axis;            // one entry per axis column
    std::vector<std::optional<double>> values; // aligned with SweepResult::value_columns
    bool ok = true;
    std::string reason;
    double runtime_s = 0.0;
    std::uint64_t seed = 0;
};

struct SweepResult
{
    KeyValueConfig header;
    std::vector<std::string> axis_columns;
    std::vector<std::string> value_columns;
    std::vector<ResultRow> rows;

    // Column index or std::out_of_range.
    std::size_t column(const std::string &name) const;
    std::optional<double> value(std::size_t row, const std::string &name) const;
};

SweepResult run_sweep(const SweepSpec &spec);

// `# key=value` header, column row, data rows.
void write_csv(std::ostream &os, const SweepResult &result);
std::string to_csv(const SweepResult &result);

// gnuplot script that plots `csv_file`.
std::string gnuplot_script(const SweepResult &result, const std::string &csv_file);

} // namespace dpris
