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

#include "dpris/sweep.hpp"
#include "dpris/errors.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace dpris
{

namespace
{

const std::vector<std::pair<SweepAxis, const char *>> axis_names = {
    {SweepAxis::FeedGain, "feed-gain"},     {SweepAxis::ElementCount, "element-count"},
    {SweepAxis::Snr, "snr"},                {SweepAxis::Xpd, "xpd"},
    {SweepAxis::FeedAngles, "feed-angles"}, {SweepAxis::PowerAllocation, "power-allocation"},
    {SweepAxis::PhaseScheme, "phase-scheme"},
};

const std::vector<std::pair<SweepOutput, const char *>> output_names = {
    {SweepOutput::DualMc, "dual-mc"},         {SweepOutput::DualUb, "dual-ub"},
    {SweepOutput::DualUbEqual, "dual-ub-equal"}, {SweepOutput::SingleMc, "single-mc"},
    {SweepOutput::SingleUb, "single-ub"},     {SweepOutput::Allocation, "allocation"},
    {SweepOutput::Threshold, "threshold"},    {SweepOutput::OValues, "o-values"},
    {SweepOutput::Captured, "captured"},      {SweepOutput::Amplitudes, "amplitudes"},
};

// Scenario key driven by each axis (first grid).
const char *axis_key(SweepAxis axis)
{
    switch (axis)
    {
    case SweepAxis::FeedGain:
        return "feed_gain_db";
    case SweepAxis::ElementCount:
        return "elements";
    case SweepAxis::Snr:
        return "snr_db";
    case SweepAxis::Xpd:
        return "xpd_coeff";
    case SweepAxis::FeedAngles:
        return "feed_theta_deg";
    case SweepAxis::PowerAllocation:
        return "allocation";
    case SweepAxis::PhaseScheme:
        return "phase_scheme";
    }
    return "";
}

std::vector<std::string> output_columns(SweepOutput o)
{
    switch (o)
    {
    case SweepOutput::DualMc:
        return {"dual_mc", "dual_mc_se"};
    case SweepOutput::DualUb:
        return {"dual_ub", "dual_ub_se"};
    case SweepOutput::DualUbEqual:
        return {"dual_ub_equal", "dual_ub_equal_se"};
    case SweepOutput::SingleMc:
        return {"single_mc", "single_mc_se"};
    case SweepOutput::SingleUb:
        return {"single_ub", "single_ub_se"};
    case SweepOutput::Allocation:
        return {"lambda_v", "lambda_h"};
    case SweepOutput::Threshold:
        return {"xpd_threshold"};
    case SweepOutput::OValues:
        return {"o_v", "o_h"};
    case SweepOutput::Captured:
        return {"captured_power"};
    case SweepOutput::Amplitudes:
        return {"mean_amp_v", "mean_amp_h"};
    }
    return {};
}

std::string canonical_number(double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    double y = parse_double(buf, "grid");
    if (y == 0.0)
        y = 0.0;
    return format_double(y);
}

bool numeric_axis(SweepAxis axis) { return axis != SweepAxis::PhaseScheme; }

void check_monotone(const std::vector<std::string> &grid, const std::string &what)
{
    if (grid.empty())
        throw std::invalid_argument(what + ": grid is empty");
    std::vector<double> v;
    for (const auto &g : grid)
        v.push_back(parse_double(g, what));
    if (v.size() < 2)
        return;
    const bool up = v[1] > v[0];
    for (std::size_t i = 1; i < v.size(); ++i)
        if (up ? !(v[i] > v[i - 1]) : !(v[i] < v[i - 1]))
            throw std::invalid_argument(what + ": grid must be strictly monotone");
}

struct Mean
{
    double sum = 0.0;
    double sum_sq = 0.0;
    std::size_t n = 0;

    void add(double x)
    {
        sum += x;
        sum_sq += x * x;
        ++n;
    }
    double mean() const { return sum / static_cast<double>(n); }
    double se() const
    {
        if (n < 2)
            return 0.0;
        const double m = mean();
        const double var = std::max(0.0, (sum_sq - static_cast<double>(n) * m * m) / static_cast<double>(n - 1));
        return std::sqrt(var / static_cast<double>(n));
    }
};

// Per-row values keyed by column name.
using RowValues = std::map<std::string, double>;

struct CorrelationCache
{
    std::tuple<std::size_t, std::size_t, double, double> key{0, 0, 0.0, 0.0};
    std::shared_ptr<SpatialCorrelation> value;

    const SpatialCorrelation &get(const Scenario &sc, const RisGeometry &geom)
    {
        const auto k = std::make_tuple(sc.rows, sc.cols, sc.pitch_wavelengths, sc.wavelength);
        if (!value || k != key)
        {
            value = std::make_shared<SpatialCorrelation>(spatial_correlation(geom));
            key = k;
        }
        return *value;
    }
};

RowValues evaluate_point(const SweepSpec &spec, const Scenario &sc, CorrelationCache &cache)
{
    RowValues out;
    const RisGeometry geom = sc.geometry();
    const FeedSpec feed = sc.feed();
    const LinkModel link = build_link(geom, feed, sc.amplitude, sc.phase_scheme, sc.phase_seed, sc.pathloss(),
                                      sc.ue_position(), cache.get(sc, geom));
    const LinkBudget budget = sc.budget(link);
    const double l = sc.xpd_coeff;
    const bool random = sc.phase_scheme == PhaseScheme::Random;

    const PowerAllocation alloc = sc.allocation(link, budget);

    if (spec.wants(SweepOutput::Allocation))
    {
        out["lambda_v"] = alloc.lambda_v;
        out["lambda_h"] = alloc.lambda_h;
    }
    if (spec.wants(SweepOutput::OValues))
    {
        out["o_v"] = link.o_v;
        out["o_h"] = link.o_h;
    }
    if (spec.wants(SweepOutput::Captured))
        out["captured_power"] = captured_power_fraction(link.propagation);
    if (spec.wants(SweepOutput::Amplitudes))
    {
        out["mean_amp_v"] = link.amplitudes.v.mean();
        out["mean_amp_h"] = link.amplitudes.h.mean();
    }

    const bool any_ub = spec.wants(SweepOutput::DualUb) || spec.wants(SweepOutput::DualUbEqual) ||
                        spec.wants(SweepOutput::SingleUb);
    if (any_ub && !random)
    {
        if (spec.wants(SweepOutput::DualUb))
            out["dual_ub"] = closed_form_upper_bound(link.o_v, link.o_h, alloc, budget, l);
        if (spec.wants(SweepOutput::DualUbEqual))
            out["dual_ub_equal"] = equal_allocation_lower_bound(link.o_v, link.o_h, budget, l);
        if (spec.wants(SweepOutput::SingleUb))
            out["single_ub"] = single_pol_upper_bound(link.o_v, budget, l);
    }
    else if (any_ub)
    {
        // Mean over independent phase draws with seeds phase_seed + d.
        Mean dual, dual_eq, single;
        for (std::size_t d = 0; d < sc.random_draws; ++d)
        {
            const RisConfiguration cfg(link.amplitudes,
                                       phase_strategy(PhaseScheme::Random, geom, feed, sc.phase_seed + d));
            const ChannelMoments m = exact_moments(cfg, link.propagation, link.statistics);
            const PowerAllocation a = sc.allocation_mode == AllocationMode::Optimal
                                          ? moment_optimal_allocation(m, budget)
                                          : sc.allocation(link, budget);
            dual.add(moment_upper_bound(m, a, budget));
            dual_eq.add(moment_upper_bound(m, PowerAllocation::equal(), budget));
            single.add(std::log1p(budget.snr * m.g11) / std::log(2.0));
        }
        if (spec.wants(SweepOutput::DualUb))
        {
            out["dual_ub"] = dual.mean();
            out["dual_ub_se"] = dual.se();
        }
        if (spec.wants(SweepOutput::DualUbEqual))
        {
            out["dual_ub_equal"] = dual_eq.mean();
            out["dual_ub_equal_se"] = dual_eq.se();
        }
        if (spec.wants(SweepOutput::SingleUb))
        {
            out["single_ub"] = single.mean();
            out["single_ub_se"] = single.se();
        }
    }

    if (spec.wants(SweepOutput::Threshold) && !random)
    {
        try
        {
            out["xpd_threshold"] = xpd_threshold(link.o_v, link.o_h, budget);
        }
        catch (const model_inconsistency &)
        {
            // No crossing in (0, 1): left blank.
        }
    }

    if (spec.wants(SweepOutput::DualMc) || spec.wants(SweepOutput::SingleMc))
    {
        const double snr = budget.snr;
        const MonteCarloResult mc = run_monte_carlo(link, alloc, std::span<const double>(&snr, 1), sc.mc_options());
        if (spec.wants(SweepOutput::DualMc))
        {
            out["dual_mc"] = mc.dual[0].mean;
            out["dual_mc_se"] = mc.dual[0].std_error;
        }
        if (spec.wants(SweepOutput::SingleMc))
        {
            out["single_mc"] = mc.single[0].mean;
            out["single_mc_se"] = mc.single[0].std_error;
        }
    }
    return out;
}

std::string csv_field(const std::string &s)
{
    if (s.find_first_of(",\"\n\r") == std::string::npos)
        return s;
    std::string q = "\"";
    for (char c : s)
    {
        if (c == '"')
            q += '"';
        q += (c == '\n' || c == '\r') ? ' ' : c;
    }
    return q + "\"";
}

std::string header_value(const std::string &s)
{
    std::string v = s;
    std::replace(v.begin(), v.end(), '\n', ' ');
    std::replace(v.begin(), v.end(), '\r', ' ');
    return v;
}

std::string join(const std::vector<std::string> &v, const std::string &sep)
{
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i)
        out += (i ? sep : "") + v[i];
    return out;
}

} // namespace

SweepAxis parse_sweep_axis(const std::string &name)
{
    for (const auto &[a, n] : axis_names)
        if (name == n)
            return a;
    throw std::invalid_argument("unknown sweep axis '" + name + "'");
}

std::string to_string(SweepAxis axis)
{
    for (const auto &[a, n] : axis_names)
        if (a == axis)
            return n;
    return "?";
}

SweepOutput parse_sweep_output(const std::string &name)
{
    for (const auto &[o, n] : output_names)
        if (name == n)
            return o;
    throw std::invalid_argument("unknown sweep output '" + name + "'");
}

std::string to_string(SweepOutput output)
{
    for (const auto &[o, n] : output_names)
        if (o == output)
            return n;
    return "?";
}

namespace
{
// Like split_list, but keeps empty items so that "1,,2" can be rejected.
std::vector<std::string> split_keep_empty(const std::string &s, char sep)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;)
    {
        const std::size_t end = s.find(sep, start);
        out.push_back(trim(s.substr(start, end == std::string::npos ? std::string::npos : end - start)));
        if (end == std::string::npos)
            return out;
        start = end + 1;
    }
}
} // namespace

std::vector<std::string> expand_grid(const std::string &text)
{
    const std::string t = trim(text);
    std::vector<std::string> out;
    if (t.empty())
        return out;
    const auto parts = split_keep_empty(t, ':');
    if (parts.size() == 3)
    {
        const double start = parse_double(parts[0], "grid start");
        const double step = parse_double(parts[1], "grid step");
        const double stop = parse_double(parts[2], "grid stop");
        if (step == 0.0 || !std::isfinite(step) || (stop - start) / step < 0.0)
            throw std::invalid_argument("grid '" + t + "': step does not reach stop");
        const double span = (stop - start) / step;
        if (span > 1e6)
            throw std::invalid_argument("grid '" + t + "': too many points");
        const auto n = static_cast<long long>(std::floor(span + 1e-9));
        for (long long i = 0; i <= n; ++i)
            out.push_back(canonical_number(start + static_cast<double>(i) * step));
        return out;
    }
    if (parts.size() != 1)
        throw std::invalid_argument("grid '" + t + "': expected a list or start:step:stop");
    for (const auto &item : split_keep_empty(t, ','))
    {
        const std::string s = trim(item);
        if (s.empty())
            throw std::invalid_argument("grid '" + t + "': empty entry");
        double x = 0.0;
        try
        {
            x = parse_double(s, "grid");
        }
        catch (const std::invalid_argument &)
        {
            out.push_back(s); // non-numeric, e.g. phase scheme names
            continue;
        }
        out.push_back(canonical_number(x));
    }
    return out;
}

SweepSpec SweepSpec::from_config(const KeyValueConfig &cfg)
{
    SweepSpec spec;
    KeyValueConfig rest = cfg;
    const auto axis = cfg.get("axis");
    if (!axis)
        throw std::invalid_argument("sweep spec: missing 'axis'");
    spec.axis = parse_sweep_axis(trim(*axis));
    const auto grid = cfg.get("grid");
    if (!grid)
        throw std::invalid_argument("sweep spec: missing 'grid'");
    spec.grid = expand_grid(*grid);
    if (auto g2 = cfg.get("grid2"))
        spec.grid2 = expand_grid(*g2);
    if (auto outs = cfg.get("outputs"))
    {
        for (const auto &o : split_list(*outs, ','))
            if (!trim(o).empty())
                spec.outputs.push_back(parse_sweep_output(trim(o)));
    }
    else
        spec.outputs = {SweepOutput::DualUb};
    if (auto series = cfg.get("series"))
    {
        const auto colon = series->find(':');
        if (colon == std::string::npos)
            throw std::invalid_argument("sweep spec: series must look like 'key: v1, v2'");
        spec.series_key = trim(series->substr(0, colon));
        spec.series = expand_grid(series->substr(colon + 1));
    }
    if (auto title = cfg.get("title"))
        spec.title = trim(*title);
    for (const char *k : {"axis", "grid", "grid2", "outputs", "series", "title"})
        rest.erase(k);
    spec.scenario = Scenario::from_config(rest);
    spec.validate();
    return spec;
}

SweepSpec SweepSpec::load(const std::filesystem::path &path) { return from_config(KeyValueConfig::load(path)); }

void SweepSpec::validate() const
{
    if (outputs.empty())
        throw std::invalid_argument("sweep spec: no outputs selected");
    for (std::size_t i = 0; i < outputs.size(); ++i)
        for (std::size_t j = i + 1; j < outputs.size(); ++j)
            if (outputs[i] == outputs[j])
                throw std::invalid_argument("sweep spec: output '" + to_string(outputs[i]) + "' listed twice");
    if (numeric_axis(axis))
        check_monotone(grid, to_string(axis));
    else
    {
        if (grid.empty())
            throw std::invalid_argument("phase-scheme: grid is empty");
        for (std::size_t i = 0; i < grid.size(); ++i)
        {
            parse_phase_scheme(grid[i]);
            for (std::size_t j = i + 1; j < grid.size(); ++j)
                if (grid[i] == grid[j])
                    throw std::invalid_argument("phase-scheme: '" + grid[i] + "' listed twice");
        }
    }
    if (axis == SweepAxis::FeedAngles)
        check_monotone(grid2, "feed-angles grid2");
    else if (!grid2.empty())
        throw std::invalid_argument("sweep spec: grid2 is only used by the feed-angles axis");
    if (!series_key.empty())
    {
        if (series.empty())
            throw std::invalid_argument("sweep spec: series has no values");
        if (series_key == axis_key(axis) || (axis == SweepAxis::FeedAngles && series_key == "feed_phi_deg"))
            throw std::invalid_argument("sweep spec: series key '" + series_key + "' is the sweep axis");
        for (const auto &v : series)
        {
            Scenario probe = scenario;
            probe.set(series_key, v);
        }
    }
    if (axis == SweepAxis::ElementCount)
        for (const auto &g : grid)
        {
            Scenario probe = scenario;
            probe.set("elements", g);
        }
}

KeyValueConfig SweepSpec::echo() const
{
    KeyValueConfig cfg = scenario.echo();
    cfg.set("axis", to_string(axis));
    cfg.set("grid", join(grid, ","));
    if (!grid2.empty())
        cfg.set("grid2", join(grid2, ","));
    std::vector<std::string> outs;
    for (auto o : outputs)
        outs.push_back(to_string(o));
    cfg.set("outputs", join(outs, ","));
    if (!series_key.empty())
        cfg.set("series", series_key + ": " + join(series, ","));
    if (!title.empty())
        cfg.set("title", title);
    return cfg;
}

bool SweepSpec::wants(SweepOutput o) const { return std::find(outputs.begin(), outputs.end(), o) != outputs.end(); }

std::size_t SweepResult::column(const std::string &name) const
{
    for (std::size_t i = 0; i < value_columns.size(); ++i)
        if (value_columns[i] == name)
            return i;
    throw std::out_of_range("no column '" + name + "'");
}

std::optional<double> SweepResult::value(std::size_t row, const std::string &name) const
{
    return rows.at(row).values.at(column(name));
}

SweepResult run_sweep(const SweepSpec &spec)
{
    spec.validate();
    SweepResult result;
    result.header = spec.echo();
    if (spec.axis == SweepAxis::FeedAngles)
        result.axis_columns = {"feed_theta_deg", "feed_phi_deg"};
    else
        result.axis_columns = {axis_key(spec.axis)};
    if (spec.axis == SweepAxis::Snr)
        result.axis_columns = {"snr_db"};
    if (spec.axis == SweepAxis::ElementCount)
        result.axis_columns = {"elements"};
    if (spec.axis == SweepAxis::PowerAllocation)
        result.axis_columns = {"lambda_v_fixed"};
    if (!spec.series_key.empty())
        result.axis_columns.insert(result.axis_columns.begin(), spec.series_key);
    for (auto o : spec.outputs)
        for (const auto &c : output_columns(o))
            result.value_columns.push_back(c);

    std::vector<std::vector<std::string>> points;
    const std::vector<std::string> outer = spec.series_key.empty() ? std::vector<std::string>{""} : spec.series;
    for (const auto &sv : outer)
    {
        std::vector<std::string> prefix;
        if (!spec.series_key.empty())
            prefix.push_back(sv);
        if (spec.axis == SweepAxis::FeedAngles)
        {
            for (const auto &t : spec.grid)
                for (const auto &p : spec.grid2)
                {
                    auto pt = prefix;
                    pt.insert(pt.end(), {t, p});
                    points.push_back(pt);
                }
        }
        else
            for (const auto &g : spec.grid)
            {
                auto pt = prefix;
                pt.push_back(g);
                points.push_back(pt);
            }
    }
    const std::size_t offset = spec.series_key.empty() ? 0 : 1;

    CorrelationCache cache;
    for (const auto &pt : points)
    {
        ResultRow row;
        row.axis = pt;
        row.values.assign(result.value_columns.size(), std::nullopt);
        const auto t0 = std::chrono::steady_clock::now();
        Scenario sc = spec.scenario;
        try
        {
            if (offset)
                sc.set(spec.series_key, pt[0]);
            sc.set(axis_key(spec.axis), pt[offset]);
            if (spec.axis == SweepAxis::FeedAngles)
                sc.set("feed_phi_deg", pt[offset + 1]);
            row.seed = sc.seed;
            const RowValues values = evaluate_point(spec, sc, cache);
            for (std::size_t c = 0; c < result.value_columns.size(); ++c)
                if (auto it = values.find(result.value_columns[c]); it != values.end())
                    row.values[c] = it->second;
        }
        catch (const std::exception &e)
        {
            // Includes degenerate_geometry and model_inconsistency; the sweep continues.
            row.ok = false;
            row.reason = e.what();
            row.seed = sc.seed;
            row.values.assign(result.value_columns.size(), std::nullopt);
        }
        row.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        result.rows.push_back(std::move(row));
    }
    return result;
}

void write_csv(std::ostream &os, const SweepResult &result)
{
    os << "# generator=dpris\n";
    for (const auto &[k, v] : result.header.entries())
        os << "# " << k << "=" << header_value(v) << "\n";

    std::vector<std::string> cols = result.axis_columns;
    cols.insert(cols.end(), result.value_columns.begin(), result.value_columns.end());
    cols.insert(cols.end(), {"status", "reason", "seed", "runtime_s"});
    os << join(cols, ",") << "\n";

    for (const auto &row : result.rows)
    {
        std::vector<std::string> f;
        for (const auto &a : row.axis)
            f.push_back(csv_field(a));
        for (const auto &v : row.values)
            f.push_back(v ? format_double(*v) : "");
        f.push_back(row.ok ? "ok" : "failed");
        f.push_back(csv_field(row.reason));
        f.push_back(std::to_string(row.seed));
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.6f", row.runtime_s);
        f.push_back(buf);
        os << join(f, ",") << "\n";
    }
}

std::string to_csv(const SweepResult &result)
{
    std::ostringstream os;
    write_csv(os, result);
    return os.str();
}

std::string gnuplot_script(const SweepResult &result, const std::string &csv_file)
{
    std::ostringstream g;
    const std::string title = result.header.get("title").value_or("");
    g << "# gnuplot script for " << csv_file << "\n";
    g << "set datafile separator ','\n";
    g << "set datafile missing ''\n";
    g << "set key autotitle columnhead\n";
    if (!title.empty())
        g << "set title \"" << title << "\"\n";
    const std::size_t first_value = result.axis_columns.size() + 1; // 1-based
    const bool has_series = result.header.get("series").has_value();
    std::vector<std::string> series_values;
    if (has_series)
        for (const auto &row : result.rows)
            if (std::find(series_values.begin(), series_values.end(), row.axis[0]) == series_values.end())
                series_values.push_back(row.axis[0]);
    const std::size_t a0 = has_series ? 1 : 0; // first sweep-axis column, 0-based
    const std::size_t grid_dims = result.axis_columns.size() - a0;
    const bool text_axis = grid_dims == 1 && result.axis_columns[a0] == "phase_scheme";

    auto filtered = [&](std::size_t col, const std::string &sv) {
        std::ostringstream e;
        if (has_series)
            e << "(strcol(1) eq '" << sv << "' ? column(" << col << ") : NaN)";
        else
            e << col;
        return e.str();
    };

    if (grid_dims == 2)
    {
        g << "set xlabel '" << result.axis_columns[a0] << "'\n";
        g << "set ylabel '" << result.axis_columns[a0 + 1] << "'\n";
        if (!result.value_columns.empty())
        {
            const std::string sv = has_series ? series_values.front() : std::string();
            g << "plot '" << csv_file << "' using " << a0 + 1 << ":" << a0 + 2 << ":" << filtered(first_value, sv)
              << " with points pointtype 5 pointsize 2 palette title '" << result.value_columns[0]
              << (has_series ? " (" + result.axis_columns[0] + "=" + sv + ")" : std::string()) << "'\n";
        }
        return g.str();
    }

    g << "set xlabel '" << result.axis_columns[a0] << "'\n";
    std::vector<std::string> plots;
    const std::vector<std::string> outer = has_series ? series_values : std::vector<std::string>{""};
    for (const auto &sv : outer)
        for (std::size_t c = 0; c < result.value_columns.size(); ++c)
        {
            const std::string &name = result.value_columns[c];
            if (name.size() > 3 && name.compare(name.size() - 3, 3, "_se") == 0)
                continue;
            const std::size_t col = first_value + c;
            std::ostringstream p;
            p << "'" << csv_file << "' using ";
            if (text_axis)
                p << filtered(col, sv) << ":xtic(" << a0 + 1 << ")";
            else
                p << a0 + 1 << ":" << filtered(col, sv);
            p << " with linespoints";
            if (has_series)
                p << " title '" << name << " " << result.axis_columns[0] << "=" << sv << "'";
            plots.push_back(p.str());
        }
    if (!plots.empty())
        g << "plot " << join(plots, ", \\\n     ") << "\n";
    return g.str();
}

} // namespace dpris
