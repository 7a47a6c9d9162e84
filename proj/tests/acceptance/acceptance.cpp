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

// Acceptance harness. `dpris_acceptance` runs every criterion;
// `dpris_acceptance N` runs criterion N only. One summary line per criterion:
//   criterion N: PASS|FAIL <name> (<seconds> s)
// followed by indented detail lines. Exit status is non-zero if any fails.

#include "dpris/capacity.hpp"
#include "dpris/errors.hpp"
#include "dpris/feed.hpp"
#include "dpris/numerics.hpp"
#include "dpris/scenario.hpp"
#include "dpris/sweep.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

using namespace dpris;

namespace
{

struct Report
{
    bool pass = true;
    std::vector<std::string> details;

    void check(bool ok, const std::string &what)
    {
        details.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
        pass = pass && ok;
    }
    void note(const std::string &what) { details.push_back("     " + what); }
};

std::string fmt(const char *f, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

Scenario small_scenario()
{
    Scenario sc;
    sc.set("elements", "16");
    sc.set("xpd_coeff", "0.2");
    sc.set("phase_scheme", "optimal");
    sc.set("trials", "20000");
    sc.set("seed", "20240601");
    return sc;
}

double rx_to_tx(double rho_rx, const LinkModel &link) { return rho_rx / ((link.o_v + link.o_h) / 2.0); }

MonteCarloResult criterion1_mc(unsigned workers)
{
    Scenario sc = small_scenario();
    sc.workers = workers;
    const LinkModel link = sc.build();
    const double rho = rx_to_tx(1.0, link);
    return run_monte_carlo(link, PowerAllocation::equal(), std::span<const double>(&rho, 1), sc.mc_options());
}

// ---- 1 --------------------------------------------------------------------
void criterion1(Report &r)
{
    const Scenario sc = small_scenario();
    const LinkModel link = sc.build();
    const MonteCarloResult mc = criterion1_mc(1);
    const double l = sc.xpd_coeff;
    const double expected[4] = {(1 - l) * link.o_v, l * link.o_h, l * link.o_v, (1 - l) * link.o_h};
    const char *names[4] = {"|G11|^2", "|G12|^2", "|G21|^2", "|G22|^2"};
    for (int i = 0; i < 4; ++i)
    {
        const double z = (mc.moments[i].mean - expected[i]) / mc.moments[i].std_error;
        r.check(std::abs(z) <= 3.0, fmt("E%s: mc %.6e se %.2e expected %.6e (z = %+.2f)", names[i], mc.moments[i].mean,
                                        mc.moments[i].std_error, expected[i], z));
    }
    r.note(fmt("N = 16, l = 0.2, trials = %zu, O_V = %.4e, O_H = %.4e", mc.trials, link.o_v, link.o_h));
}

// ---- 2 --------------------------------------------------------------------
void criterion2(Report &r)
{
    const Scenario sc = small_scenario();
    const LinkModel link = sc.build();
    const double l = sc.xpd_coeff;
    const std::vector<double> rx = {1e-3, 1e-2, 1e-1, 1.0, 10.0, 100.0};
    std::vector<double> sample_gap, closed_gap;
    for (double rho_rx : rx)
    {
        const LinkBudget budget = LinkBudget::from_snr(rx_to_tx(rho_rx, link));
        const PowerAllocation alloc = optimal_power_allocation(link.o_v, link.o_h, budget, l);
        const double snr = budget.snr;
        const MonteCarloResult mc = run_monte_carlo(link, alloc, std::span<const double>(&snr, 1), sc.mc_options());
        const double ub = closed_form_upper_bound(link.o_v, link.o_h, alloc, budget, l);
        const McEstimate &c = mc.dual[0];
        r.check(c.mean <= ub + 3.0 * c.std_error,
                fmt("rho_rx = %g: mc %.6e (se %.1e) <= bound %.6e + 3 se", rho_rx, c.mean, c.std_error, ub));
        sample_gap.push_back(mc.moment_bound[0] - c.mean);
        closed_gap.push_back(ub - c.mean);
        r.note(fmt("    gap vs closed form %.3e, vs same-sample moment bound %.3e", closed_gap.back(),
                   sample_gap.back()));
    }
    r.check(closed_gap[0] < 0.01, fmt("gap at rho = 1e-3: %.3e < 0.01 bits", closed_gap[0]));
    r.check(sample_gap[0] >= 0.0 && sample_gap[0] <= sample_gap[1] && sample_gap[1] <= sample_gap[2],
            fmt("same-sample gap monotone over three smallest rho: %.3e <= %.3e <= %.3e", sample_gap[0],
                sample_gap[1], sample_gap[2]));
}

// ---- 3 --------------------------------------------------------------------
// The oracle maximizes the argument of the logarithm divided by rho, a
// monotone transform that keeps resolution when rho O is tiny.
double grid_argmax(double ov, double oh, double rho, double l)
{
    const double g = l * l + (1 - l) * (1 - l);
    double best = -1.0, arg = 0.0;
    for (int k = 0; k <= 10000; ++k)
    {
        const double lv = k * 1e-4;
        const double y = lv * ov + (1 - lv) * oh + rho * lv * (1 - lv) * ov * oh * g;
        if (y > best)
        {
            best = y;
            arg = lv;
        }
    }
    return arg;
}

void criterion3(Report &r)
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto logu = [&](double lo, double hi) { return std::exp(std::log(lo) + u(rng) * (std::log(hi) - std::log(lo))); };

    auto batch = [&](const char *label, int count, double rho_scale) {
        double worst = 0.0;
        int interior = 0, bad = 0;
        for (int i = 0; i < count; ++i)
        {
            const double ov = logu(1e-13, 1e-9), oh = logu(1e-13, 1e-9);
            double rho = logu(1.0, 1e6);
            if (rho_scale > 0)
                rho *= rho_scale / std::max(ov, oh) / 1e6; // rho max(O) in [1e-6, 1] * scale
            const double l = u(rng);
            const PowerAllocation a = optimal_power_allocation(ov, oh, LinkBudget::from_snr(rho), l);
            const double ref = grid_argmax(ov, oh, rho, l);
            const double d = std::abs(a.lambda_v - ref);
            worst = std::max(worst, d);
            interior += (a.lambda_v > 0.0 && a.lambda_v < 1.0);
            bad += d > 2e-4;
        }
        r.check(bad == 0, fmt("%s: %d tuples, max |lambda* - grid argmax| = %.2e (%d interior), %d outside 2e-4",
                              label, count, worst, interior, bad));
    };
    batch("stated ranges", 200, 0.0);
    batch("interior regime (rho max(O) up to 1e8)", 200, 1e8);
}

// ---- 4 --------------------------------------------------------------------
void criterion4(Report &r)
{
    const Scenario sc = small_scenario();
    const LinkModel link = sc.build();
    const LinkBudget budget = LinkBudget::from_snr(rx_to_tx(10.0, link));
    const double scale = std::ldexp(1.0, 40);
    std::vector<double> ls(101), dual(101), single(101);
    for (int k = 0; k <= 100; ++k)
    {
        ls[k] = std::nearbyint(k / 100.0 * scale) / scale;
        dual[k] = closed_form_upper_bound(link.o_v, link.o_h, PowerAllocation::equal(), budget, ls[k]);
        single[k] = single_pol_upper_bound(link.o_v, budget, ls[k]);
    }
    bool sym = true;
    for (int k = 0; k <= 100; ++k)
        sym = sym && ls[k] == 1.0 - ls[100 - k] && dual[k] == dual[100 - k];
    r.check(sym, "value(l) == value(1 - l) bitwise on all 101 grid points");
    const auto mn = std::min_element(dual.begin(), dual.end()) - dual.begin();
    r.check(mn == 50 && dual[49] > dual[50], fmt("minimum at index %td (l = %.2f): %.9f", mn, ls[mn], dual[mn]));
    const double mx = *std::max_element(dual.begin(), dual.end());
    r.check(dual[0] == mx && dual[100] == mx && dual[1] < dual[0],
            fmt("maxima at endpoints: %.9f %.9f", dual[0], dual[100]));
    bool dec = true;
    for (int k = 1; k <= 100; ++k)
        dec = dec && single[k] < single[k - 1];
    r.check(dec, fmt("single-pol bound strictly decreasing: %.6f -> %.6f", single[0], single[100]));
}

// ---- 5 --------------------------------------------------------------------
void criterion5(Report &r)
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto logu = [&](double lo, double hi) { return std::exp(std::log(lo) + u(rng) * (std::log(hi) - std::log(lo))); };
    int found = 0, attempts = 0, bad = 0;
    while (found < 50 && attempts < 100000)
    {
        ++attempts;
        const double ov = logu(1e-13, 1e-9), oh = logu(1e-13, 1e-9);
        const double rho = logu(1e-2, 1e2) / ov;
        double th;
        try
        {
            th = xpd_threshold(ov, oh, LinkBudget::from_snr(rho));
        }
        catch (const model_inconsistency &)
        {
            continue;
        }
        ++found;
        const oracle::Bracket b = oracle::threshold_bracket(ov, oh, rho, 1e-5);
        if (!(b.changes >= 1 && b.lo <= th && th <= b.hi))
        {
            ++bad;
            r.note(fmt("miss: O_V %.3e O_H %.3e rho %.3e root %.8f bracket [%.5f, %.5f]", ov, oh, rho, th, b.lo, b.hi));
        }
    }
    r.check(found == 50 && bad == 0, fmt("%d tuples with a root in (0,1) (%d draws), %d not bracketed", found, attempts, bad));
    const double sym = xpd_threshold(1e-11, 1e-11, LinkBudget::from_snr(1e11));
    r.check(std::abs(sym - 0.5420) <= 1e-4, fmt("symmetric rho O = 1: l_th = %.6f", sym));
}

// ---- 6 --------------------------------------------------------------------
void criterion6(Report &r)
{
    const Scenario sc = small_scenario();
    const LinkModel link = sc.build();
    const std::vector<double> rx = {1e4, 1e5, 1e6};
    std::vector<double> tx;
    for (double v : rx)
        tx.push_back(rx_to_tx(v, link));
    const MonteCarloResult mc = run_monte_carlo(link, PowerAllocation::equal(), tx, sc.mc_options());
    std::vector<double> dual, single;
    for (std::size_t i = 0; i < rx.size(); ++i)
    {
        dual.push_back(mc.dual[i].mean);
        single.push_back(mc.single[i].mean);
        r.note(fmt("rho_rx = %g: dual %.4f single %.4f", rx[i], dual.back(), single.back()));
    }
    const double sd = multiplexing_gain(rx, dual), ss = multiplexing_gain(rx, single);
    r.check(sd >= 1.8 && sd <= 2.05, fmt("dual slope %.4f in [1.8, 2.05]", sd));
    r.check(ss >= 0.9 && ss <= 1.05, fmt("single slope %.4f in [0.9, 1.05]", ss));
}

// ---- 7 --------------------------------------------------------------------
std::filesystem::path recipes_dir()
{
    if (const char *env = std::getenv("DPRIS_RECIPES_DIR"))
        return env;
    return DPRIS_DEFAULT_RECIPES_DIR;
}

// Groups ok rows by the series column (or one group without series).
std::map<std::string, std::vector<std::size_t>> groups(const SweepSpec &spec, const SweepResult &res)
{
    std::map<std::string, std::vector<std::size_t>> g;
    for (std::size_t i = 0; i < res.rows.size(); ++i)
        g[spec.series_key.empty() ? std::string() : res.rows[i].axis[0]].push_back(i);
    return g;
}

bool all_ok(const SweepResult &res, Report &r, const std::string &name)
{
    std::size_t failed = 0;
    for (const auto &row : res.rows)
        failed += !row.ok;
    r.check(failed == 0, fmt("%s: %zu rows, %zu failed", name.c_str(), res.rows.size(), failed));
    return failed == 0;
}

// Nondecreasing up to the argmax, nonincreasing after, with a slack per step.
bool unimodal(const std::vector<double> &v, const std::vector<double> &slack, std::size_t &peak)
{
    peak = static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
    for (std::size_t i = 0; i + 1 < v.size(); ++i)
    {
        const double d = v[i + 1] - v[i];
        if (i < peak ? d < -slack[i] : d > slack[i])
            return false;
    }
    return true;
}

void criterion7(Report &r)
{
    using clock = std::chrono::steady_clock;
    auto run = [&](const char *name) {
        const SweepSpec spec = SweepSpec::load(recipes_dir() / (std::string(name) + ".cfg"));
        const auto t0 = clock::now();
        SweepResult res = run_sweep(spec);
        const double secs = std::chrono::duration<double>(clock::now() - t0).count();
        r.check(secs < 300.0, fmt("%s runtime %.1f s < 300 s", name, secs));
        return std::make_pair(spec, res);
    };

    {
        const auto [spec, res] = run("fig3");
        if (all_ok(res, r, "fig3"))
            for (const auto &[s, idx] : groups(spec, res))
            {
                std::vector<double> ub, mc, zero, slack;
                for (std::size_t i = 0; i < idx.size(); ++i)
                {
                    ub.push_back(*res.value(idx[i], "dual_ub"));
                    mc.push_back(*res.value(idx[i], "dual_mc"));
                    zero.push_back(0.0);
                    if (i + 1 < idx.size())
                        slack.push_back(3.0 * std::hypot(*res.value(idx[i], "dual_mc_se"),
                                                         *res.value(idx[i + 1], "dual_mc_se")));
                }
                std::size_t pu, pm;
                const bool uu = unimodal(ub, zero, pu);
                r.check(uu && pu > 0 && pu + 1 < ub.size(),
                        fmt("fig3 %s: closed form unimodal in kappa, interior peak at %s dB (%.4f)",
                            s.c_str(), res.rows[idx[pu]].axis[1].c_str(), ub[pu]));
                const bool um = unimodal(mc, slack, pm);
                r.check(um && pm > 0 && pm + 1 < mc.size(), fmt("fig3 %s: Monte Carlo unimodal within 3 se, interior peak at %s dB",
                                                     s.c_str(), res.rows[idx[pm]].axis[1].c_str()));
            }
    }
    {
        const auto [spec, res] = run("fig4");
        if (all_ok(res, r, "fig4"))
            for (const auto &[s, idx] : groups(spec, res))
            {
                std::vector<double> ub;
                bool mc_ok = true;
                for (std::size_t i = 0; i < idx.size(); ++i)
                {
                    ub.push_back(*res.value(idx[i], "dual_ub"));
                    if (i > 0)
                        mc_ok = mc_ok && *res.value(idx[i], "dual_mc") >=
                                             *res.value(idx[i - 1], "dual_mc") -
                                                 3.0 * std::hypot(*res.value(idx[i], "dual_mc_se"),
                                                                  *res.value(idx[i - 1], "dual_mc_se"));
                }
                bool nondec = true, saturating = true;
                std::string inc;
                for (std::size_t i = 1; i < ub.size(); ++i)
                {
                    nondec = nondec && ub[i] >= ub[i - 1];
                    if (i > 1)
                        saturating = saturating && ub[i] - ub[i - 1] <= ub[i - 1] - ub[i - 2];
                    inc += fmt(" %.4f", ub[i] - ub[i - 1]);
                }
                r.check(nondec && saturating, fmt("fig4 %s: bound nondecreasing with shrinking increments:%s",
                                                  s.c_str(), inc.c_str()));
                r.check(mc_ok, fmt("fig4 %s: Monte Carlo nondecreasing within 3 se", s.c_str()));
            }
    }
    {
        const auto [spec, res] = run("fig6");
        if (all_ok(res, r, "fig6"))
        {
            bool above = true, shrinking = true;
            double first = 0.0, last = 0.0;
            for (std::size_t i = 0; i < res.rows.size(); ++i)
            {
                const double gap = *res.value(i, "lambda_v") - *res.value(i, "lambda_h");
                above = above && gap > 0.0;
                if (i > 0)
                    shrinking = shrinking && gap <= last;
                if (i == 0)
                    first = gap;
                last = gap;
            }
            r.check(above, "fig6: lambda_v > lambda_h at every SNR");
            r.check(shrinking && last < first,
                    fmt("fig6: gap shrinks with SNR: %.4f at %s dB -> %.4f at %s dB", first,
                        res.rows.front().axis[0].c_str(), last, res.rows.back().axis[0].c_str()));
            r.note(fmt("fig6: mean amplitude V %.4f, H %.4f", *res.value(0, "mean_amp_v"),
                       *res.value(0, "mean_amp_h")));
        }
    }
}

// ---- 8 --------------------------------------------------------------------
void criterion8(Report &r)
{
    for (double kappa : {2.0, 4.0, 10.0, 100.0})
    {
        FeedSpec feed;
        feed.boresight = Vec3::UnitZ();
        feed.gain = kappa;
        const double v = integrate_hemisphere(
            [&feed](double theta, double phi) {
                const Vec3 dir(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta));
                return feed_gain(feed, dir);
            },
            64, 16);
        const double rel = std::abs(v / (4.0 * pi) - 1.0);
        r.check(rel < 1e-3, fmt("kappa = %g: integral / 4 pi - 1 = %.2e", kappa, rel));
    }
    std::vector<std::filesystem::path> files;
    for (const auto &e : std::filesystem::directory_iterator(recipes_dir()))
        if (e.path().extension() == ".cfg")
            files.push_back(e.path());
    std::sort(files.begin(), files.end());
    r.check(!files.empty(), fmt("%zu recipes found in %s", files.size(), recipes_dir().c_str()));
    for (const auto &f : files)
    {
        SweepSpec spec = SweepSpec::load(f);
        spec.outputs = {SweepOutput::Captured};
        const SweepResult res = run_sweep(spec);
        double worst = 0.0;
        std::size_t ok = 0;
        for (std::size_t i = 0; i < res.rows.size(); ++i)
            if (res.rows[i].ok)
            {
                ++ok;
                worst = std::max(worst, *res.value(i, "captured_power"));
            }
        r.check(ok > 0 && worst <= 1.0, fmt("%s: max captured fraction %.6f over %zu ok rows of %zu",
                                            f.filename().c_str(), worst, ok, res.rows.size()));
    }
}

// ---- 9 --------------------------------------------------------------------
bool same(const MonteCarloResult &a, const MonteCarloResult &b)
{
    bool eq = a.dual[0].mean == b.dual[0].mean && a.dual[0].std_error == b.dual[0].std_error &&
              a.single[0].mean == b.single[0].mean && a.single[0].std_error == b.single[0].std_error &&
              a.moment_bound[0] == b.moment_bound[0];
    for (int i = 0; i < 4; ++i)
        eq = eq && a.moments[i].mean == b.moments[i].mean && a.moments[i].std_error == b.moments[i].std_error;
    return eq;
}

void criterion9(Report &r)
{
    const MonteCarloResult w1 = criterion1_mc(1);
    for (unsigned w : {2u, 4u, 0u})
    {
        const MonteCarloResult other = criterion1_mc(w);
        r.check(same(w1, other), fmt("criterion 1 estimates, workers 1 vs %u%s: bitwise identical", w,
                                     w == 0 ? " (hardware concurrency)" : ""));
    }
    r.note(fmt("dual %.17g, |G11|^2 %.17g", w1.dual[0].mean, w1.moments[0].mean));
}

struct Criterion
{
    const char *name;
    std::function<void(Report &)> run;
    double limit_s; // 0: none
};

} // namespace

int main(int argc, char **argv)
{
    const std::vector<Criterion> all = {
        {"moment identities", criterion1, 60.0},
        {"Jensen bound and tightness", criterion2, 120.0},
        {"power allocation optimality", criterion3, 10.0},
        {"cross-polarization structure", criterion4, 1.0},
        {"cross-polarization threshold", criterion5, 10.0},
        {"multiplexing gains", criterion6, 180.0},
        {"trend reproduction (fig3, fig4, fig6)", criterion7, 0.0},
        {"feed normalization and captured power", criterion8, 5.0},
        {"determinism across worker counts", criterion9, 0.0},
    };
    std::vector<int> which;
    if (argc > 1)
    {
        const int c = std::atoi(argv[1]);
        if (c < 1 || c > static_cast<int>(all.size()))
        {
            std::fprintf(stderr, "usage: %s [1-%zu]\n", argv[0], all.size());
            return 2;
        }
        which.push_back(c);
    }
    else
        for (int c = 1; c <= static_cast<int>(all.size()); ++c)
            which.push_back(c);

    bool ok = true;
    for (int c : which)
    {
        const Criterion &cr = all[c - 1];
        Report rep;
        const auto t0 = std::chrono::steady_clock::now();
        try
        {
            cr.run(rep);
        }
        catch (const std::exception &e)
        {
            rep.check(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (cr.limit_s > 0.0)
            rep.check(secs < cr.limit_s, fmt("runtime %.2f s < %.0f s", secs, cr.limit_s));
        std::printf("criterion %d: %s %s (%.2f s)\n", c, rep.pass ? "PASS" : "FAIL", cr.name, secs);
        for (const auto &d : rep.details)
            std::printf("    %s\n", d.c_str());
        std::fflush(stdout);
        ok = ok && rep.pass;
    }
    return ok ? 0 : 1;
}
