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

#include "dpris/capacity.hpp"
#include "dpris/config.hpp"
#include "dpris/errors.hpp"
#include "dpris/scenario.hpp"
#include "dpris/sweep.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#ifndef DPRIS_DEFAULT_RECIPES_DIR
#define DPRIS_DEFAULT_RECIPES_DIR "recipes"
#endif

namespace fs = std::filesystem;
using namespace dpris;

namespace
{

constexpr int exit_ok = 0;
constexpr int exit_usage = 2;
constexpr int exit_model = 3;
constexpr int exit_io = 4;

struct usage_error : std::invalid_argument
{
    using std::invalid_argument::invalid_argument;
};

void write_text(const fs::path &path, const std::string &text)
{
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw io_error("cannot open '" + path.string() + "' for writing");
    f << text;
    f.close();
    if (!f)
        throw io_error("write to '" + path.string() + "' failed");
}

struct SweepArgs
{
    std::string out;
    std::vector<std::string> overrides;
    bool gnuplot = false;
};

void add_sweep_flags(CLI::App *cmd, SweepArgs &a)
{
    cmd->add_option("--out,-o", a.out, "CSV output file (default: stdout)");
    cmd->add_option("--set", a.overrides, "Override a spec key, key=value (repeatable)");
    cmd->add_flag("--gnuplot", a.gnuplot, "Also write <out>.gp");
}

int run_sweep_file(const fs::path &spec_file, const SweepArgs &a)
{
    KeyValueConfig cfg = KeyValueConfig::load(spec_file);
    for (const auto &o : a.overrides)
        cfg.set_assignment(o);
    if (a.gnuplot && a.out.empty())
        throw usage_error("--gnuplot needs --out");
    const SweepSpec spec = SweepSpec::from_config(cfg);
    const SweepResult result = run_sweep(spec);
    const std::string csv = to_csv(result);
    if (a.out.empty())
        std::cout << csv;
    else
    {
        write_text(a.out, csv);
        if (a.gnuplot)
            write_text(a.out + ".gp", gnuplot_script(result, fs::path(a.out).filename().string()));
    }
    std::size_t failed = 0;
    for (const auto &r : result.rows)
        failed += r.ok ? 0 : 1;
    if (failed)
        std::cerr << "dpris: " << failed << " of " << result.rows.size() << " grid points failed\n";
    return exit_ok;
}

fs::path recipes_dir(const std::string &flag)
{
    if (!flag.empty())
        return flag;
    if (const char *env = std::getenv("DPRIS_RECIPES_DIR"))
        return env;
    return DPRIS_DEFAULT_RECIPES_DIR;
}

struct CapacityArgs
{
    std::string config;
    std::vector<std::string> overrides;
    std::optional<long long> elements;
    std::optional<double> snr_db;
    std::optional<double> power_dbm;
    std::optional<double> xpd_coeff;
    std::optional<double> feed_gain_db;
    std::optional<long long> trials;
    std::optional<long long> seed;
    std::optional<long long> workers;
    std::string phase_scheme;
    std::string allocation;
    std::string snr_reference;
};

std::string fmt(double x) { return format_double(x); }

int run_capacity(const CapacityArgs &a)
{
    KeyValueConfig cfg;
    if (!a.config.empty())
        cfg = KeyValueConfig::load(a.config);
    for (const auto &o : a.overrides)
        cfg.set_assignment(o);
    if (a.trials && *a.trials <= 0)
        throw usage_error("--trials must be positive");
    if (a.snr_db && a.power_dbm)
        throw usage_error("--snr-db and --power-dbm are mutually exclusive");
    if (a.elements)
        cfg.set("elements", std::to_string(*a.elements));
    if (a.snr_db)
        cfg.set("snr_db", fmt(*a.snr_db));
    if (a.power_dbm)
    {
        cfg.set("power_dbm", fmt(*a.power_dbm));
        cfg.set("snr_db", "none");
    }
    if (a.xpd_coeff)
        cfg.set("xpd_coeff", fmt(*a.xpd_coeff));
    if (a.feed_gain_db)
        cfg.set("feed_gain_db", fmt(*a.feed_gain_db));
    if (a.trials)
        cfg.set("trials", std::to_string(*a.trials));
    if (a.seed)
        cfg.set("seed", std::to_string(*a.seed));
    if (a.workers)
        cfg.set("workers", std::to_string(*a.workers));
    if (!a.phase_scheme.empty())
        cfg.set("phase_scheme", a.phase_scheme);
    if (!a.allocation.empty())
        cfg.set("allocation", a.allocation);
    if (!a.snr_reference.empty())
        cfg.set("snr_reference", a.snr_reference);

    const Scenario sc = Scenario::from_config(cfg);
    const LinkModel link = sc.build();
    const LinkBudget budget = sc.budget(link);
    const PowerAllocation alloc = sc.allocation(link, budget);
    const CapacityReport r = evaluate_capacity(link, alloc, budget, sc.mc_options());

    const KeyValueConfig echo = sc.echo();
    for (const auto &[k, v] : echo.entries())
        std::cout << "# " << k << "=" << v << "\n";
    const bool closed = sc.phase_scheme != PhaseScheme::Random;
    std::cout << "snr = " << fmt(r.budget.snr) << "\n"
              << "o_v = " << fmt(r.o_v) << "\n"
              << "o_h = " << fmt(r.o_h) << "\n"
              << "lambda_v = " << fmt(r.allocation.lambda_v) << "\n"
              << "lambda_h = " << fmt(r.allocation.lambda_h) << "\n"
              << "captured_power = " << fmt(r.captured_power) << "\n"
              << "mc_estimate = " << fmt(r.mc_estimate.mean) << "  # monte-carlo, se=" << fmt(r.mc_estimate.std_error)
              << "\n"
              << "upper_bound = " << fmt(r.upper_bound) << (closed ? "  # closed-form" : "  # exact moments") << "\n"
              << "moment_bound = " << fmt(r.moment_bound) << "  # monte-carlo moments\n"
              << "single_mc = " << fmt(r.single_mc.mean) << "  # monte-carlo, se=" << fmt(r.single_mc.std_error)
              << "\n"
              << "single_upper_bound = " << fmt(r.single_upper_bound) << "  # closed-form\n"
              << "trials = " << r.trials << "\n"
              << "seed = " << r.seed << "\n";
    return exit_ok;
}

int run_threshold(double ov, double oh, double snr_db)
{
    const LinkBudget budget = LinkBudget::from_snr(db_to_linear(snr_db));
    const ThresholdCoefficients c = xpd_threshold_coefficients(ov, oh, budget);
    const double l = xpd_threshold(ov, oh, budget);
    std::cout << "a = " << fmt(c.a) << "\nb = " << fmt(c.b) << "\nc = " << fmt(c.c) << "\n"
              << "xpd_threshold = " << fmt(l) << "\n";
    return exit_ok;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"dpris: dual-polarized RIS-fed holographic MIMO link simulator"};
    app.require_subcommand(1);

    std::string spec_file;
    SweepArgs sweep_args;
    auto *sweep = app.add_subcommand("sweep", "Run a sweep spec and write CSV");
    sweep->add_option("spec", spec_file, "Sweep spec file")->required();
    add_sweep_flags(sweep, sweep_args);

    CapacityArgs cap;
    auto *capacity = app.add_subcommand("capacity", "Evaluate one link");
    capacity->add_option("--config", cap.config, "Scenario config file");
    capacity->add_option("--set", cap.overrides, "Override a scenario key, key=value (repeatable)");
    capacity->add_option("--elements", cap.elements, "Number of RIS elements (perfect square)");
    capacity->add_option("--snr-db", cap.snr_db, "SNR in dB (overrides power)");
    capacity->add_option("--power-dbm", cap.power_dbm, "Transmit power in dBm");
    capacity->add_option("--xpd-coeff", cap.xpd_coeff, "Cross-polarization coefficient l_RU in [0, 1]");
    capacity->add_option("--feed-gain-db", cap.feed_gain_db, "Feed gain in dB");
    capacity->add_option("--trials", cap.trials, "Monte Carlo trials");
    capacity->add_option("--seed", cap.seed, "Master seed");
    capacity->add_option("--workers", cap.workers, "Worker threads (0 = all cores)");
    capacity->add_option("--phase-scheme", cap.phase_scheme, "optimal | optimal-with-adjustment | random");
    capacity->add_option("--allocation", cap.allocation, "optimal | equal | lambda_v");
    capacity->add_option("--snr-reference", cap.snr_reference, "transmit | receive");

    double ov = 0.0, oh = 0.0, th_snr_db = 0.0;
    auto *threshold = app.add_subcommand("threshold", "XPD threshold for given O^(V), O^(H) and SNR");
    threshold->add_option("--ov", ov, "O^(V)")->required();
    threshold->add_option("--oh", oh, "O^(H)")->required();
    threshold->add_option("--snr-db", th_snr_db, "SNR in dB")->required();

    std::string recipes_flag;
    auto *recipes = app.add_subcommand("recipes", "List or run the bundled figure recipes");
    recipes->add_option("--recipes-dir", recipes_flag, "Recipe directory (default: $DPRIS_RECIPES_DIR or built-in)");
    recipes->require_subcommand(1);
    auto *list = recipes->add_subcommand("list", "List recipes");
    std::string recipe_name;
    SweepArgs recipe_args;
    auto *run = recipes->add_subcommand("run", "Run a recipe");
    run->add_option("name", recipe_name, "Recipe name, e.g. fig3")->required();
    add_sweep_flags(run, recipe_args);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::Success &e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError &e)
    {
        app.exit(e);
        return exit_usage;
    }

    try
    {
        if (sweep->parsed())
            return run_sweep_file(spec_file, sweep_args);
        if (capacity->parsed())
            return run_capacity(cap);
        if (threshold->parsed())
            return run_threshold(ov, oh, th_snr_db);
        if (recipes->parsed())
        {
            const fs::path dir = recipes_dir(recipes_flag);
            if (list->parsed())
            {
                if (!fs::is_directory(dir))
                    throw io_error("recipe directory '" + dir.string() + "' not found");
                std::vector<fs::path> files;
                for (const auto &e : fs::directory_iterator(dir))
                    if (e.path().extension() == ".cfg")
                        files.push_back(e.path());
                std::sort(files.begin(), files.end());
                for (const auto &f : files)
                {
                    const auto cfg = KeyValueConfig::load(f);
                    std::cout << f.stem().string() << "\t" << cfg.get("title").value_or("") << "\n";
                }
                return exit_ok;
            }
            const fs::path file = dir / (recipe_name + ".cfg");
            if (!fs::exists(file))
                throw io_error("no recipe '" + recipe_name + "' in '" + dir.string() + "'");
            return run_sweep_file(file, recipe_args);
        }
    }
    catch (const io_error &e)
    {
        std::cerr << "dpris: " << e.what() << "\n";
        return exit_io;
    }
    catch (const model_inconsistency &e)
    {
        std::cerr << "dpris: " << e.what() << "\n";
        for (const auto &[k, v] : e.diagnostics())
            std::cerr << "  " << k << " = " << format_double(v) << "\n";
        return exit_model;
    }
    catch (const degenerate_geometry &e)
    {
        std::cerr << "dpris: degenerate geometry: " << e.what() << "\n";
        return exit_model;
    }
    catch (const std::invalid_argument &e)
    {
        std::cerr << "dpris: " << e.what() << "\n";
        return exit_usage;
    }
    catch (const std::exception &e)
    {
        std::cerr << "dpris: " << e.what() << "\n";
        return exit_model;
    }
    return exit_usage;
}
