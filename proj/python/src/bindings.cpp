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
#include "dpris/errors.hpp"
#include "dpris/scenario.hpp"
#include "dpris/sweep.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <sstream>
#include <string>

namespace py = pybind11;
using namespace dpris;

namespace
{

std::map<std::string, std::string> echo_dict(const Scenario &sc)
{
    std::map<std::string, std::string> out;
    const KeyValueConfig echo = sc.echo();
    for (const auto &[k, v] : echo.entries())
        out[k] = v;
    return out;
}

Scenario scenario_from(const std::map<std::string, std::string> &settings)
{
    KeyValueConfig cfg;
    for (const auto &[k, v] : settings)
        cfg.set(k, v);
    return Scenario::from_config(cfg);
}

py::dict capacity(const Scenario &sc)
{
    CapacityReport r;
    {
        py::gil_scoped_release release;
        const LinkModel link = sc.build();
        const LinkBudget budget = sc.budget(link);
        r = evaluate_capacity(link, sc.allocation(link, budget), budget, sc.mc_options());
    }
    py::dict d;
    d["o_v"] = r.o_v;
    d["o_h"] = r.o_h;
    d["snr"] = r.budget.snr;
    d["lambda_v"] = r.allocation.lambda_v;
    d["lambda_h"] = r.allocation.lambda_h;
    d["dual_ub"] = r.upper_bound;
    d["dual_mc"] = r.mc_estimate.mean;
    d["dual_mc_se"] = r.mc_estimate.std_error;
    d["moment_bound"] = r.moment_bound;
    d["single_ub"] = r.single_upper_bound;
    d["single_mc"] = r.single_mc.mean;
    d["single_mc_se"] = r.single_mc.std_error;
    d["captured_power"] = r.captured_power;
    d["moments"] = py::make_tuple(r.exact_moments.g11, r.exact_moments.g12, r.exact_moments.g21,
                                  r.exact_moments.g22);
    d["trials"] = r.trials;
    d["seed"] = r.seed;
    return d;
}

SweepSpec spec_from(const std::string &text, const std::map<std::string, std::string> &overrides)
{
    KeyValueConfig cfg = KeyValueConfig::parse(text, "<sweep>");
    for (const auto &[k, v] : overrides)
        cfg.set(k, v);
    SweepSpec spec = SweepSpec::from_config(cfg);
    spec.validate();
    return spec;
}

} // namespace

PYBIND11_MODULE(_dpris, m)
{
    m.doc() = "Dual-polarized RIS-fed link model";

    static py::exception<model_inconsistency> model_exc(m, "ModelInconsistency", PyExc_RuntimeError);
    static py::exception<degenerate_geometry> geometry_exc(m, "DegenerateGeometry", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try
        {
            if (p)
                std::rethrow_exception(p);
        }
        catch (const model_inconsistency &e)
        {
            py::dict diag;
            for (const auto &[k, v] : e.diagnostics())
                diag[py::str(k)] = v;
            PyErr_SetObject(model_exc.ptr(), py::make_tuple(e.what(), diag).ptr());
        }
        catch (const degenerate_geometry &e)
        {
            geometry_exc(e.what());
        }
    });

    py::class_<Scenario>(m, "Scenario")
        .def(py::init<>())
        .def(py::init(&scenario_from), py::arg("settings"))
        .def("set", &Scenario::set, py::arg("key"), py::arg("value"))
        .def("echo", &echo_dict)
        .def_static("keys", &Scenario::keys)
        .def("__repr__", [](const Scenario &sc) {
            std::ostringstream os;
            os << "Scenario(" << sc.rows * sc.cols << " elements)";
            return os.str();
        });

    m.def("capacity", &capacity, py::arg("scenario"),
          "Closed-form bounds and Monte Carlo estimates for one scenario.");

    m.def(
        "moment_upper_bound",
        [](double g11, double g12, double g21, double g22, double lambda_v, double lambda_h, double rho) {
            return moment_upper_bound({g11, g12, g21, g22}, {lambda_v, lambda_h}, LinkBudget::from_snr(rho));
        },
        py::arg("g11"), py::arg("g12"), py::arg("g21"), py::arg("g22"), py::arg("lambda_v"), py::arg("lambda_h"),
        py::arg("rho"));
    m.def(
        "closed_form_upper_bound",
        [](double o_v, double o_h, double lambda_v, double lambda_h, double rho, double l_ru) {
            return closed_form_upper_bound(o_v, o_h, {lambda_v, lambda_h}, LinkBudget::from_snr(rho), l_ru);
        },
        py::arg("o_v"), py::arg("o_h"), py::arg("lambda_v"), py::arg("lambda_h"), py::arg("rho"), py::arg("l_ru"));
    m.def(
        "single_pol_upper_bound",
        [](double o_v, double rho, double l_ru) { return single_pol_upper_bound(o_v, LinkBudget::from_snr(rho), l_ru); },
        py::arg("o_v"), py::arg("rho"), py::arg("l_ru"));
    m.def(
        "optimal_power_allocation",
        [](double o_v, double o_h, double rho, double l_ru) {
            const PowerAllocation a = optimal_power_allocation(o_v, o_h, LinkBudget::from_snr(rho), l_ru);
            return py::make_tuple(a.lambda_v, a.lambda_h);
        },
        py::arg("o_v"), py::arg("o_h"), py::arg("rho"), py::arg("l_ru"));
    m.def(
        "xpd_threshold", [](double o_v, double o_h, double rho) { return xpd_threshold(o_v, o_h, LinkBudget::from_snr(rho)); },
        py::arg("o_v"), py::arg("o_h"), py::arg("rho"));

    m.def(
        "sweep_csv",
        [](const std::string &text, const std::map<std::string, std::string> &overrides) {
            const SweepSpec spec = spec_from(text, overrides);
            py::gil_scoped_release release;
            return to_csv(run_sweep(spec));
        },
        py::arg("spec_text"), py::arg("overrides") = std::map<std::string, std::string>{},
        "Runs a sweep given the text of a spec file and returns the CSV.");
}
