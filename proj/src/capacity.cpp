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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace dpris
{

namespace
{
constexpr double inv_ln2 = 1.4426950408889634;

double log2_1p(double x) { return std::log1p(x) * inv_ln2; }

void check_nonnegative(double x, const char *what)
{
    if (!(x >= 0.0) || !std::isfinite(x))
        throw std::invalid_argument(std::string(what) + " must be finite and non-negative");
}
} // namespace

void PowerAllocation::validate() const
{
    if (!(lambda_v >= 0.0 && lambda_v <= 1.0) || !(lambda_h >= 0.0 && lambda_h <= 1.0))
        throw std::invalid_argument("PowerAllocation: fractions must lie in [0, 1]");
    if (lambda_v + lambda_h > 1.0 + 1e-12)
        throw std::invalid_argument("PowerAllocation: lambda_v + lambda_h must not exceed 1");
}

LinkBudget LinkBudget::from_snr(double rho)
{
    LinkBudget b;
    b.snr = rho;
    b.validate();
    return b;
}

LinkBudget LinkBudget::from_power(double transmit_power_w, double noise_variance_w)
{
    if (!(transmit_power_w > 0.0) || !(noise_variance_w > 0.0))
        throw std::invalid_argument("LinkBudget: power and noise variance must be positive");
    LinkBudget b;
    b.transmit_power = transmit_power_w;
    b.noise_variance = noise_variance_w;
    b.snr = transmit_power_w / noise_variance_w;
    return b;
}

void LinkBudget::validate() const
{
    if (!(snr > 0.0) || !std::isfinite(snr))
        throw std::invalid_argument("LinkBudget: snr must be positive and finite");
}

// ---- Link model -----------------------------------------------------------

namespace
{
LinkModel assemble_link(const RisGeometry &geometry, const FeedSpec &feed, const AmplitudeModel &amplitude_model,
                        PhaseScheme phase_scheme, std::uint64_t phase_seed, ChannelStatistics stats,
                        const Vec3 &ue_position)
{
    feed.validate();
    amplitude_model.validate();

    LinkModel link;
    link.geometry = geometry;
    link.feed = feed;
    link.amplitude_model = amplitude_model;
    link.ue_position = ue_position;
    link.phase_scheme = phase_scheme;
    link.propagation = build_propagation_matrix(geometry, feed);
    link.amplitudes = element_amplitudes(geometry, feed, amplitude_model);
    link.configuration = RisConfiguration(link.amplitudes, phase_strategy(phase_scheme, geometry, feed, phase_seed));
    link.statistics = std::move(stats);
    link.o_v = compute_O(link.amplitudes.v, link.propagation, link.statistics);
    link.o_h = compute_O(link.amplitudes.h, link.propagation, link.statistics);
    return link;
}
} // namespace

LinkModel build_link(const RisGeometry &geometry, const FeedSpec &feed, const AmplitudeModel &amplitude_model,
                     PhaseScheme phase_scheme, std::uint64_t phase_seed, const PathlossInputs &pathloss,
                     const Vec3 &ue_position)
{
    return assemble_link(geometry, feed, amplitude_model, phase_scheme, phase_seed,
                         build_channel_statistics(geometry, pathloss, ue_position), ue_position);
}

LinkModel build_link(const RisGeometry &geometry, const FeedSpec &feed, const AmplitudeModel &amplitude_model,
                     PhaseScheme phase_scheme, std::uint64_t phase_seed, const PathlossInputs &pathloss,
                     const Vec3 &ue_position, const SpatialCorrelation &correlation)
{
    return assemble_link(geometry, feed, amplitude_model, phase_scheme, phase_seed,
                         build_channel_statistics(geometry, pathloss, ue_position, correlation), ue_position);
}

// ---- Channel evaluation ---------------------------------------------------

EquivalentChannel equivalent_channel(const ChannelSample &sample, const RisConfiguration &config,
                                     const PropagationMatrix &pm)
{
    const auto n = static_cast<Eigen::Index>(config.size());
    if (static_cast<Eigen::Index>(pm.size()) != n || sample.vv.size() != n || sample.vh.size() != n ||
        sample.hv.size() != n || sample.hh.size() != n)
        throw std::invalid_argument("equivalent_channel: element counts differ");

    const ComplexVector xv = config.coefficients_v().cwiseProduct(pm.copol_v);
    const ComplexVector xh = config.coefficients_h().cwiseProduct(pm.copol_h);

    // Row vector times column vector, no conjugation.
    EquivalentChannel eq;
    eq.G(0, 0) = sample.vv.transpose() * xv;
    eq.G(0, 1) = sample.vh.transpose() * xh;
    eq.G(1, 0) = sample.hv.transpose() * xv;
    eq.G(1, 1) = sample.hh.transpose() * xh;
    return eq;
}

namespace
{
double quadratic_moment(const ComplexVector &x, const RealVector &beta, const RealMatrix &R)
{
    const ComplexVector y = x.cwiseProduct(beta.cwiseSqrt().cast<Complex>());
    const Complex q = y.dot(R.cast<Complex>() * y); // y^H R y
    return std::max(q.real(), 0.0);
}
} // namespace

ChannelMoments exact_moments(const RisConfiguration &config, const PropagationMatrix &pm,
                             const ChannelStatistics &stats)
{
    if (config.size() != pm.size() || config.size() != stats.size())
        throw std::invalid_argument("exact_moments: element counts differ");

    const ComplexVector xv = config.coefficients_v().cwiseProduct(pm.copol_v);
    const ComplexVector xh = config.coefficients_h().cwiseProduct(pm.copol_h);
    const auto &pl = stats.pathloss;
    return {quadratic_moment(xv, pl.vv, stats.correlation), quadratic_moment(xh, pl.vh, stats.correlation),
            quadratic_moment(xv, pl.hv, stats.correlation), quadratic_moment(xh, pl.hh, stats.correlation)};
}

double compute_O(const RealVector &amplitudes, const PropagationMatrix &pm, const ChannelStatistics &stats)
{
    const auto n = amplitudes.size();
    if (static_cast<Eigen::Index>(pm.size()) != n || static_cast<Eigen::Index>(stats.size()) != n)
        throw std::invalid_argument("compute_O: element counts differ");

    RealVector v(n);
    for (Eigen::Index i = 0; i < n; ++i)
        v(i) = amplitudes(i) * std::abs(pm.shared(i)) *
               std::sqrt(stats.inputs.unit_pathloss * std::pow(stats.pathloss.distances(i), -stats.inputs.exponent));
    return std::max(v.dot(stats.correlation * v), 0.0);
}

// ---- Closed-form bounds and allocation -----------------------------------

double xpd_factor(double l_ru)
{
    const double p = l_ru;
    const double q = 1.0 - l_ru;
    // Order the pair so f(l) and f(1 - l) run the identical operations.
    const double lo = std::min(p, q);
    const double hi = std::max(p, q);
    return lo * lo + hi * hi;
}

double moment_upper_bound(const ChannelMoments &m, const PowerAllocation &allocation, const LinkBudget &budget)
{
    check_nonnegative(m.g11, "moment E|G11|^2");
    check_nonnegative(m.g12, "moment E|G12|^2");
    check_nonnegative(m.g21, "moment E|G21|^2");
    check_nonnegative(m.g22, "moment E|G22|^2");
    const double rho = budget.snr;
    const double lv = allocation.lambda_v;
    const double lh = allocation.lambda_h;
    const double x = rho * lv * (m.g11 + m.g21) + rho * lh * (m.g12 + m.g22) +
                     rho * rho * lv * lh * (m.g11 * m.g22 + m.g12 * m.g21);
    return log2_1p(x);
}

double closed_form_upper_bound(double o_v, double o_h, const PowerAllocation &allocation, const LinkBudget &budget,
                               double l_ru)
{
    check_nonnegative(o_v, "O^(V)");
    check_nonnegative(o_h, "O^(H)");
    if (!(l_ru >= 0.0 && l_ru <= 1.0))
        throw std::invalid_argument("closed_form_upper_bound: l_RU must lie in [0, 1]");
    const double rho = budget.snr;
    const double lv = allocation.lambda_v;
    const double lh = allocation.lambda_h;
    const double x = rho * (lh * o_h + lv * o_v) + rho * rho * lh * lv * o_h * o_v * xpd_factor(l_ru);
    return log2_1p(x);
}

double allocation_stationary_point(double o_v, double o_h, const LinkBudget &budget, double l_ru)
{
    if (!(o_v > 0.0) || !(o_h > 0.0))
        throw std::invalid_argument("allocation_stationary_point: O^(V) and O^(H) must be positive");
    budget.validate();
    // (O_V - O_H) / (O_V O_H) written as 1/O_H - 1/O_V to avoid underflow.
    return 0.5 + (1.0 / o_h - 1.0 / o_v) / (2.0 * budget.snr * xpd_factor(l_ru));
}

PowerAllocation optimal_power_allocation(double o_v, double o_h, const LinkBudget &budget, double l_ru)
{
    if (!(l_ru >= 0.0 && l_ru <= 1.0))
        throw std::invalid_argument("optimal_power_allocation: l_RU must lie in [0, 1]");
    check_nonnegative(o_v, "O^(V)");
    check_nonnegative(o_h, "O^(H)");
    if (o_v == 0.0 && o_h == 0.0)
        throw std::invalid_argument("optimal_power_allocation: O^(V) and O^(H) are both zero");
    // One dead polarization: all power to the other one.
    if (o_h == 0.0)
        return {1.0, 0.0};
    if (o_v == 0.0)
        return {0.0, 1.0};

    const double lambda0 = allocation_stationary_point(o_v, o_h, budget, l_ru);
    double lv = lambda0;
    if (lambda0 > 1.0)
        lv = 1.0;
    else if (lambda0 < 0.0)
        lv = 0.0;
    return {lv, 1.0 - lv};
}

PowerAllocation moment_optimal_allocation(const ChannelMoments &m, const LinkBudget &budget)
{
    check_nonnegative(m.g11, "moment E|G11|^2");
    check_nonnegative(m.g12, "moment E|G12|^2");
    check_nonnegative(m.g21, "moment E|G21|^2");
    check_nonnegative(m.g22, "moment E|G22|^2");
    const double rho = budget.snr;
    const double a = m.g11 + m.g21;
    const double b = m.g12 + m.g22;
    const double c = m.g11 * m.g22 + m.g12 * m.g21;
    if (c == 0.0)
    {
        if (a == b)
            return PowerAllocation::equal();
        return a > b ? PowerAllocation{1.0, 0.0} : PowerAllocation{0.0, 1.0};
    }
    const double lambda0 = 0.5 + (a - b) / (2.0 * rho * c);
    const double lv = std::clamp(lambda0, 0.0, 1.0);
    return {lv, 1.0 - lv};
}

double equal_allocation_lower_bound(double o_v, double o_h, const LinkBudget &budget, double l_ru)
{
    check_nonnegative(o_v, "O^(V)");
    check_nonnegative(o_h, "O^(H)");
    const double rho = budget.snr;
    const double x = rho * (o_h + o_v) / 2.0 + rho * rho * o_h * o_v * xpd_factor(l_ru) / 4.0;
    return log2_1p(x);
}

double single_pol_upper_bound(double o_v, const LinkBudget &budget, double l_ru)
{
    check_nonnegative(o_v, "O^(V)");
    if (!(l_ru >= 0.0 && l_ru <= 1.0))
        throw std::invalid_argument("single_pol_upper_bound: l_RU must lie in [0, 1]");
    return log2_1p(budget.snr * (1.0 - l_ru) * o_v);
}

ThresholdCoefficients xpd_threshold_coefficients(double o_v, double o_h, const LinkBudget &budget)
{
    const double rho = budget.snr;
    ThresholdCoefficients k;
    k.a = rho * rho * o_v * (0.5 * o_h - o_v);
    k.b = rho * rho * o_v * (2.0 * o_v - 0.5 * o_h) + 2.0 * rho * o_v;
    k.c = rho * rho * o_v * (0.25 * o_h - o_v) + rho * (0.5 * o_h - 1.5 * o_v);
    return k;
}

double xpd_threshold(double o_v, double o_h, const LinkBudget &budget)
{
    if (!(o_v > 0.0) || !(o_h > 0.0))
        throw std::invalid_argument("xpd_threshold: O^(V) and O^(H) must be positive");
    budget.validate();

    const auto [a, b, c] = xpd_threshold_coefficients(o_v, o_h, budget);
    const double disc = b * b - 4.0 * a * c;
    const std::map<std::string, double> payload{{"a", a}, {"b", b}, {"c", c}, {"discriminant", disc}};

    if (!(disc >= 0.0))
        throw model_inconsistency("xpd_threshold: threshold quadratic has no real root", payload);
    if (!(c < 0.0))
        throw model_inconsistency("xpd_threshold: dual bound already exceeds twice the single bound at l_RU = 0",
                                  payload);

    // (-b + sqrt(D)) / (2a), rearranged to avoid cancellation.
    const double s = std::sqrt(disc);
    double root;
    if (b >= 0.0)
        root = 2.0 * c / (-b - s);
    else
        root = (-b + s) / (2.0 * a);

    if (!(root > 0.0 && root < 1.0))
    {
        auto p = payload;
        p["root"] = root;
        throw model_inconsistency("xpd_threshold: root lies outside (0, 1)", p);
    }
    return root;
}

double multiplexing_gain(std::span<const double> rhos, std::span<const double> capacities, double window_low,
                         double window_high)
{
    if (rhos.size() != capacities.size())
        throw std::invalid_argument("multiplexing_gain: rho and capacity lengths differ");

    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < rhos.size(); ++i)
        if (rhos[i] >= window_low && rhos[i] <= window_high)
        {
            xs.push_back(std::log2(rhos[i]));
            ys.push_back(capacities[i]);
        }
    if (xs.size() < 2)
        throw std::invalid_argument("multiplexing_gain: need at least two points in the high-SNR window");

    const double n = static_cast<double>(xs.size());
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i)
    {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    if (sxx == 0.0)
        throw std::invalid_argument("multiplexing_gain: rho values must be distinct");
    return sxy / sxx;
}

// ---- Monte Carlo ----------------------------------------------------------

namespace
{

McEstimate summarize(const std::vector<double> &values)
{
    McEstimate e;
    const std::size_t n = values.size();
    if (n == 0)
        return e;
    double sum = 0.0;
    for (double v : values)
        sum += v;
    e.mean = sum / static_cast<double>(n);
    if (n > 1)
    {
        double ss = 0.0;
        for (double v : values)
            ss += (v - e.mean) * (v - e.mean);
        e.std_error = std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n));
    }
    return e;
}

// G_ij = w_ij^T u_ij with u_ij = L^T (sqrt(beta_ij) .* Gamma_j .* b_jj): the
// same draw as sample_channel followed by equivalent_channel, in O(N).
struct Projections
{
    std::array<ComplexVector, 4> u;
};

Projections make_projections(const LinkModel &link)
{
    const ComplexVector xv = link.configuration.coefficients_v().cwiseProduct(link.propagation.copol_v);
    const ComplexVector xh = link.configuration.coefficients_h().cwiseProduct(link.propagation.copol_h);
    const auto &pl = link.statistics.pathloss;
    const RealMatrix Lt = link.statistics.correlation_sqrt.transpose();
    auto project = [&](const ComplexVector &x, const RealVector &beta) -> ComplexVector {
        return Lt.cast<Complex>() * x.cwiseProduct(beta.cwiseSqrt().cast<Complex>());
    };
    return {{project(xv, pl.vv), project(xh, pl.vh), project(xv, pl.hv), project(xh, pl.hh)}};
}

} // namespace

MonteCarloResult run_monte_carlo(const LinkModel &link, const PowerAllocation &allocation,
                                 std::span<const double> snrs, const MonteCarloOptions &options)
{
    allocation.validate();
    for (double rho : snrs)
        if (!(rho >= 0.0) || !std::isfinite(rho))
            throw std::invalid_argument("run_monte_carlo: snr values must be finite and non-negative");
    if (options.trials == 0)
        throw std::invalid_argument("run_monte_carlo: trials must be at least 1");

    const std::size_t trials = options.trials;
    const std::size_t n_snr = snrs.size();
    const auto n = static_cast<Eigen::Index>(link.geometry.element_count());
    const Projections proj = make_projections(link);
    const SeededStreamFactory factory(options.master_seed);
    const double lv = allocation.lambda_v;
    const double lh = allocation.lambda_h;

    std::vector<std::vector<double>> dual(n_snr, std::vector<double>(trials));
    std::vector<std::vector<double>> single(n_snr, std::vector<double>(trials));
    std::array<std::vector<double>, 4> mom;
    for (auto &m : mom)
        m.resize(trials);

    auto work = [&](std::size_t begin, std::size_t end) {
        ComplexVector w(n);
        for (std::size_t t = begin; t < end; ++t)
        {
            RandomStream rng = factory.stream(t);
            Eigen::Matrix2cd G;
            std::array<Complex, 4> g;
            for (std::size_t b = 0; b < 4; ++b)
            {
                rng.fill_complex_normal(w);
                g[b] = (w.transpose() * proj.u[b])(0, 0);
            }
            G << g[0], g[1], g[2], g[3];

            const double a11 = lv * std::norm(G(0, 0)) + lh * std::norm(G(0, 1));
            const double a22 = lv * std::norm(G(1, 0)) + lh * std::norm(G(1, 1));
            // det(G Lambda G^H) = lambda_v lambda_h |det G|^2.
            const double cross = lv * lh * std::norm(G(0, 0) * G(1, 1) - G(0, 1) * G(1, 0));
            for (std::size_t k = 0; k < n_snr; ++k)
            {
                const double rho = snrs[k];
                dual[k][t] = log2_1p(rho * (a11 + a22) + rho * rho * cross);
                single[k][t] = log2_1p(rho * std::norm(G(0, 0)));
            }
            for (std::size_t b = 0; b < 4; ++b)
                mom[b][t] = std::norm(g[b]);
        }
    };

    unsigned workers = options.workers == 0 ? std::max(1u, std::thread::hardware_concurrency()) : options.workers;
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, trials));
    if (workers <= 1)
        work(0, trials);
    else
    {
        std::vector<std::jthread> pool;
        const std::size_t chunk = (trials + workers - 1) / workers;
        for (unsigned i = 0; i < workers; ++i)
        {
            const std::size_t begin = i * chunk;
            const std::size_t end = std::min(trials, begin + chunk);
            if (begin < end)
                pool.emplace_back(work, begin, end);
        }
    }

    MonteCarloResult r;
    r.snr.assign(snrs.begin(), snrs.end());
    r.trials = trials;
    r.master_seed = options.master_seed;
    for (std::size_t b = 0; b < 4; ++b)
        r.moments[b] = summarize(mom[b]);
    for (std::size_t k = 0; k < n_snr; ++k)
    {
        r.dual.push_back(summarize(dual[k]));
        r.single.push_back(summarize(single[k]));
        r.moment_bound.push_back(moment_upper_bound(r.moment_means(), allocation, LinkBudget{snrs[k]}));
    }
    return r;
}

McEstimate ergodic_capacity_mc(const LinkModel &link, const PowerAllocation &allocation, const LinkBudget &budget,
                               const MonteCarloOptions &options)
{
    const double rho = budget.snr;
    return run_monte_carlo(link, allocation, std::span<const double>(&rho, 1), options).dual.front();
}

McEstimate single_pol_capacity_mc(const LinkModel &link, const LinkBudget &budget, const MonteCarloOptions &options)
{
    const double rho = budget.snr;
    return run_monte_carlo(link, PowerAllocation{1.0, 0.0}, std::span<const double>(&rho, 1), options).single.front();
}

CapacityReport evaluate_capacity(const LinkModel &link, const PowerAllocation &allocation, const LinkBudget &budget,
                                 const MonteCarloOptions &options)
{
    budget.validate();
    const double rho = budget.snr;
    const auto mc = run_monte_carlo(link, allocation, std::span<const double>(&rho, 1), options);
    const double l = link.statistics.inputs.xpd_coefficient;

    CapacityReport rep;
    rep.mc_estimate = mc.dual.front();
    rep.single_mc = mc.single.front();
    rep.moment_bound = mc.moment_bound.front();
    rep.moment_estimates = mc.moments;
    rep.exact_moments = exact_moments(link.configuration, link.propagation, link.statistics);
    rep.o_v = link.o_v;
    rep.o_h = link.o_h;
    rep.allocation = allocation;
    rep.budget = budget;
    if (link.phase_scheme == PhaseScheme::Random)
    {
        rep.upper_bound = moment_upper_bound(rep.exact_moments, allocation, budget);
        rep.single_upper_bound = log2_1p(rho * rep.exact_moments.g11);
    }
    else
    {
        rep.upper_bound = closed_form_upper_bound(link.o_v, link.o_h, allocation, budget, l);
        rep.single_upper_bound = single_pol_upper_bound(link.o_v, budget, l);
    }
    rep.captured_power = captured_power_fraction(link.propagation);
    rep.trials = mc.trials;
    rep.seed = mc.master_seed;
    return rep;
}

} // namespace dpris
