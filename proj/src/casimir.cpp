/*
   Copyright 2026 The pcas Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include "pcas/casimir.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "pcas/error.hpp"

namespace pcas::casimir {

namespace {

constexpr long double pi_l = std::numbers::pi_v<long double>;

std::string describe(const PlateGeometry& geom)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "plates d=%.12g", geom.gap);
    return buf;
}

std::string describe(const BallGeometry& geom)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "ball a=%.12g", geom.radius);
    return buf;
}

PressureResult make_result(long double value, long double error, Method method, const cutoff::CutoffSpec& g,
                           std::string geometry, const UnitSystem& units)
{
    PressureResult r;
    r.value = static_cast<double>(value);
    r.numerical_error = static_cast<double>(std::abs(error));
    r.method = method;
    r.cutoff = g;
    r.geometry = std::move(geometry);
    r.units = units;
    if (!std::isfinite(r.value)) throw std::runtime_error("non-finite result for " + r.geometry);
    return r;
}

// Number of modes n >= 1 with n < end, for a compact reduced cutoff.
std::size_t modes_below(long double end)
{
    if (end <= 1) return 0;
    return static_cast<std::size_t>(std::ceil(end)) - 1;
}

} // namespace

void validate(const PlateGeometry& geom)
{
    if (!(geom.gap > 0) || !std::isfinite(geom.gap)) throw std::invalid_argument("plate gap d must be positive");
    if (!(geom.box_x > 0) || !(geom.box_y > 0) || !(geom.box_z > 0))
        throw std::invalid_argument("box lengths must be positive");
}

void validate(const BallGeometry& geom)
{
    if (!(geom.radius > 0) || !std::isfinite(geom.radius))
        throw std::invalid_argument("ball radius a must be positive");
}

std::string_view to_string(Method m) noexcept
{
    switch (m) {
    case Method::raw_kspace: return "raw-kspace";
    case Method::reduced: return "reduced";
    case Method::boundary_terms: return "boundary-terms";
    case Method::monte_carlo: return "monte-carlo";
    }
    return "?";
}

double family_argument_factor(const cutoff::CutoffSpec& spec, const PlateGeometry& geom)
{
    return spec.basis == cutoff::Basis::reduced ? geom.gap / std::numbers::pi : 1.0;
}

quad::ScaledCutoff reduced_cutoff(const cutoff::CutoffSpec& spec, const PlateGeometry& geom)
{
    validate(geom);
    quad::ScaledCutoff g;
    g.spec = spec;
    g.factor = spec.basis == cutoff::Basis::reduced ? 1.0L : pi_l / static_cast<long double>(geom.gap);
    return g;
}

double reduced_prefactor(const PlateGeometry& geom, const UnitSystem& units)
{
    const long double d = geom.gap;
    return static_cast<double>(pi_l * pi_l * units.hbar_c() / (4 * d * d * d * d));
}

double casimir_reference(const PlateGeometry& geom, const UnitSystem& units)
{
    const long double d = geom.gap;
    return static_cast<double>(-pi_l * pi_l * units.hbar_c() / (240 * d * d * d * d));
}

quad::Estimate<long double> cubic_moment(const cutoff::CutoffSpec& spec, double argument_factor,
                                         const quad::QuadratureConfig& cfg)
{
    // Integrate in the family variable y = factor * k, then rescale by
    // factor^-4.
    auto integrand = [&](long double y) { return y * y * y * cutoff::evaluate(spec, y); };
    std::optional<long double> end;
    if (auto e = cutoff::support_end(spec)) end = *e;
    quad::Estimate<long double> j;
    if (spec.family == cutoff::Family::plateau) {
        const long double u0 = spec.plateau_start;
        auto a = quad::integrate<long double>(integrand, 0.0L, u0, cfg, "k^3 g moment (plateau)");
        auto b = quad::integrate<long double>(integrand, u0, *end, cfg, "k^3 g moment (transition)");
        j = {a.value + b.value, a.error + b.error, a.evaluations + b.evaluations};
    } else {
        j = quad::integrate_semi_infinite<long double>(integrand, cfg, 0.0L,
                                                       static_cast<long double>(cutoff::natural_scale(spec)),
                                                       end, "k^3 g moment");
    }
    const long double f = argument_factor;
    const long double f4 = f * f * f * f;
    return {j.value / f4, j.error / f4, j.evaluations};
}

PressureResult pressure_in(const cutoff::CutoffSpec& g, const PlateGeometry& geom, const UnitSystem& units,
                           const quad::QuadratureConfig& cfg)
{
    validate(geom);
    quad::validate(cfg);
    const auto moment = cubic_moment(g, family_argument_factor(g, geom), cfg);
    const long double pref = units.hbar_c() / (6 * pi_l * pi_l);
    return make_result(pref * moment.value, pref * moment.error, Method::raw_kspace, g, describe(geom), units);
}

quad::Estimate<long double> reduced_mode_integral(const quad::FReduced& fr, const quad::QuadratureConfig& cfg)
{
    // Integrate `f` over the same pieces as the main integral.
    const auto end = fr.cutoff.support_end();
    auto over_pieces = [&](auto&& f, const quad::QuadratureConfig& c, const std::string& name) {
        if (end && fr.cutoff.spec.family == cutoff::Family::plateau) {
            const long double flat_end = static_cast<long double>(fr.cutoff.spec.plateau_start) / fr.cutoff.factor;
            auto a = quad::integrate<long double>(f, 0.0L, flat_end, c, name + " (plateau)");
            auto b = quad::integrate<long double>(f, flat_end, *end, c, name + " (transition)");
            return quad::Estimate<long double>{a.value + b.value, a.error + b.error, a.evaluations + b.evaluations};
        }
        return quad::integrate_semi_infinite<long double>(f, c, 0.0L, fr.cutoff.scale(), end, name);
    };
    auto F = [&](long double u) { return quad::F_eval(u, fr, cfg).value; };
    auto out = over_pieces(F, cfg, "int F(u) du");

    // The inner errors of F(u) integrate to their own contribution; a coarse
    // pass over the error estimates is enough to size it.
    quad::QuadratureConfig coarse = cfg;
    coarse.rel_tol = 0.1;
    coarse.abs_tol = std::numeric_limits<double>::min();
    auto err = [&](long double u) { return quad::F_eval(u, fr, cfg).error; };
    long double inner = 0;
    try {
        const auto e = over_pieces(err, coarse, "inner error of int F(u) du");
        inner = e.value + e.error;
    } catch (const ConvergenceError& e) {
        inner = e.best_estimate() + e.error_estimate();
    }
    out.error += inner;
    return out;
}

kernels::SeriesSum reduced_mode_sum(const quad::FReduced& fr, const quad::QuadratureConfig& cfg,
                                    const SeriesConfig& series)
{
    kernels::SeriesPolicy policy;
    policy.abs_tol = cfg.abs_tol;
    policy.max_terms = series.max_terms;
    if (const auto end = fr.cutoff.support_end()) policy.exact_terms = modes_below(*end);
    auto term = [&](std::size_t n) { return quad::F_eval(static_cast<long double>(n), fr, cfg); };
    return kernels::series_sum(term, policy, series.workers);
}

PressureResult pressure_in_reduced(const cutoff::CutoffSpec& g, const PlateGeometry& geom,
                                   const UnitSystem& units, const quad::QuadratureConfig& cfg,
                                   quad::Strategy strategy)
{
    quad::validate(cfg);
    const quad::FReduced fr{reduced_cutoff(g, geom), strategy};
    const auto integral = reduced_mode_integral(fr, cfg);
    const long double pref = reduced_prefactor(geom, units);
    return make_result(pref * integral.value, pref * integral.error, Method::reduced, g, describe(geom), units);
}

quad::Estimate<long double> pressure_out_term(std::size_t n, const cutoff::CutoffSpec& g,
                                              const PlateGeometry& geom, const UnitSystem& units,
                                              const quad::QuadratureConfig& cfg)
{
    validate(geom);
    if (n < 1) throw std::invalid_argument("mode index must be >= 1");
    const long double d = geom.gap;
    const long double phi = family_argument_factor(g, geom);
    const long double kn = static_cast<long double>(n) * pi_l / d;
    const long double kn2 = kn * kn;
    // Quarter plane: dk_x dk_y = rho d rho d theta, theta in [0, pi/2).
    const long double pref = units.hbar_c() / (pi_l * pi_l * d) * (pi_l / 2) * kn2;
    // abs_tol is meant for the dimensionless term F(n); translate it to the
    // units of the radial integral so both forms stop at the same accuracy.
    quad::QuadratureConfig radial_cfg = cfg;
    radial_cfg.abs_tol = static_cast<double>(cfg.abs_tol * reduced_prefactor(geom, units) / pref);
    auto integrand = [&](long double rho) {
        const long double k = std::sqrt(rho * rho + kn2);
        return rho * cutoff::evaluate(g, phi * k) / k;
    };

    quad::Estimate<long double> radial;
    if (const auto end = cutoff::support_end(g)) {
        const long double k_end = static_cast<long double>(*end) / phi;
        if (k_end <= kn) return {0.0L, 0.0L, 0};
        const long double rho_end = std::sqrt(k_end * k_end - kn2);
        long double rho_break = -1;
        if (g.family == cutoff::Family::plateau) {
            const long double k_flat = static_cast<long double>(g.plateau_start) / phi;
            if (k_flat > kn) rho_break = std::sqrt(k_flat * k_flat - kn2);
        }
        if (rho_break > 0) {
            auto a = quad::integrate<long double>(integrand, 0.0L, rho_break, radial_cfg, "P_out term (plateau)");
            auto b = quad::integrate<long double>(integrand, rho_break, rho_end, radial_cfg, "P_out term (transition)");
            radial = {a.value + b.value, a.error + b.error, a.evaluations + b.evaluations};
        } else {
            radial = quad::integrate<long double>(integrand, 0.0L, rho_end, radial_cfg, "P_out term");
        }
    } else {
        const long double s = static_cast<long double>(cutoff::natural_scale(g)) / phi;
        radial = quad::integrate_semi_infinite<long double>(integrand, radial_cfg, 0.0L, s, std::nullopt, "P_out term");
    }
    return {pref * radial.value, pref * radial.error, radial.evaluations};
}

kernels::SeriesSum pressure_out_series(const cutoff::CutoffSpec& g, const PlateGeometry& geom,
                                       const UnitSystem& units, const quad::QuadratureConfig& cfg,
                                       const SeriesConfig& series)
{
    validate(geom);
    quad::validate(cfg);
    // Terms are compared against abs_tol in reduced (dimensionless) form.
    const long double pref = reduced_prefactor(geom, units);
    kernels::SeriesPolicy policy;
    policy.abs_tol = cfg.abs_tol;
    policy.max_terms = series.max_terms;
    if (const auto end = reduced_cutoff(g, geom).support_end()) policy.exact_terms = modes_below(*end);
    auto term = [&](std::size_t n) {
        auto e = pressure_out_term(n, g, geom, units, cfg);
        return quad::Estimate<long double>{e.value / pref, e.error / pref, e.evaluations};
    };
    auto s = kernels::series_sum(term, policy, series.workers);
    for (auto& v : s.values) v *= pref;
    s.sum *= pref;
    s.error *= pref;
    return s;
}

PressureResult pressure_out(const cutoff::CutoffSpec& g, const PlateGeometry& geom, const UnitSystem& units,
                            const quad::QuadratureConfig& cfg, const SeriesConfig& series)
{
    const auto s = pressure_out_series(g, geom, units, cfg, series);
    return make_result(s.sum, s.error, Method::raw_kspace, g, describe(geom), units);
}

PressureResult pressure_out_reduced(const cutoff::CutoffSpec& g, const PlateGeometry& geom,
                                    const UnitSystem& units, const quad::QuadratureConfig& cfg,
                                    const SeriesConfig& series, quad::Strategy strategy)
{
    quad::validate(cfg);
    const quad::FReduced fr{reduced_cutoff(g, geom), strategy};
    const auto s = reduced_mode_sum(fr, cfg, series);
    const long double pref = reduced_prefactor(geom, units);
    return make_result(pref * s.sum, pref * s.error, Method::reduced, g, describe(geom), units);
}

double boundary_terms(const quad::FDerivatives& d) noexcept
{
    return -d.value / 2.0 - d.first / 12.0 + d.third / 720.0;
}

EulerMaclaurin euler_maclaurin(const cutoff::CutoffSpec& g, const PlateGeometry& geom,
                               const quad::QuadratureConfig& cfg, const SeriesConfig& series,
                               quad::Strategy strategy)
{
    quad::validate(cfg);
    const quad::FReduced fr{reduced_cutoff(g, geom), strategy};
    const double boundary = boundary_terms(quad::F_derivatives_at_zero(fr));

    // Sum and integral are each about (2/3) int y^3 g(y) dy while their
    // difference is about the boundary value, so the tolerance asked of the
    // difference is passed down to the pieces in relative form.
    quad::QuadratureConfig piece = cfg;
    const long double size =
        2.0L / 3.0L * std::abs(cubic_moment(g, static_cast<double>(fr.cutoff.factor), cfg).value);
    if (size > 0 && boundary != 0) {
        const long double target = cfg.rel_tol * std::abs(boundary);
        piece.rel_tol = static_cast<double>(std::max(target / size, 1e-16L));
        piece.rel_tol = std::min(piece.rel_tol, cfg.rel_tol);
        piece.abs_tol = std::min(cfg.abs_tol, static_cast<double>(target) * 1e-3);
    }
    const auto s = reduced_mode_sum(fr, piece, series);
    const auto i = reduced_mode_integral(fr, piece);
    EulerMaclaurin em;
    em.sum = s.sum;
    em.sum_error = s.error;
    em.terms = s.terms;
    em.integral = i.value;
    em.integral_error = i.error;
    em.difference = s.sum - i.value;
    em.difference_error = s.error + i.error;
    em.boundary = boundary;
    return em;
}

PressureResult net_pressure_direct(const cutoff::CutoffSpec& g, const PlateGeometry& geom,
                                   const UnitSystem& units, const quad::QuadratureConfig& cfg,
                                   const SeriesConfig& series)
{
    const auto em = euler_maclaurin(g, geom, cfg, series);
    const long double pref = reduced_prefactor(geom, units);
    return make_result(pref * em.difference, pref * em.difference_error, Method::reduced, g, describe(geom),
                       units);
}

PressureResult net_pressure_boundary(const cutoff::CutoffSpec& g, const PlateGeometry& geom,
                                     const UnitSystem& units)
{
    const quad::FReduced fr{reduced_cutoff(g, geom), quad::Strategy::reduced_y};
    const double em = boundary_terms(quad::F_derivatives_at_zero(fr));
    return make_result(static_cast<long double>(reduced_prefactor(geom, units)) * em, 0.0L,
                       Method::boundary_terms, g, describe(geom), units);
}

PressureResult ball_force(const cutoff::CutoffSpec& g, const BallGeometry& geom, const UnitSystem& units,
                          const quad::QuadratureConfig& cfg)
{
    validate(geom);
    quad::validate(cfg);
    if (g.basis == cutoff::Basis::reduced)
        throw std::invalid_argument("ball force needs the cutoff in physical wavenumbers (basis=k)");
    const auto moment = cubic_moment(g, 1.0, cfg);
    const long double a = geom.radius;
    const long double pref = 2 * a * a * units.hbar_c() / (3 * pi_l);
    return make_result(pref * moment.value, pref * moment.error, Method::raw_kspace, g, describe(geom), units);
}

} // namespace pcas::casimir
