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

#include "pcas/quadrature.hpp"

#include <stdexcept>

namespace pcas::quad {

void validate(const QuadratureConfig& cfg)
{
    if (!(cfg.rel_tol > 0) || !(cfg.abs_tol > 0))
        throw std::invalid_argument("quadrature tolerances must be positive");
    if (cfg.max_subdivisions < 8)
        throw std::invalid_argument("quadrature needs max_subdivisions >= 8");
}

std::optional<long double> ScaledCutoff::support_end() const
{
    if (auto end = cutoff::support_end(spec)) return static_cast<long double>(*end) / factor;
    return std::nullopt;
}

long double ScaledCutoff::scale() const
{
    return static_cast<long double>(cutoff::natural_scale(spec)) / factor;
}

cutoff::GDerivs ScaledCutoff::derivatives_at_zero() const
{
    auto d = cutoff::derivatives_at_zero(spec);
    const double f = static_cast<double>(factor);
    d.first *= f;
    d.second *= f * f;
    return d;
}

Estimate<long double> tail_integral(long double u, const ScaledCutoff& g, const QuadratureConfig& cfg)
{
    if (u < 0) throw DomainError("tail integral needs u >= 0");
    const auto end = g.support_end();
    if (end) {
        if (u >= *end) return {0.0L, 0.0L, 0};
        // Split at the plateau edge so panels do not straddle the kink in
        // smoothness class between the flat part and the transition.
        if (g.spec.family == cutoff::Family::plateau) {
            const long double flat_end = static_cast<long double>(g.spec.plateau_start) / g.factor;
            if (u < flat_end) {
                auto flat = integrate<long double>(g, u, flat_end, cfg, "tail integral (plateau)");
                auto edge = integrate<long double>(g, flat_end, *end, cfg, "tail integral (transition)");
                return {flat.value + edge.value, flat.error + edge.error, flat.evaluations + edge.evaluations};
            }
        }
        return integrate<long double>(g, u, *end, cfg, "tail integral");
    }
    return integrate_semi_infinite<long double>(g, cfg, u, g.scale(), std::nullopt, "tail integral");
}

Estimate<long double> F_eval(long double u, const FReduced& fr, const QuadratureConfig& cfg)
{
    if (u < 0 || std::isnan(u)) throw DomainError("F(u) needs u >= 0");
    if (u == 0) return {0.0L, 0.0L, 0};
    const ScaledCutoff& g = fr.cutoff;
    const long double u2 = u * u;
    // abs_tol refers to F itself; the inner integral is multiplied by up to
    // 2 u^2, so its own absolute target shrinks accordingly.
    QuadratureConfig inner_cfg = cfg;
    if (u2 > 1) inner_cfg.abs_tol = static_cast<double>(cfg.abs_tol / (2 * u2));

    if (fr.strategy == Strategy::reduced_y) {
        auto tail = tail_integral(u, g, inner_cfg);
        return {2 * u2 * tail.value, 2 * u2 * tail.error, tail.evaluations};
    }

    auto integrand = [&](long double x) -> long double {
        const long double r = std::sqrt(x + u2);
        return g(r) / r;
    };
    Estimate<long double> inner;
    if (const auto end = g.support_end()) {
        const long double x_end = (*end) * (*end) - u2;
        if (x_end <= 0) return {0.0L, 0.0L, 0};
        long double x_break = -1;
        if (g.spec.family == cutoff::Family::plateau) {
            const long double flat_end = static_cast<long double>(g.spec.plateau_start) / g.factor;
            x_break = flat_end * flat_end - u2;
        }
        if (x_break > 0) {
            auto a = integrate<long double>(integrand, 0.0L, x_break, inner_cfg, "F direct-x (plateau)");
            auto b = integrate<long double>(integrand, x_break, x_end, inner_cfg, "F direct-x (transition)");
            inner = {a.value + b.value, a.error + b.error, a.evaluations + b.evaluations};
        } else {
            inner = integrate<long double>(integrand, 0.0L, x_end, inner_cfg, "F direct-x");
        }
    } else {
        // e-folding length in x of g(sqrt(x+u^2)) is about 2 s sqrt(x+u^2).
        const long double s = g.scale();
        const long double x_scale = 2 * s * std::max(u, s);
        inner = integrate_semi_infinite<long double>(integrand, inner_cfg, 0.0L, x_scale, std::nullopt, "F direct-x");
    }
    return {u2 * inner.value, u2 * inner.error, inner.evaluations};
}

long double F_first_derivative(long double u, long double tail, long double g) noexcept
{
    return 4 * u * tail - 2 * u * u * g;
}

long double F_third_derivative(long double u, long double g, long double g1, long double g2) noexcept
{
    // At u = 0 the u-weighted terms vanish even where g' or g'' diverge.
    if (u == 0) return -12 * g;
    return -12 * g - 12 * u * g1 - 2 * u * u * g2;
}

FDerivatives F_derivatives_at_zero(const FReduced&, const cutoff::GDerivs& g_derivs)
{
    // F(0) = 2*0^2*G(0) and F'(0) = 4*0*G(0) - 0: both vanish because G(0) is
    // finite for every cutoff whose tail integrates.
    FDerivatives d;
    d.value = 0.0;
    d.first = static_cast<double>(F_first_derivative(0.0L, 0.0L, g_derivs.value));
    d.third = static_cast<double>(F_third_derivative(0.0L, g_derivs.value, g_derivs.first, g_derivs.second));
    return d;
}

FDerivatives F_derivatives_at_zero(const FReduced& fr)
{
    return F_derivatives_at_zero(fr, fr.cutoff.derivatives_at_zero());
}

} // namespace pcas::quad
