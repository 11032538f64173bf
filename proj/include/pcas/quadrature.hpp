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

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <concepts>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "pcas/cutoff.hpp"
#include "pcas/error.hpp"

namespace pcas::quad {

enum class Transform { rational, none };

struct QuadratureConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    int max_subdivisions = 2000;
    Transform transform = Transform::rational;
};

/// rel_tol > 0, abs_tol > 0, max_subdivisions >= 8.
void validate(const QuadratureConfig& cfg);

template <std::floating_point T>
struct Estimate {
    T value{};
    T error{};
    long evaluations = 0;
};

namespace detail {

template <std::floating_point T>
struct Panel {
    T a, b, value, error, roundoff;
};

// 21-point Kronrod rule with the embedded 10-point Gauss rule as error
// estimate. Node tables come from Boost at full precision of T.
template <std::floating_point T, class F>
Panel<T> kronrod21(F& f, T a, T b)
{
    using K = boost::math::quadrature::gauss_kronrod<T, 21>;
    using G = boost::math::quadrature::gauss<T, 10>;
    const auto& xk = K::abscissa();
    const auto& wk = K::weights();
    const auto& wg = G::weights();

    const T center = (a + b) / 2;
    const T half = (b - a) / 2;
    const T fc = f(center);
    std::array<T, 21> fv;
    fv[0] = fc;
    T kron = wk[0] * fc;
    T gauss = 0;
    T absum = std::abs(kron);
    for (std::size_t i = 1; i < xk.size(); ++i) {
        const T dx = half * xk[i];
        const T f1 = f(center - dx);
        const T f2 = f(center + dx);
        fv[2 * i - 1] = f1;
        fv[2 * i] = f2;
        kron += wk[i] * (f1 + f2);
        absum += wk[i] * (std::abs(f1) + std::abs(f2));
        // Odd Kronrod nodes are the Gauss nodes.
        if (i % 2 == 1) gauss += wg[i / 2] * (f1 + f2);
    }
    // QUADPACK error scaling: |K - G| is rescaled by the spread of f on the
    // panel so that smooth panels are not charged the full Gauss error.
    const T mean = kron / 2;
    T spread = wk[0] * std::abs(fc - mean);
    for (std::size_t i = 1; i < xk.size(); ++i)
        spread += wk[i] * (std::abs(fv[2 * i - 1] - mean) + std::abs(fv[2 * i] - mean));
    const T scale = std::abs(half);
    spread *= scale;
    T err = std::abs((kron - gauss) * half);
    if (spread != 0 && err != 0) err = spread * std::min(T(1), std::pow(200 * err / spread, T(1.5)));
    const T roundoff = 50 * std::numeric_limits<T>::epsilon() * absum * scale;
    return {a, b, kron * half, std::max(err, roundoff), roundoff};
}

} // namespace detail

/// Globally adaptive Kronrod integration of f over [a, b]. The panel with
/// the largest |Kronrod - Gauss| is bisected until the summed estimate
/// drops below max(abs_tol, rel_tol |I|) or to the accumulated roundoff
/// floor. Throws ConvergenceError after max_subdivisions bisections.
template <std::floating_point T, class F>
Estimate<T> integrate(F&& f, T a, T b, const QuadratureConfig& cfg, const std::string& name = "integral")
{
    if (!(b > a)) return {T(0), T(0), 0};
    using P = detail::Panel<T>;
    auto by_error = [](const P& x, const P& y) { return x.error < y.error; };

    std::vector<P> heap;
    heap.reserve(64);
    heap.push_back(detail::kronrod21<T>(f, a, b));
    long evals = 21;
    T total = heap.front().value;
    T err = heap.front().error;
    T roundoff = heap.front().roundoff;

    int splits = 0;
    for (;;) {
        const T target = std::max<T>(T(cfg.abs_tol), T(cfg.rel_tol) * std::abs(total));
        if (err <= target || err <= roundoff) break;
        if (splits >= cfg.max_subdivisions) throw ConvergenceError(name, total, err);

        std::pop_heap(heap.begin(), heap.end(), by_error);
        const P worst = heap.back();
        heap.pop_back();
        const T mid = (worst.a + worst.b) / 2;
        if (!(mid > worst.a && mid < worst.b)) {
            // Panel cannot be split further in T.
            heap.push_back(worst);
            std::push_heap(heap.begin(), heap.end(), by_error);
            throw ConvergenceError(name, total, err);
        }
        const P left = detail::kronrod21<T>(f, worst.a, mid);
        const P right = detail::kronrod21<T>(f, mid, worst.b);
        evals += 42;
        ++splits;
        heap.push_back(left);
        std::push_heap(heap.begin(), heap.end(), by_error);
        heap.push_back(right);
        std::push_heap(heap.begin(), heap.end(), by_error);

        // Re-sum from scratch in a fixed order to keep totals free of
        // drift after many updates.
        std::vector<P> ordered(heap);
        std::sort(ordered.begin(), ordered.end(), [](const P& x, const P& y) { return x.a < y.a; });
        total = 0;
        err = 0;
        roundoff = 0;
        for (const auto& p : ordered) {
            total += p.value;
            err += p.error;
            roundoff += p.roundoff;
        }
    }
    return {total, err, evals};
}

/// Integral of f over [lower, inf). With a known support end the integral is
/// taken over [lower, support_end] only and carries no tail error. Otherwise
/// the rational map t = lower + scale * s / (1 - s) turns the half line
/// into [0, 1); Transform::none without a support end is rejected.
template <std::floating_point T, class F>
Estimate<T> integrate_semi_infinite(F&& f, const QuadratureConfig& cfg, T lower = T(0),
                                    T scale = T(1), std::optional<T> support_end = std::nullopt,
                                    const std::string& name = "semi-infinite integral")
{
    if (support_end) {
        if (*support_end <= lower) return {T(0), T(0), 0};
        return integrate<T>(f, lower, *support_end, cfg, name);
    }
    if (cfg.transform == Transform::none)
        throw std::invalid_argument(name + ": Transform::none needs a finite support end");
    if (!(scale > 0)) throw std::invalid_argument(name + ": transform scale must be positive");
    auto mapped = [&](T s) -> T {
        const T one_minus = T(1) - s;
        const T t = lower + scale * s / one_minus;
        const T v = f(t);
        if (v == T(0)) return T(0);
        return v * scale / (one_minus * one_minus);
    };
    return integrate<T>(mapped, T(0), T(1), cfg, name);
}

/// Integration variable of F(u): transverse x (as written in the pressure
/// difference) or y = sqrt(x + u^2) after the substitution that reduces F to
/// a single tail integral of g.
enum class Strategy { direct_x, reduced_y };

/// Cutoff seen in the reduced wavenumber y = k d / pi: g~(y) = g(factor y).
struct ScaledCutoff {
    cutoff::CutoffSpec spec;
    long double factor = 1.0L;

    long double operator()(long double y) const { return cutoff::evaluate(spec, factor * y); }
    std::optional<long double> support_end() const;
    long double scale() const;
    /// g~(0), g~'(0), g~''(0) from the family's analytic values.
    cutoff::GDerivs derivatives_at_zero() const;
};

struct FReduced {
    ScaledCutoff cutoff;
    Strategy strategy = Strategy::reduced_y;
};

/// F(u) = u^2 int_0^inf dx g(sqrt(x+u^2)) / sqrt(x+u^2)    (direct_x)
///      = 2 u^2 int_u^inf g(y) dy                          (reduced_y)
/// F(0) = 0 exactly. Throws DomainError for u < 0.
Estimate<long double> F_eval(long double u, const FReduced& fr, const QuadratureConfig& cfg);

/// G(u) = int_u^inf g(y) dy, the tail integral inside the reduced form.
Estimate<long double> tail_integral(long double u, const ScaledCutoff& g, const QuadratureConfig& cfg);

/// Exact derivative identities of F in terms of g:
///   F'(u)   = 4u G(u) - 2u^2 g(u)
///   F'''(u) = -12 g(u) - 12u g'(u) - 2u^2 g''(u)
long double F_first_derivative(long double u, long double tail, long double g) noexcept;
long double F_third_derivative(long double u, long double g, long double g1, long double g2) noexcept;

struct FDerivatives {
    double value = 0.0;  // F(0)
    double first = 0.0;  // F'(0)
    double third = 0.0;  // F'''(0)
};

/// F(0), F'(0), F'''(0) from analytic g(0), g'(0), g''(0).
FDerivatives F_derivatives_at_zero(const FReduced& fr, const cutoff::GDerivs& g_derivs);
FDerivatives F_derivatives_at_zero(const FReduced& fr);

} // namespace pcas::quad
