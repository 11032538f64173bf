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

#include <cmath>
#include <concepts>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pcas/error.hpp"

/// The cutoff g(k) = h(t, r_S | k) f(k): the product of the bounded surface
/// expectation density and the photon wavenumber density. Only the product
/// enters any pressure, so it is modelled as one radial function with
/// g(0) = 1.
namespace pcas::cutoff {

enum class Family { plateau, exponential, supergauss, constant };

/// How a geometry maps a physical wavenumber onto the family argument.
/// `wavenumber`: the argument is k itself. `reduced`: the argument is
/// k d / pi for a plate gap d, so the same spec describes the same reduced
/// cutoff at every separation.
enum class Basis { wavenumber, reduced };

struct CutoffSpec {
    Family family = Family::plateau;
    double scale = 1.0;          // k_c (exponential, supergauss)
    double plateau_start = 30.0; // u0
    double plateau_end = 60.0;   // u1
    double exponent = 8.0;       // p (supergauss)
    double level = 1.0;          // constant family value
    double bound = 1.0;          // H
    Basis basis = Basis::reduced;

    bool operator==(const CutoffSpec&) const = default;
};

CutoffSpec plateau(double u0, double u1, Basis basis = Basis::reduced);
CutoffSpec exponential(double kc, Basis basis = Basis::wavenumber);
CutoffSpec supergauss(double kc, double p, Basis basis = Basis::wavenumber);
/// g == level everywhere. Not a valid cutoff; used for degenerate cases and
/// for exercising the validator.
CutoffSpec constant(double level, Basis basis = Basis::wavenumber);

/// Family parameter invariants (u0 < u1, k_c > 0, ...). Throws
/// std::invalid_argument.
void check_parameters(const CutoffSpec& spec);

/// Parse `family:key=value,...`, e.g. `plateau:u0=30,u1=60`, `exp:kc=50`,
/// `supergauss:kc=50,p=8`, `const:value=0`. Extra keys: `H=` (bound) and
/// `basis=reduced|k`. `default_basis` applies when no basis key is given.
CutoffSpec parse(std::string_view text, Basis default_basis);
std::string to_string(const CutoffSpec& spec);
std::string_view family_name(Family f) noexcept;

/// Point past which g is identically zero, if it has one.
std::optional<double> support_end(const CutoffSpec& spec);

/// Width over which g falls off; used to scale semi-infinite transforms and
/// proposal distributions.
double natural_scale(const CutoffSpec& spec);

namespace detail {

template <std::floating_point T>
T plateau_value(T k, T u0, T u1)
{
    if (k <= u0) return T(1);
    if (k >= u1) return T(0);
    const T s = (k - u0) / (u1 - u0);
    // 1 / (1 + phi(s)/phi(1-s)), phi(x) = exp(-1/x)
    const T expo = T(1) / (T(1) - s) - T(1) / s;
    if (expo > T(700)) return T(0);
    return T(1) / (T(1) + std::exp(expo));
}

} // namespace detail

/// g(k). Throws DomainError for k < 0.
template <std::floating_point T>
T evaluate(const CutoffSpec& spec, T k)
{
    if (k < T(0) || std::isnan(k)) throw DomainError("cutoff evaluated at negative wavenumber");
    switch (spec.family) {
    case Family::plateau:
        return detail::plateau_value<T>(k, T(spec.plateau_start), T(spec.plateau_end));
    case Family::exponential:
        return std::exp(-k / T(spec.scale));
    case Family::supergauss:
        return std::exp(-std::pow(k / T(spec.scale), T(spec.exponent)));
    case Family::constant:
        return T(spec.level);
    }
    return T(0);
}

/// Analytic g(0), g'(0), g''(0) for the family. Infinite entries mark a
/// derivative that diverges at the origin (supergauss with p < 2).
struct GDerivs {
    double value = 1.0;
    double first = 0.0;
    double second = 0.0;
};
GDerivs derivatives_at_zero(const CutoffSpec& spec);

struct Check {
    std::string name;
    bool passed = false;
    double measured = 0.0;
    std::string detail;
};

struct ValidationReport {
    std::vector<Check> checks;

    bool passed() const;
    std::vector<const Check*> failures() const;
};

/// Grid-based check of the cutoff conditions: g(0) = 1, 0 <= g <= H,
/// non-increasing, finite second and fourth moments with a negligible tail,
/// and forward-difference derivatives of orders 1..4 vanishing at 0.
/// Failures are reported, never thrown.
ValidationReport validate(const CutoffSpec& spec, double grid_max, int grid_points);

/// grid_max wide enough that the tail check is meaningful for the family.
double default_grid_max(const CutoffSpec& spec);

} // namespace pcas::cutoff
