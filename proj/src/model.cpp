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

#include "pcas/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "pcas/error.hpp"

namespace pcas {

UnitSystem parse_units(std::string_view name)
{
    if (name == "natural") return UnitSystem::natural();
    if (name == "si") return UnitSystem::si();
    throw std::invalid_argument("unknown unit system '" + std::string(name) + "'");
}

std::string_view to_string(UnitMode mode) noexcept
{
    return mode == UnitMode::si ? "si" : "natural";
}

} // namespace pcas

namespace pcas::model {

using std::numbers::pi;

void validate(const SourceParams& src)
{
    if (!(src.emission_amplitude > 0) || !(src.angular_frequency > 0) || !(src.density_scale > 0))
        throw std::invalid_argument("source parameters A_s, omega, A must be positive");
}

void validate(const ReflectorState& wall)
{
    if (!(wall.amplitude >= 0.0 && wall.amplitude <= 0.5))
        throw std::invalid_argument("reflector amplitude C must lie in [0, 1/2]");
}

ModeIndex::ModeIndex(long n) : n_(n)
{
    if (n < 1) throw std::invalid_argument("mode index must be >= 1");
}

double emission_density(double t, PhotonSign sign, const SourceParams& src)
{
    return 0.5 * src.emission_amplitude *
           (1.0 + sign.value() * std::cos(src.angular_frequency * t));
}

double spacetime_density(double t, double r, double omega, PhotonSign sign,
                         const SourceParams& src, const UnitSystem& units)
{
    if (!(r > 0)) throw DomainError("spacetime density is singular at r = 0");
    const double retarded = omega * (t - r / units.c);
    return src.density_scale / (8.0 * pi * r * r) * (1.0 + sign.value() * std::cos(retarded));
}

double scalar_field(double hplus, double hminus, double field_constant)
{
    if (hplus < 0 || hminus < 0) throw DomainError("photon densities must be non-negative");
    const double total = hplus + hminus;
    if (!(total > 0)) throw DomainError("scalar field undefined for zero total density");
    return field_constant * (hplus - hminus) / std::sqrt(total);
}

double scalar_field_spherical(double t, double r, const SourceParams& src, const UnitSystem& units)
{
    if (!(r > 0)) throw DomainError("scalar field is singular at r = 0");
    const double retarded = src.angular_frequency * (t - r / units.c);
    return src.field_constant * std::sqrt(src.density_scale / (4.0 * pi * r * r)) *
           std::cos(retarded);
}

double reflection_probability(double t, double omega, const ReflectorState& wall)
{
    const double p = wall.amplitude * (1.0 + std::cos(omega * t + wall.phase));
    return std::clamp(p, 0.0, 1.0);
}

double first_strike_phase(double t, double omega) noexcept
{
    return std::remainder(-omega * t, 2.0 * pi);
}

std::optional<ModeIndex> resonant_mode(double k_z, double length, double tol)
{
    if (!(k_z > 0) || !(length > 0) || tol < 0)
        throw std::invalid_argument("resonant_mode needs k_z > 0, L > 0, tol >= 0");
    const double ratio = k_z * length / pi;
    const double n = std::max(1.0, std::round(ratio));
    // Relative slack of a few ulps so that k_z = n pi / L built in floating
    // point still counts as exact with tol = 0.
    const double slack = 4.0 * std::numeric_limits<double>::epsilon() * n;
    if (std::abs(ratio - n) <= tol + slack) return ModeIndex(static_cast<long>(n));
    return std::nullopt;
}

} // namespace pcas::model
