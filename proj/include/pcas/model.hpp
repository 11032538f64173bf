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

#include <numbers>
#include <optional>

#include "pcas/units.hpp"

/// Elementary quantities of the particle picture: emission and expectation
/// densities of +/- photons, the scalar field built from them, the
/// oscillating reflection probability of a wall, and cavity mode
/// quantization.
namespace pcas::model {

class PhotonSign {
public:
    static constexpr PhotonSign plus() noexcept { return PhotonSign(1); }
    static constexpr PhotonSign minus() noexcept { return PhotonSign(-1); }

    constexpr int value() const noexcept { return sign_; }
    constexpr PhotonSign flipped() const noexcept { return PhotonSign(-sign_); }
    constexpr bool operator==(const PhotonSign&) const noexcept = default;

private:
    constexpr explicit PhotonSign(int s) noexcept : sign_(s) {}
    int sign_;
};

struct SourceParams {
    double emission_amplitude = 1.0;  // A_s, photons per unit time
    double angular_frequency = 1.0;   // omega
    double density_scale = 1.0;       // A
    double field_constant = 1.0;      // E_0
};

/// Throws std::invalid_argument unless A_s, omega and A are positive.
void validate(const SourceParams& src);

struct ReflectorState {
    double phase = 0.0;      // psi
    double amplitude = 0.5;  // C, kept in [0, 1/2]
    bool oscillating = false;
};

void validate(const ReflectorState& wall);

/// n >= 1.
class ModeIndex {
public:
    explicit ModeIndex(long n);
    long value() const noexcept { return n_; }
    bool operator==(const ModeIndex&) const noexcept = default;

private:
    long n_;
};

/// (A_s/2)(1 +/- cos(omega t)).
double emission_density(double t, PhotonSign sign, const SourceParams& src);

/// (A / 8 pi r^2)(1 +/- cos(omega (t - r/c))). The source frequency is an
/// explicit argument; src only supplies A. Throws DomainError for r <= 0.
double spacetime_density(double t, double r, double omega, PhotonSign sign,
                         const SourceParams& src,
                         const UnitSystem& units = UnitSystem::natural());

/// E_0 (h+ - h-) / sqrt(h+ + h-).
double scalar_field(double hplus, double hminus, double field_constant);

/// Closed form of the scalar field for a spherically symmetric source,
/// E_0 sqrt(A / 4 pi r^2) cos(omega (t - r/c)).
double scalar_field_spherical(double t, double r, const SourceParams& src,
                              const UnitSystem& units = UnitSystem::natural());

/// C (1 + cos(omega t + psi)). Exactly zero at the cosine minimum.
double reflection_probability(double t, double omega, const ReflectorState& wall);

/// Phase psi that makes the strike at time t a certain reflection (p = 1)
/// for a wall that was at rest before it.
double first_strike_phase(double t, double omega) noexcept;

/// Nearest positive n with |k_z L / pi - n| <= tol, if any.
std::optional<ModeIndex> resonant_mode(double k_z, double length, double tol);

/// Origin of time used for static snapshots: omega t = pi/2.
inline constexpr double snapshot_phase = std::numbers::pi / 2;

} // namespace pcas::model
