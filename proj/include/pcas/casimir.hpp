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

#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "pcas/cutoff.hpp"
#include "pcas/kernels.hpp"
#include "pcas/quadrature.hpp"
#include "pcas/units.hpp"

/// Plate pressures and the solid-ball force from the virtual-photon momentum
/// flux. Reduced variables: u = k_z d / pi, x = (k_x^2 + k_y^2) d^2 / pi^2;
/// in them every plate quantity is (pi^2 hbar c / 4 d^4) times a pure number.
namespace pcas::casimir {

struct PlateGeometry {
    double gap = 1.0;  // d
    // Box lengths of the mode-counting volume. They only fix the continuum
    // limit outside the plates and do not enter any pressure.
    double box_x = std::numeric_limits<double>::infinity();
    double box_y = std::numeric_limits<double>::infinity();
    double box_z = std::numeric_limits<double>::infinity();
};

struct BallGeometry {
    double radius = 1.0;  // a
};

void validate(const PlateGeometry& geom);
void validate(const BallGeometry& geom);

enum class Method { raw_kspace, reduced, boundary_terms, monte_carlo };
std::string_view to_string(Method m) noexcept;

struct PressureResult {
    double value = 0.0;
    double numerical_error = 0.0;
    Method method = Method::raw_kspace;
    cutoff::CutoffSpec cutoff;
    std::string geometry;
    UnitSystem units;
};

/// Options for the open-ended mode sum over n.
struct SeriesConfig {
    std::size_t max_terms = 100000;
    int workers = 0;
};

/// The cutoff as a function of the reduced wavenumber y = k d / pi.
quad::ScaledCutoff reduced_cutoff(const cutoff::CutoffSpec& spec, const PlateGeometry& geom);

/// Multiplier taking a physical wavenumber to the family argument.
double family_argument_factor(const cutoff::CutoffSpec& spec, const PlateGeometry& geom);

/// pi^2 hbar c / (4 d^4).
double reduced_prefactor(const PlateGeometry& geom, const UnitSystem& units);

/// -pi^2 hbar c / (240 d^4).
double casimir_reference(const PlateGeometry& geom, const UnitSystem& units);

/// I = int_0^inf k^3 g(k) dk in physical wavenumbers. Shared by the
/// octant-reduced inward pressure and the ball force.
quad::Estimate<long double> cubic_moment(const cutoff::CutoffSpec& spec, double argument_factor,
                                         const quad::QuadratureConfig& cfg);

/// Inward pressure (hbar c / pi^3) int_octant g(k) k_z^2 / k d^3k, reduced
/// over directions to (hbar c / 6 pi^2) int_0^inf k^3 g(k) dk.
PressureResult pressure_in(const cutoff::CutoffSpec& g, const PlateGeometry& geom, const UnitSystem& units,
                           const quad::QuadratureConfig& cfg = {});

/// Inward pressure as (pi^2 hbar c / 4 d^4) int_0^inf F(u) du.
PressureResult pressure_in_reduced(const cutoff::CutoffSpec& g, const PlateGeometry& geom,
                                   const UnitSystem& units, const quad::QuadratureConfig& cfg = {},
                                   quad::Strategy strategy = quad::Strategy::reduced_y);

/// Mode-n term of the outward pressure in physical wavenumbers,
/// (hbar c / pi^2 d) int int_0^inf g(k) k_n^2 / k dk_x dk_y, k_n = n pi / d,
/// with the transverse quarter plane done in polar form.
quad::Estimate<long double> pressure_out_term(std::size_t n, const cutoff::CutoffSpec& g,
                                              const PlateGeometry& geom, const UnitSystem& units,
                                              const quad::QuadratureConfig& cfg);

/// Outward pressure summed over modes n >= 1 in physical wavenumbers.
/// Compact cutoffs are summed exactly over n < u1; decaying ones stop at
/// the first decreasing term below abs_tol.
kernels::SeriesSum pressure_out_series(const cutoff::CutoffSpec& g, const PlateGeometry& geom,
                                       const UnitSystem& units, const quad::QuadratureConfig& cfg = {},
                                       const SeriesConfig& series = {});
PressureResult pressure_out(const cutoff::CutoffSpec& g, const PlateGeometry& geom, const UnitSystem& units,
                            const quad::QuadratureConfig& cfg = {}, const SeriesConfig& series = {});

/// sum_{n>=1} F(n) in reduced form (pure number).
kernels::SeriesSum reduced_mode_sum(const quad::FReduced& fr, const quad::QuadratureConfig& cfg = {},
                                    const SeriesConfig& series = {});
/// int_0^inf F(u) du (pure number).
quad::Estimate<long double> reduced_mode_integral(const quad::FReduced& fr,
                                                  const quad::QuadratureConfig& cfg = {});

PressureResult pressure_out_reduced(const cutoff::CutoffSpec& g, const PlateGeometry& geom,
                                    const UnitSystem& units, const quad::QuadratureConfig& cfg = {},
                                    const SeriesConfig& series = {},
                                    quad::Strategy strategy = quad::Strategy::reduced_y);

/// The pieces of sum F(n) - int F(u) du and the boundary-term prediction
/// -F(0)/2 - F'(0)/12 + F'''(0)/720 for the same cutoff.
struct EulerMaclaurin {
    long double sum = 0;
    long double sum_error = 0;
    std::size_t terms = 0;
    long double integral = 0;
    long double integral_error = 0;
    long double difference = 0;
    long double difference_error = 0;
    double boundary = 0;
};

EulerMaclaurin euler_maclaurin(const cutoff::CutoffSpec& g, const PlateGeometry& geom,
                               const quad::QuadratureConfig& cfg = {}, const SeriesConfig& series = {},
                               quad::Strategy strategy = quad::Strategy::reduced_y);

/// -F(0)/2 - F'(0)/12 + F'''(0)/720 from analytic derivatives.
double boundary_terms(const quad::FDerivatives& d) noexcept;

/// P_out - P_in = (pi^2 hbar c / 4 d^4) [sum F(n) - int F(u) du].
PressureResult net_pressure_direct(const cutoff::CutoffSpec& g, const PlateGeometry& geom,
                                   const UnitSystem& units, const quad::QuadratureConfig& cfg = {},
                                   const SeriesConfig& series = {});

/// P_out - P_in from the Euler-Maclaurin boundary terms. Closed-form
/// arithmetic; -pi^2 hbar c / 240 d^4 whenever g(0) = 1.
PressureResult net_pressure_boundary(const cutoff::CutoffSpec& g, const PlateGeometry& geom,
                                     const UnitSystem& units);

/// Outward force (4 a^2 hbar c / pi^2) int_octant g(k) k_perp^2 / k d^3k =
/// (2 a^2 hbar c / 3 pi) int_0^inf k^3 g(k) dk. The cutoff must be given in
/// physical wavenumbers.
PressureResult ball_force(const cutoff::CutoffSpec& g, const BallGeometry& geom, const UnitSystem& units,
                          const quad::QuadratureConfig& cfg = {});

} // namespace pcas::casimir
