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

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "pcas/casimir.hpp"
#include "pcas/cutoff.hpp"
#include "pcas/model.hpp"
#include "pcas/units.hpp"

/// Monte Carlo over individual virtual photons: an importance-sampled
/// estimate of the inward momentum flux on a plate, and single-photon runs
/// between two plates showing which k_z survive repeated reflection.
namespace pcas::mcsim {

struct SimConfig {
    std::uint64_t samples = 1000000;
    std::uint64_t seed = 42;
    cutoff::CutoffSpec cutoff = cutoff::exponential(1.0);
    double proposal_scale = 0.0;  // family units; 0 selects default_proposal_scale
    int workers = 0;              // 0 = OpenMP default
    double reflect_amplitude = 0.5;  // C of the wall reflection probability
};

/// Radial proposal scale s for k^3 exp(-k/s): k_c for the decaying families,
/// (u0 + u1) / 6 for the plateau so that the proposal peak 3s sits mid
/// transition.
double default_proposal_scale(const cutoff::CutoffSpec& spec);

struct McEstimate {
    casimir::PressureResult result;  // numerical_error holds the standard error
    double standard_error = 0.0;
    std::uint64_t samples = 0;
    std::uint64_t nonzero_weights = 0;
};

/// Importance-sampled inward pressure. Wave-vectors are drawn in the
/// positive octant: direction uniform, |k| ~ Gamma(4, s). Each sample is
/// its own Philox stream (seed, sample index), so the estimate is
/// bit-identical for any worker count. Throws ZeroEffectiveSamples when
/// every weight vanishes.
McEstimate estimate_pressure_in(const SimConfig& cfg, const casimir::PlateGeometry& geom,
                                const UnitSystem& units = UnitSystem::natural());

/// Serial reference of estimate_pressure_in.
McEstimate estimate_pressure_in_serial(const SimConfig& cfg, const casimir::PlateGeometry& geom,
                                       const UnitSystem& units = UnitSystem::natural());

/// Weight of sample i; exposed for tests and benchmarks.
long double flux_weight(std::uint64_t index, std::uint64_t seed, const cutoff::CutoffSpec& spec,
                        double proposal_scale) noexcept;

struct CavityRunRecord {
    std::size_t bounce_index = 0;  // 1-based
    double arrival_phase = 0.0;    // omega t + psi at the wall, in (-pi, pi]
    double reflect_prob = 0.0;
    double delivered_momentum = 0.0;  // hbar k_z
    model::PhotonSign sign_after = model::PhotonSign::plus();
};

struct CavityRun {
    std::vector<CavityRunRecord> records;  // successful reflections only
    std::optional<std::size_t> terminated_at;  // bounce at which the photon passed through
    double total_momentum() const noexcept;
};

/// One photon with normal wavenumber k_z bouncing in a gap d. The first
/// strike fixes the wall phase so that it reflects with certainty; each
/// later arrival is one round trip (phase 2 d k_z) later and reflects with
/// probability C (1 + cos(phase)). A failed reflection ends the run.
CavityRun simulate_cavity(double k_z, const casimir::PlateGeometry& geom, std::size_t bounces,
                          const SimConfig& cfg, std::uint64_t run_index = 0,
                          const UnitSystem& units = UnitSystem::natural());

struct CavitySurvival {
    double k_z = 0.0;
    std::size_t runs = 0;
    std::size_t bounces = 0;
    double mean_reflections = 0.0;
    double full_survival_fraction = 0.0;
    double mean_momentum = 0.0;
};

/// `runs` independent photons at k_z, parallel over runs.
CavitySurvival cavity_survival(double k_z, const casimir::PlateGeometry& geom, std::size_t bounces,
                               std::size_t runs, const SimConfig& cfg,
                               const UnitSystem& units = UnitSystem::natural());

inline constexpr const char* cavity_csv_header =
    "bounce_index,arrival_phase,reflect_prob,delivered_momentum,sign_after";

void write_csv(std::ostream& out, std::span<const CavityRunRecord> records);

} // namespace pcas::mcsim
