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

#include "pcas/mcsim.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "pcas/error.hpp"
#include "pcas/kernels.hpp"
#include "pcas/philox.hpp"

namespace pcas::mcsim {

namespace {

constexpr long double pi_l = std::numbers::pi_v<long double>;

void check(const SimConfig& cfg)
{
    if (cfg.samples < 1) throw std::invalid_argument("Monte Carlo needs samples >= 1");
    if (cfg.proposal_scale < 0) throw std::invalid_argument("proposal scale must be positive");
    if (!(cfg.reflect_amplitude >= 0 && cfg.reflect_amplitude <= 0.5))
        throw std::invalid_argument("reflection amplitude C must lie in [0, 1/2]");
    cutoff::check_parameters(cfg.cutoff);
}

double resolved_scale(const SimConfig& cfg)
{
    return cfg.proposal_scale > 0 ? cfg.proposal_scale : default_proposal_scale(cfg.cutoff);
}

template <class Accumulate>
McEstimate run_estimate(const SimConfig& cfg, const casimir::PlateGeometry& geom, const UnitSystem& units,
                        Accumulate&& accumulate)
{
    check(cfg);
    casimir::validate(geom);
    const double s = resolved_scale(cfg);
    const auto& spec = cfg.cutoff;
    auto weight = [&](std::uint64_t i) { return flux_weight(i, cfg.seed, spec, s); };
    const kernels::MomentSums m = accumulate(weight);
    if (m.nonzero == 0)
        throw ZeroEffectiveSamples("all Monte Carlo weights vanished: cutoff has no support under the proposal");

    const long double n = static_cast<long double>(m.count);
    const long double mean = m.sum / n;
    const long double var = n > 1 ? std::max(0.0L, (m.sum_sq / n - mean * mean) * n / (n - 1)) : 0.0L;
    const long double phi = casimir::family_argument_factor(spec, geom);
    const long double conv = units.hbar_c() / (phi * phi * phi * phi);

    McEstimate out;
    out.result.value = static_cast<double>(conv * mean);
    out.standard_error = static_cast<double>(conv * std::sqrt(var / n));
    out.result.numerical_error = out.standard_error;
    out.result.method = casimir::Method::monte_carlo;
    out.result.cutoff = spec;
    char buf[64];
    std::snprintf(buf, sizeof buf, "plates d=%.12g", geom.gap);
    out.result.geometry = buf;
    out.result.units = units;
    out.samples = m.count;
    out.nonzero_weights = m.nonzero;
    return out;
}

} // namespace

double default_proposal_scale(const cutoff::CutoffSpec& spec)
{
    switch (spec.family) {
    case cutoff::Family::plateau: return (spec.plateau_start + spec.plateau_end) / 6.0;
    case cutoff::Family::exponential:
    case cutoff::Family::supergauss: return spec.scale;
    case cutoff::Family::constant: return 1.0;
    }
    return 1.0;
}

long double flux_weight(std::uint64_t index, std::uint64_t seed, const cutoff::CutoffSpec& spec,
                        double proposal_scale) noexcept
{
    CounterStream rng(seed, index);
    // |k| ~ Gamma(4, s): proposal density k^3 exp(-k/s) / (6 s^4).
    long double log_sum = 0;
    for (int j = 0; j < 4; ++j) log_sum += std::log(static_cast<long double>(rng.uniform()));
    const long double s = proposal_scale;
    const long double k = -s * log_sum;
    // cos(gamma) = k_z / k is uniform on (0, 1) for directions uniform over
    // the octant.
    const long double mu = rng.uniform();

    // Flux integrand g(k) k cos^2(gamma) / pi^3 over the proposal
    // k^3 exp(-k/s) / (6 s^4) * (2/pi) / k^2.
    const long double g = cutoff::evaluate(spec, k);
    if (g == 0) return 0.0L;
    const long double s2 = s * s;
    return 3 * s2 * s2 / (pi_l * pi_l) * g * std::exp(k / s) * mu * mu;
}

McEstimate estimate_pressure_in(const SimConfig& cfg, const casimir::PlateGeometry& geom, const UnitSystem& units)
{
    return run_estimate(cfg, geom, units,
                        [&](auto& w) { return kernels::accumulate(w, cfg.samples, cfg.workers); });
}

McEstimate estimate_pressure_in_serial(const SimConfig& cfg, const casimir::PlateGeometry& geom,
                                       const UnitSystem& units)
{
    return run_estimate(cfg, geom, units, [&](auto& w) { return kernels::accumulate_serial(w, cfg.samples); });
}

double CavityRun::total_momentum() const noexcept
{
    double total = 0.0;
    for (const auto& r : records) total += r.delivered_momentum;
    return total;
}

CavityRun simulate_cavity(double k_z, const casimir::PlateGeometry& geom, std::size_t bounces,
                          const SimConfig& cfg, std::uint64_t run_index, const UnitSystem& units)
{
    if (!(k_z > 0)) throw std::invalid_argument("simulate_cavity needs k_z > 0");
    if (bounces < 1) throw std::invalid_argument("simulate_cavity needs bounces >= 1");
    casimir::validate(geom);

    // Wall phase advances with omega = c k_z; one round trip takes 2d / c.
    const double omega = units.c * k_z;
    const double round_trip = 2.0 * geom.gap / units.c;

    model::ReflectorState wall;
    wall.amplitude = cfg.reflect_amplitude;
    model::validate(wall);

    // Runs use stream ids in the upper half of the id space so they never
    // share draws with flux samples under the same seed.
    CounterStream rng(cfg.seed, (std::uint64_t{1} << 63) | run_index);

    CavityRun run;
    run.records.reserve(bounces);
    model::PhotonSign sign = model::PhotonSign::plus();
    for (std::size_t b = 1; b <= bounces; ++b) {
        const double t = static_cast<double>(b - 1) * round_trip;
        if (b == 1) {
            wall.phase = model::first_strike_phase(t, omega);
            wall.oscillating = true;
        }
        const double p = model::reflection_probability(t, omega, wall);
        const double u = rng.uniform();
        if (!(u < p)) {
            run.terminated_at = b;
            break;
        }
        sign = sign.flipped();
        CavityRunRecord rec;
        rec.bounce_index = b;
        rec.arrival_phase = std::remainder(omega * t + wall.phase, 2.0 * std::numbers::pi);
        rec.reflect_prob = p;
        rec.delivered_momentum = units.hbar * k_z;
        rec.sign_after = sign;
        run.records.push_back(rec);
    }
    return run;
}

CavitySurvival cavity_survival(double k_z, const casimir::PlateGeometry& geom, std::size_t bounces,
                               std::size_t runs, const SimConfig& cfg, const UnitSystem& units)
{
    if (runs < 1) throw std::invalid_argument("cavity_survival needs runs >= 1");
    std::vector<std::size_t> reflections(runs);
    std::vector<long double> momentum(runs);
    std::exception_ptr failure;
#pragma omp parallel for schedule(static) num_threads(kernels::resolve_workers(cfg.workers))
    for (long r = 0; r < static_cast<long>(runs); ++r) {
        try {
            const auto run = simulate_cavity(k_z, geom, bounces, cfg, static_cast<std::uint64_t>(r), units);
            reflections[static_cast<std::size_t>(r)] = run.records.size();
            momentum[static_cast<std::size_t>(r)] = run.total_momentum();
        } catch (...) {
#pragma omp critical(pcas_cavity_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);

    CavitySurvival s;
    s.k_z = k_z;
    s.runs = runs;
    s.bounces = bounces;
    std::size_t total = 0, full = 0;
    for (auto n : reflections) {
        total += n;
        full += (n == bounces);
    }
    s.mean_reflections = static_cast<double>(total) / static_cast<double>(runs);
    s.full_survival_fraction = static_cast<double>(full) / static_cast<double>(runs);
    s.mean_momentum = static_cast<double>(kernels::pairwise_sum(momentum) / static_cast<long double>(runs));
    return s;
}

void write_csv(std::ostream& out, std::span<const CavityRunRecord> records)
{
    out << cavity_csv_header << '\n';
    char buf[160];
    for (const auto& r : records) {
        std::snprintf(buf, sizeof buf, "%zu,%.15e,%.15e,%.15e,%+d\n", r.bounce_index, r.arrival_phase,
                      r.reflect_prob, r.delivered_momentum, r.sign_after.value());
        out << buf;
    }
}

} // namespace pcas::mcsim
