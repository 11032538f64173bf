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

#include "doctest.h"

#include <cmath>
#include <algorithm>
#include <cstring>
#include <numbers>
#include <sstream>

#include "pcas/mcsim.hpp"

using namespace pcas;
using namespace pcas::mcsim;
using casimir::PlateGeometry;
using cutoff::Basis;

namespace {

constexpr double pi = std::numbers::pi;

SimConfig config(const cutoff::CutoffSpec& g, std::uint64_t samples, std::uint64_t seed = 42)
{
    SimConfig c;
    c.cutoff = g;
    c.samples = samples;
    c.seed = seed;
    return c;
}

const cutoff::CutoffSpec families[] = {cutoff::exponential(1.0), cutoff::supergauss(1.5, 6.0),
                                       cutoff::plateau(3.0, 6.0, Basis::wavenumber), cutoff::plateau(30, 60)};

// Expected reflections of one run: sum over m of the chance to survive the
// first m arrivals, p_b = C (1 + cos(2 d k_z (b - 1))).
double expected_reflections(double kz, double d, std::size_t bounces, double C)
{
    double survive = 1, total = 0;
    for (std::size_t b = 1; b <= bounces; ++b) {
        survive *= b == 1 ? 1.0 : std::min(1.0, C * (1 + std::cos(2 * d * kz * double(b - 1))));
        total += survive;
    }
    return total;
}

} // namespace

TEST_CASE("inward-pressure estimate lies within three standard errors of quadrature")
{
    for (const auto& g : families) {
        const PlateGeometry geom{1.0};
        const auto mc = estimate_pressure_in(config(g, 1000000), geom);
        const double q = casimir::pressure_in(g, geom, UnitSystem::natural()).value;
        CAPTURE(cutoff::to_string(g));
        CHECK(std::abs(mc.result.value - q) <= 3 * mc.standard_error);
        CHECK(mc.standard_error > 0);
        CHECK(mc.standard_error < 0.01 * q);
        CHECK(mc.result.method == casimir::Method::monte_carlo);
        CHECK(mc.samples == 1000000);
    }
    // Closed form for kc = 1.
    const auto mc = estimate_pressure_in(config(cutoff::exponential(1.0), 1000000), PlateGeometry{});
    CHECK(std::abs(mc.result.value - 1 / (pi * pi)) <= 3 * mc.standard_error);
}

TEST_CASE("coverage over independent seeds")
{
    for (const auto& g : families) {
        const PlateGeometry geom{1.0};
        const double q = casimir::pressure_in(g, geom, UnitSystem::natural()).value;
        int inside = 0;
        for (std::uint64_t seed = 1; seed <= 100; ++seed) {
            const auto mc = estimate_pressure_in(config(g, 20000, seed), geom);
            inside += std::abs(mc.result.value - q) <= 3 * mc.standard_error;
        }
        CAPTURE(cutoff::to_string(g));
        CHECK(inside >= 99);
    }
}

TEST_CASE("standard error scales as samples^-1/2")
{
    const auto g = cutoff::exponential(1.0);
    std::vector<double> x, y;
    double previous = INFINITY;
    for (std::uint64_t n = 4000; n <= 4000u * 256; n *= 4) {
        const double se = estimate_pressure_in(config(g, n), PlateGeometry{}).standard_error;
        CHECK(se < previous);
        if (std::isfinite(previous)) CHECK(se / previous == doctest::Approx(0.5).epsilon(0.1));
        previous = se;
        x.push_back(std::log(double(n)));
        y.push_back(std::log(se));
    }
    const double m = double(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    CHECK(std::abs((m * sxy - sx * sy) / (m * sxx - sx * sx) + 0.5) < 0.1);
}

TEST_CASE("determinism across runs and worker counts")
{
    auto cfg = config(cutoff::supergauss(1.5, 6.0), 30001, 7);
    const auto ref = estimate_pressure_in_serial(cfg, PlateGeometry{});
    for (int workers = 1; workers <= 4; ++workers) {
        cfg.workers = workers;
        const auto r = estimate_pressure_in(cfg, PlateGeometry{});
        CHECK(std::memcmp(&r.result.value, &ref.result.value, sizeof(double)) == 0);
        CHECK(std::memcmp(&r.standard_error, &ref.standard_error, sizeof(double)) == 0);
    }
    const auto again = estimate_pressure_in_serial(cfg, PlateGeometry{});
    CHECK(std::memcmp(&again.result.value, &ref.result.value, sizeof(double)) == 0);
    cfg.seed = 8;
    CHECK(estimate_pressure_in(cfg, PlateGeometry{}).result.value != ref.result.value);
}

TEST_CASE("degenerate and invalid configurations")
{
    CHECK_THROWS_AS(estimate_pressure_in(config(cutoff::constant(0.0), 1000), PlateGeometry{}), ZeroEffectiveSamples);
    CHECK_THROWS_AS(estimate_pressure_in(config(cutoff::exponential(1.0), 0), PlateGeometry{}),
                    std::invalid_argument);
    auto cfg = config(cutoff::exponential(1.0), 10);
    cfg.reflect_amplitude = 0.7;
    CHECK_THROWS_AS(simulate_cavity(1.0, PlateGeometry{}, 3, cfg), std::invalid_argument);
    CHECK_THROWS_AS(simulate_cavity(-1.0, PlateGeometry{}, 3, config(cutoff::exponential(1.0), 10)),
                    std::invalid_argument);
    CHECK_THROWS_AS(simulate_cavity(1.0, PlateGeometry{}, 0, config(cutoff::exponential(1.0), 10)),
                    std::invalid_argument);
}

TEST_CASE("resonant and antiresonant cavity runs")
{
    const auto cfg = config(cutoff::exponential(1.0), 1);
    for (double d : {1.0, 2.5e-6}) {
        const PlateGeometry geom{d};
        for (int n = 1; n <= 3; ++n) {
            const double kz = n * pi / d;
            for (std::uint64_t run = 0; run < 20; ++run) {
                const auto r = simulate_cavity(kz, geom, 100, cfg, run);
                REQUIRE(r.records.size() == 100);
                CHECK(!r.terminated_at);
                CHECK(r.total_momentum() == doctest::Approx(100 * kz));
                for (const auto& rec : r.records) {
                    CHECK(rec.reflect_prob == doctest::Approx(1.0).epsilon(1e-12));
                    CHECK(rec.delivered_momentum == kz);
                }
            }
            const auto anti = simulate_cavity((n + 0.5) * pi / d, geom, 100, cfg);
            REQUIRE(anti.records.size() == 1);
            CHECK(anti.terminated_at == 2u);
            CHECK(anti.records[0].reflect_prob == 1.0);
        }
    }
}

TEST_CASE("photon sign alternates on every reflection")
{
    const auto cfg = config(cutoff::exponential(1.0), 1, 3);
    for (double kz : {1.0, 3.1, pi, 2 * pi + 0.05}) {
        for (std::uint64_t run = 0; run < 10; ++run) {
            const auto r = simulate_cavity(kz, PlateGeometry{}, 50, cfg, run);
            int expected = -1;
            for (const auto& rec : r.records) {
                CHECK(rec.sign_after.value() == expected);
                CHECK(rec.reflect_prob >= 0);
                CHECK(rec.reflect_prob <= 1);
                expected = -expected;
            }
            for (std::size_t i = 0; i < r.records.size(); ++i) CHECK(r.records[i].bounce_index == i + 1);
        }
    }
}

TEST_CASE("survival peaks at the resonant modes")
{
    const PlateGeometry geom{1.0};
    const auto cfg = config(cutoff::exponential(1.0), 1, 11);
    const int per_mode = 16;
    const std::size_t bounces = 60, runs = 400;
    std::vector<double> mc, exact;
    for (int j = 1; j <= 3 * per_mode + per_mode / 2; ++j) {
        const double kz = j * pi / (geom.gap * per_mode);
        const auto s = cavity_survival(kz, geom, bounces, runs, cfg);
        mc.push_back(s.mean_reflections);
        exact.push_back(expected_reflections(kz, geom.gap, bounces, 0.5));
        // Monte Carlo against the exact enumeration; reflections are bounded by
        // the bounce count, so 4 * bounces / sqrt(runs) is a loose bound.
        CHECK(std::abs(s.mean_reflections - exact.back()) <= 4.0 * bounces / std::sqrt(double(runs)));
    }
    for (int n = 1; n <= 3; ++n) {
        // Window (n - 1/2, n + 1/2) pi / d.
        const int lo = n * per_mode - per_mode / 2, hi = n * per_mode + per_mode / 2;
        int argmax_mc = lo, argmax_exact = lo;
        for (int j = lo; j < hi; ++j) {
            if (mc[j - 1] > mc[argmax_mc - 1]) argmax_mc = j;
            if (exact[j - 1] > exact[argmax_exact - 1]) argmax_exact = j;
        }
        CHECK(argmax_mc == n * per_mode);
        CHECK(argmax_exact == n * per_mode);
        CHECK(mc[argmax_mc - 1] == double(bounces));
        const double kz = argmax_mc * pi / (geom.gap * per_mode);
        CHECK(model::resonant_mode(kz, geom.gap, 1e-9).value().value() == n);
        // Antiresonance: only the first, certain reflection happens.
        CHECK(mc[lo - 1] == 1.0);
    }
}

TEST_CASE("cavity CSV export")
{
    const auto r = simulate_cavity(pi, PlateGeometry{}, 3, config(cutoff::exponential(1.0), 1));
    std::ostringstream out;
    write_csv(out, r.records);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "bounce_index,arrival_phase,reflect_prob,delivered_momentum,sign_after");
    int rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        CHECK(std::count(line.begin(), line.end(), ',') == 4);
        CHECK(line.find("e+00") != std::string::npos);
    }
    CHECK(rows == 3);
}

TEST_CASE("default proposal scales")
{
    CHECK(default_proposal_scale(cutoff::plateau(30, 60)) == 15.0);
    CHECK(default_proposal_scale(cutoff::exponential(2.5)) == 2.5);
    CHECK(default_proposal_scale(cutoff::supergauss(4.0, 8.0)) == 4.0);
}
