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

// pcas: command-line front end for plate pressures, the ball force, the
// sum-minus-integral core, Monte Carlo estimates and cutoff validation.
//
// Exit codes: 0 ok, 2 usage, 3 convergence failure, 4 degenerate Monte
// Carlo, 5 cutoff validation failure.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "manifest.hpp"
#include "pcas/casimir.hpp"
#include "pcas/cutoff.hpp"
#include "pcas/error.hpp"
#include "pcas/mcsim.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace pcas;

constexpr int exit_ok = 0;
constexpr int exit_usage = 2;
constexpr int exit_convergence = 3;
constexpr int exit_degenerate_mc = 4;
constexpr int exit_validation = 5;

constexpr double pi = std::numbers::pi;

/// Command-line failure that is the caller's fault; maps to exit 2.
struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Options shared by the computing subcommands.
struct Common {
    std::string format = "table";
    std::string units = "natural";
    std::string cutoff;
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    std::size_t max_subdivisions = 2000;
    std::size_t max_terms = 100000;
    int workers = 0;

    quad::QuadratureConfig quadrature() const
    {
        quad::QuadratureConfig q;
        q.rel_tol = rel_tol;
        q.abs_tol = abs_tol;
        q.max_subdivisions = max_subdivisions;
        quad::validate(q);
        return q;
    }
    casimir::SeriesConfig series() const { return {max_terms, workers}; }
    UnitSystem unit_system() const { return parse_units(units); }
};

void add_format(CLI::App* app, Common& c)
{
    app->add_option("--format", c.format, "Output format")
        ->check(CLI::IsMember({"table", "json", "csv"}))
        ->capture_default_str();
}

void add_units(CLI::App* app, Common& c)
{
    app->add_option("--units", c.units, "natural (hbar = c = 1) or si")
        ->check(CLI::IsMember({"natural", "si"}))
        ->capture_default_str();
}

void add_cutoff(CLI::App* app, Common& c, const std::string& fallback)
{
    c.cutoff = fallback;
    app->add_option("--cutoff", c.cutoff, "Cutoff spec family:key=value,... (plateau, exp, supergauss)")
        ->capture_default_str();
}

void add_numerics(CLI::App* app, Common& c)
{
    app->add_option("--rel-tol", c.rel_tol, "Quadrature relative tolerance")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app->add_option("--abs-tol", c.abs_tol, "Quadrature absolute tolerance")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app->add_option("--max-subdivisions", c.max_subdivisions, "Adaptive panel splits per integral")
        ->capture_default_str();
    app->add_option("--max-terms", c.max_terms, "Series term cap for decaying cutoffs")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app->add_option("--workers", c.workers, "OpenMP threads (0 = default)")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
}

cutoff::CutoffSpec parse_cutoff(const std::string& text, cutoff::Basis default_basis)
{
    try {
        auto spec = cutoff::parse(text, default_basis);
        cutoff::check_parameters(spec);
        return spec;
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("--cutoff: ") + e.what());
    }
}

void put_common(pcas::cli::RunManifest& m, const Common& c, const cutoff::CutoffSpec* spec)
{
    if (spec) m.parameters["cutoff"] = cutoff::to_string(*spec);
    m.parameters["units"] = c.units;
    m.parameters["format"] = c.format;
    m.parameters["rel_tol"] = c.rel_tol;
    m.parameters["abs_tol"] = c.abs_tol;
    m.parameters["max_subdivisions"] = c.max_subdivisions;
    m.parameters["max_terms"] = c.max_terms;
    m.parameters["workers"] = c.workers;
}

std::string sci(double v, int digits = 15)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*e", digits, v);
    return buf;
}

json value_error(double value, double error) { return json{{"value", value}, {"error", error}}; }

// One labelled number for table and CSV output.
struct Row {
    std::string quantity;
    double value;
    std::optional<double> error;
};

void print_rows(const std::vector<Row>& rows, const std::string& format, const pcas::cli::RunManifest& m)
{
    if (format == "csv") {
        std::cout << "quantity,value,error\n";
        for (const auto& r : rows)
            std::cout << r.quantity << ',' << sci(r.value) << ',' << (r.error ? sci(*r.error) : "") << '\n';
        std::cout << "# manifest " << m.to_json().dump() << '\n';
        return;
    }
    std::size_t width = 8;
    for (const auto& r : rows) width = std::max(width, r.quantity.size());
    for (const auto& r : rows) {
        std::printf("%-*s  %22.12e", static_cast<int>(width), r.quantity.c_str(), r.value);
        if (r.error) std::printf("  +/- %.3e", *r.error);
        std::printf("\n");
    }
    std::printf("manifest: %s\n", m.to_json().dump().c_str());
}

void print_json(json body, const pcas::cli::RunManifest& m)
{
    body["manifest"] = m.to_json();
    std::cout << body.dump(2) << '\n';
}

std::string pressure_unit(const UnitSystem& u) { return u.mode == UnitMode::si ? "Pa" : "hbar*c/length^4"; }

// ---------------------------------------------------------------- plates

struct PlatesArgs {
    Common common;
    std::optional<double> distance;
    std::string method = "both";
};

void setup_plates(CLI::App& app, PlatesArgs& a)
{
    auto* sub = app.add_subcommand("plates", "Pressures on two parallel plates at gap d");
    sub->add_option("--distance", a.distance, "Plate gap d (metres with --units si)")->required();
    sub->add_option("--method", a.method, "Net pressure method")
        ->check(CLI::IsMember({"direct", "boundary", "both"}))
        ->capture_default_str();
    add_cutoff(sub, a.common, "plateau:u0=30,u1=60");
    add_units(sub, a.common);
    add_format(sub, a.common);
    add_numerics(sub, a.common);
}

int run_plates(const PlatesArgs& a)
{
    const auto spec = parse_cutoff(a.common.cutoff, cutoff::Basis::reduced);
    const auto units = a.common.unit_system();
    const auto cfg = a.common.quadrature();
    const casimir::PlateGeometry geom{*a.distance};
    try {
        casimir::validate(geom);
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("--distance: ") + e.what());
    }

    auto m = pcas::cli::make_manifest("plates");
    m.parameters["distance"] = geom.gap;
    m.parameters["method"] = a.method;
    put_common(m, a.common, &spec);

    const auto p_in = casimir::pressure_in(spec, geom, units, cfg);
    const auto p_out = casimir::pressure_out(spec, geom, units, cfg, a.common.series());
    const double ref = casimir::casimir_reference(geom, units);
    const bool direct = a.method != "boundary", boundary = a.method != "direct";
    std::optional<casimir::PressureResult> net_direct, net_boundary;
    if (direct) net_direct = casimir::net_pressure_direct(spec, geom, units, cfg, a.common.series());
    if (boundary) net_boundary = casimir::net_pressure_boundary(spec, geom, units);
    const auto& primary = net_direct ? *net_direct : *net_boundary;
    auto rel_dev = [&](const casimir::PressureResult& r) { return (r.value - ref) / std::abs(ref); };

    std::optional<bool> agree;
    double agree_tol = 0;
    if (net_direct && net_boundary) {
        agree_tol = std::max(1e-3 * std::abs(net_boundary->value),
                             net_direct->numerical_error + net_boundary->numerical_error);
        agree = std::abs(net_direct->value - net_boundary->value) <= agree_tol;
    }

    if (a.common.format == "json") {
        json j;
        j["value"] = primary.value;
        j["error"] = primary.numerical_error;
        j["method"] = std::string(casimir::to_string(primary.method));
        j["unit"] = pressure_unit(units);
        j["p_in"] = value_error(p_in.value, p_in.numerical_error);
        j["p_out"] = value_error(p_out.value, p_out.numerical_error);
        if (net_direct) j["net_direct"] = value_error(net_direct->value, net_direct->numerical_error);
        if (net_boundary) j["net_boundary"] = value_error(net_boundary->value, net_boundary->numerical_error);
        j["reference"] = ref;
        j["rel_dev"] = rel_dev(primary);
        if (agree) j["agreement"] = json{{"agree", *agree}, {"tolerance", agree_tol}};
        print_json(std::move(j), m);
        return exit_ok;
    }
    std::vector<Row> rows{{"p_in", p_in.value, p_in.numerical_error}, {"p_out", p_out.value, p_out.numerical_error}};
    if (net_direct) {
        rows.push_back({"net_direct", net_direct->value, net_direct->numerical_error});
        rows.push_back({"rel_dev_direct", rel_dev(*net_direct), std::nullopt});
    }
    if (net_boundary) {
        rows.push_back({"net_boundary", net_boundary->value, net_boundary->numerical_error});
        rows.push_back({"rel_dev_boundary", rel_dev(*net_boundary), std::nullopt});
    }
    rows.push_back({"reference", ref, std::nullopt});
    if (agree) rows.push_back({"agreement_tolerance", agree_tol, std::nullopt});
    if (a.common.format == "table") {
        std::printf("plates d=%.12g  cutoff %s  units %s [%s]\n", geom.gap, cutoff::to_string(spec).c_str(),
                    a.common.units.c_str(), pressure_unit(units).c_str());
    }
    print_rows(rows, a.common.format, m);
    if (agree && a.common.format == "table")
        std::printf("direct and boundary %s within %.3e\n", *agree ? "agree" : "DISAGREE", agree_tol);
    return exit_ok;
}

// ----------------------------------------------------------------- sweep

struct SweepArgs {
    Common common;
    double d_min = 0, d_max = 0;
    long points = 20;
    std::string method = "direct";
};

void setup_sweep(CLI::App& app, SweepArgs& a)
{
    auto* sub = app.add_subcommand("sweep", "Net plate pressure over log-spaced gaps, with a log-log slope");
    sub->add_option("--d-min", a.d_min, "Smallest gap")->required()->check(CLI::PositiveNumber);
    sub->add_option("--d-max", a.d_max, "Largest gap")->required()->check(CLI::PositiveNumber);
    sub->add_option("--points", a.points, "Number of gaps")->check(CLI::Range(1L, 100000L))->capture_default_str();
    sub->add_option("--method", a.method, "Net pressure method")
        ->check(CLI::IsMember({"direct", "boundary"}))
        ->capture_default_str();
    add_cutoff(sub, a.common, "plateau:u0=30,u1=60");
    add_units(sub, a.common);
    a.common.format = "csv";
    add_format(sub, a.common);
    add_numerics(sub, a.common);
}

int run_sweep(const SweepArgs& a)
{
    if (a.d_max < a.d_min) throw UsageError("--d-max must not be below --d-min");
    const auto spec = parse_cutoff(a.common.cutoff, cutoff::Basis::reduced);
    const auto units = a.common.unit_system();
    const auto cfg = a.common.quadrature();

    auto m = pcas::cli::make_manifest("sweep");
    m.parameters["d_min"] = a.d_min;
    m.parameters["d_max"] = a.d_max;
    m.parameters["points"] = a.points;
    m.parameters["method"] = a.method;
    put_common(m, a.common, &spec);

    struct Point {
        double d, net, error, ref;
    };
    std::vector<Point> pts;
    for (long i = 0; i < a.points; ++i) {
        const double t = a.points == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(a.points - 1);
        const double d = a.d_min * std::pow(a.d_max / a.d_min, t);
        const casimir::PlateGeometry geom{d};
        const auto r = a.method == "direct" ? casimir::net_pressure_direct(spec, geom, units, cfg, a.common.series())
                                            : casimir::net_pressure_boundary(spec, geom, units);
        pts.push_back({d, r.value, r.numerical_error, casimir::casimir_reference(geom, units)});
    }

    std::optional<double> slope;
    if (pts.size() >= 2 && a.d_max > a.d_min) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const double n = static_cast<double>(pts.size());
        for (const auto& p : pts) {
            const double x = std::log(p.d), y = std::log(std::abs(p.net));
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    } else {
        std::cerr << "warning: slope needs at least two distinct gaps; omitted\n";
    }

    if (a.common.format == "json") {
        json j;
        j["value"] = slope ? json(*slope) : json(nullptr);
        j["error"] = nullptr;
        j["method"] = a.method == "direct" ? "reduced" : "boundary-terms";
        json arr = json::array();
        for (const auto& p : pts)
            arr.push_back({{"d", p.d}, {"P_net", p.net}, {"error", p.error}, {"P_ref", p.ref},
                           {"rel_dev", (p.net - p.ref) / std::abs(p.ref)}});
        j["points"] = std::move(arr);
        print_json(std::move(j), m);
        return exit_ok;
    }
    if (a.common.format == "csv") {
        std::cout << "d,P_net,P_ref,rel_dev\n";
        for (const auto& p : pts)
            std::cout << sci(p.d) << ',' << sci(p.net) << ',' << sci(p.ref) << ','
                      << sci((p.net - p.ref) / std::abs(p.ref)) << '\n';
        std::cout << "# slope " << (slope ? sci(*slope) : std::string("n/a")) << '\n';
        std::cout << "# manifest " << m.to_json().dump() << '\n';
        return exit_ok;
    }
    std::printf("%22s  %22s  %22s  %12s\n", "d", "P_net", "P_ref", "rel_dev");
    for (const auto& p : pts)
        std::printf("%22.12e  %22.12e  %22.12e  %12.4e\n", p.d, p.net, p.ref, (p.net - p.ref) / std::abs(p.ref));
    if (slope) std::printf("log-log slope %.6f\n", *slope);
    std::printf("manifest: %s\n", m.to_json().dump().c_str());
    return exit_ok;
}

// -------------------------------------------------------------------- em

struct EmArgs {
    Common common;
    std::string strategy = "reduced-y";
};

void setup_em(CLI::App& app, EmArgs& a)
{
    auto* sub = app.add_subcommand("em", "sum F(n) - int F(u) du against the boundary terms, in reduced units");
    sub->add_option("--strategy", a.strategy, "Evaluation route for F(u)")
        ->check(CLI::IsMember({"reduced-y", "direct-x"}))
        ->capture_default_str();
    add_cutoff(sub, a.common, "plateau:u0=30,u1=60");
    add_format(sub, a.common);
    add_numerics(sub, a.common);
}

int run_em(const EmArgs& a)
{
    const auto spec = parse_cutoff(a.common.cutoff, cutoff::Basis::reduced);
    const auto cfg = a.common.quadrature();
    const auto strategy = a.strategy == "direct-x" ? quad::Strategy::direct_x : quad::Strategy::reduced_y;
    auto m = pcas::cli::make_manifest("em");
    m.parameters["strategy"] = a.strategy;
    put_common(m, a.common, &spec);
    // Unit gap: reduced and wavenumber arguments differ by pi.
    const auto em = casimir::euler_maclaurin(spec, casimir::PlateGeometry{1.0}, cfg, a.common.series(), strategy);
    const double reference = -1.0 / 60.0;
    const double diff = static_cast<double>(em.difference);
    const double rel_dev = (diff - reference) / std::abs(reference);

    if (a.common.format == "json") {
        json j;
        j["value"] = diff;
        j["error"] = static_cast<double>(em.difference_error);
        j["method"] = "reduced";
        j["sum"] = value_error(static_cast<double>(em.sum), static_cast<double>(em.sum_error));
        j["terms"] = em.terms;
        j["integral"] = value_error(static_cast<double>(em.integral), static_cast<double>(em.integral_error));
        j["boundary"] = em.boundary;
        j["reference"] = reference;
        j["rel_dev"] = rel_dev;
        print_json(std::move(j), m);
        return exit_ok;
    }
    const std::vector<Row> rows{
        {"sum_F", static_cast<double>(em.sum), static_cast<double>(em.sum_error)},
        {"terms", static_cast<double>(em.terms), std::nullopt},
        {"integral_F", static_cast<double>(em.integral), static_cast<double>(em.integral_error)},
        {"difference", diff, static_cast<double>(em.difference_error)},
        {"boundary", em.boundary, std::nullopt},
        {"reference", reference, std::nullopt},
        {"rel_dev", rel_dev, std::nullopt},
    };
    if (a.common.format == "table") std::printf("cutoff %s\n", cutoff::to_string(spec).c_str());
    print_rows(rows, a.common.format, m);
    return exit_ok;
}

// ------------------------------------------------------------------ ball

struct BallArgs {
    Common common;
    double radius = 1.0;
};

void setup_ball(CLI::App& app, BallArgs& a)
{
    auto* sub = app.add_subcommand("ball", "Inward force on a solid ball of radius a");
    sub->add_option("--radius", a.radius, "Ball radius a")->capture_default_str();
    add_cutoff(sub, a.common, "exp:kc=1");
    add_units(sub, a.common);
    add_format(sub, a.common);
    add_numerics(sub, a.common);
}

int run_ball(const BallArgs& a)
{
    const auto spec = parse_cutoff(a.common.cutoff, cutoff::Basis::wavenumber);
    const auto units = a.common.unit_system();
    const auto cfg = a.common.quadrature();
    const casimir::BallGeometry geom{a.radius};
    try {
        casimir::validate(geom);
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("--radius: ") + e.what());
    }
    if (spec.basis == cutoff::Basis::reduced) throw UsageError("--cutoff: the ball needs basis=k");
    auto m = pcas::cli::make_manifest("ball");
    m.parameters["radius"] = a.radius;
    put_common(m, a.common, &spec);

    const auto f = casimir::ball_force(spec, geom, units, cfg);
    std::optional<double> closed;
    if (spec.family == cutoff::Family::exponential) {
        const double kc = spec.scale;
        closed = 4 * a.radius * a.radius * units.hbar_c() * kc * kc * kc * kc / pi;
    }
    if (a.common.format == "json") {
        json j;
        j["value"] = f.value;
        j["error"] = f.numerical_error;
        j["method"] = std::string(casimir::to_string(f.method));
        j["unit"] = units.mode == UnitMode::si ? "N" : "hbar*c/length^2";
        if (closed) j["closed_form"] = *closed;
        print_json(std::move(j), m);
        return exit_ok;
    }
    std::vector<Row> rows{{"force", f.value, f.numerical_error}};
    if (closed) {
        rows.push_back({"closed_form", *closed, std::nullopt});
        rows.push_back({"rel_dev", (f.value - *closed) / *closed, std::nullopt});
    }
    if (a.common.format == "table")
        std::printf("ball a=%.12g  cutoff %s  units %s\n", a.radius, cutoff::to_string(spec).c_str(),
                    a.common.units.c_str());
    print_rows(rows, a.common.format, m);
    return exit_ok;
}

// --------------------------------------------------------------- mc pressure

struct McPressureArgs {
    Common common;
    std::uint64_t samples = 1000000;
    std::uint64_t seed = 42;
    double distance = 1.0;
    double proposal_scale = 0.0;
};

void setup_mc_pressure(CLI::App* mc, McPressureArgs& a)
{
    auto* sub = mc->add_subcommand("pressure", "Importance-sampled inward plate pressure");
    sub->add_option("--samples", a.samples, "Photon samples")->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--seed", a.seed, "Random seed")->capture_default_str();
    sub->add_option("--distance", a.distance, "Plate gap d (only used by basis=reduced cutoffs)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--proposal-scale", a.proposal_scale, "Radial proposal scale in family units (0 = default)")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    add_cutoff(sub, a.common, "exp:kc=1");
    add_units(sub, a.common);
    add_format(sub, a.common);
    sub->add_option("--workers", a.common.workers, "OpenMP threads (0 = default)")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
}

int run_mc_pressure(const McPressureArgs& a)
{
    const auto spec = parse_cutoff(a.common.cutoff, cutoff::Basis::wavenumber);
    const auto units = a.common.unit_system();
    auto m = pcas::cli::make_manifest("mc pressure");
    m.seed = a.seed;
    m.parameters["samples"] = a.samples;
    m.parameters["seed"] = a.seed;
    m.parameters["distance"] = a.distance;
    m.parameters["proposal_scale"] = a.proposal_scale;
    m.parameters["cutoff"] = cutoff::to_string(spec);
    m.parameters["units"] = a.common.units;
    m.parameters["format"] = a.common.format;
    m.parameters["workers"] = a.common.workers;

    mcsim::SimConfig cfg;
    cfg.samples = a.samples;
    cfg.seed = a.seed;
    cfg.cutoff = spec;
    cfg.proposal_scale = a.proposal_scale;
    cfg.workers = a.common.workers;
    const casimir::PlateGeometry geom{a.distance};
    const auto est = mcsim::estimate_pressure_in(cfg, geom, units);
    const auto ref = casimir::pressure_in(spec, geom, units);
    const double z = est.standard_error > 0 ? (est.result.value - ref.value) / est.standard_error : 0.0;

    if (a.common.format == "json") {
        json j;
        j["value"] = est.result.value;
        j["error"] = est.standard_error;
        j["method"] = "monte-carlo";
        j["unit"] = pressure_unit(units);
        j["samples"] = est.samples;
        j["nonzero_weights"] = est.nonzero_weights;
        j["quadrature"] = value_error(ref.value, ref.numerical_error);
        j["z_score"] = z;
        print_json(std::move(j), m);
        return exit_ok;
    }
    const std::vector<Row> rows{
        {"p_in_mc", est.result.value, est.standard_error},
        {"p_in_quadrature", ref.value, ref.numerical_error},
        {"z_score", z, std::nullopt},
        {"nonzero_weights", static_cast<double>(est.nonzero_weights), std::nullopt},
    };
    if (a.common.format == "table")
        std::printf("mc pressure  samples %llu  seed %llu  cutoff %s\n", static_cast<unsigned long long>(a.samples),
                    static_cast<unsigned long long>(a.seed), cutoff::to_string(spec).c_str());
    print_rows(rows, a.common.format, m);
    return exit_ok;
}

// ---------------------------------------------------------------- mc cavity

struct McCavityArgs {
    Common common;
    std::string kz = "resonant";
    long mode = 1;
    double distance = 1.0;
    std::size_t bounces = 100;
    std::size_t runs = 1;
    std::uint64_t seed = 42;
    double amplitude = 0.5;
    double scan_min = 0, scan_max = 0;
    std::size_t scan_points = 0;
};

void setup_mc_cavity(CLI::App* mc, McCavityArgs& a)
{
    auto* sub = mc->add_subcommand("cavity", "Single photons bouncing between the plates");
    sub->add_option("--kz", a.kz, "Normal wavenumber: a number, 'resonant' or 'antiresonant'")
        ->capture_default_str();
    sub->add_option("--mode", a.mode, "n for --kz resonant (n pi/d) or antiresonant ((n + 1/2) pi/d)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--distance", a.distance, "Plate gap d")->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--bounces", a.bounces, "Wall arrivals per run")->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--runs", a.runs, "Independent photons")->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--seed", a.seed, "Random seed")->capture_default_str();
    sub->add_option("--amplitude", a.amplitude, "Reflection amplitude C in [0, 1/2]")
        ->check(CLI::Range(0.0, 0.5))
        ->capture_default_str();
    sub->add_option("--scan-min", a.scan_min, "Survival scan: smallest k_z")->check(CLI::PositiveNumber);
    sub->add_option("--scan-max", a.scan_max, "Survival scan: largest k_z")->check(CLI::PositiveNumber);
    sub->add_option("--scan-points", a.scan_points, "Survival scan: grid points (0 = no scan)")
        ->capture_default_str();
    add_units(sub, a.common);
    a.common.format = "csv";
    add_format(sub, a.common);
    sub->add_option("--workers", a.common.workers, "OpenMP threads (0 = default)")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
}

double resolve_kz(const McCavityArgs& a)
{
    if (a.kz == "resonant") return static_cast<double>(a.mode) * pi / a.distance;
    if (a.kz == "antiresonant") return (static_cast<double>(a.mode) + 0.5) * pi / a.distance;
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(a.kz, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != a.kz.size() || !(v > 0)) throw UsageError("--kz must be a positive number, resonant or antiresonant");
    return v;
}

json survival_json(const mcsim::CavitySurvival& s, double d)
{
    const auto mode = model::resonant_mode(s.k_z, d, 1e-9);
    return {{"k_z", s.k_z},
            {"runs", s.runs},
            {"bounces", s.bounces},
            {"mean_reflections", s.mean_reflections},
            {"full_survival_fraction", s.full_survival_fraction},
            {"mean_momentum", s.mean_momentum},
            {"resonant_mode", mode ? json(mode->value()) : json(nullptr)}};
}

int run_mc_cavity(const McCavityArgs& a)
{
    const auto units = a.common.unit_system();
    const casimir::PlateGeometry geom{a.distance};
    const bool scan = a.scan_points > 0;
    if (scan && !(a.scan_max >= a.scan_min && a.scan_min > 0))
        throw UsageError("--scan-points needs 0 < --scan-min <= --scan-max");
    const double kz = resolve_kz(a);

    auto m = pcas::cli::make_manifest("mc cavity");
    m.seed = a.seed;
    m.parameters["kz"] = a.kz;
    m.parameters["kz_value"] = kz;
    m.parameters["mode"] = a.mode;
    m.parameters["distance"] = a.distance;
    m.parameters["bounces"] = a.bounces;
    m.parameters["runs"] = a.runs;
    m.parameters["seed"] = a.seed;
    m.parameters["amplitude"] = a.amplitude;
    if (scan) {
        m.parameters["scan_min"] = a.scan_min;
        m.parameters["scan_max"] = a.scan_max;
        m.parameters["scan_points"] = a.scan_points;
    }
    m.parameters["units"] = a.common.units;
    m.parameters["format"] = a.common.format;
    m.parameters["workers"] = a.common.workers;

    mcsim::SimConfig cfg;
    cfg.seed = a.seed;
    cfg.workers = a.common.workers;
    cfg.reflect_amplitude = a.amplitude;

    std::vector<mcsim::CavitySurvival> grid;
    if (scan) {
        for (std::size_t i = 0; i < a.scan_points; ++i) {
            const double t = a.scan_points == 1 ? 0.0 : double(i) / double(a.scan_points - 1);
            grid.push_back(mcsim::cavity_survival(a.scan_min + t * (a.scan_max - a.scan_min), geom, a.bounces,
                                                  a.runs, cfg, units));
        }
    }
    const auto first = mcsim::simulate_cavity(kz, geom, a.bounces, cfg, 0, units);
    const auto summary = mcsim::cavity_survival(kz, geom, a.bounces, a.runs, cfg, units);

    if (a.common.format == "json") {
        json j;
        j["value"] = summary.mean_reflections;
        j["error"] = nullptr;
        j["method"] = "monte-carlo";
        json recs = json::array();
        for (const auto& r : first.records)
            recs.push_back({{"bounce_index", r.bounce_index},
                            {"arrival_phase", r.arrival_phase},
                            {"reflect_prob", r.reflect_prob},
                            {"delivered_momentum", r.delivered_momentum},
                            {"sign_after", r.sign_after.value()}});
        j["records"] = std::move(recs);
        j["terminated_at"] = first.terminated_at ? json(*first.terminated_at) : json(nullptr);
        j["survival"] = survival_json(summary, a.distance);
        if (scan) {
            json arr = json::array();
            for (const auto& s : grid) arr.push_back(survival_json(s, a.distance));
            j["scan"] = std::move(arr);
        }
        print_json(std::move(j), m);
        return exit_ok;
    }
    auto mode_text = [&](double k) {
        const auto mode = model::resonant_mode(k, a.distance, 1e-9);
        return mode ? std::to_string(mode->value()) : std::string();
    };
    if (a.common.format == "csv") {
        if (scan) {
            std::cout << "k_z,mean_reflections,full_survival_fraction,mean_momentum,resonant_mode\n";
            for (const auto& s : grid)
                std::cout << sci(s.k_z) << ',' << sci(s.mean_reflections) << ',' << sci(s.full_survival_fraction)
                          << ',' << sci(s.mean_momentum) << ',' << mode_text(s.k_z) << '\n';
        } else {
            std::ostringstream out;
            mcsim::write_csv(out, first.records);
            std::cout << out.str();
        }
        std::cout << "# survival k_z=" << sci(kz) << " runs=" << summary.runs << " bounces=" << summary.bounces
                  << " mean_reflections=" << sci(summary.mean_reflections)
                  << " full_survival_fraction=" << sci(summary.full_survival_fraction)
                  << " mean_momentum=" << sci(summary.mean_momentum) << '\n';
        std::cout << "# manifest " << m.to_json().dump() << '\n';
        return exit_ok;
    }
    std::printf("cavity d=%.12g  k_z=%.12g  mode %s  bounces %zu  runs %zu\n", a.distance, kz,
                mode_text(kz).empty() ? "-" : mode_text(kz).c_str(), a.bounces, a.runs);
    std::printf("first run: %zu reflections%s\n", first.records.size(),
                first.terminated_at ? (", passed through at arrival " + std::to_string(*first.terminated_at)).c_str()
                                    : "");
    std::printf("%8s  %14s  %14s  %14s  %5s\n", "bounce", "phase", "p", "momentum", "sign");
    for (const auto& r : first.records)
        std::printf("%8zu  %14.6e  %14.6e  %14.6e  %+5d\n", r.bounce_index, r.arrival_phase, r.reflect_prob,
                    r.delivered_momentum, r.sign_after.value());
    std::printf("mean reflections %.6f  full survival %.4f  mean momentum %.6e\n", summary.mean_reflections,
                summary.full_survival_fraction, summary.mean_momentum);
    if (scan) {
        std::printf("%22s  %16s  %14s  %5s\n", "k_z", "mean_reflections", "full_survival", "mode");
        for (const auto& s : grid)
            std::printf("%22.12e  %16.6f  %14.4f  %5s\n", s.k_z, s.mean_reflections, s.full_survival_fraction,
                        mode_text(s.k_z).c_str());
    }
    std::printf("manifest: %s\n", m.to_json().dump().c_str());
    return exit_ok;
}

// -------------------------------------------------------- validate-cutoff

struct ValidateArgs {
    Common common;
    std::optional<double> grid_max;
    int grid_points = 20001;
};

void setup_validate(CLI::App& app, ValidateArgs& a)
{
    auto* sub = app.add_subcommand("validate-cutoff", "Check a cutoff against the admissibility conditions");
    sub->add_option("--cutoff", a.common.cutoff, "Cutoff spec family:key=value,...")->required();
    sub->add_option("--grid-max", a.grid_max, "Largest argument on the check grid (default per family)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--grid-points", a.grid_points, "Grid points")->check(CLI::Range(16, 100000000))->capture_default_str();
    add_format(sub, a.common);
}

int run_validate(const ValidateArgs& a)
{
    const auto spec = parse_cutoff(a.common.cutoff, cutoff::Basis::reduced);
    const double grid_max = a.grid_max ? *a.grid_max : cutoff::default_grid_max(spec);
    auto m = pcas::cli::make_manifest("validate-cutoff");
    m.parameters["cutoff"] = cutoff::to_string(spec);
    m.parameters["grid_max"] = grid_max;
    m.parameters["grid_points"] = a.grid_points;
    m.parameters["format"] = a.common.format;
    const auto report = cutoff::validate(spec, grid_max, a.grid_points);

    if (a.common.format == "json") {
        json j;
        j["value"] = report.passed();
        j["error"] = nullptr;
        j["method"] = "grid-validator";
        json checks = json::array();
        for (const auto& c : report.checks)
            checks.push_back({{"name", c.name}, {"passed", c.passed}, {"measured", c.measured}, {"detail", c.detail}});
        j["checks"] = std::move(checks);
        print_json(std::move(j), m);
    } else if (a.common.format == "csv") {
        std::cout << "check,passed,measured,detail\n";
        for (const auto& c : report.checks)
            std::cout << '"' << c.name << "\"," << (c.passed ? 1 : 0) << ',' << sci(c.measured) << ",\"" << c.detail
                      << "\"\n";
        std::cout << "# manifest " << m.to_json().dump() << '\n';
    } else {
        std::printf("cutoff %s\n", cutoff::to_string(spec).c_str());
        for (const auto& c : report.checks)
            std::printf("%-4s  %-36s  %14.6e  %s\n", c.passed ? "ok" : "FAIL", c.name.c_str(), c.measured,
                        c.detail.c_str());
        std::printf("manifest: %s\n", m.to_json().dump().c_str());
    }
    if (!report.passed()) {
        for (const auto* f : report.failures())
            std::cerr << "validation failed: " << f->name << " (measured " << f->measured << ")\n";
        return exit_validation;
    }
    return exit_ok;
}

const CLI::App* deepest_selected(const CLI::App* app)
{
    for (const auto* sub : app->get_subcommands()) return deepest_selected(sub);
    return app;
}

// A flat `key = value` file becomes `--key value` flags inserted right
// after the subcommand path, so flags given on the command line (which come
// later and win under TakeLast) override it.
std::vector<std::string> expand_config(int argc, char** argv)
{
    std::vector<std::string> args(argv, argv + argc);
    std::optional<std::string> path;
    for (std::size_t i = 1; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) throw UsageError("--config needs a file name");
            path = args[i + 1];
            args.erase(args.begin() + static_cast<long>(i), args.begin() + static_cast<long>(i) + 2);
            break;
        }
        if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
            args.erase(args.begin() + static_cast<long>(i));
            break;
        }
    }
    if (!path) return args;

    std::ifstream in(*path);
    if (!in) throw UsageError("--config: cannot read " + *path);
    auto trim = [](std::string t) {
        const auto b = t.find_first_not_of(" \t\r");
        const auto e = t.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : t.substr(b, e - b + 1);
    };
    std::vector<std::string> extra;
    std::string line;
    for (int lineno = 1; std::getline(in, line); ++lineno) {
        line = trim(line);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw UsageError("--config: line " + std::to_string(lineno) + " is not key = value");
        std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
        if (value.size() >= 2 && (value.front() == '"' || value.front() == '\'') && value.back() == value.front())
            value = value.substr(1, value.size() - 2);
        if (key.empty()) throw UsageError("--config: empty key on line " + std::to_string(lineno));
        extra.push_back("--" + key);
        extra.push_back(value);
    }
    // Subcommand path: `mc pressure`, `mc cavity` or a single name.
    std::size_t at = 1;
    if (at < args.size() && args[at] == "mc") ++at;
    if (at < args.size() && !args[at].empty() && args[at][0] != '-') ++at;
    args.insert(args.begin() + static_cast<long>(at), extra.begin(), extra.end());
    return args;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"pcas: plate pressures, ball force and photon Monte Carlo with a smooth wavenumber cutoff"};
    app.set_version_flag("--version", PCAS_VERSION);
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    // Handled by expand_config before parsing; declared here for --help.
    std::string config_path;
    app.add_option("--config", config_path, "Flat key = value file supplying option defaults; flags override it");

    PlatesArgs plates;
    SweepArgs sweep;
    EmArgs em;
    BallArgs ball;
    McPressureArgs mc_pressure;
    McCavityArgs mc_cavity;
    ValidateArgs validate;
    setup_plates(app, plates);
    setup_sweep(app, sweep);
    setup_em(app, em);
    setup_ball(app, ball);
    auto* mc = app.add_subcommand("mc", "Monte Carlo: inward pressure or cavity survival");
    mc->require_subcommand(1);
    setup_mc_pressure(mc, mc_pressure);
    setup_mc_cavity(mc, mc_cavity);
    setup_validate(app, validate);
    std::vector<std::string> args;
    try {
        args = expand_config(argc, argv);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    }
    try {
        // CLI11 takes the arguments in reverse order, without the program name.
        std::vector<std::string> reversed(args.rbegin(), args.rend() - 1);
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << deepest_selected(&app)->help();
        return exit_usage;
    }

    try {
        if (app.got_subcommand("plates")) return run_plates(plates);
        if (app.got_subcommand("sweep")) return run_sweep(sweep);
        if (app.got_subcommand("em")) return run_em(em);
        if (app.got_subcommand("ball")) return run_ball(ball);
        if (app.got_subcommand("validate-cutoff")) return run_validate(validate);
        if (mc->got_subcommand("pressure")) return run_mc_pressure(mc_pressure);
        if (mc->got_subcommand("cavity")) return run_mc_cavity(mc_cavity);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const ConvergenceError& e) {
        std::cerr << "error: " << e.what() << " (best estimate " << static_cast<double>(e.best_estimate())
                  << ", error estimate " << static_cast<double>(e.error_estimate()) << ")\n";
        return exit_convergence;
    } catch (const ZeroEffectiveSamples& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_degenerate_mc;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    }
    std::cerr << app.help();
    return exit_usage;
}
