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

#include "pcas/cutoff.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <limits>
#include <map>
#include <stdexcept>

namespace pcas::cutoff {

namespace {

// Shortest text that parses back to the same double, or `digits`
// significant digits for human-facing detail.
std::string format_double(double v, int digits = 0)
{
    char buf[64];
    if (digits > 0) {
        std::snprintf(buf, sizeof buf, "%.*g", digits, v);
        return buf;
    }
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

double parse_number(std::string_view key, std::string_view text)
{
    // std::from_chars for double is unavailable on older libstdc++.
    std::string s(text);
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v))
        throw std::invalid_argument("bad value for cutoff key '" + std::string(key) + "': '" + s + "'");
    return v;
}

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

} // namespace

CutoffSpec plateau(double u0, double u1, Basis basis)
{
    CutoffSpec s;
    s.family = Family::plateau;
    s.plateau_start = u0;
    s.plateau_end = u1;
    s.basis = basis;
    check_parameters(s);
    return s;
}

CutoffSpec exponential(double kc, Basis basis)
{
    CutoffSpec s;
    s.family = Family::exponential;
    s.scale = kc;
    s.basis = basis;
    check_parameters(s);
    return s;
}

CutoffSpec supergauss(double kc, double p, Basis basis)
{
    CutoffSpec s;
    s.family = Family::supergauss;
    s.scale = kc;
    s.exponent = p;
    s.basis = basis;
    check_parameters(s);
    return s;
}

CutoffSpec constant(double level, Basis basis)
{
    CutoffSpec s;
    s.family = Family::constant;
    s.level = level;
    s.bound = std::max(1.0, level);
    s.basis = basis;
    check_parameters(s);
    return s;
}

void check_parameters(const CutoffSpec& spec)
{
    if (!(spec.bound > 0)) throw std::invalid_argument("cutoff bound H must be positive");
    switch (spec.family) {
    case Family::plateau:
        if (!(spec.plateau_start >= 0))
            throw std::invalid_argument("plateau needs u0 >= 0");
        if (!(spec.plateau_start < spec.plateau_end))
            throw std::invalid_argument("plateau needs u0 < u1");
        break;
    case Family::exponential:
        if (!(spec.scale > 0)) throw std::invalid_argument("exponential cutoff needs kc > 0");
        break;
    case Family::supergauss:
        if (!(spec.scale > 0)) throw std::invalid_argument("supergauss cutoff needs kc > 0");
        if (!(spec.exponent > 0)) throw std::invalid_argument("supergauss cutoff needs p > 0");
        break;
    case Family::constant:
        if (!(spec.level >= 0)) throw std::invalid_argument("constant cutoff needs value >= 0");
        break;
    }
}

std::string_view family_name(Family f) noexcept
{
    switch (f) {
    case Family::plateau: return "plateau";
    case Family::exponential: return "exp";
    case Family::supergauss: return "supergauss";
    case Family::constant: return "const";
    }
    return "?";
}

CutoffSpec parse(std::string_view text, Basis default_basis)
{
    text = trim(text);
    const auto colon = text.find(':');
    const std::string_view fam = trim(text.substr(0, colon));
    std::map<std::string, std::string, std::less<>> kv;
    if (colon != std::string_view::npos) {
        std::string_view rest = text.substr(colon + 1);
        while (!rest.empty()) {
            const auto comma = rest.find(',');
            const std::string_view item = trim(rest.substr(0, comma));
            rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
            if (item.empty()) continue;
            const auto eq = item.find('=');
            if (eq == std::string_view::npos)
                throw std::invalid_argument("cutoff parameter without '=': '" + std::string(item) + "'");
            kv[std::string(trim(item.substr(0, eq)))] = std::string(trim(item.substr(eq + 1)));
        }
    }

    CutoffSpec spec;
    spec.basis = default_basis;
    std::vector<std::string_view> allowed;
    if (fam == "plateau") {
        spec.family = Family::plateau;
        allowed = {"u0", "u1"};
    } else if (fam == "exp" || fam == "exponential") {
        spec.family = Family::exponential;
        allowed = {"kc"};
    } else if (fam == "supergauss" || fam == "super-gaussian") {
        spec.family = Family::supergauss;
        allowed = {"kc", "p"};
    } else if (fam == "const" || fam == "constant") {
        spec.family = Family::constant;
        allowed = {"value"};
    } else {
        throw std::invalid_argument("unknown cutoff family '" + std::string(fam) + "'");
    }

    for (const auto& [key, value] : kv) {
        if (key == "basis") {
            if (value == "reduced") spec.basis = Basis::reduced;
            else if (value == "k" || value == "wavenumber") spec.basis = Basis::wavenumber;
            else throw std::invalid_argument("cutoff basis must be 'reduced' or 'k'");
            continue;
        }
        if (key == "H") {
            spec.bound = parse_number(key, value);
            continue;
        }
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw std::invalid_argument("unknown key '" + key + "' for cutoff family '" +
                                        std::string(fam) + "'");
        const double v = parse_number(key, value);
        if (key == "u0") spec.plateau_start = v;
        else if (key == "u1") spec.plateau_end = v;
        else if (key == "kc") spec.scale = v;
        else if (key == "p") spec.exponent = v;
        else if (key == "value") spec.level = v;
    }
    if (spec.family == Family::constant && !kv.contains("H")) spec.bound = std::max(1.0, spec.level);
    check_parameters(spec);
    return spec;
}

std::string to_string(const CutoffSpec& spec)
{
    std::string out(family_name(spec.family));
    out += ':';
    switch (spec.family) {
    case Family::plateau:
        out += "u0=" + format_double(spec.plateau_start) + ",u1=" + format_double(spec.plateau_end);
        break;
    case Family::exponential:
        out += "kc=" + format_double(spec.scale);
        break;
    case Family::supergauss:
        out += "kc=" + format_double(spec.scale) + ",p=" + format_double(spec.exponent);
        break;
    case Family::constant:
        out += "value=" + format_double(spec.level);
        break;
    }
    if (spec.bound != 1.0) out += ",H=" + format_double(spec.bound);
    out += spec.basis == Basis::reduced ? ",basis=reduced" : ",basis=k";
    return out;
}

std::optional<double> support_end(const CutoffSpec& spec)
{
    switch (spec.family) {
    case Family::plateau: return spec.plateau_end;
    case Family::constant:
        if (spec.level == 0.0) return 0.0;
        return std::nullopt;
    default: return std::nullopt;
    }
}

double natural_scale(const CutoffSpec& spec)
{
    switch (spec.family) {
    case Family::plateau: return spec.plateau_end;
    case Family::exponential:
    case Family::supergauss: return spec.scale;
    case Family::constant: return 1.0;
    }
    return 1.0;
}

GDerivs derivatives_at_zero(const CutoffSpec& spec)
{
    constexpr double inf = std::numeric_limits<double>::infinity();
    switch (spec.family) {
    case Family::plateau: return {1.0, 0.0, 0.0};
    case Family::exponential: {
        const double kc = spec.scale;
        return {1.0, -1.0 / kc, 1.0 / (kc * kc)};
    }
    case Family::supergauss: {
        const double kc = spec.scale, p = spec.exponent;
        if (p == 1.0) return {1.0, -1.0 / kc, 1.0 / (kc * kc)};
        if (p == 2.0) return {1.0, 0.0, -2.0 / (kc * kc)};
        if (p > 2.0) return {1.0, 0.0, 0.0};
        if (p > 1.0) return {1.0, 0.0, -inf};
        return {1.0, -inf, inf};
    }
    case Family::constant: return {spec.level, 0.0, 0.0};
    }
    return {};
}

bool ValidationReport::passed() const
{
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

std::vector<const Check*> ValidationReport::failures() const
{
    std::vector<const Check*> out;
    for (const auto& c : checks)
        if (!c.passed) out.push_back(&c);
    return out;
}

double default_grid_max(const CutoffSpec& spec)
{
    switch (spec.family) {
    case Family::plateau: return 1.5 * spec.plateau_end;
    case Family::exponential: return 60.0 * spec.scale;
    case Family::supergauss: return 1.5 * spec.scale * std::pow(60.0, 1.0 / spec.exponent);
    case Family::constant: return 100.0;
    }
    return 100.0;
}

ValidationReport validate(const CutoffSpec& spec, double grid_max, int grid_points)
{
    if (grid_points < 16) throw std::invalid_argument("validation grid needs at least 16 points");
    if (!(grid_max > 0)) throw std::invalid_argument("validation grid_max must be positive");

    ValidationReport report;
    auto g = [&](double k) { return evaluate(spec, k); };

    const double g0 = g(0.0);
    report.checks.push_back({"g(0) = 1", std::abs(g0 - 1.0) <= 1e-12, g0, ""});

    const double h = grid_max / (grid_points - 1);
    std::vector<double> values(static_cast<std::size_t>(grid_points));
    for (int i = 0; i < grid_points; ++i) values[static_cast<std::size_t>(i)] = g(i * h);

    const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
    report.checks.push_back({"0 <= g <= H", *mn >= 0.0 && *mx <= spec.bound, *mx,
                             "max on grid vs H = " + format_double(spec.bound)});

    double worst_rise = 0.0;
    for (std::size_t i = 1; i < values.size(); ++i)
        worst_rise = std::max(worst_rise, values[i] - values[i - 1]);
    report.checks.push_back({"non-increasing", worst_rise <= 1e-14, worst_rise, "largest rise between grid points"});

    // Trapezoid moments with a one-panel tail proxy K * K^m g(K).
    auto moment = [&](int power) {
        double sum = 0.0;
        for (std::size_t i = 0; i < values.size(); ++i) {
            const double k = static_cast<double>(i) * h;
            const double w = (i == 0 || i + 1 == values.size()) ? 0.5 : 1.0;
            sum += w * std::pow(k, power) * values[i];
        }
        return sum * h;
    };
    for (int power : {2, 4}) {
        const double m = moment(power);
        const double tail = grid_max * std::pow(grid_max, power) * values.back();
        const double ratio = m > 0 ? tail / m : (tail > 0 ? std::numeric_limits<double>::infinity() : 0.0);
        const bool ok = std::isfinite(m) && m > 0 && ratio <= 1e-6;
        report.checks.push_back({"finite k^" + std::to_string(power) + " moment, negligible tail", ok, ratio,
                                 "moment " + format_double(m, 8) + ", tail/moment ratio"});
    }

    // Second-order forward stencils; g is only defined for k >= 0.
    const double step = (spec.family == Family::plateau ? spec.plateau_start : natural_scale(spec)) / 100.0;
    if (step > 0) {
        double f[6];
        for (int i = 0; i < 6; ++i) f[i] = g(i * step);
        const double d1 = (-3 * f[0] + 4 * f[1] - f[2]) / (2 * step);
        const double d2 = (2 * f[0] - 5 * f[1] + 4 * f[2] - f[3]) / (step * step);
        const double d3 = (-5 * f[0] + 18 * f[1] - 24 * f[2] + 14 * f[3] - 3 * f[4]) / (2 * step * step * step);
        const double d4 = (3 * f[0] - 14 * f[1] + 26 * f[2] - 24 * f[3] + 11 * f[4] - 2 * f[5]) /
                          (step * step * step * step);
        const double derivs[4] = {d1, d2, d3, d4};
        for (int order = 1; order <= 4; ++order) {
            const double d = derivs[order - 1];
            report.checks.push_back({"g^(" + std::to_string(order) + ")(0) = 0", std::abs(d) < 1e-8, d,
                                     "forward difference, step " + format_double(step, 6)});
        }
    } else {
        // u0 = 0: no flat region at the origin.
        report.checks.push_back({"g^(1..4)(0) = 0", false, 0.0, "plateau starts at 0"});
    }
    return report;
}

} // namespace pcas::cutoff
