#ifndef HLUSIN_IO_HPP
#define HLUSIN_IO_HPP

// JSON and CSV encodings of interval sets, jets, curves and reports.

#include "counterexample.hpp"
#include "diff_analysis.hpp"

#include <json.hpp>

#include <iomanip>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

namespace hlusin::io {

using nlohmann::json;

/// Rational rendering: "p/q" by default, fixed decimals when `decimal` is set.
struct Format
{
    std::optional<int> decimal;

    std::string operator()(const Rational& r) const { return decimal ? r.decimal(*decimal) : r.str(); }
};

/// Rounded scientific rendering for double-valued diagnostics.
inline std::string sci(double v)
{
    std::ostringstream os;
    os << std::scientific << std::setprecision(6) << v;
    return os.str();
}

inline Rational rational_from_json(const json& j)
{
    if (j.is_string())
        return Rational::parse(j.get<std::string>());
    if (j.is_number_integer())
        return Rational(j.get<long>());
    if (j.is_number())
        return Rational::from_double(j.get<double>());
    throw std::invalid_argument("expected a rational as string or number");
}

inline json to_json(const Enclosure& e, const Format& fmt)
{
    if (e.is_exact())
        return json{{"exact", true}, {"value", fmt(e.lo)}};
    return json{{"exact", false}, {"lo", fmt(e.lo)}, {"hi", fmt(e.hi)}};
}

// ---- IntervalSet: [{"lo","hi","lo_closed","hi_closed"}] ----

inline json to_json(const IntervalSet& s, const Format& fmt)
{
    json a = json::array();
    for (const auto& p : s.components())
        a.push_back({{"lo", fmt(p.lo)}, {"hi", fmt(p.hi)}, {"lo_closed", p.lo_closed}, {"hi_closed", p.hi_closed}});
    return a;
}

inline IntervalSet interval_set_from_json(const json& j)
{
    if (!j.is_array())
        throw std::invalid_argument("IntervalSet JSON must be an array");
    std::vector<Interval> parts;
    for (const auto& e : j)
        parts.push_back({rational_from_json(e.at("lo")), rational_from_json(e.at("hi")), e.value("lo_closed", true),
                         e.value("hi_closed", true)});
    return IntervalSet(std::move(parts));
}

// ---- Jets: {"m": m, "sites": [{"x", "F": [...], "G": [...], "H": [...]}]} ----

inline json to_json(const JetTriple& t, const Format& fmt)
{
    json sites = json::array();
    for (std::size_t i = 0; i < t.sites().size(); ++i) {
        json s{{"x", fmt(t.sites()[i])}};
        for (const auto& [name, jet] : {std::pair{"F", &t.F}, std::pair{"G", &t.G}, std::pair{"H", &t.H}}) {
            json v = json::array();
            for (const auto& r : jet->values(i))
                v.push_back(fmt(r));
            s[name] = v;
        }
        sites.push_back(s);
    }
    return json{{"m", t.order()}, {"sites", sites}};
}

/// Reads a jet triple; sites may appear in any order and are sorted on input.
inline JetTriple jets_from_json(const json& j)
{
    const int m = j.at("m").get<int>();
    struct Row { Rational x; std::vector<Rational> f, g, h; };
    std::vector<Row> rows;
    auto vec = [&](const json& a) {
        if (!a.is_array() || a.size() != static_cast<std::size_t>(m) + 1)
            throw std::invalid_argument("jet JSON: each of F, G, H needs m + 1 values");
        std::vector<Rational> out;
        for (const auto& v : a)
            out.push_back(rational_from_json(v));
        return out;
    };
    for (const auto& s : j.at("sites"))
        rows.push_back({rational_from_json(s.at("x")), vec(s.at("F")), vec(s.at("G")), vec(s.at("H"))});
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.x < b.x; });
    std::vector<Rational> xs;
    std::vector<std::vector<Rational>> f, g, h;
    for (auto& r : rows) {
        xs.push_back(r.x);
        f.push_back(std::move(r.f));
        g.push_back(std::move(r.g));
        h.push_back(std::move(r.h));
    }
    return JetTriple(Jet(m, xs, std::move(f)), Jet(m, xs, std::move(g)), Jet(m, xs, std::move(h)));
}

// ---- Reports ----

inline json to_json(const ExtendabilityReport& r, const Format& fmt)
{
    auto profile = [&](const std::vector<ProfilePoint>& p) {
        json a = json::array();
        for (const auto& pt : p)
            a.push_back({{"delta", fmt(pt.delta)}, {"value", fmt(pt.value)}, {"populated", pt.populated}});
        return a;
    };
    json ratios = json::array();
    for (const auto& pt : r.area_ratio)
        ratios.push_back({{"delta", fmt(pt.delta)},
                          {"value", pt.value.is_exact() ? fmt(pt.value.lo) : fmt(pt.value.hi)},
                          {"populated", pt.populated}});
    return json{{"whitney", {{"F", profile(r.whitney_f)}, {"G", profile(r.whitney_g)}, {"H", profile(r.whitney_h)}}},
                {"ode_residual_max", fmt(r.max_ode_residual)},
                {"area_ratio", ratios},
                {"whitney_pass", r.whitney_pass},
                {"ode_pass", r.ode_pass},
                {"area_pass", r.area_pass},
                {"verdict", r.verdict() ? "pass" : "fail"}};
}

inline json to_json(const SequenceCheck& s, const Format& fmt)
{
    json values = json::array();
    for (const auto& v : s.values)
        values.push_back(to_json(v, fmt));
    json j{{"name", s.name}, {"values", values}};
    if (s.p > 0)
        j["p"] = s.p;
    j["decreasing_from"] = s.decreasing_from ? json(*s.decreasing_from) : json(nullptr);
    j["increasing_from"] = s.increasing_from ? json(*s.increasing_from) : json(nullptr);
    return j;
}

inline json to_json(const ParamsReport& r, const Format& fmt)
{
    json sums = json::array();
    for (const auto& s : r.lambda_partial_sums)
        sums.push_back(fmt(s));
    json w2 = json::array();
    for (const auto& s : r.width_height_tails)
        w2.push_back(to_json(s, fmt));
    return json{{"lambda_partial_sums", sums},
                {"h_over_lambda", to_json(r.h_over_lambda, fmt)},
                {"four_pow_n_h", to_json(r.scaled_height, fmt)},
                {"area_tail", to_json(r.area_tail, fmt)},
                {"width_tail", to_json(r.width_tail, fmt)},
                {"width_height_tails", w2},
                {"width_bound_ok", r.width_bound_ok}};
}

inline json to_json(const StraddleReport& r, const Format& fmt)
{
    return json{{"n", r.n},
                {"x", fmt(r.x)},
                {"y", fmt(r.y)},
                {"area", fmt(r.area)},
                {"velocity", to_json(r.velocity, fmt)},
                {"pair_ratio", fmt(r.pair_ratio)},
                {"max_velocity", fmt(r.max_velocity)},
                {"ratio", fmt(r.contradiction_ratio)},
                {"scaled_height", fmt(r.scaled_height)},
                {"exceeds_two", r.exceeds_two}};
}

inline json to_json(const MeasureReport& r, const Format& fmt)
{
    json levels = json::array();
    for (const auto& l : r.levels)
        levels.push_back({{"n", l.n},
                          {"components", l.components},
                          {"width_partial_sum", fmt(l.width_partial_sum)},
                          {"union_measure", fmt(l.union_measure)},
                          {"dilated_measure", fmt(l.dilated_measure)},
                          {"exclusion_measure", fmt(l.exclusion_measure)},
                          {"exclusion_bound", fmt(l.exclusion_bound)}});
    return json{{"support_measure", fmt(r.support_measure)}, {"levels", levels}};
}

inline json to_json(const SieveReport& r, const Format& fmt)
{
    json mod = json::array();
    for (const auto& p : r.modulus)
        mod.push_back({{"delta", fmt(p.delta)}, {"value", sci(p.value)}, {"populated", p.populated}});
    json fails = json::array();
    for (auto c : r.first_failure)
        fails.push_back(c);
    return json{{"m", r.m},          {"eps", fmt(r.eps)},         {"cells", r.cells},
                {"measure", fmt(r.measure)}, {"meets_budget", r.meets_budget}, {"first_failure", fails},
                {"modulus", mod}};
}

// ---- CSV ----

/// Header t,f,g,h then one row per t, LF line endings.
inline void write_curve_csv(std::ostream& os, const PiecewiseCurve& c, std::span<const Rational> ts, const Format& fmt)
{
    os << "t,f,g,h\n";
    for (const auto& t : ts) {
        CurvePoint p = c(t);
        os << fmt(t) << ',' << fmt(p.f) << ',' << fmt(p.g) << ',' << fmt(p.h) << '\n';
    }
}

struct CurveSamples
{
    std::vector<Rational> t;
    std::vector<Rational> f;
    std::vector<Rational> g;
};

/// Reads t,f,g[,h] rows (header required; the h column is ignored).
inline CurveSamples read_curve_csv(std::istream& is)
{
    std::string line;
    if (!std::getline(is, line))
        throw std::invalid_argument("curve CSV: missing header");
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
    if (line != "t,f,g,h" && line != "t,f,g")
        throw std::invalid_argument("curve CSV: header must be t,f,g,h or t,f,g");
    CurveSamples s;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ','))
            cells.push_back(cell);
        if (cells.size() < 3)
            throw std::invalid_argument("curve CSV: row needs at least t,f,g");
        s.t.push_back(Rational::parse(cells[0]));
        s.f.push_back(Rational::parse(cells[1]));
        s.g.push_back(Rational::parse(cells[2]));
    }
    if (s.t.size() < 2)
        throw std::invalid_argument("curve CSV: need at least two rows");
    return s;
}

/// Piecewise-linear interpolation of the samples, lifted from h(t_0) = h0.
inline PiecewiseCurve lift_samples(const CurveSamples& s, const Rational& h0)
{
    std::vector<Polynomial> f, g;
    for (std::size_t i = 1; i < s.t.size(); ++i) {
        if (!(s.t[i - 1] < s.t[i]))
            throw std::invalid_argument("curve CSV: t must be strictly increasing");
        auto linear = [&](const std::vector<Rational>& v) {
            Rational slope = (v[i] - v[i - 1]) / (s.t[i] - s.t[i - 1]);
            return Polynomial({v[i - 1] - slope * s.t[i - 1], slope});
        };
        f.push_back(linear(s.f));
        g.push_back(linear(s.g));
    }
    return lift(s.t, f, g, h0);
}

/// Header rho,value then one row per scale.
inline void write_ladder_csv(std::ostream& os, const LadderReport& r, const Format& fmt)
{
    os << "rho,value\n";
    for (const auto& p : r.points)
        os << fmt(p.rho) << ',' << sci(p.value) << '\n';
}

} // namespace hlusin::io

#endif
