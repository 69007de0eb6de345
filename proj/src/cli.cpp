#include "cli.hpp"

#include "hlusin/io.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace hlusin::cli {

namespace fs = std::filesystem;
using io::json;

/// Bad flag values discovered after parsing; reported like parse errors (exit 2).
struct UsageError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

struct Config
{
    int depth = 10;
    int p_max = 4;
    int n = 7;
    int m = 2;
    std::optional<int> jet_m;
    int p = 1;
    int ladder_steps = 12;
    int grid_exponent = 14;
    int n_max = 6;
    int samples = 1024;
    bool breakpoints = false;
    std::optional<int> decimal;
    std::string input;
    std::string output;
    std::string out_dir;
    std::string x = "1/3";
    std::string h0 = "0";
    std::string eps = "1/20";
    std::string radius = "1/100";
    std::string rho;
    std::string source = "counterexample";
    std::string poly = "0,0,0,1";
    std::string component = "f";
    std::string tol_whitney = "1/100";
    std::string tol_ode = "0";
    std::string tol_area = "1/100";
};

namespace detail {

Rational parse_flag(const std::string& text, const char* flag)
{
    try {
        return Rational::parse(text);
    } catch (const std::exception&) {
        throw UsageError(std::string("invalid rational for ") + flag + ": " + text);
    }
}

std::vector<Rational> parse_list(const std::string& text, const char* flag)
{
    std::vector<Rational> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(parse_flag(item, flag));
    if (out.empty())
        throw UsageError(std::string("empty list for ") + flag);
    return out;
}

Polynomial parse_poly(const std::string& text) { return Polynomial(parse_list(text, "--poly")); }

int component_index(const std::string& name)
{
    if (name == "f")
        return 0;
    if (name == "g")
        return 1;
    if (name == "h")
        return 2;
    throw UsageError("--component must be f, g or h");
}

void write_text(const std::string& path, const std::string& text, std::ostream& out)
{
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw std::runtime_error("cannot write " + path);
    f << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json read_json(const std::string& path)
{
    std::ifstream f(path);
    if (!f)
        throw UsageError("cannot read " + path);
    return json::parse(f);
}

/// The function studied by `diff` and `sieve`: a counterexample component or a polynomial on [0, 1].
PiecewisePolynomial build_source(const Config& c)
{
    if (c.source == "counterexample") {
        auto curve = build_counterexample(CounterexampleParams::defaults(c.depth));
        return PiecewisePolynomial::from_curve(curve.curve, component_index(c.component));
    }
    if (c.source == "poly")
        return PiecewisePolynomial::single(parse_poly(c.poly), Rational(0), Rational(1));
    throw UsageError("--source must be counterexample or poly");
}

std::vector<Rational> sample_points(const CounterexampleCurve& c, int samples, bool breakpoints)
{
    std::vector<Rational> ts;
    for (int j = 0; j <= samples; ++j)
        ts.push_back(Rational(j, samples));
    if (breakpoints)
        ts.insert(ts.end(), c.curve.breakpoints().begin(), c.curve.breakpoints().end());
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    return ts;
}

// ---- commands; each returns the exit status ----

int counterexample_build(const Config& c, std::ostream& out)
{
    const io::Format fmt{c.decimal};
    auto curve = build_counterexample(CounterexampleParams::defaults(c.depth));
    auto ts = sample_points(curve, c.samples, c.breakpoints);
    json levels = json::array();
    for (const auto& l : curve.levels)
        levels.push_back(io::to_json(l, fmt));
    json exclusion = json::array();
    for (int n = 1; n <= curve.depth(); ++n)
        exclusion.push_back(
            io::to_json(curve.union_up_to(n).dilate(curve.params.lambda(n)).subtract(curve.support), fmt));
    std::ostringstream csv;
    io::write_curve_csv(csv, curve.curve, ts, fmt);
    if (c.out_dir.empty()) {
        out << dump(json{{"depth", curve.depth()},
                         {"pieces", curve.curve.piece_count()},
                         {"levels", levels},
                         {"exclusion", exclusion}});
        return 0;
    }
    fs::create_directories(c.out_dir);
    const fs::path dir(c.out_dir);
    write_text((dir / "curve.csv").string(), csv.str(), out);
    write_text((dir / "levels.json").string(), dump(levels), out);
    write_text((dir / "exclusion.json").string(), dump(exclusion), out);
    return 0;
}

int counterexample_verify(const Config& c, std::ostream& out)
{
    const io::Format fmt{c.decimal};
    auto params = CounterexampleParams::defaults(c.depth);
    auto curve = build_counterexample(params);
    bool ok = true;

    json incs = json::array();
    for (const auto& inc : component_increments(curve)) {
        ok = ok && inc.matches();
        incs.push_back({{"level", inc.level},
                        {"component", inc.index},
                        {"increment", fmt(inc.increment)},
                        {"expected", fmt(inc.expected)},
                        {"match", inc.matches()}});
    }

    auto measure = measure_report(curve);
    for (const auto& l : measure.levels)
        ok = ok && l.width_partial_sum <= Rational(1, 31) && l.union_measure <= l.width_partial_sum &&
             l.exclusion_measure <= l.exclusion_bound;

    auto pr = check_params(params, c.p_max);
    for (const auto& s : pr.lambda_partial_sums)
        ok = ok && s <= Rational(4);
    ok = ok && pr.width_bound_ok && pr.h_over_lambda.decreasing_from == 1 && pr.area_tail.decreasing_from == 1 &&
         pr.scaled_height.increasing_from == 1;
    for (const auto& w : pr.width_height_tails)
        ok = ok && w.decreasing_from && *w.decreasing_from <= 3;

    json straddles = json::array();
    for (int n = 1; n + 1 <= curve.depth(); ++n) {
        auto s = straddle_ratio(curve, n);
        Rational expected = Rational(4) * s.scaled_height.pow(2);
        ok = ok && s.contradiction_ratio == expected && s.area == Rational(4) * params.h(n + 1).pow(2);
        straddles.push_back(io::to_json(s, fmt));
    }

    out << dump(json{{"depth", curve.depth()},
                     {"increments", incs},
                     {"measure", io::to_json(measure, fmt)},
                     {"params", io::to_json(pr, fmt)},
                     {"straddle", straddles},
                     {"pass", ok}});
    return ok ? 0 : 1;
}

int counterexample_straddle(const Config& c, std::ostream& out)
{
    if (c.n < 1 || c.n + 1 > c.depth)
        throw UsageError("--n must satisfy 1 <= n and n + 1 <= depth");
    auto curve = build_counterexample(CounterexampleParams::defaults(c.depth));
    out << dump(io::to_json(straddle_ratio(curve, c.n), io::Format{c.decimal}));
    return 0;
}

int jets_check(const Config& c, std::ostream& out)
{
    if (c.input.empty())
        throw UsageError("jets check requires --input");
    JetTriple t = io::jets_from_json(read_json(c.input));
    if (c.jet_m && t.order() != *c.jet_m)
        throw UsageError("--m does not match the order in the jet file");
    ReportTolerances tols{parse_flag(c.tol_whitney, "--tol-whitney"), parse_flag(c.tol_ode, "--tol-ode"),
                          parse_flag(c.tol_area, "--tol-area")};
    auto ladder = default_ladder(c.ladder_steps);
    auto report = extendability_report(t, ladder, tols);
    write_text(c.output, dump(io::to_json(report, io::Format{c.decimal})), out);
    return report.verdict() ? 0 : 1;
}

int curve_lift(const Config& c, std::ostream& out)
{
    if (c.input.empty())
        throw UsageError("curve lift requires --input");
    std::ifstream in(c.input);
    if (!in)
        throw UsageError("cannot read " + c.input);
    auto samples = io::read_curve_csv(in);
    auto curve = io::lift_samples(samples, parse_flag(c.h0, "--h0"));
    std::ostringstream csv;
    io::write_curve_csv(csv, curve, samples.t, io::Format{c.decimal});
    write_text(c.output, csv.str(), out);
    return 0;
}

/// --rho list, or lambda_n for n = 6..depth by default.
std::vector<Rational> ladder_for(const Config& c)
{
    if (!c.rho.empty())
        return parse_list(c.rho, "--rho");
    std::vector<Rational> out;
    auto params = CounterexampleParams::defaults(c.depth);
    for (int n = 6; n <= c.depth; ++n)
        out.push_back(params.lambda(n));
    return out;
}

int diff_lp(const Config& c, std::ostream& out)
{
    if (c.p < 1)
        throw UsageError("--p must be >= 1");
    auto u = build_source(c);
    auto ladder = ladder_for(c);
    auto r = lp_remainder_ladder(u, Polynomial{}, parse_flag(c.x, "--x"), c.m, c.p, ladder);
    std::ostringstream csv;
    io::write_ladder_csv(csv, r, io::Format{c.decimal});
    write_text(c.output, csv.str(), out);
    return 0;
}

int diff_density(const Config& c, std::ostream& out)
{
    auto u = build_source(c);
    Rational eps = parse_flag(c.eps, "--eps");
    Rational radius = parse_flag(c.radius, "--radius");
    if (eps.sign() <= 0 || radius.sign() <= 0)
        throw UsageError("--eps and --radius must be positive");
    auto d = approx_density(u, Polynomial{}, parse_flag(c.x, "--x"), c.m, eps, radius);
    const io::Format fmt{c.decimal};
    write_text(c.output,
               dump(json{{"x", fmt(parse_flag(c.x, "--x"))},
                         {"m", c.m},
                         {"eps", fmt(eps)},
                         {"radius", fmt(radius)},
                         {"density", io::to_json(d, fmt)}}),
               out);
    return 0;
}

int sieve(const Config& c, std::ostream& out)
{
    Rational eps = parse_flag(c.eps, "--eps");
    if (eps.sign() <= 0)
        throw UsageError("--eps must be positive");
    auto u = build_source(c);
    SieveOptions opt;
    opt.grid_exponent = c.grid_exponent;
    opt.n_max = c.n_max;
    auto r = whitney_sieve(SieveSource::from_piecewise(u, c.m), c.m, eps, opt);
    const io::Format fmt{c.decimal};
    json j = io::to_json(r, fmt);
    j["retained"] = io::to_json(r.retained_set, fmt);
    write_text(c.output, dump(j), out);
    return 0;
}

} // namespace detail

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    Config c;
    CLI::App app{"Exact finite-depth checks for C^m Lusin approximation of horizontal curves", "hlusin"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--decimal", c.decimal, "Print rationals as decimals with this many digits")
        ->check(CLI::Range(1, 200));

    auto* ce = app.add_subcommand("counterexample", "Build and verify the piecewise-linear counterexample");
    ce->require_subcommand(1);
    auto* build = ce->add_subcommand("build", "Export samples, interval families and exclusion sets");
    build->add_option("--depth", c.depth, "Generation depth N")->check(CLI::Range(1, 14));
    build->add_option("--samples", c.samples, "Uniform samples t = j/K, j = 0..K")->check(CLI::Range(1, 1 << 20));
    build->add_flag("--breakpoints", c.breakpoints, "Also sample every breakpoint");
    build->add_option("--out-dir", c.out_dir, "Write curve.csv, levels.json, exclusion.json here");
    auto* verify = ce->add_subcommand("verify", "Run every exact check at the given depth");
    verify->add_option("--depth", c.depth, "Generation depth N")->check(CLI::Range(2, 14));
    verify->add_option("--p-max", c.p_max, "Largest p in the width-height tail family")->check(CLI::Range(1, 16));
    auto* straddle = ce->add_subcommand("straddle", "Contradiction ratio at level n");
    straddle->add_option("--n", c.n, "Level n")->required();
    straddle->add_option("--depth", c.depth, "Generation depth N")->check(CLI::Range(2, 14));

    auto* jets = app.add_subcommand("jets", "Jet field diagnostics");
    jets->require_subcommand(1);
    auto* jcheck = jets->add_subcommand("check", "Extendability report for a jet triple");
    jcheck->add_option("--input", c.input, "Jet JSON")->required();
    jcheck->add_option("--m", c.jet_m, "Expected jet order")->check(CLI::Range(0, 32));
    jcheck->add_option("--ladder-steps", c.ladder_steps, "delta_j = 2^-j for j = 0..steps")
        ->check(CLI::Range(0, 64));
    jcheck->add_option("--tol-whitney", c.tol_whitney, "Whitney modulus tolerance");
    jcheck->add_option("--tol-ode", c.tol_ode, "ODE residual tolerance");
    jcheck->add_option("--tol-area", c.tol_area, "Area/velocity ratio tolerance");
    jcheck->add_option("--output", c.output, "Report path (default stdout)");

    auto* curve = app.add_subcommand("curve", "Curve utilities");
    curve->require_subcommand(1);
    auto* clift = curve->add_subcommand("lift", "Horizontal lift of piecewise-linear samples t,f,g");
    clift->add_option("--input", c.input, "Curve CSV")->required();
    clift->add_option("--h0", c.h0, "h at the first sample");
    clift->add_option("--output", c.output, "CSV path (default stdout)");

    auto add_source = [&](CLI::App* sub) {
        sub->add_option("--source", c.source, "counterexample or poly")
            ->check(CLI::IsMember({"counterexample", "poly"}));
        sub->add_option("--poly", c.poly, "Ascending coefficients c0,c1,... on [0,1]");
        sub->add_option("--component", c.component, "Counterexample component f, g or h")
            ->check(CLI::IsMember({"f", "g", "h"}));
        sub->add_option("--depth", c.depth, "Counterexample depth")->check(CLI::Range(1, 14));
        sub->add_option("--m", c.m, "Order m")->check(CLI::Range(0, 16));
        sub->add_option("--output", c.output, "Output path (default stdout)");
    };
    auto* diff = app.add_subcommand("diff", "Differentiability estimators");
    diff->require_subcommand(1);
    auto* lp = diff->add_subcommand("lp", "L^p remainder ladder with P = 0");
    add_source(lp);
    lp->add_option("--x", c.x, "Base point");
    lp->add_option("--p", c.p, "Exponent p");
    lp->add_option("--rho", c.rho, "Comma-separated decreasing scales (default lambda_6..lambda_N)");
    auto* dens = diff->add_subcommand("density", "Approximate-differentiability density with P = 0");
    add_source(dens);
    dens->add_option("--x", c.x, "Base point");
    dens->add_option("--eps", c.eps, "Threshold");
    dens->add_option("--radius", c.radius, "Ball radius R");

    auto* sv = app.add_subcommand("sieve", "Grid sieve for a Whitney field");
    add_source(sv);
    sv->add_option("--eps", c.eps, "Measure budget");
    sv->add_option("--grid-exp", c.grid_exponent, "2^k grid cells")->check(CLI::Range(4, 16));
    sv->add_option("--n-max", c.n_max, "Levels 1..n_max")->check(CLI::Range(1, 32));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    }

    try {
        if (*build)
            return detail::counterexample_build(c, out);
        if (*verify)
            return detail::counterexample_verify(c, out);
        if (*straddle)
            return detail::counterexample_straddle(c, out);
        if (*jcheck)
            return detail::jets_check(c, out);
        if (*clift)
            return detail::curve_lift(c, out);
        if (*lp)
            return detail::diff_lp(c, out);
        if (*dens)
            return detail::diff_density(c, out);
        if (*sv)
            return detail::sieve(c, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::out_of_range& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const io::json::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    err << app.help();
    return 2;
}

} // namespace hlusin::cli
