#ifndef HLUSIN_DIFF_ANALYSIS_HPP
#define HLUSIN_DIFF_ANALYSIS_HPP

// Finite-scale estimators: L^p remainder ladders, approximate-differentiability densities
// and the grid sieve that extracts a set carrying a Whitney field.

#include "horizontality.hpp"
#include "interval_set.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <variant>
#include <vector>

namespace hlusin {

/// Piecewise polynomial on [breaks.front(), breaks.back()]; pieces[i] lives on [breaks[i], breaks[i+1]].
class PiecewisePolynomial
{
public:
    PiecewisePolynomial() = default;
    PiecewisePolynomial(std::vector<Rational> breaks, std::vector<Polynomial> pieces)
        : breaks_(std::move(breaks)), pieces_(std::move(pieces))
    {
        if (breaks_.size() < 2 || pieces_.size() + 1 != breaks_.size())
            throw std::invalid_argument("PiecewisePolynomial: need n + 1 breakpoints for n pieces");
        for (std::size_t i = 1; i < breaks_.size(); ++i)
            if (!(breaks_[i - 1] < breaks_[i]))
                throw std::invalid_argument("PiecewisePolynomial: breakpoints must be strictly increasing");
    }

    /// Component 0 (f), 1 (g) or 2 (h) of a curve.
    static PiecewisePolynomial from_curve(const PiecewiseCurve& c, int which)
    {
        std::vector<Polynomial> pieces;
        for (std::size_t i = 0; i < c.piece_count(); ++i)
            pieces.push_back(c.component(i, which));
        return {{c.breakpoints().begin(), c.breakpoints().end()}, std::move(pieces)};
    }

    static PiecewisePolynomial single(const Polynomial& p, const Rational& lo, const Rational& hi)
    {
        return {{lo, hi}, {p}};
    }

    const Rational& lo() const { return breaks_.front(); }
    const Rational& hi() const { return breaks_.back(); }
    std::span<const Rational> breakpoints() const { return breaks_; }
    std::span<const Polynomial> pieces() const { return pieces_; }

    std::size_t locate(const Rational& t) const
    {
        if (t < lo() || hi() < t)
            throw std::out_of_range("PiecewisePolynomial: " + t.str() + " outside the domain");
        auto it = std::upper_bound(breaks_.begin(), breaks_.end(), t);
        std::size_t i = static_cast<std::size_t>(it - breaks_.begin());
        return std::min(i == 0 ? 0 : i - 1, pieces_.size() - 1);
    }

    Rational operator()(const Rational& t) const { return pieces_[locate(t)](t); }

    PiecewisePolynomial derivative(unsigned order = 1) const
    {
        std::vector<Polynomial> d;
        for (const auto& p : pieces_)
            d.push_back(p.derivative(order));
        return {breaks_, std::move(d)};
    }

private:
    std::vector<Rational> breaks_;
    std::vector<Polynomial> pieces_;
};

/// Samples values[i] at lo + i * step.
struct GridFunction
{
    Rational lo;
    Rational step;
    std::vector<double> values;

    Rational hi() const { return lo + step * Rational(static_cast<long>(values.size()) - 1); }

    void validate() const
    {
        if (step.sign() <= 0)
            throw std::invalid_argument("GridFunction: step must be positive");
        if (values.size() < 2)
            throw std::invalid_argument("GridFunction: need at least two samples");
    }
};

using SampledFunction = std::variant<PiecewisePolynomial, GridFunction>;

struct LadderPoint
{
    Rational rho;
    std::optional<Enclosure> powered; ///< mean |u - P|^p / rho^(m p), exact path only
    double value = 0;                 ///< [mean |u - P|^p]^(1/p) / rho^m
};

struct LadderReport
{
    int m = 0;
    int p = 1;
    Rational x;
    bool exact = false;
    std::vector<LadderPoint> points;
};

namespace detail {

inline Rational domain_lo(const SampledFunction& u)
{
    if (const auto* g = std::get_if<GridFunction>(&u))
        return g->lo;
    return std::get<PiecewisePolynomial>(u).lo();
}

inline Rational domain_hi(const SampledFunction& u)
{
    if (const auto* g = std::get_if<GridFunction>(&u))
        return g->hi();
    return std::get<PiecewisePolynomial>(u).hi();
}

inline void check_ladder(std::span<const Rational> ladder)
{
    if (ladder.empty())
        throw std::invalid_argument("ladder: no scales");
    for (std::size_t i = 0; i < ladder.size(); ++i) {
        if (ladder[i].sign() <= 0)
            throw std::invalid_argument("ladder: scales must be positive");
        if (i > 0 && !(ladder[i] < ladder[i - 1]))
            throw std::invalid_argument("ladder: scales must be strictly decreasing");
    }
}

/// Integral of |u - P|^p over [a, b] on the exact path.
inline Enclosure powered_integral(const PiecewisePolynomial& u, const Polynomial& P, int p, const Rational& a,
                                  const Rational& b, const Rational& tol)
{
    Enclosure total = Enclosure::exact(Rational(0));
    const auto br = u.breakpoints();
    const std::size_t pieces = u.pieces().size();
    for (std::size_t i = u.locate(a); i < pieces && br[i] < b; ++i) {
        Rational s = max(a, br[i]);
        Rational e = min(b, br[i + 1]);
        if (!(s < e))
            continue;
        Polynomial d = u.pieces()[i] - P;
        Polynomial dp = Polynomial::constant(Rational(1));
        for (int k = 0; k < p; ++k)
            dp = dp * d;
        if (p % 2 == 0)
            total = total + Enclosure::exact(dp.integral(s, e));
        else
            total = total + abs_integral(dp, s, e, tol);
    }
    return total;
}

} // namespace detail

/// [mean over B(x, rho) of |u - P|^p]^(1/p) / rho^m for each rho of the ladder.
///
/// Exact on the piecewise-polynomial path; trapezoidal quadrature over the grid nodes of the
/// ball on the grid path.
inline LadderReport lp_remainder_ladder(const SampledFunction& u, const Polynomial& P, const Rational& x, int m,
                                        int p, std::span<const Rational> ladder,
                                        const Rational& tol = default_tolerance())
{
    if (p < 1)
        throw std::invalid_argument("lp_remainder_ladder: p must be >= 1");
    if (m < 0)
        throw std::invalid_argument("lp_remainder_ladder: negative order");
    detail::check_ladder(ladder);
    const Rational lo = detail::domain_lo(u);
    const Rational hi = detail::domain_hi(u);
    if (x - ladder.front() < lo || hi < x + ladder.front())
        throw std::out_of_range("lp_remainder_ladder: ball of the largest scale leaves the domain");

    LadderReport r;
    r.m = m;
    r.p = p;
    r.x = x;
    r.exact = std::holds_alternative<PiecewisePolynomial>(u);
    for (const auto& rho : ladder) {
        LadderPoint pt;
        pt.rho = rho;
        const double inv_p = 1.0 / p;
        if (const auto* pw = std::get_if<PiecewisePolynomial>(&u)) {
            Enclosure integral = detail::powered_integral(*pw, P, p, x - rho, x + rho, tol);
            Rational scale = Rational(1) / (Rational(2) * rho * rho.pow(static_cast<long>(m) * p));
            pt.powered = scale * integral;
            pt.value = std::pow(pt.powered->to_double(), inv_p);
        } else {
            const auto& g = std::get<GridFunction>(u);
            g.validate();
            const double step = g.step.to_double();
            const Rational first = ((x - rho - g.lo) / g.step);
            const Rational last = ((x + rho - g.lo) / g.step);
            long i0 = static_cast<long>(first.ceil().get_si());
            long i1 = static_cast<long>(last.floor().get_si());
            double sum = 0;
            for (long i = i0; i <= i1; ++i) {
                Rational t = g.lo + g.step * Rational(i);
                double v = std::pow(std::fabs(g.values[static_cast<std::size_t>(i)] - P.eval(t.to_double())), p);
                sum += (i == i0 || i == i1) ? v / 2 : v;
            }
            double covered = static_cast<double>(i1 - i0) * step;
            double mean = covered > 0 ? sum * step / covered : 0.0;
            pt.value = std::pow(mean, inv_p) / std::pow(rho.to_double(), m);
        }
        r.points.push_back(std::move(pt));
    }
    return r;
}

/// Fraction of B(x, R) n domain where |u(y) - P(y)| <= eps |y - x|^m.
///
/// Exact path: the set is cut at the real roots of u - P -+ eps (y - x)^m on each piece; the
/// enclosure accounts for irrational cut points. Grid path: fraction of grid nodes.
inline Enclosure approx_density(const SampledFunction& u, const Polynomial& P, const Rational& x, int m,
                                const Rational& eps, const Rational& R, const Rational& tol = default_tolerance())
{
    if (eps.sign() <= 0 || R.sign() <= 0)
        throw std::invalid_argument("approx_density: eps and R must be positive");
    if (m < 0)
        throw std::invalid_argument("approx_density: negative order");
    const Rational lo = max(x - R, detail::domain_lo(u));
    const Rational hi = min(x + R, detail::domain_hi(u));
    if (!(lo < hi))
        throw std::domain_error("approx_density: ball misses the domain");

    if (const auto* g = std::get_if<GridFunction>(&u)) {
        g->validate();
        long i0 = static_cast<long>(((lo - g->lo) / g->step).ceil().get_si());
        long i1 = static_cast<long>(((hi - g->lo) / g->step).floor().get_si());
        long good = 0;
        long total = 0;
        const double xd = x.to_double();
        const double ed = eps.to_double();
        for (long i = i0; i <= i1; ++i) {
            double t = (g->lo + g->step * Rational(i)).to_double();
            double d = std::fabs(g->values[static_cast<std::size_t>(i)] - P.eval(t));
            ++total;
            if (d <= ed * std::pow(std::fabs(t - xd), m))
                ++good;
        }
        if (total == 0)
            throw std::domain_error("approx_density: no grid nodes in the ball");
        return Enclosure::exact(Rational(good, total));
    }

    const auto& pw = std::get<PiecewisePolynomial>(u);
    const auto br = pw.breakpoints();
    Rational measure;
    Rational error;
    // (y - x)^m as a polynomial in y.
    Polynomial right = Polynomial::constant(Rational(1));
    for (int k = 0; k < m; ++k)
        right = right * Polynomial({-x, Rational(1)});
    const Polynomial left = (m % 2 == 0) ? right : right * Rational(-1);

    auto handle = [&](const Polynomial& d, const Rational& s, const Rational& e, const Polynomial& side) {
        std::vector<Rational> cuts{s};
        for (const Polynomial& q : {d - side * eps, d + side * eps}) {
            if (q.is_zero())
                continue;
            for (const auto& root : real_roots(q, s, e, tol)) {
                Rational c = root.mid();
                if (s < c && c < e)
                    cuts.push_back(c);
                if (!root.is_exact())
                    error += root.hi - root.lo;
            }
        }
        cuts.push_back(e);
        std::sort(cuts.begin(), cuts.end());
        for (std::size_t i = 1; i < cuts.size(); ++i) {
            if (!(cuts[i - 1] < cuts[i]))
                continue;
            Rational mid = (cuts[i - 1] + cuts[i]) / Rational(2);
            if (abs(d(mid)) <= eps * side(mid))
                measure += cuts[i] - cuts[i - 1];
        }
    };

    for (std::size_t i = pw.locate(lo); i < pw.pieces().size() && br[i] < hi; ++i) {
        Rational s = max(lo, br[i]);
        Rational e = min(hi, br[i + 1]);
        if (!(s < e))
            continue;
        Polynomial d = pw.pieces()[i] - P;
        if (s < x && x < e) {
            handle(d, s, x, left);
            handle(d, x, e, right);
        } else if (e <= x) {
            handle(d, s, e, left);
        } else {
            handle(d, s, e, right);
        }
    }
    const Rational total = hi - lo;
    Rational a = max(measure - error, Rational(0));
    Rational b = min(measure + error, total);
    return {a / total, b / total};
}

/// Candidate jet functions u_0 = u, u_1, ..., u_m, evaluated on grid points.
struct SieveSource
{
    std::vector<std::function<double(double)>> derivatives;

    static SieveSource from_polynomial(const Polynomial& p, int m)
    {
        SieveSource s;
        for (int k = 0; k <= m; ++k) {
            Polynomial d = p.derivative(static_cast<unsigned>(k));
            s.derivatives.push_back([d](double t) { return d.eval(t); });
        }
        return s;
    }

    /// Exact evaluation of the piecewise derivatives (right-hand piece at breakpoints).
    static SieveSource from_piecewise(const PiecewisePolynomial& u, int m)
    {
        SieveSource s;
        for (int k = 0; k <= m; ++k) {
            PiecewisePolynomial d = u.derivative(static_cast<unsigned>(k));
            s.derivatives.push_back([d](double t) { return d(Rational::from_double(t)).to_double(); });
        }
        return s;
    }
};

struct SieveOptions
{
    int grid_exponent = 14; ///< 2^grid_exponent uniform cells on [0, 1]
    int n_max = 6;
    std::vector<Rational> modulus_ladder = {Rational::pow2(-6), Rational::pow2(-7), Rational::pow2(-8),
                                            Rational::pow2(-9), Rational::pow2(-10), Rational::pow2(-11),
                                            Rational::pow2(-12)};
};

struct ModulusPoint
{
    Rational delta;
    double value = 0;
    bool populated = false;
};

struct SieveReport
{
    int m = 0;
    Rational eps;
    std::size_t cells = 0;
    std::vector<bool> retained;           ///< per cell
    std::vector<std::size_t> first_failure; ///< per level n = 1..n_max, cells first rejected there
    IntervalSet retained_set;             ///< union of retained closed cells
    Rational measure;
    bool meets_budget = false;            ///< measure >= 1 - eps
    std::vector<ModulusPoint> modulus;    ///< Whitney modulus of (u_k) on retained cell centres

    Rational cell_center(std::size_t j) const
    {
        return Rational(2 * static_cast<long>(j) + 1, 2 * static_cast<long>(cells));
    }
};

namespace detail {

/// Whitney modulus profile of double-valued jets on sorted sites, ladder decreasing.
inline std::vector<ModulusPoint> modulus_profile(const std::vector<double>& sites,
                                                 const std::vector<std::vector<double>>& values, int m,
                                                 std::span<const Rational> ladder)
{
    std::vector<double> deltas;
    for (const auto& d : ladder)
        deltas.push_back(d.to_double());
    std::vector<double> bin(ladder.size(), 0.0);
    std::vector<bool> hit(ladder.size(), false);
    const std::size_t n = sites.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = sites[j] - sites[i];
            if (d > deltas.front())
                break;
            std::size_t b = 0;
            while (b + 1 < deltas.size() && d <= deltas[b + 1])
                ++b;
            double best = 0;
            for (int dir = 0; dir < 2; ++dir) {
                std::size_t ia = dir == 0 ? i : j;
                std::size_t ib = dir == 0 ? j : i;
                double denom = 1;
                for (int k = m; k >= 0; --k) {
                    if (k < m)
                        denom *= d;
                    double r = remainder_value<double>(values[ia], values[ib], sites[ia], sites[ib], m, k);
                    best = std::max(best, std::fabs(r) / denom);
                }
            }
            bin[b] = std::max(bin[b], best);
            hit[b] = true;
        }
    }
    std::vector<ModulusPoint> out(ladder.size());
    double running = 0;
    bool populated = false;
    for (std::size_t k = ladder.size(); k-- > 0;) {
        running = std::max(running, bin[k]);
        populated = populated || hit[k];
        out[k] = {ladder[k], running, populated};
    }
    return out;
}

} // namespace detail

/// Grid sieve on [0, 1]. A cell centre x survives level n (delta = 1/n) when the sampled
/// W(x, r) = { y : |u(y) - P_x(y)| > delta |y - x|^m } has measure <= r/4 for every tested
/// r <= 1/n (r = 1/n and the dyadic r = 2^-j down to the cell width); the result keeps the
/// cells surviving every level 1..n_max.
inline SieveReport whitney_sieve(const SieveSource& src, int m, const Rational& eps, const SieveOptions& opt = {})
{
    if (m < 0)
        throw std::invalid_argument("whitney_sieve: negative order");
    if (src.derivatives.size() < static_cast<std::size_t>(m) + 1)
        throw std::invalid_argument("whitney_sieve: derivative data u_0..u_m required");
    if (opt.grid_exponent < 1 || opt.grid_exponent > 20 || opt.n_max < 1)
        throw std::invalid_argument("whitney_sieve: invalid grid or level cap");
    if (eps.sign() <= 0)
        throw std::invalid_argument("whitney_sieve: eps must be positive");
    detail::check_ladder(opt.modulus_ladder);

    const std::size_t G = std::size_t{1} << opt.grid_exponent;
    const double step = 1.0 / static_cast<double>(G);
    std::vector<double> centers(G);
    std::vector<std::vector<double>> jets(G, std::vector<double>(static_cast<std::size_t>(m) + 1));
    for (std::size_t j = 0; j < G; ++j) {
        centers[j] = (static_cast<double>(j) + 0.5) * step;
        for (int k = 0; k <= m; ++k)
            jets[j][static_cast<std::size_t>(k)] = src.derivatives[static_cast<std::size_t>(k)](centers[j]);
    }

    // Checkpoints per level: (cells reached, allowed bad cells).
    struct Checkpoint { std::size_t reach; double allowed; };
    std::vector<std::vector<Checkpoint>> checks(static_cast<std::size_t>(opt.n_max));
    std::size_t max_reach = 0;
    for (int n = 1; n <= opt.n_max; ++n) {
        std::vector<double> radii{1.0 / n};
        for (int e = 0; e <= opt.grid_exponent; ++e) {
            double r = std::ldexp(1.0, -e);
            if (r < 1.0 / n)
                radii.push_back(r);
        }
        auto& cs = checks[static_cast<std::size_t>(n - 1)];
        for (double r : radii) {
            std::size_t reach = static_cast<std::size_t>(std::floor(r / step + 1e-9));
            cs.push_back({reach, r / 4 / step});
            max_reach = std::max(max_reach, reach);
        }
        std::sort(cs.begin(), cs.end(), [](const Checkpoint& a, const Checkpoint& b) { return a.reach < b.reach; });
    }

    std::vector<double> coef(static_cast<std::size_t>(m) + 1);
    std::vector<double> bad(static_cast<std::size_t>(opt.n_max));
    std::vector<std::size_t> next(static_cast<std::size_t>(opt.n_max));
    SieveReport rep;
    rep.m = m;
    rep.eps = eps;
    rep.cells = G;
    rep.retained.assign(G, true);
    rep.first_failure.assign(static_cast<std::size_t>(opt.n_max), 0);

    for (std::size_t i = 0; i < G; ++i) {
        double fact = 1;
        for (int k = 0; k <= m; ++k) {
            if (k > 0)
                fact *= k;
            coef[static_cast<std::size_t>(k)] = jets[i][static_cast<std::size_t>(k)] / fact;
        }
        std::fill(bad.begin(), bad.end(), 0.0);
        std::fill(next.begin(), next.end(), 0);
        int failed = 0;
        for (std::size_t d = 1; d <= max_reach && failed == 0; ++d) {
            const double h = static_cast<double>(d) * step;
            const double scale = std::pow(h, m);
            for (int side = -1; side <= 1; side += 2) {
                if (side < 0 && d > i)
                    continue;
                const std::size_t j = side < 0 ? i - d : i + d;
                if (j >= G)
                    continue;
                const double t = side * h;
                double pv = 0;
                for (int k = m; k >= 0; --k)
                    pv = pv * t + coef[static_cast<std::size_t>(k)];
                const double diff = std::fabs(jets[j][0] - pv);
                for (int n = 1; n <= opt.n_max; ++n)
                    if (diff * n > scale)
                        bad[static_cast<std::size_t>(n - 1)] += 1;
            }
            for (int n = 1; n <= opt.n_max && failed == 0; ++n) {
                const auto& cs = checks[static_cast<std::size_t>(n - 1)];
                auto& k = next[static_cast<std::size_t>(n - 1)];
                while (k < cs.size() && cs[k].reach <= d) {
                    if (cs[k].reach == d && bad[static_cast<std::size_t>(n - 1)] > cs[k].allowed)
                        failed = n;
                    ++k;
                }
            }
        }
        if (failed != 0) {
            rep.retained[i] = false;
            ++rep.first_failure[static_cast<std::size_t>(failed - 1)];
        }
    }

    std::vector<Interval> cells;
    std::vector<double> sites;
    std::vector<std::vector<double>> vals;
    std::size_t kept = 0;
    for (std::size_t j = 0; j < G; ++j) {
        if (!rep.retained[j])
            continue;
        ++kept;
        cells.push_back(Interval::closed(Rational(static_cast<long>(j), static_cast<long>(G)),
                                         Rational(static_cast<long>(j) + 1, static_cast<long>(G))));
        sites.push_back(centers[j]);
        vals.push_back(jets[j]);
    }
    rep.retained_set = IntervalSet(std::move(cells));
    rep.measure = Rational(static_cast<long>(kept), static_cast<long>(G));
    rep.meets_budget = Rational(1) - eps <= rep.measure;
    rep.modulus = detail::modulus_profile(sites, vals, m, opt.modulus_ladder);
    return rep;
}

} // namespace hlusin

#endif
