#ifndef HLUSIN_HORIZONTALITY_HPP
#define HLUSIN_HORIZONTALITY_HPP

#include "jets.hpp"
#include "poly_analysis.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace hlusin {

/// Polynomial pieces of a curve (f, g, h) in the global variable.
struct CurvePiece
{
    Polynomial f;
    Polynomial g;
    Polynomial h;

    friend bool operator==(const CurvePiece&, const CurvePiece&) = default;
};

struct CurvePoint
{
    Rational f;
    Rational g;
    Rational h;

    friend bool operator==(const CurvePoint&, const CurvePoint&) = default;
};

/// Continuous piecewise-polynomial curve t -> (f, g, h) on [t_0, t_N].
class PiecewiseCurve
{
public:
    PiecewiseCurve() = default;

    PiecewiseCurve(std::vector<Rational> breakpoints, std::vector<CurvePiece> pieces)
        : breaks_(std::move(breakpoints)), pieces_(std::move(pieces))
    {
        if (breaks_.size() < 2 || pieces_.size() + 1 != breaks_.size())
            throw std::invalid_argument("PiecewiseCurve: need N+1 breakpoints for N pieces");
        for (std::size_t i = 1; i < breaks_.size(); ++i)
            if (!(breaks_[i - 1] < breaks_[i]))
                throw std::invalid_argument("PiecewiseCurve: breakpoints must be strictly increasing");
        for (std::size_t i = 1; i < pieces_.size(); ++i) {
            const Rational& t = breaks_[i];
            const auto& l = pieces_[i - 1];
            const auto& r = pieces_[i];
            if (l.f(t) != r.f(t) || l.g(t) != r.g(t) || l.h(t) != r.h(t))
                throw std::invalid_argument("PiecewiseCurve: discontinuity at t = " + t.str());
        }
    }

    std::span<const Rational> breakpoints() const { return breaks_; }
    std::span<const CurvePiece> pieces() const { return pieces_; }
    const CurvePiece& piece(std::size_t i) const { return pieces_.at(i); }
    std::size_t piece_count() const { return pieces_.size(); }
    const Rational& lo() const { return breaks_.front(); }
    const Rational& hi() const { return breaks_.back(); }

    /// Index of the piece [t_i, t_{i+1}) containing t (the last piece also owns t_N).
    std::size_t locate(const Rational& t) const
    {
        if (t < lo() || t > hi())
            throw std::out_of_range("PiecewiseCurve: t = " + t.str() + " outside the domain");
        auto it = std::upper_bound(breaks_.begin(), breaks_.end(), t);
        auto idx = static_cast<std::size_t>(it - breaks_.begin());
        return idx == 0 ? 0 : std::min(idx - 1, pieces_.size() - 1);
    }

    CurvePoint operator()(const Rational& t) const
    {
        const auto& p = pieces_[locate(t)];
        return {p.f(t), p.g(t), p.h(t)};
    }

    /// Component 0/1/2 = f/g/h of piece i.
    const Polynomial& component(std::size_t i, int which) const
    {
        const auto& p = pieces_.at(i);
        return which == 0 ? p.f : (which == 1 ? p.g : p.h);
    }

private:
    std::vector<Rational> breaks_;
    std::vector<CurvePiece> pieces_;
};

/// Horizontal lift: h(t) = h0 + 2 int_{t_0}^t (f'g - g'f), exact and piecewise polynomial.
inline PiecewiseCurve lift(std::span<const Rational> breakpoints, std::span<const Polynomial> f_pieces,
                           std::span<const Polynomial> g_pieces, const Rational& h0)
{
    if (f_pieces.size() != g_pieces.size() || f_pieces.size() + 1 != breakpoints.size())
        throw std::invalid_argument("lift: need N+1 breakpoints for N pieces of f and g");
    for (std::size_t i = 1; i < f_pieces.size(); ++i) {
        const Rational& t = breakpoints[i];
        if (f_pieces[i - 1](t) != f_pieces[i](t) || g_pieces[i - 1](t) != g_pieces[i](t))
            throw std::invalid_argument("lift: f or g discontinuous at t = " + t.str());
    }
    std::vector<CurvePiece> pieces;
    pieces.reserve(f_pieces.size());
    Rational h_start = h0;
    for (std::size_t i = 0; i < f_pieces.size(); ++i) {
        const auto& f = f_pieces[i];
        const auto& g = g_pieces[i];
        Polynomial rate = (f.derivative() * g - g.derivative() * f) * Rational(2);
        Polynomial h = integrate_jet(rate, h_start, breakpoints[i]);
        h_start = h(breakpoints[i + 1]);
        pieces.push_back({f, g, std::move(h)});
    }
    return PiecewiseCurve({breakpoints.begin(), breakpoints.end()}, std::move(pieces));
}

inline PiecewiseCurve lift(const PiecewiseCurve& c, const Rational& h0)
{
    std::vector<Polynomial> f, g;
    for (const auto& p : c.pieces()) {
        f.push_back(p.f);
        g.push_back(p.g);
    }
    return lift(c.breakpoints(), f, g, h0);
}

/// Defect polynomial D^k h - 2 sum_{i<k} C(k-1, i) (f^(k-i) g^(i) - g^(k-i) f^(i)).
inline Polynomial horizontality_defect(const CurvePiece& p, int k)
{
    if (k < 1)
        throw std::out_of_range("horizontality_defect: order must be >= 1");
    Polynomial sum;
    for (int i = 0; i < k; ++i) {
        auto ki = static_cast<unsigned>(k - i);
        auto ii = static_cast<unsigned>(i);
        Polynomial term = p.f.derivative(ki) * p.g.derivative(ii) - p.g.derivative(ki) * p.f.derivative(ii);
        sum += term * binomial(static_cast<unsigned>(k - 1), ii);
    }
    return p.h.derivative(static_cast<unsigned>(k)) - sum * Rational(2);
}

/// max over pieces of sup |k-th order horizontality defect|.
inline Enclosure higher_horizontality_residual(const PiecewiseCurve& c, int k,
                                               const Rational& tol = default_tolerance())
{
    Enclosure worst = Enclosure::exact(Rational(0));
    const auto brk = c.breakpoints();
    for (std::size_t i = 0; i < c.piece_count(); ++i) {
        Polynomial d = horizontality_defect(c.piece(i), k);
        if (d.is_zero())
            continue;
        auto s = sup_norm(d, brk[i], brk[i + 1], tol);
        worst = {max(worst.lo, s.lo), max(worst.hi, s.hi)};
    }
    return worst;
}

/// max over pieces of sup |h' - 2(f'g - g'f)|; zero iff the curve is horizontal.
inline Enclosure horizontality_residual(const PiecewiseCurve& c, const Rational& tol = default_tolerance())
{
    return higher_horizontality_residual(c, 1, tol);
}

/// Jets (f^(k), g^(k), h^(k)) sampled from a curve at the given sites (right pieces at breakpoints).
inline JetTriple sample_jets(const PiecewiseCurve& c, std::span<const Rational> sites, int m)
{
    std::vector<std::vector<Rational>> fv, gv, hv;
    for (const auto& a : sites) {
        const auto& p = c.piece(c.locate(a));
        std::vector<Rational> f, g, h;
        for (int k = 0; k <= m; ++k) {
            auto ku = static_cast<unsigned>(k);
            f.push_back(p.f.derivative(ku)(a));
            g.push_back(p.g.derivative(ku)(a));
            h.push_back(p.h.derivative(ku)(a));
        }
        fv.push_back(std::move(f));
        gv.push_back(std::move(g));
        hv.push_back(std::move(h));
    }
    std::vector<Rational> s(sites.begin(), sites.end());
    return JetTriple(Jet(m, s, std::move(fv)), Jet(m, s, std::move(gv)), Jet(m, s, std::move(hv)));
}

/// Area discrepancy A(a, b) between the prescribed H increment and the signed area swept by
/// the Taylor polynomials of F and G at a.
inline Rational area_discrepancy_at(const JetTriple& t, std::size_t ia, std::size_t ib)
{
    if (ia == ib)
        throw std::invalid_argument("area_discrepancy: sites must differ");
    const Rational& a = t.F.site(ia);
    const Rational& b = t.F.site(ib);
    Polynomial tf = taylor_poly_at(t.F, ia);
    Polynomial tg = taylor_poly_at(t.G, ia);
    Polynomial swept = tf.derivative() * tg - tg.derivative() * tf;
    Rational value = t.H.value(ib, 0) - t.H.value(ia, 0) - Rational(2) * swept.integral(a, b);
    value += Rational(2) * t.F.value(ia, 0) * (t.G.value(ib, 0) - tg(b));
    value -= Rational(2) * t.G.value(ia, 0) * (t.F.value(ib, 0) - tf(b));
    return value;
}

inline Rational area_discrepancy(const JetTriple& t, const Rational& a, const Rational& b)
{
    if (a == b)
        throw std::invalid_argument("area_discrepancy: sites must differ");
    return area_discrepancy_at(t, t.F.require_site(a), t.F.require_site(b));
}

/// V(a, b) = (b-a)^(2m) + (b-a)^m int_a^b (|(T_a F)'| + |(T_a G)'|).
inline Enclosure velocity_at(const JetTriple& t, std::size_t ia, std::size_t ib,
                             const Rational& tol = default_tolerance())
{
    const Rational& a = t.F.site(ia);
    const Rational& b = t.F.site(ib);
    if (!(a < b))
        throw std::invalid_argument("velocity: requires a < b");
    const long m = t.order();
    Rational d = b - a;
    Polynomial dtf = taylor_poly_at(t.F, ia).derivative();
    Polynomial dtg = taylor_poly_at(t.G, ia).derivative();
    Enclosure path = abs_integral(dtf, a, b, tol / Rational(2)) + abs_integral(dtg, a, b, tol / Rational(2));
    Rational base = d.pow(2 * m);
    Enclosure out = d.pow(m) * path;
    return {base + out.lo, base + out.hi};
}

inline Enclosure velocity(const JetTriple& t, const Rational& a, const Rational& b,
                          const Rational& tol = default_tolerance())
{
    if (!(a < b))
        throw std::invalid_argument("velocity: requires a < b");
    return velocity_at(t, t.F.require_site(a), t.F.require_site(b), tol);
}

struct RatioPoint
{
    Rational delta;
    Enclosure value;
    bool populated = false;
};

struct ReportTolerances
{
    Rational whitney{1, 100};
    Rational ode{0};
    Rational area_ratio{1, 100};
};

struct ExtendabilityReport
{
    std::vector<ProfilePoint> whitney_f;
    std::vector<ProfilePoint> whitney_g;
    std::vector<ProfilePoint> whitney_h;
    Rational max_ode_residual;
    std::vector<RatioPoint> area_ratio;
    bool whitney_pass = false;
    bool ode_pass = false;
    bool area_pass = false;

    bool verdict() const { return whitney_pass && ode_pass && area_pass; }
};

namespace detail {

/// Ladder verdict: below tolerance at the smallest populated delta and non-increasing over the
/// last three populated steps. An unpopulated ladder passes vacuously.
template <class Value>
bool ladder_pass(const std::vector<Value>& values, const std::vector<bool>& populated, const Value& tol)
{
    std::vector<Value> seen;
    for (std::size_t i = 0; i < values.size(); ++i)
        if (populated[i])
            seen.push_back(values[i]);
    if (seen.empty())
        return true;
    if (tol < seen.back())
        return false;
    std::size_t first = seen.size() >= 3 ? seen.size() - 3 : 0;
    for (std::size_t i = first + 1; i < seen.size(); ++i)
        if (seen[i - 1] < seen[i])
            return false;
    return true;
}

inline bool whitney_ladder_pass(const std::vector<ProfilePoint>& prof, const Rational& tol)
{
    std::vector<Rational> v;
    std::vector<bool> pop;
    for (const auto& p : prof) {
        v.push_back(p.value);
        pop.push_back(p.populated);
    }
    return ladder_pass(v, pop, tol);
}

} // namespace detail

/// Profile over a decreasing delta ladder of max_{0 < b-a <= delta} |A(a,b)| / V(a,b).
inline std::vector<RatioPoint> area_ratio_profile(const JetTriple& t, std::span<const Rational> ladder,
                                                  const Rational& tol = default_tolerance())
{
    const std::size_t nl = ladder.size();
    std::vector<RatioPoint> prof(nl);
    for (std::size_t j = 0; j < nl; ++j)
        prof[j] = {ladder[j], Enclosure::exact(Rational(0)), false};
    if (nl == 0)
        return prof;
    const auto sites = t.sites();
    for (std::size_t i = 0; i < sites.size(); ++i) {
        for (std::size_t k = i + 1; k < sites.size(); ++k) {
            Rational d = sites[k] - sites[i];
            if (ladder[0] < d)
                break;
            Rational area = abs(area_discrepancy_at(t, i, k));
            Enclosure vel = velocity_at(t, i, k, tol);
            Enclosure ratio{area / vel.hi, area / vel.lo};
            for (std::size_t j = 0; j < nl && d <= ladder[j]; ++j) {
                auto& p = prof[j];
                p.value = {max(p.value.lo, ratio.lo), max(p.value.hi, ratio.hi)};
                p.populated = true;
            }
        }
    }
    return prof;
}

/// Checks the three conditions for a C^m horizontal extension on finite data.
inline ExtendabilityReport extendability_report(const JetTriple& t, std::span<const Rational> ladder,
                                                const ReportTolerances& tols = {})
{
    if (t.sites().size() < 2)
        throw std::invalid_argument("extendability_report: need at least two sites");
    for (std::size_t j = 1; j < ladder.size(); ++j)
        if (!(ladder[j] < ladder[j - 1]))
            throw std::invalid_argument("extendability_report: ladder must be strictly decreasing");
    ExtendabilityReport r;
    r.whitney_f = whitney_profile(t.F, ladder);
    r.whitney_g = whitney_profile(t.G, ladder);
    r.whitney_h = whitney_profile(t.H, ladder);
    r.whitney_pass = detail::whitney_ladder_pass(r.whitney_f, tols.whitney) &&
                     detail::whitney_ladder_pass(r.whitney_g, tols.whitney) &&
                     detail::whitney_ladder_pass(r.whitney_h, tols.whitney);

    for (std::size_t i = 0; i < t.sites().size(); ++i)
        for (int k = 1; k <= t.order(); ++k)
            r.max_ode_residual = max(r.max_ode_residual, abs(ode_residual_at(t, i, k)));
    r.ode_pass = r.max_ode_residual <= tols.ode;

    r.area_ratio = area_ratio_profile(t, ladder);
    std::vector<Rational> upper;
    std::vector<bool> pop;
    for (const auto& p : r.area_ratio) {
        upper.push_back(p.value.hi);
        pop.push_back(p.populated);
    }
    r.area_pass = detail::ladder_pass(upper, pop, tols.area_ratio);
    return r;
}

namespace detail {

/// Solves A x = b exactly (A square, nonsingular).
inline std::vector<Rational> solve_linear(std::vector<std::vector<Rational>> a, std::vector<Rational> b)
{
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && a[piv][col].is_zero())
            ++piv;
        if (piv == n)
            throw std::domain_error("solve_linear: singular system");
        std::swap(a[piv], a[col]);
        std::swap(b[piv], b[col]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || a[r][col].is_zero())
                continue;
            Rational f = a[r][col] / a[col][col];
            for (std::size_t c = col; c < n; ++c)
                a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        b[i] /= a[i][i];
    return b;
}

/// Degree-(2m+1) polynomial with prescribed derivatives 0..m at both ends of [a, b].
inline Polynomial hermite_two_point(std::span<const Rational> at_a, std::span<const Rational> at_b,
                                    const Rational& a, const Rational& b)
{
    const std::size_t m1 = at_a.size();
    const Rational d = b - a;
    std::vector<Rational> coef(2 * m1);
    for (std::size_t k = 0; k < m1; ++k)
        coef[k] = at_a[k] / factorial(static_cast<unsigned>(k));
    // Row j: sum_k c_k k!/(k-j)! d^(k-j) = F^j(b), split into known (k < m1) and unknown parts.
    std::vector<std::vector<Rational>> mat(m1, std::vector<Rational>(m1));
    std::vector<Rational> rhs(m1);
    for (std::size_t j = 0; j < m1; ++j) {
        Rational known;
        for (std::size_t k = j; k < 2 * m1; ++k) {
            Rational factor = factorial(static_cast<unsigned>(k)) / factorial(static_cast<unsigned>(k - j)) *
                              d.pow(static_cast<long>(k - j));
            if (k < m1)
                known += coef[k] * factor;
            else
                mat[j][k - m1] = factor;
        }
        rhs[j] = at_b[j] - known;
    }
    auto unknown = solve_linear(std::move(mat), std::move(rhs));
    for (std::size_t k = 0; k < m1; ++k)
        coef[m1 + k] = unknown[k];
    return Polynomial::from_shifted(coef, a);
}

} // namespace detail

/// Euclidean C^m gap fill: two-point Hermite f and g on each gap, then the horizontal lift of
/// (f, g) from H^0(t_0). h generally misses the prescribed H jets.
inline PiecewiseCurve hermite_gap_fill(const JetTriple& t)
{
    const auto sites = t.sites();
    if (sites.size() < 2)
        throw std::invalid_argument("hermite_gap_fill: need at least two sites");
    std::vector<Polynomial> f, g;
    for (std::size_t i = 0; i + 1 < sites.size(); ++i) {
        f.push_back(detail::hermite_two_point(t.F.values(i), t.F.values(i + 1), sites[i], sites[i + 1]));
        g.push_back(detail::hermite_two_point(t.G.values(i), t.G.values(i + 1), sites[i], sites[i + 1]));
    }
    return lift(sites, f, g, t.H.value(0, 0));
}

/// H^0(b) minus the lifted height at b of the Hermite fill started from H^0(a) on the gap [a, b].
inline Rational horizontal_repair_gap(const JetTriple& t, const Rational& a, const Rational& b)
{
    auto ia = t.F.require_site(a);
    auto ib = t.F.require_site(b);
    if (ib != ia + 1)
        throw std::invalid_argument("horizontal_repair_gap: sites must be consecutive");
    Polynomial f = detail::hermite_two_point(t.F.values(ia), t.F.values(ib), a, b);
    Polynomial g = detail::hermite_two_point(t.G.values(ia), t.G.values(ib), a, b);
    Polynomial rate = (f.derivative() * g - g.derivative() * f) * Rational(2);
    return t.H.value(ib, 0) - t.H.value(ia, 0) - rate.integral(a, b);
}

} // namespace hlusin

#endif
