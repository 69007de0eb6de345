#ifndef HLUSIN_POLY_ANALYSIS_HPP
#define HLUSIN_POLY_ANALYSIS_HPP

// Real-root isolation and the integral / sup-norm functionals built on it.

#include "polynomial.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <vector>

namespace hlusin {

/// Certified enclosure [lo, hi] of a real value. Exact iff lo == hi.
struct Enclosure
{
    Rational lo;
    Rational hi;

    static Enclosure exact(const Rational& v) { return {v, v}; }

    bool is_exact() const { return lo == hi; }
    Rational mid() const { return (lo + hi) / Rational(2); }
    Rational width() const { return hi - lo; }
    double to_double() const { return mid().to_double(); }

    friend Enclosure operator+(const Enclosure& a, const Enclosure& b) { return {a.lo + b.lo, a.hi + b.hi}; }
    friend Enclosure operator*(const Rational& s, const Enclosure& e)
    {
        return s.sign() >= 0 ? Enclosure{s * e.lo, s * e.hi} : Enclosure{s * e.hi, s * e.lo};
    }
    friend bool operator==(const Enclosure&, const Enclosure&) = default;
};

/// Default absolute error bound for the non-exact paths.
inline const Rational& default_tolerance()
{
    static const Rational tol(1, 1'000'000'000'000L);
    return tol;
}

/// A real root located either exactly (lo == hi) or inside an open interval (lo, hi).
struct RootEnclosure
{
    Rational lo;
    Rational hi;

    bool is_exact() const { return lo == hi; }
    Rational mid() const { return (lo + hi) / Rational(2); }
};

namespace detail {

/// Simplest rational (smallest denominator) in the closed interval [lo, hi].
inline Rational simplest_between(Rational lo, Rational hi)
{
    if (lo.sign() <= 0 && hi.sign() >= 0)
        return Rational(0);
    if (hi.sign() < 0)
        return -simplest_between(-hi, -lo);
    // Continued-fraction descent, iteratively: value = a0 + 1/(a1 + 1/(...)).
    std::vector<mpz_class> terms;
    Rational result;
    for (;;) {
        mpz_class fl = lo.floor();
        Rational flr(fl);
        if (flr == lo) {
            result = lo;
            break;
        }
        if (Rational(mpz_class(fl + 1)) <= hi) {
            result = Rational(mpz_class(fl + 1));
            break;
        }
        terms.push_back(fl);
        Rational nlo = Rational(1) / (hi - flr);
        Rational nhi = Rational(1) / (lo - flr);
        lo = nlo;
        hi = nhi;
    }
    for (auto it = terms.rbegin(); it != terms.rend(); ++it)
        result = Rational(*it) + Rational(1) / result;
    return result;
}

/// Denominator bound for rational roots: |leading coefficient| of the primitive integer form.
inline mpz_class rational_root_denominator_bound(const Polynomial& p)
{
    mpz_class l = 1;
    for (const auto& c : p.coefficients())
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get().get_den_mpz_t());
    mpz_class g = 0;
    for (const auto& c : p.coefficients()) {
        mpz_class a = c.get().get_num() * (l / c.get().get_den());
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), a.get_mpz_t());
    }
    mpz_class lead = p.leading().get().get_num() * (l / p.leading().get().get_den());
    mpz_class d = lead / g;
    return abs(d);
}

class SturmSequence
{
public:
    explicit SturmSequence(const Polynomial& square_free)
    {
        seq_.push_back(square_free);
        if (square_free.degree() < 1)
            return;
        seq_.push_back(square_free.derivative());
        while (seq_.back().degree() > 0) {
            auto r = divmod(seq_[seq_.size() - 2], seq_.back()).second;
            if (r.is_zero())
                break;
            seq_.push_back(-r);
        }
    }

    /// Sign variations at t (zeros skipped).
    int variations(const Rational& t) const
    {
        int changes = 0;
        int last = 0;
        for (const auto& p : seq_) {
            int s = p(t).sign();
            if (s == 0)
                continue;
            if (last != 0 && s != last)
                ++changes;
            last = s;
        }
        return changes;
    }

    /// Number of distinct roots in (a, b].
    int count(const Rational& a, const Rational& b) const { return variations(a) - variations(b); }

private:
    std::vector<Polynomial> seq_;
};

} // namespace detail

inline Polynomial square_free_part(const Polynomial& p)
{
    if (p.degree() < 1)
        return p;
    auto g = gcd(p, p.derivative());
    return divmod(p, g).first.monic();
}

/// Distinct real roots of `p` in the closed interval [a, b], in increasing order.
///
/// Every rational root is returned exactly. Irrational roots are returned as open
/// isolating intervals of width at most `width`.
inline std::vector<RootEnclosure> real_roots(const Polynomial& p, const Rational& a, const Rational& b,
                                             const Rational& width = default_tolerance())
{
    if (p.is_zero())
        throw std::domain_error("real_roots: zero polynomial has no isolated roots");
    if (b < a)
        throw std::invalid_argument("real_roots: empty interval");
    std::vector<RootEnclosure> out;
    if (p.degree() < 1)
        return out;
    const Polynomial q = square_free_part(p);
    const detail::SturmSequence sturm(q);

    if (q(a).is_zero())
        out.push_back({a, a});
    if (a == b)
        return out;

    // Bisection into isolating intervals over the open interval (a, b).
    struct Pending { Rational lo, hi; };
    std::vector<Pending> stack{{a, b}};
    std::vector<RootEnclosure> found;
    while (!stack.empty()) {
        auto [lo, hi] = stack.back();
        stack.pop_back();
        int n = sturm.count(lo, hi) - (q(hi).is_zero() ? 1 : 0);
        if (n == 0)
            continue;
        if (n == 1 && !q(lo).is_zero() && !q(hi).is_zero()) {
            found.push_back({lo, hi});
            continue;
        }
        Rational mid = (lo + hi) / Rational(2);
        if (q(mid).is_zero())
            found.push_back({mid, mid});
        stack.push_back({mid, hi});
        stack.push_back({lo, mid});
    }

    // Refine: exact when rational, otherwise to the requested width.
    const mpz_class dbound = detail::rational_root_denominator_bound(q);
    const Rational separation = Rational(1) / Rational(mpq_class(dbound * dbound));
    for (auto& r : found) {
        if (r.is_exact())
            continue;
        int slo = q(r.lo).sign();
        bool rational_settled = false;
        for (;;) {
            Rational w = r.hi - r.lo;
            if (!rational_settled && w < separation) {
                Rational cand = detail::simplest_between(r.lo, r.hi);
                if (q(cand).is_zero()) {
                    r = {cand, cand};
                    break;
                }
                rational_settled = true;
            }
            if (rational_settled && w <= width)
                break;
            Rational mid = r.mid();
            int sm = q(mid).sign();
            if (sm == 0) {
                r = {mid, mid};
                break;
            }
            if (sm == slo)
                r.lo = mid;
            else
                r.hi = mid;
        }
    }
    out.insert(out.end(), found.begin(), found.end());
    if (q(b).is_zero())
        out.push_back({b, b});
    std::sort(out.begin(), out.end(), [](const RootEnclosure& x, const RootEnclosure& y) { return x.lo < y.lo; });
    return out;
}

namespace detail {

/// Upper bound of |p| on [a, b] from the coefficients.
inline Rational coefficient_bound(const Polynomial& p, const Rational& a, const Rational& b)
{
    Rational m = max(max(abs(a), abs(b)), Rational(1));
    Rational bound;
    Rational power(1);
    for (const auto& c : p.coefficients()) {
        bound += abs(c) * power;
        power *= m;
    }
    return bound;
}

} // namespace detail

/// Integral of |P| over [a, b].
///
/// Exact when every root of P inside (a, b) is rational; otherwise a certified enclosure
/// of width at most `tol`.
inline Enclosure abs_integral(const Polynomial& p, const Rational& a, const Rational& b,
                              const Rational& tol = default_tolerance())
{
    if (b < a)
        throw std::invalid_argument("abs_integral: requires a <= b");
    if (p.is_zero() || a == b)
        return Enclosure::exact(Rational(0));

    const Rational dbound = detail::coefficient_bound(p.derivative(), a, b);
    // Per-root misplacement error is at most 2 * w^2 * sup|P'|; split the budget across roots.
    Rational width = tol;
    auto roots = real_roots(p, a, b, width);
    std::size_t inexact = 0;
    for (const auto& r : roots)
        inexact += r.is_exact() ? 0 : 1;
    if (inexact > 0 && !dbound.is_zero()) {
        Rational budget = tol / (Rational(2 * static_cast<long>(inexact)) * dbound);
        // width^2 <= budget; find a dyadic width satisfying it.
        Rational w(1);
        while (w * w > budget)
            w /= Rational(2);
        while (w * Rational(2) * w * Rational(2) <= budget)
            w *= Rational(2);
        roots = real_roots(p, a, b, w);
    }

    const auto anti = p.antiderivative();
    Rational value;
    Rational error;
    Rational prev = a;
    for (const auto& r : roots) {
        Rational s = r.mid();
        if (s <= a || s >= b)
            continue;
        value += abs(anti(s) - anti(prev));
        prev = s;
        if (!r.is_exact()) {
            Rational w = r.hi - r.lo;
            error += Rational(2) * w * w * dbound;
        }
    }
    value += abs(anti(b) - anti(prev));
    return {value, value + error};
}

/// max over [a, b] of |P|; exact when the critical points in (a, b) are rational.
inline Enclosure sup_norm(const Polynomial& p, const Rational& a, const Rational& b,
                          const Rational& tol = default_tolerance())
{
    if (b < a)
        throw std::invalid_argument("sup_norm: requires a <= b");
    Rational best = max(abs(p(a)), abs(p(b)));
    if (p.degree() < 2 || a == b)
        return Enclosure::exact(best);

    const Polynomial dp = p.derivative();
    const Rational d2bound = detail::coefficient_bound(dp.derivative(), a, b);
    Rational w(1);
    if (!d2bound.is_zero()) {
        Rational budget = tol / d2bound;
        while (w * w > budget)
            w /= Rational(2);
    }
    Rational error;
    for (const auto& r : real_roots(dp, a, b, w)) {
        Rational c = r.mid();
        best = max(best, abs(p(c)));
        if (!r.is_exact()) {
            Rational rw = r.hi - r.lo;
            error = max(error, rw * rw * d2bound);
        }
    }
    return {best, best + error};
}

/// (mean of |P| over [a, b]) / max_[a,b] |P|.
inline Enclosure intmax_ratio(const Polynomial& p, const Rational& a, const Rational& b,
                              const Rational& tol = default_tolerance())
{
    if (p.is_zero())
        throw std::domain_error("intmax_ratio: undefined for the zero polynomial");
    if (!(a < b))
        throw std::invalid_argument("intmax_ratio: requires a < b");
    auto integral = abs_integral(p, a, b, tol);
    auto sup = sup_norm(p, a, b, tol);
    Rational len = b - a;
    if (sup.lo.is_zero())
        throw std::domain_error("intmax_ratio: vanishing sup norm");
    return {integral.lo / len / sup.hi, integral.hi / len / sup.lo};
}

/// The lower bound 1/(8 n^2) for intmax_ratio at degree n >= 1 (1 for constants).
inline Rational intmax_lower_bound(int degree)
{
    if (degree < 1)
        return Rational(1);
    return Rational(1) / Rational(8L * degree * degree);
}

} // namespace hlusin

#endif
