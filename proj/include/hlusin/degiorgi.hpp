#ifndef HLUSIN_DEGIORGI_HPP
#define HLUSIN_DEGIORGI_HPP

#include "interval_set.hpp"
#include "poly_analysis.hpp"

namespace hlusin {

/// Integral of |P| over a finite union of intervals.
inline Enclosure abs_integral(const Polynomial& p, const IntervalSet& set,
                              const Rational& tol = default_tolerance())
{
    Enclosure total = Enclosure::exact(Rational(0));
    const Rational share = set.empty() ? tol : tol / Rational(static_cast<long>(set.size()));
    for (const auto& part : set.components())
        total = total + abs_integral(p, part.lo, part.hi, share);
    return total;
}

/// r^(1+k) |D^k P(x)| / integral_E |P| for E inside [x - r, x + r].
///
/// Bounded (for fixed degree and fixed density measure(E)/r) by the De Giorgi polynomial
/// inequality; the constant is not asserted here.
inline Enclosure degiorgi_ratio(const Polynomial& p, const Rational& x, const Rational& r,
                                const IntervalSet& set, unsigned k,
                                const Rational& tol = default_tolerance())
{
    if (r.sign() <= 0)
        throw std::invalid_argument("degiorgi_ratio: radius must be positive");
    if (set.measure().is_zero())
        throw std::domain_error("degiorgi_ratio: E has measure zero");
    for (const auto& part : set.components())
        if (part.lo < x - r || part.hi > x + r)
            throw std::invalid_argument("degiorgi_ratio: E must lie inside [x - r, x + r]");
    auto denom = abs_integral(p, set, tol);
    if (denom.hi.is_zero())
        throw std::domain_error("degiorgi_ratio: integral of |P| over E vanishes");
    Rational num = r.pow(1 + static_cast<long>(k)) * abs(p.derivative(k)(x));
    if (denom.lo.is_zero())
        throw std::domain_error("degiorgi_ratio: integral of |P| over E not separated from 0");
    return {num / denom.hi, num / denom.lo};
}

} // namespace hlusin

#endif
