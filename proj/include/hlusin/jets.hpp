#ifndef HLUSIN_JETS_HPP
#define HLUSIN_JETS_HPP

#include "polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace hlusin {

/// Jet of order m on a finite set K: values (F^0(a), ..., F^m(a)) at each site a.
class Jet
{
public:
    Jet() = default;

    Jet(int m, std::vector<Rational> sites, std::vector<std::vector<Rational>> values)
        : m_(m), sites_(std::move(sites)), values_(std::move(values))
    {
        if (m_ < 0)
            throw std::invalid_argument("Jet: negative order");
        if (sites_.size() != values_.size())
            throw std::invalid_argument("Jet: one value vector per site required");
        for (std::size_t i = 1; i < sites_.size(); ++i)
            if (!(sites_[i - 1] < sites_[i]))
                throw std::invalid_argument("Jet: sites must be strictly increasing");
        for (const auto& v : values_)
            if (v.size() != static_cast<std::size_t>(m_) + 1)
                throw std::invalid_argument("Jet: each value vector must have length m + 1");
    }

    /// Jet of a polynomial: F^k(a) = u^(k)(a).
    static Jet from_polynomial(const Polynomial& u, int m, std::span<const Rational> sites)
    {
        std::vector<Polynomial> derivs;
        for (int k = 0; k <= m; ++k)
            derivs.push_back(u.derivative(static_cast<unsigned>(k)));
        std::vector<std::vector<Rational>> values;
        for (const auto& a : sites) {
            std::vector<Rational> v;
            for (const auto& d : derivs)
                v.push_back(d(a));
            values.push_back(std::move(v));
        }
        return Jet(m, {sites.begin(), sites.end()}, std::move(values));
    }

    /// Jet with every value zero.
    static Jet zero(int m, std::span<const Rational> sites)
    {
        return Jet(m, {sites.begin(), sites.end()},
                   std::vector<std::vector<Rational>>(sites.size(),
                                                      std::vector<Rational>(static_cast<std::size_t>(m) + 1)));
    }

    int order() const { return m_; }
    std::size_t size() const { return sites_.size(); }
    std::span<const Rational> sites() const { return sites_; }
    const Rational& site(std::size_t i) const { return sites_.at(i); }
    std::span<const Rational> values(std::size_t i) const { return values_.at(i); }
    const Rational& value(std::size_t i, int k) const { return values_.at(i).at(static_cast<std::size_t>(k)); }
    const std::vector<std::vector<Rational>>& all_values() const { return values_; }

    std::optional<std::size_t> index_of(const Rational& a) const
    {
        auto it = std::lower_bound(sites_.begin(), sites_.end(), a);
        if (it == sites_.end() || *it != a)
            return std::nullopt;
        return static_cast<std::size_t>(it - sites_.begin());
    }

    std::size_t require_site(const Rational& a) const
    {
        auto i = index_of(a);
        if (!i)
            throw std::invalid_argument("Jet: " + a.str() + " is not a site");
        return *i;
    }

    void set_value(std::size_t i, int k, const Rational& v) { values_.at(i).at(static_cast<std::size_t>(k)) = v; }

    friend bool operator==(const Jet&, const Jet&) = default;

private:
    int m_ = 0;
    std::vector<Rational> sites_;
    std::vector<std::vector<Rational>> values_;
};

/// Jets (F, G, H) of a common order on common sites.
struct JetTriple
{
    Jet F;
    Jet G;
    Jet H;

    JetTriple() = default;
    JetTriple(Jet f, Jet g, Jet h) : F(std::move(f)), G(std::move(g)), H(std::move(h))
    {
        if (F.order() != G.order() || F.order() != H.order())
            throw std::invalid_argument("JetTriple: jets must share the order");
        if (!std::ranges::equal(F.sites(), G.sites()) || !std::ranges::equal(F.sites(), H.sites()))
            throw std::invalid_argument("JetTriple: jets must share the sites");
    }

    int order() const { return F.order(); }
    std::span<const Rational> sites() const { return F.sites(); }
};

/// T_a^m F(x) = sum_k F^k(a) (x - a)^k / k! for the site with index i.
inline Polynomial taylor_poly_at(const Jet& jet, std::size_t i)
{
    std::vector<Rational> s;
    for (int k = 0; k <= jet.order(); ++k)
        s.push_back(jet.value(i, k) / factorial(static_cast<unsigned>(k)));
    return Polynomial::from_shifted(s, jet.site(i));
}

inline Polynomial taylor_poly(const Jet& jet, const Rational& a) { return taylor_poly_at(jet, jet.require_site(a)); }

namespace detail {

inline Rational jet_abs(const Rational& v) { return abs(v); }
inline double jet_abs(double v) { return std::fabs(v); }

/// (R_a^m F)^k(b) over any ordered field.
template <class Scalar>
Scalar remainder_value(std::span<const Scalar> at_a, std::span<const Scalar> at_b, const Scalar& a,
                       const Scalar& b, int m, int k)
{
    Scalar sum = Scalar(0);
    Scalar power = Scalar(1);
    Scalar fact = Scalar(1);
    const Scalar step = b - a;
    for (int l = 0; l <= m - k; ++l) {
        if (l > 0) {
            power = power * step;
            fact = fact * Scalar(l);
        }
        sum = sum + at_a[static_cast<std::size_t>(k + l)] * power / fact;
    }
    return at_b[static_cast<std::size_t>(k)] - sum;
}

/// max over ordered pairs with 0 < |b - a| <= delta and 0 <= k <= m of
/// |(R_a^m F)^k(b)| / |b - a|^(m - k). Sites must be increasing.
template <class Scalar, class Values>
Scalar modulus_scan(std::span<const Scalar> sites, const Values& values, int m, const Scalar& delta)
{
    Scalar best = Scalar(0);
    const std::size_t n = sites.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n && sites[j] - sites[i] <= delta; ++j) {
            const Scalar d = sites[j] - sites[i];
            for (int dir = 0; dir < 2; ++dir) {
                std::size_t ia = dir == 0 ? i : j;
                std::size_t ib = dir == 0 ? j : i;
                Scalar denom = Scalar(1);
                // Walk k downward so |b-a|^(m-k) is built incrementally.
                for (int k = m; k >= 0; --k) {
                    if (k < m)
                        denom = denom * d;
                    Scalar r = remainder_value<Scalar>(values[ia], values[ib], sites[ia], sites[ib], m, k);
                    Scalar q = jet_abs(r) / denom;
                    if (best < q)
                        best = q;
                }
            }
        }
    }
    return best;
}

} // namespace detail

/// (R_a^m F)^k(b) = F^k(b) - sum_l F^(k+l)(a) (b - a)^l / l!.
inline Rational remainder(const Jet& jet, const Rational& a, const Rational& b, int k)
{
    if (k < 0 || k > jet.order())
        throw std::out_of_range("remainder: order k out of range");
    auto ia = jet.require_site(a);
    auto ib = jet.require_site(b);
    return detail::remainder_value<Rational>(jet.values(ia), jet.values(ib), a, b, jet.order(), k);
}

/// Largest normalized Whitney remainder over site pairs at distance at most delta (0 if none).
inline Rational whitney_modulus(const Jet& jet, const Rational& delta)
{
    if (delta.sign() <= 0)
        throw std::invalid_argument("whitney_modulus: delta must be positive");
    std::vector<std::span<const Rational>> vals;
    for (std::size_t i = 0; i < jet.size(); ++i)
        vals.push_back(jet.values(i));
    return detail::modulus_scan<Rational>(jet.sites(), vals, jet.order(), delta);
}

struct ProfilePoint
{
    Rational delta;
    Rational value;
    bool populated = false; ///< at least one site pair within delta
};

/// delta_j = 2^-j for j = 0..12.
inline std::vector<Rational> default_ladder(int steps = 12)
{
    std::vector<Rational> ladder;
    for (int j = 0; j <= steps; ++j)
        ladder.push_back(Rational::pow2(-j));
    return ladder;
}

inline bool has_pair_within(std::span<const Rational> sites, const Rational& delta)
{
    for (std::size_t i = 1; i < sites.size(); ++i)
        if (sites[i] - sites[i - 1] <= delta)
            return true;
    return false;
}

inline std::vector<ProfilePoint> whitney_profile(const Jet& jet, std::span<const Rational> ladder)
{
    std::vector<ProfilePoint> out;
    for (const auto& d : ladder)
        out.push_back({d, whitney_modulus(jet, d), has_pair_within(jet.sites(), d)});
    return out;
}

/// H^k(a) - 2 sum_{i<k} C(k-1, i) (F^(k-i) G^i - G^(k-i) F^i)(a); zero iff the
/// horizontality constraint of order k holds at a.
inline Rational ode_residual_at(const JetTriple& t, std::size_t idx, int k)
{
    if (k < 1 || k > t.order())
        throw std::out_of_range("ode_residual: order must satisfy 1 <= k <= m");
    Rational sum;
    for (int i = 0; i < k; ++i) {
        Rational term = t.F.value(idx, k - i) * t.G.value(idx, i) - t.G.value(idx, k - i) * t.F.value(idx, i);
        sum += binomial(static_cast<unsigned>(k - 1), static_cast<unsigned>(i)) * term;
    }
    return t.H.value(idx, k) - Rational(2) * sum;
}

inline Rational ode_residual(const JetTriple& t, const Rational& a, int k)
{
    return ode_residual_at(t, t.F.require_site(a), k);
}

/// Q(y) = f(x) + integral_x^y P.
inline Polynomial integrate_jet(const Polynomial& p, const Rational& f_at_x, const Rational& x)
{
    auto anti = p.antiderivative();
    return anti + Polynomial::constant(f_at_x - anti(x));
}

/// Degree-<= m truncation at x of R(y) = h(x) + 2 integral_x^y (P'Q - Q'P).
inline Polynomial vertical_jet(const Polynomial& p, const Polynomial& q, const Rational& h_at_x, const Rational& x,
                               int m)
{
    Polynomial integrand = (p.derivative() * q - q.derivative() * p) * Rational(2);
    return truncate_shifted(integrate_jet(integrand, h_at_x, x), x, m);
}

} // namespace hlusin

#endif
