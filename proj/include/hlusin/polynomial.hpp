#ifndef HLUSIN_POLYNOMIAL_HPP
#define HLUSIN_POLYNOMIAL_HPP

#include "rational.hpp"

#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

namespace hlusin {

/// Dense univariate polynomial with exact rational coefficients in the monomial basis.
///
/// Trailing zeros are always stripped, so the zero polynomial has no coefficients and
/// degree -1.
class Polynomial
{
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }
    Polynomial(std::initializer_list<Rational> coeffs) : c_(coeffs) { trim(); }

    static Polynomial constant(const Rational& v) { return Polynomial({v}); }

    static Polynomial monomial(const Rational& coef, unsigned k)
    {
        std::vector<Rational> c(k + 1);
        c[k] = coef;
        return Polynomial(std::move(c));
    }

    /// Builds sum_k s[k] (y - x)^k.
    static Polynomial from_shifted(std::span<const Rational> s, const Rational& x)
    {
        Polynomial out;
        Polynomial lin({-x, Rational(1)});
        for (auto it = s.rbegin(); it != s.rend(); ++it)
            out = out * lin + constant(*it);
        return out;
    }

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    std::span<const Rational> coefficients() const { return c_; }

    Rational coeff(std::size_t k) const { return k < c_.size() ? c_[k] : Rational(0); }
    const Rational& leading() const { return c_.back(); }

    Rational operator()(const Rational& t) const
    {
        Rational r;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it)
            r = r * t + *it;
        return r;
    }

    double eval(double t) const
    {
        double r = 0.0;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it)
            r = r * t + it->to_double();
        return r;
    }

    std::vector<double> to_doubles() const
    {
        std::vector<double> d;
        d.reserve(c_.size());
        for (const auto& v : c_)
            d.push_back(v.to_double());
        return d;
    }

    Polynomial derivative(unsigned order = 1) const
    {
        Polynomial p = *this;
        for (unsigned o = 0; o < order && !p.is_zero(); ++o) {
            std::vector<Rational> d;
            for (std::size_t k = 1; k < p.c_.size(); ++k)
                d.push_back(p.c_[k] * Rational(static_cast<long>(k)));
            p = Polynomial(std::move(d));
        }
        return p;
    }

    /// Antiderivative vanishing at 0.
    Polynomial antiderivative() const
    {
        if (is_zero())
            return {};
        std::vector<Rational> a(c_.size() + 1);
        for (std::size_t k = 0; k < c_.size(); ++k)
            a[k + 1] = c_[k] / Rational(static_cast<long>(k + 1));
        return Polynomial(std::move(a));
    }

    Rational integral(const Rational& a, const Rational& b) const
    {
        auto anti = antiderivative();
        return anti(b) - anti(a);
    }

    /// Coefficients of the expansion in powers of (y - x), i.e. of P(x + s) in s.
    std::vector<Rational> shifted_coefficients(const Rational& x) const
    {
        std::vector<Rational> a = c_;
        const std::size_t n = a.size();
        for (std::size_t i = 0; i + 1 < n; ++i)
            for (std::size_t j = n - 1; j > i; --j)
                a[j - 1] += x * a[j];
        return a;
    }

    /// P(scale * t + offset).
    Polynomial compose_affine(const Rational& scale, const Rational& offset) const
    {
        Polynomial out;
        Polynomial lin({offset, scale});
        for (auto it = c_.rbegin(); it != c_.rend(); ++it)
            out = out * lin + constant(*it);
        return out;
    }

    Polynomial& operator+=(const Polynomial& o)
    {
        if (o.c_.size() > c_.size())
            c_.resize(o.c_.size());
        for (std::size_t k = 0; k < o.c_.size(); ++k)
            c_[k] += o.c_[k];
        trim();
        return *this;
    }
    Polynomial& operator-=(const Polynomial& o) { return *this += -o; }
    Polynomial& operator*=(const Rational& s)
    {
        for (auto& v : c_)
            v *= s;
        trim();
        return *this;
    }

    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator-(const Polynomial& a)
    {
        Polynomial r = a;
        for (auto& v : r.c_)
            v = -v;
        return r;
    }
    friend Polynomial operator*(Polynomial a, const Rational& s) { return a *= s; }
    friend Polynomial operator*(const Rational& s, Polynomial a) { return a *= s; }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b)
    {
        if (a.is_zero() || b.is_zero())
            return {};
        std::vector<Rational> r(a.c_.size() + b.c_.size() - 1);
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (a.c_[i].is_zero())
                continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j)
                r[i + j] += a.c_[i] * b.c_[j];
        }
        return Polynomial(std::move(r));
    }

    friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.c_ == b.c_; }

    /// Euclidean division; returns (quotient, remainder).
    friend std::pair<Polynomial, Polynomial> divmod(const Polynomial& num, const Polynomial& den)
    {
        if (den.is_zero())
            throw std::domain_error("Polynomial: division by zero polynomial");
        std::vector<Rational> rem = num.c_;
        const int dd = den.degree();
        if (num.degree() < dd)
            return {Polynomial{}, num};
        std::vector<Rational> quo(static_cast<std::size_t>(num.degree() - dd + 1));
        const Rational& lead = den.leading();
        for (int k = num.degree(); k >= dd; --k) {
            Rational q = rem[static_cast<std::size_t>(k)] / lead;
            quo[static_cast<std::size_t>(k - dd)] = q;
            if (q.is_zero())
                continue;
            for (int j = 0; j <= dd; ++j)
                rem[static_cast<std::size_t>(k - dd + j)] -= q * den.c_[static_cast<std::size_t>(j)];
        }
        rem.resize(static_cast<std::size_t>(dd));
        return {Polynomial(std::move(quo)), Polynomial(std::move(rem))};
    }

    Polynomial monic() const
    {
        if (is_zero())
            return {};
        return *this * (Rational(1) / leading());
    }

    std::string str() const
    {
        if (is_zero())
            return "0";
        std::string s;
        for (std::size_t k = 0; k < c_.size(); ++k) {
            if (c_[k].is_zero())
                continue;
            if (!s.empty())
                s += " + ";
            s += "(" + c_[k].str() + ")";
            if (k > 0)
                s += "*t^" + std::to_string(k);
        }
        return s;
    }

private:
    void trim()
    {
        while (!c_.empty() && c_.back().is_zero())
            c_.pop_back();
    }

    std::vector<Rational> c_;
};

inline Polynomial gcd(Polynomial a, Polynomial b)
{
    while (!b.is_zero()) {
        auto r = divmod(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

/// Unique polynomial of degree <= m whose difference from `p` is divisible by (y - x)^(m+1).
inline Polynomial truncate_shifted(const Polynomial& p, const Rational& x, int m)
{
    if (m < 0)
        return {};
    if (p.degree() <= m)
        return p;
    auto s = p.shifted_coefficients(x);
    s.resize(static_cast<std::size_t>(m) + 1);
    return Polynomial::from_shifted(s, x);
}

} // namespace hlusin

#endif
