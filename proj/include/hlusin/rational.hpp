#ifndef HLUSIN_RATIONAL_HPP
#define HLUSIN_RATIONAL_HPP

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hlusin {

/// Exact rational number, always in lowest terms with a positive denominator.
///
/// Serialized as "p/q" (the denominator is always written, also when it is 1).
class Rational
{
public:
    Rational() = default;
    Rational(long v) : value_(v) {}
    Rational(int v) : value_(v) {}
    Rational(long num, long den) : value_(num, den)
    {
        if (den == 0)
            throw std::invalid_argument("Rational: zero denominator");
        value_.canonicalize();
    }
    explicit Rational(mpq_class v) : value_(std::move(v)) { value_.canonicalize(); }
    explicit Rational(const mpz_class& v) : value_(v) {}

    /// Parses "p", "p/q" or a finite decimal such as "-0.125".
    static Rational parse(std::string_view text)
    {
        std::string s(text);
        if (s.empty())
            throw std::invalid_argument("Rational: empty string");
        auto dot = s.find('.');
        if (dot != std::string::npos) {
            if (s.find('/') != std::string::npos)
                throw std::invalid_argument("Rational: malformed '" + s + "'");
            std::string digits = s.substr(0, dot) + s.substr(dot + 1);
            std::size_t frac = s.size() - dot - 1;
            mpz_class num;
            if (num.set_str(digits.empty() || digits == "-" ? "0" : digits, 10) != 0)
                throw std::invalid_argument("Rational: malformed '" + s + "'");
            mpz_class den;
            mpz_ui_pow_ui(den.get_mpz_t(), 10, frac);
            return Rational(mpq_class(num, den));
        }
        mpq_class q;
        if (q.set_str(s, 10) != 0)
            throw std::invalid_argument("Rational: malformed '" + s + "'");
        if (q.get_den() == 0)
            throw std::invalid_argument("Rational: zero denominator");
        return Rational(std::move(q));
    }

    /// Exact dyadic value 2^e (e may be negative).
    static Rational pow2(long e)
    {
        mpz_class p;
        mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(e < 0 ? -e : e));
        return e < 0 ? Rational(mpq_class(mpz_class(1), p)) : Rational(p);
    }

    /// Best rational approximation of a finite double (exact binary value).
    static Rational from_double(double v) { return Rational(mpq_class(v)); }

    const mpq_class& get() const { return value_; }
    mpz_class numerator() const { return value_.get_num(); }
    mpz_class denominator() const { return value_.get_den(); }

    int sign() const { return sgn(value_); }
    bool is_zero() const { return sign() == 0; }
    bool is_integer() const { return value_.get_den() == 1; }
    double to_double() const { return value_.get_d(); }

    std::string str() const
    {
        return value_.get_num().get_str() + "/" + value_.get_den().get_str();
    }

    /// Decimal string with `digits` significant digits after the point (scientific when tiny).
    std::string decimal(int digits) const;

    Rational abs() const { return Rational(mpq_class(::abs(value_))); }

    Rational pow(long e) const
    {
        if (e < 0) {
            if (is_zero())
                throw std::domain_error("Rational: zero to a negative power");
            return Rational(1) / pow(-e);
        }
        mpz_class n, d;
        mpz_pow_ui(n.get_mpz_t(), value_.get_num_mpz_t(), static_cast<unsigned long>(e));
        mpz_pow_ui(d.get_mpz_t(), value_.get_den_mpz_t(), static_cast<unsigned long>(e));
        return Rational(mpq_class(n, d));
    }

    mpz_class floor() const
    {
        mpz_class r;
        mpz_fdiv_q(r.get_mpz_t(), value_.get_num_mpz_t(), value_.get_den_mpz_t());
        return r;
    }
    mpz_class ceil() const
    {
        mpz_class r;
        mpz_cdiv_q(r.get_mpz_t(), value_.get_num_mpz_t(), value_.get_den_mpz_t());
        return r;
    }

    Rational& operator+=(const Rational& o) { value_ += o.value_; return *this; }
    Rational& operator-=(const Rational& o) { value_ -= o.value_; return *this; }
    Rational& operator*=(const Rational& o) { value_ *= o.value_; return *this; }
    Rational& operator/=(const Rational& o)
    {
        if (o.is_zero())
            throw std::domain_error("Rational: division by zero");
        value_ /= o.value_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.value_)); }

    friend bool operator==(const Rational& a, const Rational& b) { return a.value_ == b.value_; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b)
    {
        int c = cmp(a.value_, b.value_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

private:
    mpq_class value_{0};
};

inline Rational abs(const Rational& r) { return r.abs(); }
inline Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
inline Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

inline std::string Rational::decimal(int digits) const
{
    if (digits < 1)
        digits = 1;
    // mpf with enough bits for the requested digits.
    mp_bitcnt_t bits = static_cast<mp_bitcnt_t>(digits * 4 + 64);
    mpf_class f(value_, bits);
    mp_exp_t exp = 0;
    char* raw = mpf_get_str(nullptr, &exp, 10, static_cast<std::size_t>(digits), f.get_mpf_t());
    std::string mant(raw);
    void (*freefunc)(void*, size_t);
    mp_get_memory_functions(nullptr, nullptr, &freefunc);
    freefunc(raw, std::char_traits<char>::length(raw) + 1);

    if (mant.empty())
        return "0";
    bool neg = mant[0] == '-';
    if (neg)
        mant.erase(0, 1);
    std::string out = neg ? "-" : "";
    if (exp > 0 && exp <= 30) {
        auto e = static_cast<std::size_t>(exp);
        if (mant.size() <= e)
            out += mant + std::string(e - mant.size(), '0');
        else
            out += mant.substr(0, e) + "." + mant.substr(e);
    } else if (exp <= 0 && exp > -6) {
        out += "0." + std::string(static_cast<std::size_t>(-exp), '0') + mant;
    } else {
        out += mant.substr(0, 1);
        if (mant.size() > 1)
            out += "." + mant.substr(1);
        out += "e" + std::to_string(static_cast<long>(exp) - 1);
    }
    return out;
}

/// n! as an exact rational.
inline Rational factorial(unsigned n)
{
    mpz_class r;
    mpz_fac_ui(r.get_mpz_t(), n);
    return Rational(r);
}

/// Binomial coefficient C(n, k) as an exact rational.
inline Rational binomial(unsigned n, unsigned k)
{
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return Rational(r);
}

} // namespace hlusin

template <>
struct std::hash<hlusin::Rational>
{
    std::size_t operator()(const hlusin::Rational& r) const noexcept
    {
        return std::hash<std::string>{}(r.str());
    }
};

#endif
