#ifndef HLUSIN_TESTS_SUPPORT_HPP
#define HLUSIN_TESTS_SUPPORT_HPP

#include "hlusin/polynomial.hpp"

#include <random>
#include <vector>

namespace hlusin::testing {

/// Deterministic generator of small rationals and polynomials.
class RandomRationals
{
public:
    explicit RandomRationals(unsigned seed) : rng_(seed) {}

    Rational rational(long num_range = 9, long den_max = 8)
    {
        std::uniform_int_distribution<long> num(-num_range, num_range);
        std::uniform_int_distribution<long> den(1, den_max);
        return Rational(num(rng_), den(rng_));
    }

    Polynomial polynomial(int degree, long num_range = 9, long den_max = 8)
    {
        std::vector<Rational> c;
        for (int k = 0; k <= degree; ++k)
            c.push_back(rational(num_range, den_max));
        return Polynomial(std::move(c));
    }

    Polynomial nonzero_polynomial(int max_degree)
    {
        for (;;) {
            std::uniform_int_distribution<int> deg(0, max_degree);
            Polynomial p = polynomial(deg(rng_));
            if (!p.is_zero())
                return p;
        }
    }

    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

    std::mt19937& engine() { return rng_; }

private:
    std::mt19937 rng_;
};

/// sum_i |P(t_i)| dt, midpoint rule with n cells, in long double.
inline long double riemann_abs(const Polynomial& p, const Rational& a, const Rational& b, int n)
{
    auto c = p.to_doubles();
    long double lo = a.to_double(), hi = b.to_double();
    long double h = (hi - lo) / n;
    long double s = 0;
    for (int i = 0; i < n; ++i) {
        long double t = lo + (i + 0.5L) * h;
        long double v = 0;
        for (auto it = c.rbegin(); it != c.rend(); ++it)
            v = v * t + *it;
        s += v < 0 ? -v : v;
    }
    return s * h;
}

} // namespace hlusin::testing

#endif
