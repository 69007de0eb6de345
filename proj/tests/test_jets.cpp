#include "hlusin/jets.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace hlusin;
using hlusin::testing::RandomRationals;

namespace {

Polynomial cube() { return Polynomial{Rational(0), Rational(0), Rational(0), Rational(1)}; }

/// Independent modulus: Taylor polynomials evaluated directly, all ordered pairs.
Rational brute_modulus(const Jet& jet, const Rational& delta)
{
    Rational best;
    const int m = jet.order();
    for (std::size_t i = 0; i < jet.size(); ++i)
        for (std::size_t j = 0; j < jet.size(); ++j) {
            if (i == j || delta < abs(jet.site(j) - jet.site(i)))
                continue;
            Polynomial t = taylor_poly_at(jet, i);
            Rational d = abs(jet.site(j) - jet.site(i));
            for (int k = 0; k <= m; ++k) {
                Rational r = jet.value(j, k) - t.derivative(static_cast<unsigned>(k))(jet.site(j));
                best = max(best, abs(r) / d.pow(m - k));
            }
        }
    return best;
}

} // namespace

TEST(Jet, Validation)
{
    std::vector<Rational> sites{Rational(0), Rational(1)};
    EXPECT_THROW(Jet(2, sites, {{Rational(0)}, {Rational(0)}}), std::invalid_argument);
    EXPECT_THROW(Jet(0, {Rational(1), Rational(0)}, {{Rational(0)}, {Rational(0)}}), std::invalid_argument);
    EXPECT_THROW(Jet(-1, {}, {}), std::invalid_argument);
    Jet z = Jet::zero(2, sites);
    EXPECT_THROW(z.require_site(Rational(1, 2)), std::invalid_argument);
}

TEST(TaylorPoly, Examples)
{
    std::vector<Rational> a{Rational(1, 3)};
    Jet j(2, a, {{Rational(0), Rational(1), Rational(0)}});
    EXPECT_EQ(taylor_poly(j, a[0]), (Polynomial{-a[0], Rational(1)}));
    EXPECT_TRUE(taylor_poly(Jet::zero(2, a), a[0]).is_zero());
    std::vector<Rational> half{Rational(1, 2)};
    Polynomial sq{Rational(0), Rational(0), Rational(1)};
    EXPECT_EQ(taylor_poly(Jet::from_polynomial(sq, 2, half), half[0]), sq);
}

TEST(Remainder, Examples)
{
    RandomRationals rnd(2);
    std::vector<Rational> sites{Rational(-1), Rational(1, 5), Rational(2, 3), Rational(3)};
    Jet poly = Jet::from_polynomial(rnd.polynomial(3), 3, sites);
    for (const auto& a : sites)
        for (const auto& b : sites)
            for (int k = 0; k <= 3; ++k)
                EXPECT_EQ(remainder(poly, a, b, k), Rational(0));
    Jet c = Jet::from_polynomial(cube(), 2, sites);
    EXPECT_EQ(remainder(c, sites[0], sites[3], 2), c.value(3, 2) - c.value(0, 2));
    std::vector<Rational> zt{Rational(0), Rational(2, 7)};
    Jet c2 = Jet::from_polynomial(cube(), 2, zt);
    EXPECT_EQ(remainder(c2, zt[0], zt[1], 0), zt[1].pow(3));
    EXPECT_THROW(remainder(c2, zt[0], zt[1], 3), std::out_of_range);
}

TEST(WhitneyModulus, CubicOnThreeSitesMatchesBruteForce)
{
    std::vector<Rational> sites{Rational(0), Rational(1, 2), Rational(1)};
    Jet c = Jet::from_polynomial(cube(), 2, sites);
    // The k = 2 remainder dominates: |6b - 6a| over (0, 1).
    EXPECT_EQ(whitney_modulus(c, Rational(1)), Rational(6));
    EXPECT_EQ(whitney_modulus(c, Rational(1)), brute_modulus(c, Rational(1)));
    EXPECT_EQ(whitney_modulus(c, Rational(1, 2)), Rational(3));
    EXPECT_EQ(whitney_modulus(c, Rational(1, 4)), Rational(0));
    EXPECT_THROW(whitney_modulus(c, Rational(0)), std::invalid_argument);
}

TEST(WhitneyModulus, RandomJetsMatchBruteForceAndAreMonotone)
{
    RandomRationals rnd(31);
    for (int trial = 0; trial < 25; ++trial) {
        int m = rnd.integer(0, 3);
        std::vector<Rational> sites;
        for (int k = 0; k < 6; ++k)
            sites.push_back(Rational(k, 5) + Rational(rnd.integer(0, 3), 40));
        std::vector<std::vector<Rational>> vals;
        for (std::size_t i = 0; i < sites.size(); ++i) {
            std::vector<Rational> v;
            for (int k = 0; k <= m; ++k)
                v.push_back(rnd.rational());
            vals.push_back(v);
        }
        Jet j(m, sites, vals);
        for (const auto& d : default_ladder(6)) {
            EXPECT_EQ(whitney_modulus(j, d), brute_modulus(j, d));
        }
        auto prof = whitney_profile(j, default_ladder(6));
        for (std::size_t i = 1; i < prof.size(); ++i)
            EXPECT_LE(prof[i].value, prof[i - 1].value);
    }
}

TEST(WhitneyModulus, PolynomialJetsVanish)
{
    RandomRationals rnd(8);
    std::vector<Rational> sites{Rational(0), Rational(1, 9), Rational(1, 2), Rational(7, 8)};
    for (int m = 0; m <= 4; ++m) {
        Jet j = Jet::from_polynomial(rnd.polynomial(m), m, sites);
        for (const auto& p : whitney_profile(j, default_ladder()))
            EXPECT_EQ(p.value, Rational(0));
    }
}

TEST(OdeResidual, Examples)
{
    std::vector<Rational> s{Rational(0), Rational(1, 2)};
    Jet h(2, s, {{Rational(5), Rational(3), Rational(-1)}, {Rational(1), Rational(2), Rational(7)}});
    JetTriple zero_fg(Jet::zero(2, s), Jet::zero(2, s), h);
    EXPECT_EQ(ode_residual(zero_fg, s[1], 1), Rational(2));
    EXPECT_EQ(ode_residual(zero_fg, s[1], 2), Rational(7));
    // f = t, g = t, h constant.
    Polynomial t{Rational(0), Rational(1)};
    JetTriple line(Jet::from_polynomial(t, 2, s), Jet::from_polynomial(t, 2, s),
                   Jet::from_polynomial(Polynomial{Rational(4)}, 2, s));
    for (int k = 1; k <= 2; ++k)
        EXPECT_EQ(ode_residual(line, s[1], k), Rational(0));
    // k = 1 reduces to H^1 - 2(F^1 G^0 - G^1 F^0).
    Jet f(1, {Rational(0)}, {{Rational(2), Rational(3)}});
    Jet g(1, {Rational(0)}, {{Rational(5), Rational(-1)}});
    Jet hh(1, {Rational(0)}, {{Rational(0), Rational(1)}});
    EXPECT_EQ(ode_residual(JetTriple(f, g, hh), Rational(0), 1), Rational(1) - Rational(2) * (3 * 5 - (-1) * 2));
    EXPECT_THROW(ode_residual(line, s[0], 0), std::out_of_range);
    EXPECT_THROW(ode_residual(line, s[0], 3), std::out_of_range);
}

TEST(IntegrateJet, ExamplesAndIdentity)
{
    EXPECT_EQ(integrate_jet(Polynomial{}, Rational(3), Rational(1, 2)), Polynomial{Rational(3)});
    EXPECT_EQ(integrate_jet(Polynomial{Rational(0), Rational(2)}, Rational(1), Rational(0)),
              (Polynomial{Rational(1), Rational(0), Rational(1)}));
    RandomRationals rnd(13);
    for (int trial = 0; trial < 100; ++trial) {
        Polynomial p = rnd.polynomial(rnd.integer(0, 6));
        Rational c = rnd.rational(), x = rnd.rational();
        Polynomial q = integrate_jet(p, c, x);
        EXPECT_EQ(q.derivative(), p);
        EXPECT_EQ(q(x), c);
    }
}

TEST(VerticalJet, ExamplesAndOdeConstraints)
{
    const Rational x(1, 4), h(2, 3);
    Polynomial line{-x, Rational(1)};
    EXPECT_EQ(vertical_jet(line, line, h, x, 2), Polynomial{h});
    EXPECT_EQ(vertical_jet(Polynomial{}, Polynomial{}, h, x, 3), Polynomial{h});
    Polynomial p{Rational(1), Rational(2)}, q{Rational(-1), Rational(1, 3)};
    Polynomial full = integrate_jet((p.derivative() * q - q.derivative() * p) * Rational(2), h, x);
    EXPECT_EQ(vertical_jet(p, q, h, x, 2), full);

    RandomRationals rnd(19);
    for (int m : {2, 3}) {
        for (int trial = 0; trial < 30; ++trial) {
            Polynomial P = rnd.polynomial(m), Q = rnd.polynomial(m);
            Rational base = rnd.rational();
            Polynomial R = vertical_jet(P, Q, rnd.rational(), base, m);
            std::vector<Rational> site{base};
            JetTriple t(Jet::from_polynomial(P, m, site), Jet::from_polynomial(Q, m, site),
                        Jet::from_polynomial(R, m, site));
            for (int k = 1; k <= m; ++k)
                EXPECT_EQ(ode_residual(t, base, k), Rational(0));
        }
    }
}
