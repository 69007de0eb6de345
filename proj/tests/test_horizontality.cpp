#include "hlusin/horizontality.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace hlusin;
using hlusin::testing::RandomRationals;

namespace {

const Polynomial T{Rational(0), Rational(1)};
const Polynomial T2{Rational(0), Rational(0), Rational(1)};

PiecewiseCurve lift_one(const Polynomial& f, const Polynomial& g, const Rational& h0 = Rational(0))
{
    std::vector<Rational> br{Rational(0), Rational(1)};
    std::vector<Polynomial> fs{f}, gs{g};
    return lift(br, fs, gs, h0);
}

std::vector<Rational> grid_sites(int n)
{
    std::vector<Rational> s;
    for (int k = 0; k <= n; ++k)
        s.push_back(Rational(k, n));
    return s;
}

} // namespace

TEST(Lift, Examples)
{
    EXPECT_TRUE(lift_one(T, T).piece(0).h.is_zero());
    EXPECT_EQ(lift_one(T, T2).piece(0).h, Polynomial::monomial(Rational(-2, 3), 3));
    EXPECT_EQ(lift_one(Polynomial{}, T2, Rational(5, 7)).piece(0).h, Polynomial{Rational(5, 7)});
}

TEST(Lift, RejectsDiscontinuousData)
{
    std::vector<Rational> br{Rational(0), Rational(1, 2), Rational(1)};
    std::vector<Polynomial> f{T, Polynomial{Rational(1)}}, g{T, T};
    EXPECT_THROW(lift(br, f, g, Rational(0)), std::invalid_argument);
    std::vector<Polynomial> short_f{T};
    EXPECT_THROW(lift(br, short_f, g, Rational(0)), std::invalid_argument);
}

TEST(Lift, PiecewiseContinuityAndQuadratureOracle)
{
    std::vector<Rational> br{Rational(0), Rational(1, 3), Rational(1)};
    Polynomial f1 = T, f2 = Polynomial{Rational(1, 3)};
    Polynomial g1 = T2, g2 = T2;
    std::vector<Polynomial> fs{f1, f2}, gs{g1, g2};
    PiecewiseCurve c = lift(br, fs, gs, Rational(1));
    // Oracle: midpoint rule of 2(f'g - g'f) in double.
    double h = 1, dt = 1e-6;
    for (double t = dt / 2; t < 1; t += dt) {
        double fp = t < 1.0 / 3 ? 1 : 0, fv = t < 1.0 / 3 ? t : 1.0 / 3;
        h += 2 * (fp * t * t - 2 * t * fv) * dt;
    }
    EXPECT_NEAR(c(Rational(1)).h.to_double(), h, 1e-6);
}

TEST(Residuals, Examples)
{
    PiecewiseCurve tilted({Rational(0), Rational(1)}, {CurvePiece{T, T, T}});
    EXPECT_EQ(horizontality_residual(tilted), Enclosure::exact(Rational(1)));
    EXPECT_EQ(higher_horizontality_residual(tilted, 1), Enclosure::exact(Rational(1)));
    PiecewiseCurve flat({Rational(0), Rational(1)}, {CurvePiece{Polynomial{}, T2, Polynomial{Rational(3)}}});
    EXPECT_EQ(horizontality_residual(flat), Enclosure::exact(Rational(0)));
    PiecewiseCurve parab = lift_one(T, T2);
    for (int k = 1; k <= 6; ++k)
        EXPECT_EQ(higher_horizontality_residual(parab, k), Enclosure::exact(Rational(0)));
    EXPECT_THROW(horizontality_defect(parab.piece(0), 0), std::out_of_range);
}

TEST(AreaAndVelocity, Examples)
{
    auto sites = grid_sites(4);
    JetTriple zero(Jet::zero(2, sites), Jet::zero(2, sites), Jet::zero(2, sites));
    EXPECT_EQ(area_discrepancy(zero, sites[0], sites[3]), Rational(0));
    EXPECT_EQ(velocity(zero, sites[1], sites[3]), Enclosure::exact(Rational(1, 16)));
    std::vector<Rational> two{Rational(0), Rational(1)};
    JetTriple lin(Jet(1, two, {{Rational(0), Rational(1)}, {Rational(1), Rational(1)}}), Jet::zero(1, two),
                  Jet::zero(1, two));
    EXPECT_EQ(velocity(lin, two[0], two[1]), Enclosure::exact(Rational(2)));
    EXPECT_THROW(velocity(lin, two[1], two[0]), std::invalid_argument);
    EXPECT_THROW(area_discrepancy(lin, two[0], two[0]), std::invalid_argument);
}

TEST(AreaAndVelocity, LiftedPolynomialCurvesHaveZeroArea)
{
    auto sites = grid_sites(5);
    PiecewiseCurve c = lift_one(T, T2);
    JetTriple t = sample_jets(c, sites, 2);
    // Hand check of one value: h(t) = -2t^3/3.
    EXPECT_EQ(t.H.value(5, 0), Rational(-2, 3));
    for (const auto& a : sites)
        for (const auto& b : sites)
            if (a != b) {
                EXPECT_EQ(area_discrepancy(t, a, b), Rational(0));
            }
    RandomRationals rnd(71);
    for (int trial = 0; trial < 20; ++trial) {
        int m = rnd.integer(1, 3);
        PiecewiseCurve r = lift_one(rnd.polynomial(m), rnd.polynomial(m), rnd.rational());
        JetTriple j = sample_jets(r, sites, m);
        for (std::size_t i = 0; i + 1 < sites.size(); ++i)
            EXPECT_EQ(area_discrepancy_at(j, i, sites.size() - 1), Rational(0));
    }
}

TEST(AreaAndVelocity, VerticalShiftInvariance)
{
    RandomRationals rnd(5);
    auto sites = grid_sites(3);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<std::vector<Rational>> f, g, h, hs;
        for (std::size_t i = 0; i < sites.size(); ++i) {
            f.push_back({rnd.rational(), rnd.rational(), rnd.rational()});
            g.push_back({rnd.rational(), rnd.rational(), rnd.rational()});
            h.push_back({rnd.rational(), rnd.rational(), rnd.rational()});
            hs.push_back(h.back());
            hs.back()[0] += Rational(17, 3);
        }
        JetTriple a(Jet(2, sites, f), Jet(2, sites, g), Jet(2, sites, h));
        JetTriple b(Jet(2, sites, f), Jet(2, sites, g), Jet(2, sites, hs));
        EXPECT_EQ(area_discrepancy(a, sites[0], sites[2]), area_discrepancy(b, sites[0], sites[2]));
        EXPECT_EQ(area_discrepancy(a, sites[3], sites[1]), area_discrepancy(b, sites[3], sites[1]));
        EXPECT_EQ(velocity(a, sites[1], sites[3]), velocity(b, sites[1], sites[3]));
        EXPECT_GT(velocity(a, sites[0], sites[1]).lo, Rational(0));
    }
}

TEST(ExtendabilityReport, PolynomialCurvePasses)
{
    // h = -2t^3/3 has degree 3, so order 3 makes every component exact.
    auto sites = grid_sites(8);
    JetTriple t = sample_jets(lift_one(T, T2), sites, 3);
    auto r = extendability_report(t, default_ladder(6));
    EXPECT_TRUE(r.verdict());
    for (const auto& p : r.whitney_h)
        EXPECT_EQ(p.value, Rational(0));
    for (const auto& p : r.area_ratio)
        EXPECT_EQ(p.value, Enclosure::exact(Rational(0)));
    EXPECT_EQ(r.max_ode_residual, Rational(0));
}

TEST(ExtendabilityReport, PerturbedDerivativeFailsOnlyTheOdeCondition)
{
    auto sites = grid_sites(8);
    JetTriple t = sample_jets(lift_one(T, T2), sites, 3);
    JetTriple bad = t;
    bad.H.set_value(3, 1, t.H.value(3, 1) + Rational(1, 1'000'000));
    auto r = extendability_report(bad, default_ladder(6), ReportTolerances{Rational(1, 10), Rational(0), Rational(1)});
    EXPECT_FALSE(r.ode_pass);
    EXPECT_TRUE(r.whitney_pass);
    EXPECT_TRUE(r.area_pass);
    EXPECT_FALSE(r.verdict());
    EXPECT_THROW(extendability_report(JetTriple(Jet::zero(2, {&sites[0], 1}), Jet::zero(2, {&sites[0], 1}),
                                                Jet::zero(2, {&sites[0], 1})),
                                      default_ladder()),
                 std::invalid_argument);
}

TEST(HermiteGapFill, CubicExampleAndInterpolation)
{
    std::vector<Rational> two{Rational(0), Rational(1)};
    JetTriple t(Jet::zero(1, two), Jet(1, two, {{Rational(0), Rational(0)}, {Rational(1), Rational(0)}}),
                Jet::zero(1, two));
    PiecewiseCurve fill = hermite_gap_fill(t);
    EXPECT_EQ(fill.piece(0).g, (Polynomial{Rational(0), Rational(0), Rational(3), Rational(-2)}));
    EXPECT_TRUE(fill.piece(0).f.is_zero());

    RandomRationals rnd(99);
    auto sites = grid_sites(4);
    for (int m = 1; m <= 3; ++m) {
        std::vector<std::vector<Rational>> f, g, h;
        for (std::size_t i = 0; i < sites.size(); ++i) {
            std::vector<Rational> a, b;
            for (int k = 0; k <= m; ++k) {
                a.push_back(rnd.rational());
                b.push_back(rnd.rational());
            }
            f.push_back(a);
            g.push_back(b);
            h.push_back(std::vector<Rational>(static_cast<std::size_t>(m) + 1));
        }
        JetTriple j(Jet(m, sites, f), Jet(m, sites, g), Jet(m, sites, h));
        PiecewiseCurve c = hermite_gap_fill(j);
        EXPECT_EQ(horizontality_residual(c), Enclosure::exact(Rational(0)));
        for (std::size_t i = 0; i < sites.size(); ++i) {
            std::size_t left = i == 0 ? 0 : i - 1;
            std::size_t right = std::min(i, c.piece_count() - 1);
            for (int k = 0; k <= m; ++k) {
                auto ku = static_cast<unsigned>(k);
                EXPECT_EQ(c.piece(left).f.derivative(ku)(sites[i]), f[i][static_cast<std::size_t>(k)]);
                EXPECT_EQ(c.piece(right).f.derivative(ku)(sites[i]), f[i][static_cast<std::size_t>(k)]);
                EXPECT_EQ(c.piece(left).g.derivative(ku)(sites[i]), g[i][static_cast<std::size_t>(k)]);
                EXPECT_EQ(c.piece(right).g.derivative(ku)(sites[i]), g[i][static_cast<std::size_t>(k)]);
            }
        }
    }
}

TEST(HermiteGapFill, ReproducesPolynomialCurves)
{
    auto sites = grid_sites(3);
    PiecewiseCurve c = lift_one(T, T2, Rational(2));
    JetTriple t = sample_jets(c, sites, 2);
    PiecewiseCurve fill = hermite_gap_fill(t);
    for (std::size_t i = 0; i < fill.piece_count(); ++i)
        EXPECT_EQ(fill.piece(i), c.piece(0));
    for (std::size_t i = 0; i + 1 < sites.size(); ++i)
        EXPECT_EQ(horizontal_repair_gap(t, sites[i], sites[i + 1]), Rational(0));
}

TEST(HorizontalRepairGap, ZeroHorizontalJets)
{
    std::vector<Rational> s{Rational(0), Rational(1, 2), Rational(1)};
    Jet h(2, s, {{Rational(1), Rational(0), Rational(0)}, {Rational(4), Rational(0), Rational(0)},
                 {Rational(0), Rational(0), Rational(0)}});
    JetTriple t(Jet::zero(2, s), Jet::zero(2, s), h);
    EXPECT_EQ(horizontal_repair_gap(t, s[0], s[1]), Rational(3));
    EXPECT_THROW(horizontal_repair_gap(t, s[0], s[2]), std::invalid_argument);
}
