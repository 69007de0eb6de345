#ifndef HLUSIN_COUNTEREXAMPLE_HPP
#define HLUSIN_COUNTEREXAMPLE_HPP

// Exact replica, at finite generation depth, of the piecewise-linear horizontal curve whose
// dyadic bumps carry vertical increments 4 h_n^2 and defeat C^2 horizontal approximation.

#include "horizontality.hpp"
#include "interval_set.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace hlusin {

/// Sequences h_n (bump heights), lambda_n (exclusion radii), w_n (bump radii) and the depth N.
struct CounterexampleParams
{
    std::function<Rational(int)> h;
    std::function<Rational(int)> lambda;
    std::function<Rational(int)> w;
    int depth = 10;

    /// h_n = 3^-n, lambda_n = (2/5)^n, w_n = 2^(-n(n+6)).
    static CounterexampleParams defaults(int depth = 10)
    {
        return {
            [](int n) { return Rational(1, 3).pow(n); },
            [](int n) { return Rational(2, 5).pow(n); },
            [](int n) { return Rational::pow2(-static_cast<long>(n) * (n + 6)); },
            depth,
        };
    }
};

/// Throws unless h, lambda, w are positive and strictly decreasing on 1..N+1 and w_n <= 2^-6n.
inline void validate_params(const CounterexampleParams& p)
{
    if (p.depth < 1)
        throw std::invalid_argument("CounterexampleParams: depth must be >= 1");
    auto check = [&](const std::function<Rational(int)>& seq, const char* name) {
        for (int n = 1; n <= p.depth + 1; ++n) {
            Rational v = seq(n);
            if (v.sign() <= 0)
                throw std::invalid_argument(std::string("CounterexampleParams: ") + name + " must be positive");
            if (n > 1 && !(v < seq(n - 1)))
                throw std::invalid_argument(std::string("CounterexampleParams: ") + name +
                                            " must be strictly decreasing");
        }
    };
    check(p.h, "h");
    check(p.lambda, "lambda");
    check(p.w, "w");
    for (int n = 1; n <= p.depth + 1; ++n)
        if (Rational::pow2(-6L * n) < p.w(n))
            throw std::invalid_argument("CounterexampleParams: w_n must not exceed 2^(-6n)");
}

/// Exact partial sum plus a geometric estimate of the remainder.
struct TailSum
{
    Rational lower;
    Rational upper;
};

/// sum_{k > n} term(k), summed exactly over `terms` terms; the remainder is bounded by
/// t_M rho / (1 - rho) with rho the ratio of the last two terms (exact for geometric terms,
/// an upper bound when term ratios are non-increasing).
inline TailSum tail_sum(const std::function<Rational(int)>& term, int n, int terms)
{
    if (terms < 2)
        throw std::invalid_argument("tail_sum: need at least two terms");
    Rational sum;
    Rational last, prev;
    for (int k = n + 1; k <= n + terms; ++k) {
        prev = last;
        last = term(k);
        sum += last;
    }
    if (prev.is_zero())
        return {sum, sum};
    Rational rho = last / prev;
    if (!(rho < Rational(1)))
        throw std::domain_error("tail_sum: terms do not decay geometrically");
    return {sum, sum + last * rho / (Rational(1) - rho)};
}

/// One checked sequence n = 1..N with its monotonicity summary.
struct SequenceCheck
{
    std::string name;
    int p = 0; ///< exponent for the (w2) family, 0 otherwise
    std::vector<Enclosure> values; ///< index n-1
    std::optional<int> decreasing_from; ///< smallest n0 with strict decrease on n0..N
    std::optional<int> increasing_from; ///< smallest n0 with strict increase on n0..N
};

struct ParamsReport
{
    std::vector<Rational> lambda_partial_sums; ///< sum_{k<=n} 2^k lambda_k
    SequenceCheck h_over_lambda;
    SequenceCheck scaled_height;  ///< 4^n h_n
    SequenceCheck area_tail;      ///< (1/lambda_{n+1}^2) sum_{k>n} 2^{k-n} h_k^2
    SequenceCheck width_tail;     ///< (1/lambda_{n+1}) sum_{k>n} 2^{k-n} w_k
    std::vector<SequenceCheck> width_height_tails; ///< p = 1..p_max
    bool width_bound_ok = true;   ///< w_n <= 2^-6n
};

namespace detail {

inline void summarize_monotonicity(SequenceCheck& s)
{
    const auto& v = s.values;
    const int n = static_cast<int>(v.size());
    if (n == 0)
        return;
    int dec = n;
    while (dec > 1 && v[static_cast<std::size_t>(dec - 1)].hi < v[static_cast<std::size_t>(dec - 2)].lo)
        --dec;
    int inc = n;
    while (inc > 1 && v[static_cast<std::size_t>(inc - 2)].hi < v[static_cast<std::size_t>(inc - 1)].lo)
        --inc;
    if (n == 1 || dec < n)
        s.decreasing_from = dec;
    if (n == 1 || inc < n)
        s.increasing_from = inc;
}

} // namespace detail

/// Exact checks of the growth/decay conditions on h, lambda, w for n = 1..N, p = 1..p_max.
inline ParamsReport check_params(const CounterexampleParams& params, int p_max, int tail_terms = 64)
{
    if (p_max < 1)
        throw std::invalid_argument("check_params: p_max must be >= 1");
    validate_params(params);
    const int N = params.depth;
    ParamsReport r;
    r.h_over_lambda.name = "h_over_lambda";
    r.scaled_height.name = "four_pow_n_h";
    r.area_tail.name = "area_tail";
    r.width_tail.name = "width_tail";

    Rational partial;
    for (int n = 1; n <= N; ++n) {
        partial += Rational::pow2(n) * params.lambda(n);
        r.lambda_partial_sums.push_back(partial);
        r.h_over_lambda.values.push_back(Enclosure::exact(params.h(n) / params.lambda(n)));
        r.scaled_height.values.push_back(Enclosure::exact(Rational(4).pow(n) * params.h(n)));
        if (Rational::pow2(-6L * n) < params.w(n))
            r.width_bound_ok = false;

        const Rational lam = params.lambda(n + 1);
        auto area = tail_sum([&](int k) { return Rational::pow2(k - n) * params.h(k).pow(2); }, n, tail_terms);
        Rational s = Rational(1) / lam.pow(2);
        r.area_tail.values.push_back({area.lower * s, area.upper * s});
        auto width = tail_sum([&](int k) { return Rational::pow2(k - n) * params.w(k); }, n, tail_terms);
        r.width_tail.values.push_back({width.lower / lam, width.upper / lam});
    }
    for (int p = 1; p <= p_max; ++p) {
        SequenceCheck c;
        c.name = "width_height_tail";
        c.p = p;
        for (int n = 1; n <= N; ++n) {
            auto t = tail_sum([&](int k) { return Rational::pow2(k - n) * params.w(k) * params.h(k).pow(p); }, n,
                              tail_terms);
            Rational s = Rational(1) / params.lambda(n + 1).pow(2L * p + 1);
            c.values.push_back({t.lower * s, t.upper * s});
        }
        detail::summarize_monotonicity(c);
        r.width_height_tails.push_back(std::move(c));
    }
    detail::summarize_monotonicity(r.h_over_lambda);
    detail::summarize_monotonicity(r.scaled_height);
    detail::summarize_monotonicity(r.area_tail);
    detail::summarize_monotonicity(r.width_tail);
    return r;
}

/// One open interval J of I_n: centre k / 2^n, radius w_n.
struct Component
{
    int level = 0;
    std::size_t index = 0; ///< position within its level, left to right
    Rational center;
    Rational radius;

    Rational lo() const { return center - radius; }
    Rational hi() const { return center + radius; }
    Interval interval() const { return Interval::open(lo(), hi()); }
};

/// I_1..I_N: I_1 = B(1/2, w_1); I_{n+1} collects the intervals B(k/2^{n+1}, w_{n+1}),
/// 0 < k < 2^{n+1}, that miss I_1 u ... u I_n.
inline std::vector<std::vector<Component>> build_components(const CounterexampleParams& params)
{
    validate_params(params);
    std::vector<std::vector<Component>> levels;
    levels.push_back({Component{1, 0, Rational(1, 2), params.w(1)}});
    std::vector<Component> placed = levels.front(); // all levels so far, sorted by centre
    for (int n = 1; n < params.depth; ++n) {
        const Rational radius = params.w(n + 1);
        const long count = 1L << (n + 1);
        const Rational step = Rational::pow2(-(n + 1));
        std::vector<Component> level;
        for (long k = 1; k < count; ++k) {
            Rational c = step * Rational(k);
            auto it = std::lower_bound(placed.begin(), placed.end(), c,
                                       [](const Component& a, const Rational& v) { return a.center < v; });
            bool hits = false;
            if (it != placed.end() && abs(it->center - c) < it->radius + radius)
                hits = true;
            if (it != placed.begin() && abs(std::prev(it)->center - c) < std::prev(it)->radius + radius)
                hits = true;
            if (!hits)
                level.push_back(Component{n + 1, level.size(), c, radius});
        }
        std::vector<Component> merged;
        merged.reserve(placed.size() + level.size());
        std::merge(placed.begin(), placed.end(), level.begin(), level.end(), std::back_inserter(merged),
                   [](const Component& a, const Component& b) { return a.center < b.center; });
        placed = std::move(merged);
        levels.push_back(std::move(level));
    }
    return levels;
}

inline IntervalSet level_set(const std::vector<Component>& level)
{
    std::vector<Interval> parts;
    for (const auto& c : level)
        parts.push_back(c.interval());
    return IntervalSet(std::move(parts));
}

/// I_1, ..., I_N as interval sets.
inline std::vector<IntervalSet> build_intervals(const CounterexampleParams& params)
{
    std::vector<IntervalSet> out;
    for (const auto& level : build_components(params))
        out.push_back(level_set(level));
    return out;
}

/// The curve together with the interval families it was built from.
struct CounterexampleCurve
{
    CounterexampleParams params;
    std::vector<std::vector<Component>> components; ///< per level
    std::vector<IntervalSet> levels;                ///< I_1..I_N
    IntervalSet support;                            ///< I_1 u ... u I_N
    PiecewiseCurve curve;

    int depth() const { return params.depth; }

    /// I_1 u ... u I_n.
    IntervalSet union_up_to(int n) const
    {
        IntervalSet u;
        for (int i = 0; i < n && i < static_cast<int>(levels.size()); ++i)
            u = u.unite(levels[static_cast<std::size_t>(i)]);
        return u;
    }
};

/// Builds f, g piecewise linear (four-piece pattern with plateau h_n on every level-n component,
/// zero elsewhere) and h by the exact horizontal lift from h(0) = 0.
inline CounterexampleCurve build_counterexample(const CounterexampleParams& params)
{
    CounterexampleCurve c;
    c.params = params;
    c.components = build_components(params);
    for (const auto& level : c.components)
        c.levels.push_back(level_set(level));
    std::vector<Interval> all;
    std::vector<const Component*> ordered;
    for (const auto& level : c.components)
        for (const auto& comp : level) {
            all.push_back(comp.interval());
            ordered.push_back(&comp);
        }
    c.support = IntervalSet(std::move(all));
    std::sort(ordered.begin(), ordered.end(),
              [](const Component* a, const Component* b) { return a->center < b->center; });

    std::vector<Rational> brk{Rational(0)};
    std::vector<Polynomial> f, g;
    auto push_piece = [&](const Rational& end, Polynomial fp, Polynomial gp) {
        if (end == brk.back())
            return;
        brk.push_back(end);
        f.push_back(std::move(fp));
        g.push_back(std::move(gp));
    };
    // Linear polynomial through (t0, v0) and (t1, v1).
    auto linear = [](const Rational& t0, const Rational& v0, const Rational& t1, const Rational& v1) {
        Rational slope = (v1 - v0) / (t1 - t0);
        return Polynomial({v0 - slope * t0, slope});
    };
    for (const Component* comp : ordered) {
        const Rational height = params.h(comp->level);
        const Rational q = comp->radius / Rational(2);
        const Rational p1 = comp->lo();
        const Rational p2 = p1 + q, p3 = p2 + q, p4 = p3 + q, p5 = comp->hi();
        const Rational zero(0);
        push_piece(p1, {}, {});
        push_piece(p2, {}, linear(p1, zero, p2, height));
        push_piece(p3, linear(p2, zero, p3, height), Polynomial::constant(height));
        push_piece(p4, Polynomial::constant(height), linear(p3, height, p4, zero));
        push_piece(p5, linear(p4, height, p5, zero), {});
    }
    push_piece(Rational(1), {}, {});
    c.curve = lift(brk, f, g, Rational(0));
    return c;
}

/// (f, g, h)(t) for t in [0, 1].
inline CurvePoint eval_curve(const CounterexampleCurve& c, const Rational& t)
{
    if (t.sign() < 0 || Rational(1) < t)
        throw std::out_of_range("eval_curve: t must lie in [0, 1]");
    return c.curve(t);
}

struct ComponentIncrement
{
    int level = 0;
    std::size_t index = 0;
    Rational increment; ///< h(b) - h(a) over the component (a, b)
    Rational expected;  ///< 4 h_n^2

    bool matches() const { return increment == expected; }
};

inline std::vector<ComponentIncrement> component_increments(const CounterexampleCurve& c)
{
    std::vector<ComponentIncrement> out;
    for (const auto& level : c.components)
        for (const auto& comp : level) {
            Rational inc = c.curve(comp.hi()).h - c.curve(comp.lo()).h;
            out.push_back({comp.level, comp.index, inc, Rational(4) * c.params.h(comp.level).pow(2)});
        }
    return out;
}

struct LevelMeasure
{
    int n = 0;
    std::size_t components = 0;          ///< in I_1 u ... u I_n
    Rational width_partial_sum;          ///< sum_{k<=n} 2^k w_k
    Rational union_measure;              ///< measure(I_1 u ... u I_n)
    Rational dilated_measure;            ///< measure of the lambda_n-neighbourhood of that union
    Rational exclusion_measure;          ///< measure(A_n)
    Rational exclusion_bound;            ///< 2 lambda_n (2^n - 1)
};

struct MeasureReport
{
    Rational support_measure; ///< measure(I_1 u ... u I_N)
    std::vector<LevelMeasure> levels;
};

/// Exact measures of the partial unions, the partial sums sum 2^n w_n, and
/// A_n = { x in [0,1] \ I : d(x, I_1 u ... u I_n) < lambda_n }.
inline MeasureReport measure_report(const CounterexampleCurve& c)
{
    MeasureReport r;
    r.support_measure = c.support.measure();
    IntervalSet partial_union;
    Rational partial_sum;
    std::size_t count = 0;
    for (int n = 1; n <= c.depth(); ++n) {
        const auto& level = c.levels[static_cast<std::size_t>(n - 1)];
        partial_union = partial_union.unite(level);
        count += c.components[static_cast<std::size_t>(n - 1)].size();
        partial_sum += Rational::pow2(n) * c.params.w(n);
        const Rational lam = c.params.lambda(n);
        IntervalSet grown = partial_union.dilate(lam);
        IntervalSet excl = grown.subtract(c.support);
        r.levels.push_back({n, count, partial_sum, partial_union.measure(), grown.measure(), excl.measure(),
                            Rational(2) * lam * (Rational::pow2(n) - Rational(1))});
    }
    return r;
}

struct GoodPair
{
    Rational x;
    Rational y;
    Component straddled;
};

/// Points x < y of E \ I with y - x <= 2^-n on opposite sides of a component of I_{n+1}:
/// lowest-index component first, then the pair closest to that component.
inline std::optional<GoodPair> good_pair_search(const IntervalSet& e, const CounterexampleCurve& c, int n)
{
    if (n < 1 || n + 1 > c.depth())
        throw std::out_of_range("good_pair_search: need 1 <= n and n + 1 <= depth");
    const IntervalSet usable =
        e.intersect(IntervalSet({Interval::open(Rational(0), Rational(1))})).subtract(c.support);
    const Rational span = Rational::pow2(-n);
    for (const auto& comp : c.components[static_cast<std::size_t>(n)]) {
        // x >= y - span >= comp.hi() - span and symmetrically for y.
        IntervalSet left = usable.intersect(IntervalSet({Interval::closed(comp.hi() - span, comp.lo())}));
        IntervalSet right = usable.intersect(IntervalSet({Interval::closed(comp.hi(), comp.lo() + span)}));
        if (left.empty() || right.empty())
            continue;
        const Interval& lp = left.components().back();
        const Interval& rp = right.components().front();
        const Rational gap = rp.lo - lp.hi;
        const bool attained = lp.hi_closed && rp.lo_closed;
        if (span < gap || (gap == span && !attained))
            continue;
        Rational slack = span - gap;
        Rational x = lp.hi;
        Rational y = rp.lo;
        if (!lp.hi_closed)
            x -= min(lp.length() / Rational(2), slack / Rational(4));
        if (!rp.lo_closed)
            y += min(rp.length() / Rational(2), slack / Rational(4));
        return GoodPair{x, y, comp};
    }
    return std::nullopt;
}

/// Arithmetic of the contradiction at level n: jets F = G = 0, H^0 = h at the closed endpoints
/// x < y of the first I_{n+1} component.
struct StraddleReport
{
    int n = 0;
    Rational x;
    Rational y;
    JetTriple jets;              ///< m = 2 on sites {x, y}
    Rational area;               ///< A(x, y) = h(y) - h(x)
    Enclosure velocity;          ///< V(x, y) = (y - x)^4
    Rational pair_ratio;         ///< A(x, y) / V(x, y)
    Rational max_velocity;       ///< V at the largest admissible separation 2^-n
    Rational contradiction_ratio; ///< A(x, y) / max_velocity = 4 (4^n h_{n+1})^2
    Rational scaled_height;      ///< 4^n h_{n+1}
    bool exceeds_two = false;    ///< 4^n h_{n+1} >= 2
};

inline JetTriple straddle_jets(const CounterexampleCurve& c, std::span<const Rational> sites, int m = 2)
{
    std::vector<std::vector<Rational>> hv;
    for (const auto& s : sites) {
        std::vector<Rational> v(static_cast<std::size_t>(m) + 1);
        v[0] = eval_curve(c, s).h;
        hv.push_back(std::move(v));
    }
    return JetTriple(Jet::zero(m, sites), Jet::zero(m, sites), Jet(m, {sites.begin(), sites.end()}, std::move(hv)));
}

inline StraddleReport straddle_ratio(const CounterexampleCurve& c, int n)
{
    if (n < 1 || n + 1 > c.depth())
        throw std::out_of_range("straddle_ratio: need 1 <= n and n + 1 <= depth");
    const auto& level = c.components[static_cast<std::size_t>(n)];
    if (level.empty())
        throw std::domain_error("straddle_ratio: I_{n+1} is empty");
    const Component& comp = level.front();
    StraddleReport r;
    r.n = n;
    r.x = comp.lo();
    r.y = comp.hi();
    std::vector<Rational> sites{r.x, r.y};
    r.jets = straddle_jets(c, sites);
    r.area = area_discrepancy(r.jets, r.x, r.y);
    r.velocity = velocity(r.jets, r.x, r.y);
    r.pair_ratio = r.area / r.velocity.lo;

    std::vector<Rational> wide{Rational(0), Rational::pow2(-n)};
    JetTriple zero(Jet::zero(2, wide), Jet::zero(2, wide), Jet::zero(2, wide));
    r.max_velocity = velocity(zero, wide[0], wide[1]).lo;
    r.contradiction_ratio = r.area / r.max_velocity;
    r.scaled_height = Rational(4).pow(n) * c.params.h(n + 1);
    r.exceeds_two = Rational(2) <= r.scaled_height;
    return r;
}

} // namespace hlusin

#endif
