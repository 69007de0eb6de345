#ifndef HLUSIN_INTERVAL_SET_HPP
#define HLUSIN_INTERVAL_SET_HPP

#include "rational.hpp"

#include <algorithm>
#include <span>
#include <stdexcept>
#include <vector>

namespace hlusin {

/// Interval with rational endpoints and per-endpoint open/closed flags.
struct Interval
{
    Rational lo;
    Rational hi;
    bool lo_closed = true;
    bool hi_closed = true;

    static Interval closed(const Rational& a, const Rational& b) { return {a, b, true, true}; }
    static Interval open(const Rational& a, const Rational& b) { return {a, b, false, false}; }

    bool empty() const { return hi < lo || (lo == hi && !(lo_closed && hi_closed)); }
    Rational length() const { return empty() ? Rational(0) : hi - lo; }

    bool contains(const Rational& x) const
    {
        if (x < lo || x > hi)
            return false;
        if (x == lo && !lo_closed)
            return false;
        if (x == hi && !hi_closed)
            return false;
        return true;
    }

    friend bool operator==(const Interval&, const Interval&) = default;
};

/// Finite disjoint union of subintervals of [0, 1], kept sorted and maximally merged.
class IntervalSet
{
public:
    IntervalSet() = default;

    explicit IntervalSet(std::vector<Interval> parts) : parts_(std::move(parts)) { normalize(); }

    static IntervalSet unit() { return IntervalSet({Interval::closed(Rational(0), Rational(1))}); }

    std::span<const Interval> components() const { return parts_; }
    std::size_t size() const { return parts_.size(); }
    bool empty() const { return parts_.empty(); }

    Rational measure() const
    {
        Rational m;
        for (const auto& p : parts_)
            m += p.length();
        return m;
    }

    bool contains(const Rational& x) const
    {
        auto it = std::partition_point(parts_.begin(), parts_.end(),
                                       [&](const Interval& p) { return p.hi < x; });
        for (; it != parts_.end() && it->lo <= x; ++it)
            if (it->contains(x))
                return true;
        return false;
    }

    /// inf { |x - y| : y in S }.
    Rational distance(const Rational& x) const
    {
        if (parts_.empty())
            throw std::domain_error("IntervalSet::distance: empty set");
        auto it = std::partition_point(parts_.begin(), parts_.end(),
                                       [&](const Interval& p) { return p.hi < x; });
        Rational best;
        bool have = false;
        auto consider = [&](const Rational& d) {
            if (!have || d < best)
                best = d;
            have = true;
        };
        if (it != parts_.end())
            consider(x < it->lo ? it->lo - x : Rational(0));
        if (it != parts_.begin())
            consider(x - std::prev(it)->hi);
        return best;
    }

    /// [0, 1] \ S.
    IntervalSet complement() const
    {
        std::vector<Interval> gaps;
        Rational pos(0);
        bool pos_closed = true;
        for (const auto& p : parts_) {
            gaps.push_back({pos, p.lo, pos_closed, !p.lo_closed});
            pos = p.hi;
            pos_closed = !p.hi_closed;
        }
        gaps.push_back({pos, Rational(1), pos_closed, true});
        return IntervalSet(std::move(gaps));
    }

    IntervalSet unite(const IntervalSet& o) const
    {
        std::vector<Interval> all = parts_;
        all.insert(all.end(), o.parts_.begin(), o.parts_.end());
        return IntervalSet(std::move(all));
    }

    IntervalSet intersect(const IntervalSet& o) const
    {
        std::vector<Interval> out;
        std::size_t i = 0;
        std::size_t j = 0;
        while (i < parts_.size() && j < o.parts_.size()) {
            const Interval& a = parts_[i];
            const Interval& b = o.parts_[j];
            Interval c;
            if (a.lo == b.lo) {
                c.lo = a.lo;
                c.lo_closed = a.lo_closed && b.lo_closed;
            } else {
                const Interval& later = a.lo > b.lo ? a : b;
                c.lo = later.lo;
                c.lo_closed = later.lo_closed;
            }
            if (a.hi == b.hi) {
                c.hi = a.hi;
                c.hi_closed = a.hi_closed && b.hi_closed;
            } else {
                const Interval& earlier = a.hi < b.hi ? a : b;
                c.hi = earlier.hi;
                c.hi_closed = earlier.hi_closed;
            }
            if (!c.empty())
                out.push_back(c);
            // Advance whichever ends first (closed end lasts longer at a tie).
            if (a.hi < b.hi || (a.hi == b.hi && !a.hi_closed))
                ++i;
            else
                ++j;
        }
        return IntervalSet(std::move(out));
    }

    IntervalSet subtract(const IntervalSet& o) const { return intersect(o.complement()); }

    /// Open lambda-neighbourhood { x in [0,1] : d(x, S) < lambda }. For lambda = 0 this is
    /// the interior of S.
    IntervalSet dilate(const Rational& lambda) const
    {
        if (lambda.sign() < 0)
            throw std::invalid_argument("IntervalSet::dilate: negative radius");
        std::vector<Interval> grown;
        grown.reserve(parts_.size());
        for (const auto& p : parts_)
            grown.push_back(Interval::open(p.lo - lambda, p.hi + lambda));
        return IntervalSet(std::move(grown));
    }

    friend bool operator==(const IntervalSet&, const IntervalSet&) = default;

private:
    void normalize()
    {
        for (auto& p : parts_) {
            if (p.lo.sign() < 0) {
                p.lo = Rational(0);
                p.lo_closed = true;
            }
            if (p.hi > Rational(1)) {
                p.hi = Rational(1);
                p.hi_closed = true;
            }
        }
        std::erase_if(parts_, [](const Interval& p) { return p.empty(); });
        std::sort(parts_.begin(), parts_.end(), [](const Interval& a, const Interval& b) {
            if (a.lo != b.lo)
                return a.lo < b.lo;
            return a.lo_closed && !b.lo_closed;
        });
        std::vector<Interval> merged;
        for (const auto& p : parts_) {
            if (!merged.empty()) {
                Interval& cur = merged.back();
                bool touches = p.lo < cur.hi || (p.lo == cur.hi && (cur.hi_closed || p.lo_closed));
                if (touches) {
                    if (p.lo == cur.lo)
                        cur.lo_closed = cur.lo_closed || p.lo_closed;
                    if (p.hi > cur.hi) {
                        cur.hi = p.hi;
                        cur.hi_closed = p.hi_closed;
                    } else if (p.hi == cur.hi) {
                        cur.hi_closed = cur.hi_closed || p.hi_closed;
                    }
                    continue;
                }
            }
            merged.push_back(p);
        }
        parts_ = std::move(merged);
    }

    std::vector<Interval> parts_;
};

} // namespace hlusin

#endif
