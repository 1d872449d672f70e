#pragma once

#include "atr/core/numeric.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace atr {

// A point of the upper half plane or the cusp i*infinity.
template <class R> struct Limit {
    complex_t<R> z{};
    bool inf = false;

    static Limit infinity() {
        Limit l;
        l.inf = true;
        return l;
    }
    Limit() = default;
    Limit(complex_t<R> v) : z(v) {}
    Limit(R re, R im) : z(re, im) {}
    R im() const { return z.imag(); }
    R re() const { return z.real(); }
};

template <class R> struct Region {
    Limit<R> x0, y0, x1, y1; // outer variable runs x0 -> y0, inner x1 -> y1

    bool finite() const { return !x0.inf && !y0.inf && !x1.inf && !y1.inf; }
    bool valid() const {
        for (const auto* l : {&x0, &y0, &x1, &y1})
            if (!l->inf && !(l->im() > 0)) return false;
        return true;
    }
};

// eps^2 is the least product Im(outer)*Im(inner); products touching i*infinity are skipped.
template <class R> R epsilon(const Region<R>& r) {
    R best = std::numeric_limits<R>::infinity();
    bool any = false;
    for (const auto* o : {&r.x0, &r.y0})
        for (const auto* i : {&r.x1, &r.y1}) {
            if (o->inf || i->inf) continue;
            R p = o->im() * i->im();
            if (!any || p < best) best = p;
            any = true;
        }
    if (!any) return std::numeric_limits<R>::infinity();
    using std::sqrt;
    return sqrt(best);
}

template <class R> Limit<R> conj_neg(const Limit<R>& l) {
    if (l.inf) return l;
    return Limit<R>(-l.re(), l.im());
}

template <class R> Region<R> reflect(const Region<R>& r) {
    return {conj_neg(r.x0), conj_neg(r.y0), conj_neg(r.x1), conj_neg(r.y1)};
}

} // namespace atr
