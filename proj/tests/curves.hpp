#pragma once

#include "atr/ecdata/curve.hpp"
#include "atr/numfield/ideals.hpp"

namespace atr::testing {

struct Named {
    RealQuadField F;
    CurveOverF E;
};

// (a1, a2, a3, a4, a6) as (rational part, w part) pairs.
inline Named curve(std::int64_t D, std::array<std::pair<int, int>, 5> a) {
    Named n{make_field(D, 64, -1), {}};
    std::array<FieldElement, 5> c;
    for (int i = 0; i < 5; ++i) c[i] = n.F.elt(a[i].first, a[i].second);
    n.E = make_curve(n.F, c);
    return n;
}

inline Named e29() { return curve(29, {{{1, 0}, {0, 0}, {11, 5}, {0, 0}, {0, 0}}}); }
inline Named e37() { return curve(37, {{{0, 0}, {2, 0}, {1, 0}, {-19, -8}, {28, 11}}}); }
inline Named e109() { return curve(109, {{{0, 1}, {-1, -1}, {0, 0}, {-245, -58}, {-2944, -630}}}); }
inline Named e509() { return curve(509, {{{-1, 0}, {2, 2}, {0, -1}, {162, 3}, {71, 34}}}); }

} // namespace atr::testing
