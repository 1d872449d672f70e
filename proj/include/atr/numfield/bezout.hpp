#pragma once

#include "atr/cfrac/division.hpp"

#include <tuple>

namespace atr {

struct BezoutResult {
    FieldElement g, s, t; // s*a + t*b = g
};

inline bool is_unit(const FieldElement& x) {
    return x.is_integral() && !x.is_zero() && boost::multiprecision::abs(x.norm()) == 1;
}

inline BezoutResult bezout(const FieldElement& a, const FieldElement& b, int max_radius = 6) {
    if (a.is_zero() && b.is_zero()) fail(errc::precondition, "bezout of (0, 0)");
    if (!a.is_integral() || !b.is_integral()) fail(errc::precondition, "bezout needs integral elements");
    std::int64_t D = a.D() ? a.D() : b.D();
    FieldElement one(D, 1), zero(D, 0);
    // x = sx*a + tx*b, y = sy*a + ty*b
    FieldElement x = a, sx = one, tx = zero;
    FieldElement y = b, sy = zero, ty = one;
    while (!y.is_zero()) {
        std::vector<DivisionChoice> ch;
        for (int rad = 2; rad <= max_radius && ch.empty(); ++rad) ch = two_stage_divisions(x, y, rad);
        for (int rad = 2; rad <= 3 && ch.empty(); ++rad) ch = two_stage_divisions(x, y, rad, UnitBoxes::when_empty);
        if (ch.empty()) fail(errc::two_stage_search_failed, "no division chain for " + x.str() + ", " + y.str());
        const auto& c = ch.front();
        FieldElement r1 = x - c.q1 * y, sr1 = sx - c.q1 * sy, tr1 = tx - c.q1 * ty;
        if (!c.two_stage) {
            x = y, sx = sy, tx = ty;
            y = r1, sy = sr1, ty = tr1;
        } else {
            FieldElement r2 = y - c.q2 * r1, sr2 = sy - c.q2 * sr1, tr2 = ty - c.q2 * tr1;
            x = r1, sx = sr1, tx = tr1;
            y = r2, sy = sr2, ty = tr2;
        }
    }
    if (is_unit(x)) {
        FieldElement inv = one / x;
        return {one, sx * inv, tx * inv};
    }
    return {x, sx, tx};
}

} // namespace atr
