#pragma once

#include "atr/numfield/field.hpp"

#include <algorithm>
#include <map>
#include <vector>

namespace atr {

// a = q1 b + r1 (one stage), optionally followed by b = q2 r1 + r2.
struct DivisionChoice {
    bool two_stage = false;
    FieldElement q1, r1, q2, r2;
    const FieldElement& remainder() const { return two_stage ? r2 : r1; }
};

inline bigint round_rational(const rational& q) {
    using boost::multiprecision::denominator;
    using boost::multiprecision::numerator;
    bigint n = numerator(q), d = denominator(q);
    bigint t = 2 * n + d, dd = 2 * d; // floor((2n + d) / 2d)
    bigint r = t / dd;
    if (t < 0 && r * dd != t) r -= 1;
    return r;
}

inline std::vector<FieldElement> quotient_candidates(const FieldElement& a, const FieldElement& b, int radius) {
    FieldElement c = a / b;
    std::int64_t D = a.D() ? a.D() : b.D();
    bigint m0 = round_rational(c.a()), n0 = round_rational(c.b());
    std::vector<FieldElement> out;
    out.reserve((2 * radius + 1) * (2 * radius + 1));
    for (int i = -radius; i <= radius; ++i)
        for (int j = -radius; j <= radius; ++j) out.emplace_back(D, rational(m0 + i), rational(n0 + j));
    return out;
}

inline const FieldElement& cached_unit(std::int64_t D) {
    thread_local std::map<std::int64_t, FieldElement> units;
    auto it = units.find(D);
    if (it == units.end()) it = units.emplace(D, fundamental_unit_raw(D)).first;
    return it->second;
}

// Rounding a/b in integral-basis coordinates only probes a box around a/b, while
// {x : |N(x)| < 1} stretches along a hyperbola. Rescaling by a unit moves along it.
inline std::vector<FieldElement> scaled_quotient_candidates(const FieldElement& a, const FieldElement& b, int radius, int k) {
    FieldElement u = cached_unit(a.D() ? a.D() : b.D()), uk = u.pow(k), inv = FieldElement(u.D(), 1) / uk;
    auto out = quotient_candidates(a * uk, b, radius);
    for (auto& q : out) q = q * inv;
    return out;
}

inline std::vector<DivisionChoice> division_search(const FieldElement& a, const FieldElement& b, int radius, int k) {
    using boost::multiprecision::abs;
    rational nb = abs(b.norm());
    std::vector<DivisionChoice> out;
    auto cands = [&](const FieldElement& x, const FieldElement& y) {
        return k == 0 ? quotient_candidates(x, y, radius) : scaled_quotient_candidates(x, y, radius, k);
    };
    for (const auto& q1 : cands(a, b)) {
        FieldElement r1 = a - q1 * b;
        rational n1 = abs(r1.norm());
        if (n1 < nb) {
            out.push_back({false, q1, r1, {}, {}});
            continue;
        }
        for (const auto& q2 : cands(b, r1)) {
            FieldElement r2 = b - q2 * r1;
            if (abs(r2.norm()) < nb) out.push_back({true, q1, r1, q2, r2});
        }
    }
    return out;
}

// Which unit-rescaled boxes u^k, 0 < |k| <= 3, are searched besides the plain one.
enum class UnitBoxes { none, when_empty, always };

inline std::vector<DivisionChoice> two_stage_divisions(const FieldElement& a, const FieldElement& b, int radius = 2,
                                                       UnitBoxes boxes = UnitBoxes::none) {
    if (b.is_zero()) fail(errc::precondition, "division by zero");
    using boost::multiprecision::abs;
    std::vector<DivisionChoice> out = division_search(a, b, radius, 0);
    for (int k = 1; boxes != UnitBoxes::none && k <= 3 && (boxes == UnitBoxes::always || out.empty()); ++k) {
        for (int s : {k, -k}) {
            auto more = division_search(a, b, radius, s);
            out.insert(out.end(), more.begin(), more.end());
        }
    }
    auto key = [](const FieldElement& x) { return std::make_tuple(x.a(), x.b()); };
    std::stable_sort(out.begin(), out.end(), [&](const DivisionChoice& x, const DivisionChoice& y) {
        rational nx = abs(x.remainder().norm()), ny = abs(y.remainder().norm());
        if (nx != ny) return nx < ny;
        if (x.two_stage != y.two_stage) return !x.two_stage;
        if (key(x.q1) != key(y.q1)) return key(x.q1) < key(y.q1);
        return key(x.q2) < key(y.q2);
    });
    out.erase(std::unique(out.begin(), out.end(), [&](const DivisionChoice& x, const DivisionChoice& y) {
        return x.two_stage == y.two_stage && x.q1 == y.q1 && (!x.two_stage || x.q2 == y.q2);
    }), out.end());
    return out;
}

} // namespace atr
