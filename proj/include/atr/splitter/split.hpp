#pragma once

#include "atr/hmfint/region.hpp"
#include "atr/numfield/bezout.hpp"
#include "atr/numfield/matrix.hpp"
#include "atr/splitter/hyperbolic.hpp"

#include <cmath>
#include <deque>
#include <map>

namespace atr {

enum class Group { SL2, GLtilde };

struct FieldGeom {
    long double C_F = 0;
    long double eps_F_sl2 = 0;
    long double eps_F_gl = 0;
    long double u0 = 0;
    long double eps_F(Group g) const { return g == Group::SL2 ? eps_F_sl2 : eps_F_gl; }
};

inline FieldGeom geometry(const RealQuadField& F) {
    FieldGeom g;
    // area of the fundamental parallelogram of O_F = |w0 - w1|
    g.C_F = std::fabs(F.embed<long double>(F.w, 0) - F.embed<long double>(F.w, 1));
    g.u0 = F.u0;
    g.eps_F_sl2 = g.u0 / (g.C_F * (1 + g.u0 * g.u0));
    g.eps_F_gl = std::sqrt(g.u0) / (g.C_F * (1 + g.u0));
    return g;
}

struct SplitConfig {
    long double eps_F = 0, eps0 = 0, eps1 = 0;
    long double d0 = 0, d1 = 0, d_min = 0;
    Group group = Group::GLtilde;
    std::size_t max_regions = 2000000;
};

inline SplitConfig make_split_config(const FieldGeom& g, long double eps0_factor = 0.81L, Group group = Group::GLtilde) {
    SplitConfig c;
    c.group = group;
    c.eps_F = g.eps_F(group);
    c.eps0 = eps0_factor * c.eps_F;
    if (!(c.eps0 > 0 && c.eps0 < c.eps_F)) fail(errc::precondition, "eps0 must lie in (0, eps_F)");
    c.eps1 = std::sqrt(c.eps0 * c.eps_F);
    auto d = [&](long double e) {
        long double q = (c.eps_F / e) * (c.eps_F / e);
        return std::acosh(1 + (q - 1) * (q - 1) / (2 * q));
    };
    c.d0 = d(c.eps0);
    c.d1 = d(c.eps1);
    c.d_min = std::min(c.d0, c.d1);
    return c;
}

// ---- pigeonhole lemma ----------------------------------------------------------

struct FreitagResult {
    OElt c, d;
};

namespace detail {
// nonzero c in O_F with sup-norm below R0 (by increasing sup-norm)
inline std::vector<std::pair<OElt, long double>> small_elements(long double w0, long double w1, long double R0) {
    std::vector<std::pair<OElt, long double>> S;
    auto bmax = static_cast<std::int64_t>(std::ceil(2 * R0 / std::fabs(w0 - w1))) + 1;
    for (std::int64_t b = -bmax; b <= bmax; ++b) {
        long double lo = std::max(-R0 - b * w0, -R0 - b * w1), hi = std::min(R0 - b * w0, R0 - b * w1);
        for (auto a = static_cast<std::int64_t>(std::ceil(lo)); a <= static_cast<std::int64_t>(std::floor(hi)); ++a) {
            if (a == 0 && b == 0) continue;
            long double n = std::max(std::fabs(a + b * w0), std::fabs(a + b * w1));
            if (n <= R0) S.push_back({OElt{a, b}, n});
        }
    }
    std::stable_sort(S.begin(), S.end(), [](const auto& p, const auto& q) { return p.second < q.second; });
    return S;
}
} // namespace detail

// Pigeonhole on the reductions of c*x modulo O_F.  The box count only approximates C_F/delta^2,
// so a failed collision falls back to a direct search, which always succeeds: the body
// |c_i| <= C_F/delta, |c_i x_i + d_i| <= delta has volume 16 C_F^2 against covolume C_F^2.
inline FreitagResult freitag_pair(const RealQuadField& F, long double x0, long double x1, long double delta) {
    if (!(delta > 0 && delta < 1)) fail(errc::precondition, "freitag_pair needs 0 < delta < 1");
    const FieldGeom g = geometry(F);
    const long double w0 = F.embed<long double>(F.w, 0), w1 = F.embed<long double>(F.w, 1);
    auto reduce = [&](const OElt& c, OElt& d) {
        long double y0 = F.embed<long double>(c, 0) * x0, y1 = F.embed<long double>(c, 1) * x1;
        long double beta = (y0 - y1) / (w0 - w1), alpha = y0 - beta * w0;
        d = OElt{-static_cast<std::int64_t>(std::floor(alpha)), -static_cast<std::int64_t>(std::floor(beta))};
        return std::make_pair(y0 + d.a + d.b * w0, y1 + d.a + d.b * w1);
    };
    auto ok = [&](const OElt& c, const OElt& d) {
        long double e0 = F.embed<long double>(c, 0) * x0 + F.embed<long double>(d, 0);
        long double e1 = F.embed<long double>(c, 1) * x1 + F.embed<long double>(d, 1);
        long double cn = std::max(std::fabs(F.embed<long double>(c, 0)), std::fabs(F.embed<long double>(c, 1)));
        return !(c.a == 0 && c.b == 0) && std::max(std::fabs(e0), std::fabs(e1)) <= delta && cn <= g.C_F / delta;
    };
    auto S = detail::small_elements(w0, w1, g.C_F / (2 * delta));
    std::map<std::pair<long long, long long>, std::size_t> boxes;
    std::vector<OElt> ds(S.size());
    for (std::size_t i = 0; i < S.size(); ++i) {
        auto [p0, p1] = reduce(S[i].first, ds[i]);
        std::pair<long long, long long> key{static_cast<long long>(std::floor(p0 / delta)),
                                            static_cast<long long>(std::floor(p1 / delta))};
        auto [it, fresh] = boxes.emplace(key, i);
        if (!fresh) {
            std::size_t j = it->second;
            OElt c{S[i].first.a - S[j].first.a, S[i].first.b - S[j].first.b};
            OElt d{ds[i].a - ds[j].a, ds[i].b - ds[j].b};
            if (ok(c, d)) return {c, d};
        }
    }
    for (const auto& [c, n] : detail::small_elements(w0, w1, g.C_F / delta)) {
        OElt d;
        reduce(c, d);
        for (int da = -1; da <= 1; ++da)
            for (int db = -1; db <= 1; ++db) {
                OElt dd{d.a + da, d.b + db};
                if (ok(c, dd)) return {c, dd};
            }
    }
    fail(errc::no_collision, "no pair (c, d) found");
}

// ---- moving to the good domain -------------------------------------------------

template <class R> struct PointPair {
    complex_t<R> z0, z1;
};

template <class R> PointPair<R> act_pair(const RealQuadField& F, const Mat2& g, const PointPair<R>& p) {
    return {act_uhp(embed<R>(F, g, 0), p.z0), act_uhp(embed<R>(F, g, 1), p.z1)};
}

inline Mat2 unit_power_matrix(const RealQuadField& F, long k, Group group) {
    FieldElement one = F.elt(1), zero = F.elt(0);
    if (group == Group::GLtilde) return {F.u.pow(k), zero, zero, one};
    return {F.u.pow(k), zero, zero, F.u.pow(-k)};
}

// Translation by m in O_F bringing the real parts of (z0, z1) near the origin. Thin pairs can
// need coordinates of m far beyond 64 bits, so the rounding is done at 50 digits.
template <class R> Mat2 recentre(const RealQuadField& F, const PointPair<R>& p) {
    hp_real w0 = F.embed<hp_real>(F.w, 0), w1 = F.embed<hp_real>(F.w, 1);
    hp_real r0(p.z0.real()), r1(p.z1.real());
    hp_real beta = (r0 - r1) / (w0 - w1), alpha = r0 - beta * w0;
    auto rnd = [](const hp_real& x) { return static_cast<bigint>(boost::multiprecision::round(x)); };
    FieldElement m = F.elt(rational(-rnd(alpha)), rational(-rnd(beta)));
    return {F.elt(1), m, F.elt(0), F.elt(1)};
}

template <class R>
Mat2 reduce_to_good_domain(const RealQuadField& F, const complex_t<R>& z0, const complex_t<R>& z1, Group group) {
    const FieldGeom geom = geometry(F);
    const long double epsF = geom.eps_F(group);
    using std::log;
    PointPair<R> p{z0, z1};
    long double s0 = static_cast<long double>(z0.imag()), s1 = static_cast<long double>(z1.imag());
    long double lr = std::log(s1 / s0);
    long k = std::lround(lr / ((group == Group::GLtilde ? 2 : 4) * F.log_u0));
    Mat2 bal = unit_power_matrix(F, k, group);
    p = act_pair(F, bal, p);
    auto improd = [](const PointPair<R>& q) {
        return static_cast<long double>(q.z0.imag()) * static_cast<long double>(q.z1.imag());
    };
    if (improd(p) >= epsF * epsF) return bal;
    s0 = static_cast<long double>(p.z0.imag());
    s1 = static_cast<long double>(p.z1.imag());
    long double delta = std::pow(geom.C_F * geom.C_F * s0 * s1, 0.25L);
    auto complete = [&](const OElt& cc, const OElt& dd) -> Mat2 {
        FieldElement c = F.elt(cc), d = F.elt(dd);
        BezoutResult g = bezout(c, d);
        c = c / g.g;
        d = d / g.g;
        BezoutResult h = bezout(c, d);
        if (!is_unit(h.g)) fail(errc::invariant_violation, "coprime completion failed");
        FieldElement s = h.s / h.g, t = h.t / h.g;
        // any top row differs from (t, -s) by a multiple of (c, d); keep the small one
        FieldElement q = t / c, m = F.elt(round_rational(q.a()), round_rational(q.b()));
        return Mat2{t - m * c, -s - m * d, c, d};
    };
    Mat2 best = bal;
    long double best_val = improd(p);
    if (delta < 1) {
        FreitagResult fr = freitag_pair(F, static_cast<long double>(p.z0.real()), static_cast<long double>(p.z1.real()), delta);
        Mat2 g = complete(fr.c, fr.d) * bal;
        long double v = improd(act_pair(F, g, PointPair<R>{z0, z1}));
        if (v > best_val) best = g, best_val = v;
    }
    if (best_val < epsF * epsF) {
        // the lemma's constant is approximate; search the pigeonhole box exhaustively
        const long double w0 = F.embed<long double>(F.w, 0), w1 = F.embed<long double>(F.w, 1);
        long double R0 = 2 * geom.C_F / std::max(delta, 1e-6L);
        auto bmax = static_cast<std::int64_t>(std::ceil(2 * R0 / std::fabs(w0 - w1))) + 1;
        long double r0 = static_cast<long double>(p.z0.real()), r1 = static_cast<long double>(p.z1.real());
        OElt bc{0, 0}, bd{0, 0};
        long double bv = best_val;
        for (std::int64_t b = -bmax; b <= bmax; ++b) {
            long double lo = std::max(-R0 - b * w0, -R0 - b * w1), hi = std::min(R0 - b * w0, R0 - b * w1);
            for (auto a = static_cast<std::int64_t>(std::ceil(lo)); a <= static_cast<std::int64_t>(std::floor(hi)); ++a) {
                if (a == 0 && b == 0) continue;
                long double c0 = a + b * w0, c1 = a + b * w1;
                long double y0 = c0 * r0, y1 = c1 * r1;
                long double beta = (y0 - y1) / (w0 - w1), alpha = y0 - beta * w0;
                for (int da = -1; da <= 1; ++da)
                    for (int db = -1; db <= 1; ++db) {
                        std::int64_t ea = -std::llround(alpha) + da, eb = -std::llround(beta) + db;
                        long double d0 = ea + eb * w0, d1 = ea + eb * w1;
                        long double den0 = (c0 * r0 + d0) * (c0 * r0 + d0) + c0 * c0 * s0 * s0;
                        long double den1 = (c1 * r1 + d1) * (c1 * r1 + d1) + c1 * c1 * s1 * s1;
                        long double v = s0 * s1 / (den0 * den1);
                        if (v > bv) bv = v, bc = {a, b}, bd = {ea, eb};
                    }
            }
        }
        if (!(bc.a == 0 && bc.b == 0)) {
            Mat2 g = complete(bc, bd) * bal;
            long double v = improd(act_pair(F, g, PointPair<R>{z0, z1}));
            if (v > best_val) best = g, best_val = v;
        }
    }
    if (best_val < epsF * epsF * (1 - 1e-9L))
        fail(errc::invariant_violation, "could not reach eps_F: got " + std::to_string(std::sqrt(best_val)));
    // a unit power leaves the height product alone and evens out the two heights
    PointPair<R> q = act_pair(F, best, PointPair<R>{z0, z1});
    long double lq = std::log(static_cast<long double>(q.z1.imag()) / static_cast<long double>(q.z0.imag()));
    best = unit_power_matrix(F, std::lround(lq / ((group == Group::GLtilde ? 2 : 4) * F.log_u0)), group) * best;
    Mat2 t = recentre(F, act_pair(F, best, PointPair<R>{z0, z1}));
    return t * best;
}

// ---- breaking the integrals ----------------------------------------------------

template <class R> Region<R> act_region(const RealQuadField& F, const Mat2& g, const Region<R>& r) {
    auto g0 = embed<R>(F, g, 0), g1 = embed<R>(F, g, 1);
    auto a0 = [&](const Limit<R>& l) { return Limit<R>(act_uhp(g0, l.z)); };
    auto a1 = [&](const Limit<R>& l) { return Limit<R>(act_uhp(g1, l.z)); };
    if (!r.finite()) fail(errc::precondition, "transforming a region with a cusp limit");
    return {a0(r.x0), a0(r.y0), a1(r.x1), a1(r.y1)};
}

template <class R> struct SplitResult {
    Region<R> good;
    std::vector<Region<R>> rest;
};

template <class R> SplitResult<R> split_once(const RealQuadField& F, const Region<R>& r0, const SplitConfig& cfg) {
    if (!r0.finite()) fail(errc::precondition, "split_once needs finite limits");
    if (!(static_cast<long double>(epsilon(r0)) < cfg.eps0)) fail(errc::precondition, "region already good");
    Mat2 g = reduce_to_good_domain<R>(F, r0.x0.z, r0.x1.z, cfg.group);
    Region<R> r = act_region(F, g, r0);
    // cut a hair inside so the good piece stays >= eps0 after rounding
    const R e0sq = R(cfg.eps0) * R(cfg.eps0) * R(1 + 1e-10L), e1sq = R(cfg.eps1) * R(cfg.eps1);
    const R ix0 = r.x0.im(), iy0 = r.y0.im(), ix1 = r.x1.im(), iy1 = r.y1.im();
    auto cut = [](const Limit<R>& a, const Limit<R>& b, R h) {
        return Limit<R>(geodesic_point_at_height<R>(a.z, b.z, h));
    };
    SplitResult<R> out;
    if (ix0 * iy1 < e1sq) { // case (a)
        Limit<R> t1 = cut(r.x1, r.y1, e1sq / ix0);
        if (iy0 * t1.im() >= e0sq) {
            out.good = {r.x0, r.y0, r.x1, t1};
            out.rest = {{r.x0, r.y0, t1, r.y1}};
        } else {
            Limit<R> t0 = cut(r.x0, r.y0, e0sq / t1.im());
            out.good = {r.x0, t0, r.x1, t1};
            out.rest = {{t0, r.y0, r.x1, t1}, {r.x0, r.y0, t1, r.y1}};
        }
    } else if (ix1 * iy0 < e1sq) { // case (b)
        Limit<R> t0 = cut(r.x0, r.y0, e1sq / ix1);
        if (t0.im() * iy1 >= e0sq) {
            out.good = {r.x0, t0, r.x1, r.y1};
            out.rest = {{t0, r.y0, r.x1, r.y1}};
        } else {
            Limit<R> t1 = cut(r.x1, r.y1, e0sq / t0.im());
            out.good = {r.x0, t0, r.x1, t1};
            out.rest = {{r.x0, t0, t1, r.y1}, {t0, r.y0, r.x1, r.y1}};
        }
    } else if (iy0 * iy1 < e0sq) { // case (c)
        Limit<R> t0 = cut(r.x0, r.y0, e0sq / iy1);
        out.good = {r.x0, t0, r.x1, r.y1};
        out.rest = {{t0, r.y0, r.x1, r.y1}};
    } else {
        out.good = r;
    }
    const long double slack = 1e-12L;
    if (static_cast<long double>(epsilon(out.good)) < cfg.eps0 * (1 - slack))
        fail(errc::invariant_violation, "split piece below eps0");
    auto axis_ok = [&](const Limit<R>& a, const Limit<R>& b, const Limit<R>& a0, const Limit<R>& b0) {
        if (a.z == a0.z && b.z == b0.z) return true;
        return static_cast<long double>(hyperbolic_distance<R>(a.z, b.z)) >= cfg.d_min * (1 - 1e-9L);
    };
    if (!axis_ok(out.good.x0, out.good.y0, r.x0, r.y0) || !axis_ok(out.good.x1, out.good.y1, r.x1, r.y1))
        fail(errc::invariant_violation, "split piece shorter than d_min");
    return out;
}

// Caps cusp limits at a finite height; the pieces reaching i*infinity are returned in `direct`.
template <class R> struct CappedRegion {
    std::vector<Region<R>> to_split;
    std::vector<Region<R>> direct;
};

template <class R> CappedRegion<R> cap_cusps(const Region<R>& r, const SplitConfig& cfg) {
    CappedRegion<R> out;
    std::vector<Region<R>> stage{r};
    auto min_finite = [](const Limit<R>& a, const Limit<R>& b) {
        if (a.inf) return b.im();
        if (b.inf) return a.im();
        return a.im() < b.im() ? a.im() : b.im();
    };
    auto height = [&](R other_min, const Limit<R>& fin) {
        R H = R(cfg.eps_F) / other_min;
        if (fin.im() > H) H = fin.im();
        return H * R(1.0000001L);
    };
    // inner axis
    std::vector<Region<R>> next;
    for (const auto& q : stage) {
        if ((q.x0.inf && q.y0.inf) || (q.x1.inf && q.y1.inf)) continue; // integrand vanishes
        if (q.y1.inf && !q.x1.inf) {
            Limit<R> Y(q.x1.re(), height(min_finite(q.x0, q.y0), q.x1));
            next.push_back({q.x0, q.y0, q.x1, Y});
            out.direct.push_back({q.x0, q.y0, Y, q.y1});
        } else if (q.x1.inf && !q.y1.inf) {
            Limit<R> Y(q.y1.re(), height(min_finite(q.x0, q.y0), q.y1));
            out.direct.push_back({q.x0, q.y0, q.x1, Y});
            next.push_back({q.x0, q.y0, Y, q.y1});
        } else {
            next.push_back(q);
        }
    }
    stage.swap(next);
    next.clear();
    // outer axis
    for (const auto& q : stage) {
        if (q.y0.inf && !q.x0.inf) {
            Limit<R> Y(q.x0.re(), height(min_finite(q.x1, q.y1), q.x0));
            next.push_back({q.x0, Y, q.x1, q.y1});
            out.direct.push_back({Y, q.y0, q.x1, q.y1});
        } else if (q.x0.inf && !q.y0.inf) {
            Limit<R> Y(q.y0.re(), height(min_finite(q.x1, q.y1), q.y0));
            out.direct.push_back({q.x0, Y, q.x1, q.y1});
            next.push_back({Y, q.y0, q.x1, q.y1});
        } else {
            next.push_back(q);
        }
    }
    out.to_split = std::move(next);
    return out;
}

template <class R>
std::vector<Region<R>> split_integral(const RealQuadField& F, const Region<R>& r, const SplitConfig& cfg) {
    if (!(cfg.eps0 < cfg.eps_F)) fail(errc::precondition, "eps0 must be below eps_F");
    CappedRegion<R> capped = cap_cusps(r, cfg);
    std::vector<Region<R>> V = capped.direct;
    std::deque<Region<R>> W(capped.to_split.begin(), capped.to_split.end());
    while (!W.empty()) {
        Region<R> w = W.front();
        W.pop_front();
        if (!w.finite() || static_cast<long double>(epsilon(w)) >= cfg.eps0) {
            V.push_back(w);
        } else {
            SplitResult<R> s = split_once(F, w, cfg);
            V.push_back(s.good);
            for (auto& x : s.rest) W.push_back(x);
        }
        if (V.size() + W.size() > cfg.max_regions)
            fail(errc::worklist_overflow, "more than " + std::to_string(cfg.max_regions) + " regions");
    }
    return V;
}

} // namespace atr
