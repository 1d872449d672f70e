#pragma once

// Continued fractions chosen for the integrals they produce rather than by norm-greedy division.
//
// The chain regions of int^{tau0} int_oo^c only see the convergents (p_k, q_k) through
// L_k = v0(q_k) tau0 - v0(p_k): step k has eps of order sqrt(Im tau0) / max(|L_{k-1}|, |L_k|).
// The inner limits are 0, tau3 and oo, so the size of a coefficient at v1 is free. The search
// runs the recurrence backwards from c, v_{k-2} = v_k - a_k v_{k-1}, taking a_k from boxes in
// (v0, v1) that keep L small at v0 while |N(q)| strictly decreases, which forces termination.

#include "atr/cfrac/expansion.hpp"
#include "atr/numfield/bezout.hpp"

#include <cmath>
#include <functional>
#include <tuple>

namespace atr {

struct GuidedOptions {
    int max_len = 8;
    int branch = 6;              // children kept per node, best eps first
    std::size_t node_budget = 200000;
    std::size_t max_results = 64;
    long double max_L = 300; // bound on |q tau0 - p| at v0 for every convergent
};

namespace detail {

struct Conv {
    FieldElement p, q;
};

// Nonzero elements of O_F with |N| <= nmax, one per class modulo +-units.
inline std::vector<FieldElement> small_norm_reps(const RealQuadField& F, std::int64_t nmax) {
    using boost::multiprecision::abs;
    const long double u0 = std::fabs(F.u0), w0 = F.embed<long double>(F.w, 0), w1 = F.embed<long double>(F.w, 1);
    // every class has a member with 1 <= |v0 / v1| < u0^2, so |v1| <= sqrt(nmax) and |v0| <= sqrt(nmax) u0
    const long double B1 = std::sqrt(static_cast<long double>(nmax)) + 1e-9L, B0 = B1 * u0;
    const auto nb = static_cast<std::int64_t>(std::ceil((B0 + B1) / std::fabs(w0 - w1)));
    std::vector<FieldElement> out;
    std::set<std::pair<rational, rational>> seen;
    for (std::int64_t n = -nb; n <= nb; ++n) {
        auto lo = static_cast<std::int64_t>(std::ceil(std::max(-B0 - n * w0, -B1 - n * w1)));
        auto hi = static_cast<std::int64_t>(std::floor(std::min(B0 - n * w0, B1 - n * w1)));
        for (std::int64_t m = lo; m <= hi; ++m) {
            const long double x0 = m + n * w0, x1 = m + n * w1, r = std::fabs(x0 / x1);
            if ((m == 0 && n == 0) || std::fabs(x0 * x1) > nmax + 0.5L || !(r >= 1 - 1e-12L && r < u0 * u0 * (1 - 1e-12L)))
                continue;
            FieldElement x = F.elt(rational(m), rational(n));
            if (abs(x.norm()) > nmax) continue;
            if (x0 < 0) x = -x;
            if (seen.insert({x.a(), x.b()}).second) out.push_back(x);
        }
    }
    return out;
}

template <class R> R step_eps(const RealQuadField& F, const Conv& prev, const Conv& cur, const complex_t<R>& tau0,
                              const complex_t<R>& tau3) {
    Mat2 g{cur.p, prev.p, cur.q, prev.q};
    if (g.det() == F.elt(-1)) g.b = -g.b, g.d = -g.d;
    std::vector<Region<R>> rs;
    phi_regions(act_uhp(embed<R>(F, g.adjugate(), 0), tau0), tau3, rs);
    R e = epsilon(rs[0]);
    for (const auto& r : rs) e = std::min(e, epsilon(r));
    return e;
}

template <class R> complex_t<R> conv_L(const RealQuadField& F, const Conv& v, const complex_t<R>& tau0) {
    return F.embed<R>(v.q, 0) * tau0 - complex_t<R>(F.embed<R>(v.p, 0));
}

// a with new = base - a dir and |N(q_new)| <= |N(q_dir)|. Then q_new = +-u^k delta with delta from
// the small-norm list, and a is integral exactly when q_new = base.q mod dir.q.
template <class R>
std::vector<std::pair<FieldElement, Conv>> guided_children(const RealQuadField& F, const Conv& base, const Conv& dir,
                                                           const complex_t<R>& tau0, const std::vector<FieldElement>& reps,
                                                           long double max_L) {
    using boost::multiprecision::abs;
    std::vector<std::pair<FieldElement, Conv>> out;
    if (is_unit(dir.q)) {
        FieldElement x = base.q / dir.q;
        out.push_back({x, Conv{base.p - x * dir.p, F.elt(0)}});
    }
    const FieldElement& u = F.u;
    const FieldElement ui = F.elt(1) / u;
    const long double u0 = std::fabs(F.embed<long double>(u, 0)), im = static_cast<long double>(tau0.imag());
    const long double qmax = max_L / im, qmin = 1e-12L;
    const rational nd = abs(dir.q.norm());
    const long double w0 = F.embed<long double>(F.w, 0), w1 = F.embed<long double>(F.w, 1);
    const long double b0 = F.embed<long double>(base.q, 0), b1 = F.embed<long double>(base.q, 1),
                      d0 = F.embed<long double>(dir.q, 0), d1 = F.embed<long double>(dir.q, 1);
    auto near_int = [](long double x) { return std::fabs(x - std::round(x)) < 1e-6L * (1 + std::fabs(x) * 1e-9L); };
    for (const auto& d : reps) {
        if (abs(d.norm()) > nd) continue;
        long double v = F.embed<long double>(d, 0);
        // walk u^k d over qmin <= |v0| <= qmax
        FieldElement x = d;
        while (v > qmin) x = x * ui, v /= u0;
        for (; v <= qmax; x = x * u, v *= u0) {
            if (v < qmin) continue;
            const long double x0 = F.embed<long double>(x, 0), x1 = F.embed<long double>(x, 1);
            for (const FieldElement& qn : {x, -x}) {
                const long double sg = qn == x ? 1 : -1, a0 = (b0 - sg * x0) / d0, a1 = (b1 - sg * x1) / d1;
                const long double n = (a0 - a1) / (w0 - w1);
                if (!near_int(n) || !near_int(a0 - n * w0)) continue;
                FieldElement a = (base.q - qn) / dir.q;
                if (!a.is_integral() || a.is_zero()) continue;
                Conv nv{base.p - a * dir.p, qn};
                if (std::abs(conv_L<R>(F, nv, tau0)) > max_L) continue;
                out.push_back({a, nv});
            }
        }
    }
    return out;
}

} // namespace detail

template <class R>
std::vector<CFExpansion> guided_expansions(const RealQuadField& F, const FieldElement& c, const complex_t<R>& tau0,
                                           const complex_t<R>& tau3, const GuidedOptions& opt = {}) {
    using detail::Conv;
    using boost::multiprecision::abs;
    auto [a, b] = integral_fraction(c);
    BezoutResult h = bezout(a, b);
    a = a / h.g, b = b / h.g;
    BezoutResult st = bezout(a, b); // st.s a + st.t b = 1
    if (!is_unit(st.g)) fail(errc::invariant_violation, "cusp numerator and denominator are not coprime");
    const FieldElement one = F.elt(1), s = st.s / st.g, t = st.t / st.g;
    const auto reps = detail::small_norm_reps(F, static_cast<std::int64_t>(abs(b.norm()).convert_to<long double>() + 0.5));
    auto children = [&](const Conv& base, const Conv& dir) {
        return detail::guided_children<R>(F, base, dir, tau0, reps, opt.max_L);
    };

    std::vector<CFExpansion> found;
    std::set<std::vector<std::pair<rational, rational>>> seen;
    long double best = 0;
    std::size_t nodes = 0;
    std::vector<FieldElement> rev; // a_n, a_{n-1}, ...
    std::function<void(const Conv&, const Conv&, long double)> dfs = [&](const Conv& prev, const Conv& cur, long double worst) {
        if (++nodes > opt.node_budget || found.size() >= opt.max_results) return;
        if (prev.q.is_zero()) {
            // (prev, cur) = sigma ((1, 0), (a0, 1))
            if (!(prev.p == one || prev.p == -one) || !(cur.q == prev.p)) return;
            std::vector<FieldElement> coeffs{cur.p / cur.q};
            coeffs.insert(coeffs.end(), rev.rbegin(), rev.rend());
            if (!(evaluate_cf(coeffs) == c)) return;
            std::vector<std::pair<rational, rational>> key;
            for (const auto& x : coeffs) key.emplace_back(x.a(), x.b());
            if (!seen.insert(key).second) return;
            found.push_back(make_expansion(std::move(coeffs)));
            best = std::max(best, worst);
            return;
        }
        if (static_cast<int>(rev.size()) + 1 >= opt.max_len) return;
        std::vector<std::tuple<long double, FieldElement, Conv>> next;
        for (auto& [x, nv] : children(cur, prev)) {
            long double e = static_cast<long double>(detail::step_eps<R>(F, nv, prev, tau0, tau3));
            if (std::min(e, worst) <= best) continue;
            next.emplace_back(std::min(e, worst), x, nv);
        }
        std::stable_sort(next.begin(), next.end(), [](const auto& x, const auto& y) { return std::get<0>(x) > std::get<0>(y); });
        if (next.size() > static_cast<std::size_t>(opt.branch)) next.resize(opt.branch);
        for (auto& [e, x, nv] : next) {
            if (e <= best) continue;
            rev.push_back(x);
            dfs(nv, prev, e);
            rev.pop_back();
        }
    };

    // v_n is (a, b) up to a unit; rescaling it moves L_n along the real axis at v0
    FieldElement e = F.elt(1);
    while (std::abs(detail::conv_L<R>(F, Conv{a * e, b * e}, tau0)) > 1e-12L) e = e / F.u;
    for (; std::abs(detail::conv_L<R>(F, Conv{a * e, b * e}, tau0)) <= opt.max_L; e = e * F.u) {
        const Conv vn{a * e, b * e};
        for (int sg : {1, -1}) {
            // every v_{n-1} with det(v_n, v_{n-1}) = +-1: sg (-t, s) / e + lambda v_n
            Conv base{F.elt(-sg) * t / e, F.elt(sg) * s / e};
            for (auto& [x, vm] : children(base, Conv{-vn.p, -vn.q})) {
                long double ev = static_cast<long double>(detail::step_eps<R>(F, vm, vn, tau0, tau3));
                if (ev <= best) continue;
                dfs(vm, vn, ev);
            }
        }
    }
    std::stable_sort(found.begin(), found.end(), [](const auto& x, const auto& y) { return x.coeffs.size() < y.coeffs.size(); });
    return found;
}

} // namespace atr
