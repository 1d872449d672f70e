#pragma once

#include "atr/core/parallel.hpp"
#include "atr/ecdata/coeff_table.hpp"
#include "atr/hmfint/region.hpp"

#include <cmath>
#include <limits>

namespace atr {

template <class R> struct IntegralValue {
    complex_t<R> value{};
    R est_error = 0;
    std::int64_t terms_used = 0;
    std::int64_t N_used = 0;
};

struct IntegrationOptions {
    double tol = 1e-12;
    bool strict = true; // InsufficientTable when the table is shorter than tail_norm_bound asks
};

// ---- truncation --------------------------------------------------------------

// Residue of zeta_F at 1, i.e. the density of ideals by norm.
inline long double ideal_density(const RealQuadField& F) {
    long double dF = one_mod_four(F.D) ? F.D : 4.0L * F.D;
    return 2 * F.log_u0 / std::sqrt(dF);
}

// Majorant of one <u^2>-orbit of norm m: 2 sqrt(D) B(m) M_m / m with B(m) = sigma(m) sqrt(m),
// sigma the mean ideal-divisor count 1 + rho log m.
inline long double orbit_majorant(const RealQuadField& F, long double eps, long double m) {
    long double rho = ideal_density(F);
    long double sigma = 1 + rho * std::log(std::max<long double>(m, 1));
    long double M = std::exp(-4 * pi<long double>() * std::sqrt(m) * eps / F.sqrtD);
    return 2 * F.sqrtD * sigma * M / std::sqrt(m);
}

// Smallest N after which every omitted orbit majorant stays below tol.
inline std::int64_t tail_norm_bound(const RealQuadField& F, long double eps, long double tol) {
    require(eps > 0 && tol > 0, "tail_norm_bound needs eps > 0 and tol > 0");
    auto g = [&](long double m) { return orbit_majorant(F, eps, m); };
    // g rises at most briefly near m = 1 and then decays; locate the last grid point above tol
    std::int64_t lo = 0, hi = 1;
    while (true) {
        bool above = g(static_cast<long double>(hi)) >= tol;
        bool decaying = g(static_cast<long double>(hi) + 1) <= g(static_cast<long double>(hi));
        if (above) lo = hi;
        if (!above && decaying && hi >= 4) break;
        if (hi > (std::int64_t(1) << 60)) fail(errc::precondition, "tail bound diverges");
        hi *= 2;
    }
    if (lo == 0) {
        // never above tol on the grid; check the small range directly
        for (std::int64_t m = 1; m < hi; ++m)
            if (g(static_cast<long double>(m)) >= tol) lo = m;
        return lo + 1 > 1 ? lo + 1 : 1;
    }
    // g(lo) >= tol > g(hi), g decreasing on [lo, hi]
    while (hi - lo > 1) {
        std::int64_t mid = lo + (hi - lo) / 2;
        if (g(static_cast<long double>(mid)) >= tol)
            lo = mid;
        else
            hi = mid;
    }
    return hi;
}

// Conservative summed tail beyond N under the smooth density rho^2 (log m + 2):
// sum_{|n|>N} 2 sqrt(D) sigma(n) M_n / sqrt(|n|).
inline long double tail_sum_majorant(const RealQuadField& F, long double eps, long double N) {
    long double rho = ideal_density(F);
    long double c = 4 * pi<long double>() * eps / F.sqrtD;
    long double S = std::sqrt(std::max<long double>(N, 1));
    // 4 sqrt(D) rho^2 int_S^inf (2 log s + 2) e^{-cs} ds
    long double e = std::exp(-c * S);
    long double e1 = e / (c * S); // E1(cS) <= e^{-cS}/(cS)
    return 4 * F.sqrtD * rho * rho / c * ((2 * std::log(S) + 2) * e + 2 * e1);
}

// ---- integration table ---------------------------------------------------------

template <class R> struct IntegrationTable {
    const RealQuadField* F = nullptr;
    std::int64_t N_max = 0;
    R sqrtD{}, log_u0{};
    std::vector<std::int64_t> norm;
    std::vector<R> coef;       // a_n / |n|
    std::vector<R> e0, e1;     // g0/delta0 and g1/delta1 of the balanced generator
    std::vector<R> suffix_max; // max |coef| over the suffix
    std::size_t n_ideals = 0;
};

template <class R>
IntegrationTable<R> make_integration_table(const RealQuadField& F, const CoeffTable& t, const IdealList& L) {
    IntegrationTable<R> T;
    T.F = &F;
    T.N_max = t.N_max;
    using std::log;
    using std::sqrt;
    T.sqrtD = sqrt(R(F.D));
    T.log_u0 = log(F.embed<R>(F.u, 0));
    R d0 = F.embed<R>(F.delta, 0), d1 = F.embed<R>(F.delta, 1);
    std::size_t n = std::min(t.coeffs.size(), L.ideals.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (L.ideals[i].norm > t.N_max) break;
        ++T.n_ideals;
        if (t.coeffs[i] == 0) continue;
        const auto& I = L.ideals[i];
        T.norm.push_back(I.norm);
        T.coef.push_back(R(t.coeffs[i]) / R(I.norm));
        T.e0.push_back(F.embed<R>(I.gen, 0) / d0);
        T.e1.push_back(F.embed<R>(I.gen, 1) / d1);
    }
    T.suffix_max.resize(T.coef.size());
    R m = 0;
    for (std::size_t i = T.coef.size(); i-- > 0;) {
        using std::abs;
        if (abs(T.coef[i]) > m) m = abs(T.coef[i]);
        T.suffix_max[i] = m;
    }
    return T;
}

namespace detail {

template <class R> struct ExpPair {
    bool has_x = false, has_y = false;
    R xr{}, xi{}, yr{}, yi{};
};

// e(a*y) - e(a*x), e(t) = exp(2 pi i t), a already includes 2 pi
template <class R> inline void exp_diff(const ExpPair<R>& p, R a, R& re, R& im) {
    using std::cos;
    using std::exp;
    using std::sin;
    re = 0;
    im = 0;
    if (p.has_y) {
        R m = exp(-a * p.yi), ph = a * p.yr;
        re += m * cos(ph);
        im += m * sin(ph);
    }
    if (p.has_x) {
        R m = exp(-a * p.xi), ph = a * p.xr;
        re -= m * cos(ph);
        im -= m * sin(ph);
    }
}

template <> inline void exp_diff<long double>(const ExpPair<long double>& p, long double a, long double& re,
                                              long double& im) {
    re = 0;
    im = 0;
    long double s, c;
    if (p.has_y) {
        long double m = expl(-a * p.yi);
        sincosl(a * p.yr, &s, &c);
        re += m * c;
        im += m * s;
    }
    if (p.has_x) {
        long double m = expl(-a * p.xi);
        sincosl(a * p.xr, &s, &c);
        re -= m * c;
        im -= m * s;
    }
}

template <class R> ExpPair<R> make_pair(const Limit<R>& x, const Limit<R>& y) {
    ExpPair<R> p;
    if (!x.inf) {
        p.has_x = true;
        p.xr = x.re();
        p.xi = x.im();
    }
    if (!y.inf) {
        p.has_y = true;
        p.yr = y.re();
        p.yi = y.im();
    }
    return p;
}

} // namespace detail

template <class R>
IntegralValue<R> integrate_wf(const IntegrationTable<R>& T, const Region<R>& r, const IntegrationOptions& opt = {}) {
    if (!r.valid()) fail(errc::precondition, "region limit outside the upper half plane");
    IntegralValue<R> out;
    out.value = complex_t<R>(0, 0);
    if ((r.x0.inf && r.y0.inf) || (r.x1.inf && r.y1.inf)) return out;
    const RealQuadField& F = *T.F;
    R tol = R(opt.tol);
    if (tol < R(1000) * std::numeric_limits<R>::epsilon())
        fail(errc::precision_loss, "tolerance below working precision");
    R eps = epsilon(r);
    long double eps_ld = static_cast<long double>(eps);
    if (std::isfinite(eps_ld) && opt.strict) {
        std::int64_t need = tail_norm_bound(F, eps_ld, static_cast<long double>(opt.tol) / 2);
        if (need > T.N_max)
            fail(errc::insufficient_table, "region needs N = " + std::to_string(need) + ", table has " +
                                               std::to_string(T.N_max));
    }
    using std::abs;
    using std::ceil;
    using std::floor;
    using std::log;
    using std::sqrt;
    auto min_im = [](const Limit<R>& a, const Limit<R>& b) {
        if (a.inf) return b.im();
        if (b.inf) return a.im();
        return a.im() < b.im() ? a.im() : b.im();
    };
    const R rmin = min_im(r.x0, r.y0), smin = min_im(r.x1, r.y1);
    const R twopi = two_pi<R>();
    const R thr = tol / R(2 * std::max<std::size_t>(T.n_ideals, 1));
    const R step = 2 * T.log_u0;
    auto P0 = detail::make_pair(r.x0, r.y0), P1 = detail::make_pair(r.x1, r.y1);
    compensated_sum<R> sre, sim;
    const R pref = 4 * T.sqrtD / thr;
    for (std::size_t i = 0; i < T.coef.size(); ++i) {
        const R C = T.coef[i];
        const R A = twopi * T.e0[i] * rmin, B = twopi * T.e1[i] * smin;
        const R floor_exp = 2 * sqrt(A * B);
        const R L = log(pref * abs(C));
        if (floor_exp > L) {
            if (floor_exp > log(pref * T.suffix_max[i])) break;
            continue;
        }
        const R disc = sqrt(L * L - 4 * A * B);
        const R qlo = (L - disc) / (2 * A), qhi = (L + disc) / (2 * A);
        const long long klo = static_cast<long long>(ceil(log(qlo) / step));
        const long long khi = static_cast<long long>(floor(log(qhi) / step));
        for (long long k = klo; k <= khi; ++k) {
            using std::exp;
            const R q = exp(R(k) * step);
            R f0r, f0i, f1r, f1i;
            detail::exp_diff(P0, twopi * T.e0[i] * q, f0r, f0i);
            detail::exp_diff(P1, twopi * T.e1[i] / q, f1r, f1i);
            sre.add(C * (f0r * f1r - f0i * f1i));
            sim.add(C * (f0r * f1i + f0i * f1r));
            ++out.terms_used;
        }
        out.N_used = T.norm[i];
    }
    out.value = complex_t<R>(sre.value() * T.sqrtD, sim.value() * T.sqrtD);
    R tail = std::isfinite(eps_ld) ? R(orbit_majorant(F, eps_ld, static_cast<long double>(T.N_max))) : R(0);
    out.est_error = tail + tol / 2;
    return out;
}

// The region seen by the second summand of omega_f^+: tau0 -> u0 tau0, tau1 -> u1 conj(tau1).
template <class R> Region<R> unit_twist(const RealQuadField& F, const Region<R>& r) {
    R u0 = F.embed<R>(F.u, 0), u1 = F.embed<R>(F.u, 1);
    auto outer = [&](const Limit<R>& l) { return l.inf ? l : Limit<R>(u0 * l.z); };
    auto inner = [&](const Limit<R>& l) { return l.inf ? l : Limit<R>(u1 * conj(l.z)); };
    return {outer(r.x0), outer(r.y0), inner(r.x1), inner(r.y1)};
}

template <class R>
IntegralValue<R> integrate_wf_plus(const IntegrationTable<R>& T, const Region<R>& r, const IntegrationOptions& opt = {}) {
    IntegralValue<R> a = integrate_wf(T, r, opt);
    IntegralValue<R> b = integrate_wf(T, unit_twist(*T.F, r), opt);
    // orientation of d(u0 tau0) d(u1 conj tau1) is +1; fixed by the invariance tests
    a.value += b.value;
    a.est_error += b.est_error;
    a.terms_used += b.terms_used;
    a.N_used = std::max(a.N_used, b.N_used);
    return a;
}

// Many regions; per-region values land in fixed slots and are summed in order.
template <class R>
std::vector<IntegralValue<R>> integrate_all_plus(const IntegrationTable<R>& T, const std::vector<Region<R>>& rs,
                                                 const IntegrationOptions& opt, int threads) {
    std::vector<IntegralValue<R>> out(rs.size());
    parallel_for(rs.size(), threads, [&](std::size_t i) { out[i] = integrate_wf_plus(T, rs[i], opt); });
    return out;
}

} // namespace atr
