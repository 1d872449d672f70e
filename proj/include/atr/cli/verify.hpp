#pragma once

#include "atr/cli/pipeline.hpp"

#include <cmath>
#include <functional>
#include <random>
#include <set>

#ifndef ATR_CONFIG_DIR
#define ATR_CONFIG_DIR "configs"
#endif

namespace atr::cli {

struct VerifyOptions {
    std::string only;                  // "1,4,7"; empty runs everything
    bool properties_only = false;      // criteria 5-11 only
    std::string cache_dir = "atr-cache";
    std::string config_dir = ATR_CONFIG_DIR;
    int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
};

struct CheckResult {
    bool pass = true;
    std::string detail;

    void expect(bool ok, const std::string& what) {
        if (!detail.empty()) detail += "; ";
        detail += (ok ? "" : "FAILED ") + what;
        pass = pass && ok;
    }
};

// ---- published values --------------------------------------------------------------

namespace golden {
inline const char* e29_J[2] = {"13.2923360157968468468", "-10.78402031269077180934"};
inline const char* e37_J[2] = {"-1.3589031642485772101", "8.36575277665729384437"};
inline const char* e109_J[2] = {"-3.24024368505944150e-12", "-42.392087963225793791"};
inline const char* e509_tau0 = "0.024492046328012136937583";
inline const char* e509_L0[2] = {"5.38425378853615683456", "7.44383552310672504690"};
inline const char* e509_L1[2] = {"2.47855898378449003059", "1.14589256545011559322"};
inline const char* e509_z[2] = {"-2.6921268942680784172834", "-5.1426086531573572370822"};
inline constexpr int e37_regions = 328;
} // namespace golden

inline std::string sci(long double x, int d = 3) {
    std::ostringstream os;
    os << std::setprecision(d) << std::scientific << x;
    return os.str();
}

inline std::complex<long double> parse_complex(const json& j) {
    return {std::stold(j["re"].get<std::string>()), std::stold(j["im"].get<std::string>())};
}

inline long double rel_err(std::complex<long double> got, const char* const want[2]) {
    std::complex<long double> w(std::stold(want[0]), std::stold(want[1]));
    return std::abs(got - w) / std::abs(w);
}

struct VerifyContext {
    VerifyOptions opt;
    Problem load(const std::string& name, std::int64_t N) const {
        RunConfig c = load_config(opt.config_dir + "/" + name + ".cfg");
        c.threads = opt.threads;
        c.norm_bound = N;
        c.cache_path = opt.cache_dir + "/" + name + ".coef";
        return resolve(c);
    }
};

// One golden reproduction: J to 10 digits and the relation with |n| fixed.
inline void golden_run(CheckResult& r, const Problem& p, const char* const want[2], int m, int n_abs) {
    json rep = cmd_atr(p, false);
    // Published values are stated for the opposite orientation of the complex place above v0,
    // so they are compared with the complex conjugate of J.
    auto J = std::conj(parse_complex(rep["result"]["J"]));
    long double e = rel_err(J, want);
    r.expect(e < 1e-10L, "conj(J) = " + fmt_ld(J.real(), 15) + (J.imag() < 0 ? " - " : " + ") + fmt_ld(std::fabs(J.imag()), 15) +
                             "i, relative error " + sci(e) + " (< 1e-10)");
    const auto& rel = rep["result"]["relation"];
    bool ok = rel["found"].get<bool>() && rel["m"].get<int>() == m && std::abs(rel["n"].get<int>()) == n_abs;
    long double res = std::stold(rel["residual"].get<std::string>());
    r.expect(ok && res < 1e-8L, "relation (m, n) = (" + std::to_string(rel["m"].get<int>()) + ", " +
                                    std::to_string(rel["n"].get<int>()) + ") up to torsion " +
                                    std::to_string(rel["torsion_multiplier"].get<int>()) + ", residual " + sci(res));
}

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---- golden reproductions -----------------------------------------------------------

inline CheckResult criterion_e29(const VerifyContext& ctx) {
    CheckResult r;
    auto t0 = std::chrono::steady_clock::now();
    Problem p = ctx.load("e29", 40000);
    auto plan = plan_run(p);
    long double epsF = geometry(p.F).eps_F_gl;
    r.expect(plan.eps_min >= 0.75L * epsF, "post-split eps_min " + fmt_ld(plan.eps_min, 5) + " >= 0.75 eps_F = " +
                                               fmt_ld(0.75L * epsF, 5) + " (" +
                                               std::to_string(plan.plans[0].regions.size()) + " regions)");
    golden_run(r, p, golden::e29_J, 3, 1);
    double s = seconds_since(t0);
    r.expect(s < 600, "wall " + fmt_ld(s, 3) + " s");
    return r;
}

inline CheckResult criterion_e37(const VerifyContext& ctx) {
    CheckResult r;
    auto t0 = std::chrono::steady_clock::now();
    Problem p = ctx.load("e37", 140000);
    auto plan = plan_run(p);
    std::size_t n = plan.plans[0].regions.size();
    r.expect(p.options[0].rule == ChainRule::baseline && 3 * n >= golden::e37_regions && n <= 3 * golden::e37_regions,
             "baseline chain splits into " + std::to_string(n) + " regions (328 within x3)");
    golden_run(r, p, golden::e37_J, 5, 8);
    double s = seconds_since(t0);
    r.expect(s < 1800, "wall " + fmt_ld(s, 3) + " s");
    return r;
}

inline CheckResult criterion_e109(const VerifyContext& ctx) {
    CheckResult r;
    auto t0 = std::chrono::steady_clock::now();
    Problem p = ctx.load("e109", 430000);
    // the continued-fraction stage on its own, with the default selection rule
    DarmonOptions o = p.options[0];
    o.rule = ChainRule::optimized;
    o.split = false;
    auto cf = plan_j_phi<long double>(p.F, p.embeddings[0], o);
    long double epsF = geometry(p.F).eps_F_gl;
    r.expect(cf.eps_min > epsF && cf.regions.size() <= 8,
             "cfrac stage: " + std::to_string(cf.regions.size()) + " regions, eps_min " + fmt_ld(cf.eps_min, 5) +
                 " > eps_F " + fmt_ld(epsF, 5));
    golden_run(r, p, golden::e109_J, 1, 2);
    double s = seconds_since(t0);
    r.expect(s < 900, "wall " + fmt_ld(s, 3) + " s");
    return r;
}

inline bool digits_match(const hp_real& got, const char* want, int digits) {
    hp_real w(want);
    return boost::multiprecision::abs(got - w) <= boost::multiprecision::abs(w) * boost::multiprecision::pow(hp_real(10), -digits);
}

inline CheckResult criterion_e509(const VerifyContext& ctx) {
    CheckResult r;
    RunConfig c = load_config(ctx.opt.config_dir + "/e509.cfg");
    Problem p = resolve(c);
    const auto& e1 = p.embeddings.at(0);
    const auto& e2 = p.embeddings.at(1);
    bool t1 = e1.tau0.real() == hp_real("0.5") && digits_match(e1.tau0.imag(), golden::e509_tau0, 20);
    hp_complex half = e1.tau0 / hp_real(2);
    bool t2 = boost::multiprecision::abs(e2.tau0 - half) < boost::multiprecision::pow(hp_real(10), -22);
    r.expect(t1 && t2, "tau0 = 0.5 + " + e1.tau0.imag().str(24) + "i and tau0(2) = tau0(1)/2");
    auto c0 = embed_curve(p.F, p.E, 0), c1 = embed_curve(p.F, p.E, 1);
    auto L0 = period_lattice(c0), L1 = period_lattice(c1);
    bool l0 = digits_match(abs(L0.w1), golden::e509_L0[0], 12) &&
              digits_match(boost::multiprecision::abs(L0.w2.imag()), golden::e509_L0[1], 12);
    bool l1 = digits_match(abs(L1.w1), golden::e509_L1[0], 12) &&
              digits_match(boost::multiprecision::abs(L1.w2.imag()), golden::e509_L1[1], 12);
    r.expect(l0 && l1, "lattices <" + L0.w1.real().str(13) + ", " + L0.w2.imag().str(13) + "i>, <" +
                           L1.w1.real().str(13) + ", " + L1.w2.imag().str(13) + "i>");
    hp_complex z = elliptic_log(c0, L0, p.point->x, p.point->y);
    // same orientation as the J comparisons: our v0 embedding of K is the conjugate one
    hp_complex zp(hp_real(golden::e509_z[0]), -hp_real(golden::e509_z[1]));
    hp_real dz = lattice_distance(L0, z - zp);
    r.expect(dz < hp_real("1e-12") * abs(zp), "z agrees with conj of the published value modulo the lattice to " + dz.str(3));
    long double epsF = geometry(p.F).eps_F_gl;
    std::vector<std::size_t> counts;
    std::string cf;
    bool good = true;
    for (std::size_t i = 0; i < p.embeddings.size(); ++i) {
        DarmonOptions o = p.options[i];
        o.split = false;
        auto pl = plan_j_phi<long double>(p.F, p.embeddings[i], o);
        counts.push_back(pl.regions.size());
        good = good && pl.eps_min >= epsF;
        cf += (i ? ", " : "") + std::to_string(pl.regions.size()) + " regions eps_min " + fmt_ld(pl.eps_min, 4);
    }
    r.expect(good && counts == std::vector<std::size_t>{4, 8}, "cfrac stage: " + cf + " (want 4 and 8, eps_min >= " +
                                                                   fmt_ld(epsF, 4) + ")");
    return r;
}

// ---- constants ----------------------------------------------------------------------

inline CheckResult criterion_constants(const VerifyContext&) {
    CheckResult r;
    const std::int64_t Ds[4] = {29, 37, 109, 509};
    const double CF[4] = {5, 6, 10.4, 22.5}, EF[4] = {0.0736, 0.044, 0.006, 0.0015};
    for (int i = 0; i < 4; ++i) {
        auto g = geometry(make_field(Ds[i], 64, -1));
        bool ok = std::fabs(g.C_F / CF[i] - 1) <= 0.10 && std::fabs(g.eps_F_gl / EF[i] - 1) <= 0.15;
        r.expect(ok, "D=" + std::to_string(Ds[i]) + ": C_F " + fmt_ld(g.C_F, 4) + ", eps_F " + fmt_ld(g.eps_F_gl, 3));
    }
    return r;
}

inline CheckResult criterion_tail_bounds(const VerifyContext&) {
    CheckResult r;
    struct Case {
        std::int64_t D;
        long double eps, N;
    };
    const Case cs[3] = {{29, 0.0596L, 4e4L}, {109, 0.0048L, 2e7L}, {37, 0.0012L, 1.12e8L}};
    for (const auto& c : cs) {
        auto N = tail_norm_bound(make_field(c.D, 64, -1), c.eps, 1e-12L);
        long double q = N / c.N;
        r.expect(q >= 0.5L && q <= 2, "eps " + fmt_ld(c.eps, 3) + ": N " + std::to_string(N) + " vs " + fmt_ld(c.N, 3));
    }
    return r;
}

// ---- property suites ------------------------------------------------------------------

inline Mat2 random_gl_tilde(const RealQuadField& F, std::mt19937_64& rng, int steps) {
    std::uniform_int_distribution<int> pick(0, 3), small(-1, 1);
    Mat2 g{F.elt(1), F.elt(0), F.elt(0), F.elt(1)};
    for (int k = 0; k < steps; ++k) {
        Mat2 s;
        switch (pick(rng)) {
        case 0: s = {F.elt(1), F.elt(small(rng), small(rng)), F.elt(0), F.elt(1)}; break;
        case 1: s = {F.elt(0), F.elt(-1), F.elt(1), F.elt(0)}; break;
        case 2: s = {F.u, F.elt(0), F.elt(0), F.elt(1)}; break;
        default: s = {F.elt(1), F.elt(0), F.elt(small(rng), small(rng)), F.elt(1)}; break;
        }
        g = g * s;
    }
    return g;
}

template <class Rng> std::complex<long double> random_uhp(Rng& rng, long double im_lo, long double im_hi) {
    std::uniform_real_distribution<long double> re(-1.5L, 1.5L), lim(std::log(im_lo), std::log(im_hi));
    return {re(rng), std::exp(lim(rng))};
}

inline CheckResult criterion_invariance(const VerifyContext& ctx) {
    CheckResult r;
    auto t0 = std::chrono::steady_clock::now();
    auto F = make_field(29, 64, -1);
    auto E = make_curve(F, {F.elt(1), F.elt(0), F.elt(11, 5), F.elt(0), F.elt(0)});
    const long double eps_lo = 0.3L;
    auto N = tail_norm_bound(F, eps_lo, 1e-13L);
    auto tb = obtain_table(F, E, N, ctx.opt.threads, ctx.opt.cache_dir + "/e29.coef");
    auto T = make_integration_table<long double>(F, tb.table, tb.ideals);
    std::mt19937_64 rng(20240607);
    IntegrationOptions io;
    io.tol = 1e-13;
    long double worst = 0;
    int done = 0, tries = 0;
    while (done < 20 && tries < 200000) {
        ++tries;
        Mat2 g = random_gl_tilde(F, rng, 1 + done % 4);
        if (g.c.is_zero() && g.b.is_zero() && g.a == g.d) continue;
        Region<long double> rg{random_uhp(rng, 0.4L, 2.5L), random_uhp(rng, 0.4L, 2.5L), random_uhp(rng, 0.4L, 2.5L),
                               random_uhp(rng, 0.4L, 2.5L)};
        auto img = act_region(F, g, rg);
        if (epsilon(rg) < eps_lo || epsilon(img) < eps_lo) continue;
        auto a = integrate_wf_plus(T, rg, io), b = integrate_wf_plus(T, img, io);
        worst = std::max(worst, std::abs(a.value - b.value));
        ++done;
    }
    double s = seconds_since(t0);
    r.expect(done == 20, std::to_string(done) + " random elements of GL~(O_F) at N = " + std::to_string(N));
    r.expect(worst < 1e-10L, "largest disagreement " + sci(worst) + " (< 1e-10)");
    r.expect(s < 300, "wall " + fmt_ld(s, 3) + " s");
    return r;
}

inline CheckResult criterion_splitter(const VerifyContext& ctx) {
    CheckResult r;
    auto F = make_field(29, 64, -1);
    auto E = make_curve(F, {F.elt(1), F.elt(0), F.elt(11, 5), F.elt(0), F.elt(0)});
    auto cfg = make_split_config(geometry(F));
    const long double eps_lo = 0.2L * cfg.eps_F;
    auto N = tail_norm_bound(F, eps_lo, 1e-11L);
    auto tb = obtain_table(F, E, N, ctx.opt.threads, ctx.opt.cache_dir + "/e29.coef");
    auto T = make_integration_table<long double>(F, tb.table, tb.ideals);
    std::mt19937_64 rng(77);
    IntegrationOptions io;
    io.tol = 1e-11;
    io.strict = true;
    long double worst = 0, eps_out = 1e9L;
    std::size_t parts = 0;
    int done = 0;
    while (done < 20) {
        // a thin region: eps between 0.2 and 0.8 eps_F
        std::uniform_real_distribution<long double> ue(0.2L, 0.8L), re(-1, 1), hi(0.5L, 3);
        long double e = ue(rng) * cfg.eps_F;
        long double t = hi(rng), s = e * e / t;
        Region<long double> rg{{re(rng), t}, {re(rng), hi(rng)}, {re(rng), s}, {re(rng), hi(rng) * 0.5L}};
        if (epsilon(rg) < eps_lo || epsilon(rg) >= cfg.eps0) continue;
        auto pieces = split_integral(F, rg, cfg);
        compensated_csum<long double> sum;
        for (const auto& q : pieces) {
            sum.add(integrate_wf_plus(T, q, io).value);
            eps_out = std::min(eps_out, epsilon(q));
        }
        worst = std::max(worst, std::abs(sum.value() - integrate_wf_plus(T, rg, io).value));
        parts += pieces.size();
        ++done;
    }
    r.expect(worst < 1e-9L, "20 regions, " + std::to_string(parts) + " pieces, largest |sum - whole| " + sci(worst));
    r.expect(eps_out >= cfg.eps0, "smallest emitted eps " + fmt_ld(eps_out, 5) + " >= eps0 " + fmt_ld(cfg.eps0, 5));
    return r;
}

inline CheckResult criterion_arithmetic(const VerifyContext&) {
    CheckResult r;
    std::mt19937_64 rng(4242);
    // freitag_pair over several fields
    int fp_ok = 0;
    const std::int64_t Ds[3] = {29, 37, 109};
    for (int i = 0; i < 1000; ++i) {
        auto F = make_field(Ds[i % 3], 64, -1);
        auto g = geometry(F);
        std::uniform_real_distribution<long double> ux(-50, 50), ud(0.05L, 0.9L);
        long double x0 = ux(rng), x1 = ux(rng), delta = ud(rng);
        auto [c, d] = freitag_pair(F, x0, x1, delta);
        long double c0 = F.embed<long double>(c, 0), c1 = F.embed<long double>(c, 1);
        bool ok = !(c.a == 0 && c.b == 0) && std::fabs(c0 * x0 + F.embed<long double>(d, 0)) <= delta &&
                  std::fabs(c1 * x1 + F.embed<long double>(d, 1)) <= delta && std::fabs(c0) <= g.C_F / delta &&
                  std::fabs(c1) <= g.C_F / delta;
        fp_ok += ok;
    }
    r.expect(fp_ok == 1000, "freitag_pair " + std::to_string(fp_ok) + "/1000");
    int bz_ok = 0;
    std::uniform_int_distribution<int> coef(-60, 60);
    for (int i = 0; i < 500; ++i) {
        auto F = make_field(Ds[i % 3], 64, -1);
        FieldElement a = F.elt(coef(rng), coef(rng)), b = F.elt(coef(rng), coef(rng));
        if (a.is_zero() && b.is_zero()) b = F.elt(1);
        auto z = bezout(a, b);
        bool ok = z.s * a + z.t * b == z.g && z.s.is_integral() && z.t.is_integral();
        // the class number is one, so g generates (a, b): it divides both
        ok = ok && (a / z.g).is_integral() && (b / z.g).is_integral();
        bz_ok += ok;
    }
    r.expect(bz_ok == 500, "bezout " + std::to_string(bz_ok) + "/500");
    std::size_t conv = 0, conv_ok = 0, greedy_only = 0;
    for (int i = 0; i < 30; ++i) {
        auto F = make_field(Ds[i % 3], 64, -1);
        FieldElement num = F.elt(coef(rng), coef(rng)), den = F.elt(coef(rng), coef(rng));
        if (den.is_zero()) continue;
        auto g = bezout(num, den).g;
        FieldElement c = (num / g) / (den / g);
        std::vector<CFExpansion> es;
        try {
            es = enumerate_expansions(c, {4, 200, 2, 200000});
        } catch (const error& x) {
            if (x.code() != errc::none_found) throw;
            es = {greedy_expansion(c)}; // nothing of length <= 4
            ++greedy_only;
        }
        for (const auto& e : es) {
            for (std::size_t k = 1; k < e.convergents.size(); ++k) {
                auto [p, q] = e.convergents[k];
                auto [pp, qp] = e.convergents[k - 1];
                FieldElement det = p * qp - pp * q;
                ++conv;
                conv_ok += (det == F.elt(k % 2 ? 1 : -1));
            }
            ++conv;
            conv_ok += evaluate_cf(e.coeffs) == c;
        }
    }
    r.expect(conv == conv_ok, "convergent identity " + std::to_string(conv_ok) + "/" + std::to_string(conv) + " (" +
                                     std::to_string(greedy_only) + " cusps via the greedy expansion)");
    return r;
}

// Dirichlet coefficients by norm, from the Euler product over prime ideals of norm <= B.
inline std::vector<std::int64_t> euler_product_by_norm(const std::vector<std::pair<std::int64_t, std::int64_t>>& primes,
                                                       std::int64_t B) {
    std::vector<std::int64_t> series(B + 1, 0);
    series[1] = 1;
    for (auto [q, a] : primes) {
        // local factor 1/(1 - a X + q X^2) with X = q^{-s}: coefficients c_k at norm q^k
        std::vector<std::int64_t> local{1};
        std::int64_t qk = 1;
        while (qk <= B / q) {
            qk *= q;
            std::size_t k = local.size();
            std::int64_t v = a * local[k - 1] - (k >= 2 ? q * local[k - 2] : 0);
            local.push_back(v);
        }
        std::vector<std::int64_t> next(B + 1, 0);
        for (std::int64_t n = 1; n <= B; ++n) {
            if (series[n] == 0) continue;
            std::int64_t m = n;
            for (std::size_t k = 0; k < local.size() && m <= B; ++k, m *= q) {
                next[m] += series[n] * local[k];
                if (m > B / q) break;
            }
        }
        series = std::move(next);
    }
    return series;
}

inline CheckResult criterion_hecke(const VerifyContext&) {
    CheckResult r;
    struct C {
        std::int64_t D;
        std::array<std::pair<long, long>, 5> a;
    };
    const C cs[2] = {{29, {{{1, 0}, {0, 0}, {11, 5}, {0, 0}, {0, 0}}}},
                     {37, {{{0, 0}, {2, 0}, {1, 0}, {-19, -8}, {28, 11}}}}};
    for (const auto& c : cs) {
        auto F = make_field(c.D, 64, -1);
        std::array<FieldElement, 5> a;
        for (int i = 0; i < 5; ++i) a[i] = F.elt(c.a[i].first, c.a[i].second);
        auto E = make_curve(F, a);
        IdealList L;
        auto t = build_table(F, E, 10000, 1, &L);
        // index of each ideal by its factorization
        std::map<std::vector<std::pair<int, int>>, std::size_t> idx;
        for (std::size_t i = 0; i < L.ideals.size(); ++i) idx[L.ideals[i].factorization] = i;
        std::size_t mult = 0, mult_ok = 0, hasse_ok = 0;
        std::vector<std::int64_t> aP(L.primes.size());
        for (std::size_t i = 0; i < L.ideals.size(); ++i) {
            const auto& f = L.ideals[i].factorization;
            if (f.size() == 1 && f[0].second == 1) aP[f[0].first] = t.coeffs[i];
            if (f.size() < 2) continue;
            // split off the first prime power: a(mn) = a(m) a(n) for coprime m, n
            std::vector<std::pair<int, int>> m{f[0]}, n(f.begin() + 1, f.end());
            ++mult;
            mult_ok += t.coeffs[i] == t.coeffs[idx.at(m)] * t.coeffs[idx.at(n)];
        }
        for (std::size_t j = 0; j < L.primes.size(); ++j) {
            long double q = static_cast<long double>(L.primes[j].norm());
            hasse_ok += std::fabs(static_cast<long double>(aP[j])) <= 2 * std::sqrt(q);
        }
        // prime power recursion
        std::size_t pp = 0, pp_ok = 0;
        for (std::size_t i = 0; i < L.ideals.size(); ++i) {
            const auto& f = L.ideals[i].factorization;
            if (f.size() != 1 || f[0].second < 2) continue;
            int j = f[0].first, e = f[0].second;
            auto prev = [&](int k) { return k == 0 ? std::int64_t(1) : t.coeffs[idx.at({{j, k}})]; };
            ++pp;
            pp_ok += t.coeffs[i] == aP[j] * prev(e - 1) - L.primes[j].norm() * prev(e - 2);
        }
        r.expect(mult == mult_ok && pp == pp_ok, "D=" + std::to_string(c.D) + ": multiplicativity " +
                                                     std::to_string(mult_ok) + "/" + std::to_string(mult) +
                                                     ", prime powers " + std::to_string(pp_ok) + "/" + std::to_string(pp));
        r.expect(hasse_ok == L.primes.size(), "Hasse " + std::to_string(hasse_ok) + "/" + std::to_string(L.primes.size()));
        // oracle: Euler product with a_P from exhaustive point counts
        const std::int64_t B = 200;
        std::vector<std::pair<std::int64_t, std::int64_t>> local;
        for (const auto& P : L.primes)
            if (P.norm() <= B) local.push_back({P.norm(), P.norm() + 1 - count_points_exhaustive(E, residue_field(F, P))});
        auto series = euler_product_by_norm(local, B);
        std::vector<std::int64_t> by_norm(B + 1, 0);
        for (std::size_t i = 0; i < L.ideals.size(); ++i)
            if (L.ideals[i].norm <= B) by_norm[L.ideals[i].norm] += t.coeffs[i];
        r.expect(series == by_norm, "Euler product oracle up to norm 200");
    }
    return r;
}

inline CheckResult criterion_determinism(const VerifyContext& ctx) {
    CheckResult r;
    std::string first;
    bool same = true;
    for (int th : {1, 4, 8}) {
        RunConfig c = load_config(ctx.opt.config_dir + "/e29.cfg");
        c.threads = th;
        c.norm_bound = 20000;
        c.cache_path = ctx.opt.cache_dir + "/e29.coef";
        json rep = cmd_atr(resolve(c), false);
        std::string s = rep["result"].dump();
        if (first.empty()) first = s;
        same = same && s == first;
    }
    r.expect(same, "E29 reports identical across 1, 4, 8 threads");
    return r;
}

// ---- runner ---------------------------------------------------------------------------

struct Criterion {
    int id;
    const char* name;
    bool golden;
    std::function<CheckResult(const VerifyContext&)> run;
};

inline std::vector<Criterion> criteria() {
    return {{1, "E29 golden", true, criterion_e29},
            {2, "E37 golden", true, criterion_e37},
            {3, "E109 golden", true, criterion_e109},
            {4, "E509 desk checks", true, criterion_e509},
            {5, "C_F and eps_F", false, criterion_constants},
            {6, "tail norm bounds", false, criterion_tail_bounds},
            {7, "GL~ invariance", false, criterion_invariance},
            {8, "splitter sums", false, criterion_splitter},
            {9, "freitag, bezout, convergents", false, criterion_arithmetic},
            {10, "Hecke relations and Euler product", false, criterion_hecke},
            {11, "thread determinism", false, criterion_determinism}};
}

inline bool run_verification(const VerifyOptions& opt, std::ostream& out) {
    std::set<int> only;
    for (const auto& s : split_list(opt.only)) only.insert(std::stoi(s));
    VerifyContext ctx{opt};
    std::filesystem::create_directories(opt.cache_dir);
    int failed = 0, ran = 0;
    for (const auto& c : criteria()) {
        if (!only.empty() && !only.count(c.id)) continue;
        if (opt.properties_only && c.golden) continue;
        auto t0 = std::chrono::steady_clock::now();
        CheckResult res;
        try {
            res = c.run(ctx);
        } catch (const std::exception& e) {
            res.pass = false;
            res.detail = std::string("exception: ") + e.what();
        }
        ++ran;
        failed += !res.pass;
        out << (res.pass ? "PASS" : "FAIL") << "  " << c.id << ". " << c.name << " [" << std::fixed
            << std::setprecision(1) << seconds_since(t0) << " s]: " << res.detail << std::endl;
        out.unsetf(std::ios_base::floatfield);
    }
    out << (failed ? "FAILED " : "ok ") << ran - failed << "/" << ran << " criteria passed" << std::endl;
    return failed == 0;
}

} // namespace atr::cli
