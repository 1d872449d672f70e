#pragma once

#include "atr/cfrac/expansion.hpp"
#include "atr/cfrac/guided.hpp"
#include "atr/darmon/embedding.hpp"
#include "atr/darmon/periods.hpp"
#include "atr/hmfint/integrate.hpp"
#include "atr/splitter/split.hpp"

#include <chrono>
#include <optional>

namespace atr {

enum class ChainRule {
    optimized, // best of enumerate_expansions
    baseline,  // greedy_expansion
    pinned,    // coefficients supplied by the caller
};

inline const char* chain_rule_name(ChainRule r) {
    switch (r) {
    case ChainRule::optimized: return "optimized";
    case ChainRule::baseline: return "baseline";
    case ChainRule::pinned: return "pinned";
    }
    return "?";
}

struct DarmonOptions {
    ChainRule rule = ChainRule::optimized;
    std::vector<FieldElement> pinned; // used with ChainRule::pinned
    int max_cf_len = 5;
    int cf_radius = 2;
    std::size_t max_candidates = 5000;
    std::size_t node_budget = 2000000;
    bool split = true;
    long double eps0_factor = 0.81L;
    Group group = Group::GLtilde;
    IntegrationOptions integration{};
    int threads = 1;
    hp_complex tau3 = hp_complex(0, 1);
};

// The regions of int^{tau0} int_oo^c, before and after splitting.
template <class R> struct CuspPlan {
    FieldElement target;
    CFExpansion expansion;
    ChainRule rule = ChainRule::optimized;
    std::size_t candidates = 0;
    R chain_eps_min{};
    std::size_t chain_regions = 0;
    std::vector<Region<R>> regions;
    R eps_min{};
};

template <class R> complex_t<R> to_working(const hp_complex& z) {
    return complex_t<R>(static_cast<R>(z.real()), static_cast<R>(z.imag()));
}

template <class R> Region<R> region_cast(const Region<hp_real>& r) {
    auto c = [](const Limit<hp_real>& l) {
        return l.inf ? Limit<R>::infinity() : Limit<R>(to_working<R>(l.z));
    };
    return {c(r.x0), c(r.y0), c(r.x1), c(r.y1)};
}

// Chain and split geometry run at 50 digits: chain endpoints can sit within 1e-13 of a cusp, and
// the reducing matrices then magnify a long double rounding error past the target accuracy.
// Only the finished regions, which lie in the good domain, are rounded to R.
template <class R>
CuspPlan<R> plan_cusp_integral(const RealQuadField& F, const hp_complex& tau0, const FieldElement& c,
                               const DarmonOptions& opt) {
    using G = hp_real;
    CuspPlan<R> p;
    p.target = c;
    p.rule = opt.rule;
    switch (opt.rule) {
    case ChainRule::pinned:
        if (opt.pinned.empty()) fail(errc::config, "pinned chain rule without coefficients");
        if (!(evaluate_cf(opt.pinned) == c))
            fail(errc::config, "pinned continued fraction does not evaluate to " + c.str());
        p.expansion = make_expansion(opt.pinned);
        p.candidates = 1;
        break;
    case ChainRule::baseline:
        p.expansion = greedy_expansion(c, opt.cf_radius);
        p.candidates = 1;
        break;
    case ChainRule::optimized: {
        EnumerationOptions eo;
        eo.max_len = opt.max_cf_len;
        eo.max_count = opt.max_candidates;
        eo.radius = opt.cf_radius;
        eo.node_budget = opt.node_budget;
        std::vector<CFExpansion> cands;
        std::optional<error> none;
        try {
            cands = enumerate_expansions(c, eo);
        } catch (const error& e) {
            if (e.code() != errc::none_found) throw;
            none = e;
        }
        // norm-greedy division keeps |N(q)| small but not L = q tau0 - p, which is what eps sees
        auto guided = guided_expansions<R>(F, c, to_working<R>(tau0), to_working<R>(opt.tau3));
        cands.insert(cands.end(), guided.begin(), guided.end());
        if (cands.empty()) throw *none;
        p.candidates = cands.size();
        p.expansion = select_best_expansion<R>(F, cands, to_working<R>(tau0), to_working<R>(opt.tau3)).expansion;
        break;
    }
    }
    auto cr = chain_regions<G>(F, cusp_chain(p.expansion), tau0, opt.tau3);
    p.chain_eps_min = static_cast<R>(cr.eps_min);
    p.chain_regions = cr.regions.size();
    std::vector<Region<G>> out;
    if (!opt.split) {
        out = std::move(cr.regions);
    } else {
        auto cfg = make_split_config(geometry(F), opt.eps0_factor, opt.group);
        for (const auto& r : cr.regions) {
            if (epsilon(r) >= G(cfg.eps0)) {
                out.push_back(r);
                continue;
            }
            auto parts = split_integral(F, r, cfg);
            out.insert(out.end(), parts.begin(), parts.end());
        }
    }
    bool first = true;
    for (const auto& r : out) {
        p.regions.push_back(region_cast<R>(r));
        R e = epsilon(p.regions.back());
        if (first || e < p.eps_min) p.eps_min = e;
        first = false;
    }
    return p;
}

template <class R>
CuspPlan<R> plan_cusp_integral(const RealQuadField& F, const complex_t<R>& tau0, const FieldElement& c,
                               const DarmonOptions& opt) {
    return plan_cusp_integral<R>(F, hp_complex(hp_real(tau0.real()), hp_real(tau0.imag())), c, opt);
}

template <class R> struct RegionSum {
    complex_t<R> value{};
    R est_error{};
    std::int64_t N_used = 0;
    std::int64_t terms = 0;
};

// Per-region values are summed in region order, so the result does not depend on the thread count.
template <class R>
RegionSum<R> evaluate_regions(const IntegrationTable<R>& T, const std::vector<Region<R>>& rs, const DarmonOptions& opt) {
    auto vals = integrate_all_plus(T, rs, opt.integration, opt.threads);
    compensated_csum<R> s;
    RegionSum<R> out;
    for (const auto& v : vals) {
        s.add(v.value);
        out.est_error += v.est_error;
        out.N_used = std::max(out.N_used, v.N_used);
        out.terms += v.terms_used;
    }
    out.value = s.value();
    return out;
}

template <class R> struct SemidefiniteResult {
    complex_t<R> value{};
    R est_error{};
    std::int64_t N_used = 0;
    std::vector<std::pair<int, CuspPlan<R>>> plans; // +-1 times int_oo^c
};

// int^{tau0} int_{c1}^{c2} = int_oo^{c2} - int_oo^{c1}; a cusp is nullopt for infinity.
template <class R>
SemidefiniteResult<R> semidefinite_integral(const IntegrationTable<R>& T, const complex_t<R>& tau0, const Cusp& c1,
                                            const Cusp& c2, const DarmonOptions& opt) {
    const RealQuadField& F = *T.F;
    SemidefiniteResult<R> res;
    res.value = complex_t<R>(0, 0);
    if (cusp_equal(c1, c2)) return res;
    if (c2) res.plans.emplace_back(1, plan_cusp_integral<R>(F, tau0, *c2, opt));
    if (c1) res.plans.emplace_back(-1, plan_cusp_integral<R>(F, tau0, *c1, opt));
    for (const auto& [sgn, p] : res.plans) {
        auto s = evaluate_regions(T, p.regions, opt);
        res.value += R(sgn) * s.value;
        res.est_error += s.est_error;
        res.N_used = std::max(res.N_used, s.N_used);
    }
    return res;
}

inline FieldElement gamma_cusp(const Mat2& g) {
    if (g.c.is_zero()) fail(errc::precondition, "gamma_phi fixes infinity");
    return g.a / g.c;
}

template <class R> struct JPhiResult {
    OptimalEmbedding embedding;
    CuspPlan<R> plan;
    complex_t<R> J{};
    R est_error{};
    std::int64_t N_used = 0;
    double seconds = 0;
};

template <class R> CuspPlan<R> plan_j_phi(const RealQuadField& F, const OptimalEmbedding& emb, const DarmonOptions& opt) {
    return plan_cusp_integral<R>(F, emb.tau0, gamma_cusp(emb.gamma_phi), opt);
}

// J_phi = int^{tau0} int_oo^{gamma_phi oo} omega_f^+
template <class R>
JPhiResult<R> j_phi(const IntegrationTable<R>& T, const OptimalEmbedding& emb, const DarmonOptions& opt) {
    auto t0 = std::chrono::steady_clock::now();
    JPhiResult<R> r;
    r.embedding = emb;
    r.plan = plan_j_phi<R>(*T.F, emb, opt);
    auto s = evaluate_regions(T, r.plan.regions, opt);
    r.J = s.value;
    r.est_error = s.est_error;
    r.N_used = s.N_used;
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

struct KnownPoint {
    hp_complex x, y; // coordinates at v0
};

template <class R> struct ATRResult {
    std::vector<JPhiResult<R>> parts;
    complex_t<R> J_total{};
    std::optional<hp_complex> z;
    std::int64_t torsion = 1;
    std::optional<RelationResult> relation;
};

template <class R>
ATRResult<R> atr_point(const IntegrationTable<R>& T, const CurveOverF& E, const std::vector<OptimalEmbedding>& embs,
                       const DarmonOptions& opt, const std::optional<KnownPoint>& point = std::nullopt,
                       int relation_bound = 16, const hp_real& relation_threshold = hp_real("1e-8")) {
    if (embs.empty()) fail(errc::config, "no embeddings supplied");
    const RealQuadField& F = *T.F;
    ATRResult<R> out;
    for (const auto& e : embs) out.parts.push_back(j_phi(T, e, opt));
    compensated_csum<R> s;
    for (const auto& p : out.parts) s.add(p.J);
    out.J_total = s.value();
    if (point) {
        auto c0 = embed_curve(F, E, 0), c1 = embed_curve(F, E, 1);
        auto L0 = period_lattice(c0), L1 = period_lattice(c1);
        out.z = elliptic_log(c0, L0, point->x, point->y);
        hp_complex J(hp_real(out.J_total.real()), hp_real(out.J_total.imag()));
        out.torsion = torsion_bound(F, E);
        out.relation = recognize_relation(J, *out.z, L0, L1.lambda_plus, relation_bound, relation_threshold, true,
                                          static_cast<int>(out.torsion));
    }
    return out;
}

} // namespace atr
