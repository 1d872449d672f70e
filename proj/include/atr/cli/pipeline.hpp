#pragma once

#include "atr/cli/config.hpp"
#include "atr/darmon/atr.hpp"

#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <iostream>

namespace atr::cli {

using json = nlohmann::ordered_json;

inline constexpr int kReportSchemaVersion = 1;

// Exit codes of the command line front end.
enum ExitCode : int {
    exit_ok = 0,
    exit_runtime = 1,
    exit_config = 2,
    exit_cache = 3,
    exit_precision = 4,
    exit_verification = 5,
};

inline int exit_code_for(const error& e) {
    switch (e.code()) {
    case errc::config:
    case errc::not_squarefree:
    case errc::no_norm_minus_one_unit:
    case errc::class_number_not_one:
    case errc::bad_reduction:
    case errc::no_complex_root:
    case errc::point_not_on_curve: return exit_config;
    case errc::corrupt_cache:
    case errc::version_mismatch:
    case errc::insufficient_table: return exit_cache;
    case errc::precision_loss: return exit_precision;
    default: return exit_runtime;
    }
}

// Everything a run needs, resolved from a RunConfig.
struct Problem {
    RunConfig cfg;
    RealQuadField F;
    CurveOverF E;
    std::optional<FieldElement> beta;
    std::vector<OptimalEmbedding> embeddings;
    std::vector<DarmonOptions> options; // one per embedding
    std::optional<KnownPoint> point;
};

inline Mat2 parse_matrix(std::int64_t D, const std::array<std::string, 4>& m) {
    return {parse_field_element(D, m[0]), parse_field_element(D, m[1]), parse_field_element(D, m[2]),
            parse_field_element(D, m[3])};
}

// Long double integration carries about 18 significant digits, the hp type 50.
inline void check_precision(const RunConfig& c) {
    if (c.tolerance_digits < 1 || c.tolerance_digits > 15)
        fail(errc::precision_loss, "tolerance_digits must lie in 1..15 with long double integration");
    if (c.precision_digits > std::numeric_limits<hp_real>::digits10)
        fail(errc::precision_loss, "precision_digits above the " + std::to_string(std::numeric_limits<hp_real>::digits10) +
                                       " digits of the high-precision type");
    if (c.precision_digits < c.tolerance_digits + 5)
        fail(errc::precision_loss, "precision_digits must exceed tolerance_digits by at least 5");
}

inline DarmonOptions darmon_options(const RunConfig& c, const EmbeddingSpec& e) {
    DarmonOptions o;
    o.rule = e.chain_rule == "pinned" ? ChainRule::pinned : e.chain_rule == "baseline" ? ChainRule::baseline
                                                                                        : ChainRule::optimized;
    for (const auto& s : e.chain) o.pinned.push_back(parse_field_element(c.D, s));
    o.max_cf_len = c.max_cf_len;
    o.cf_radius = c.cf_radius;
    o.split = c.split;
    o.eps0_factor = c.eps0_factor;
    o.threads = c.threads;
    o.integration.tol = std::max(std::pow(10.0, -(c.tolerance_digits + 3)), 2e-16);
    o.integration.strict = false; // N is chosen up front from the planned eps_min
    return o;
}

inline Problem resolve(const RunConfig& c) {
    check_precision(c);
    Problem p{c, make_field(c.D, 64, c.v0_sqrtD_sign), {}, {}, {}, {}, {}};
    std::array<FieldElement, 5> a;
    for (int i = 0; i < 5; ++i) a[i] = parse_field_element(c.D, c.curve[i]);
    p.E = make_curve(p.F, a);
    if (c.beta) p.beta = make_atr_extension(p.F, parse_field_element(c.D, *c.beta)).beta;
    for (const auto& e : c.embeddings) {
        Mat2 M = parse_matrix(c.D, e.M);
        std::optional<Mat2> g;
        if (e.gamma_phi) g = parse_matrix(c.D, *e.gamma_phi);
        p.embeddings.push_back(make_embedding(p.F, M, g));
        p.options.push_back(darmon_options(c, e));
    }
    if (c.point_x) {
        p.point = KnownPoint{eval_k_literal(p.F, *p.beta, *c.point_x), eval_k_literal(p.F, *p.beta, *c.point_y)};
        auto c0 = embed_curve(p.F, p.E, 0);
        const hp_complex &x = p.point->x, &y = p.point->y;
        hp_complex lhs = y * y + c0.a1 * x * y + c0.a3 * y, rhs = ((x + c0.a2) * x + c0.a4) * x + c0.a6;
        if (abs(lhs - rhs) > (1 + abs(lhs) + abs(rhs)) * hp_real("1e-30"))
            fail(errc::point_not_on_curve, "the configured point is not on the curve");
    }
    return p;
}

// ---- coefficient tables ---------------------------------------------------------

struct TableBundle {
    CoeffTable table;
    IdealList ideals;
    bool from_cache = false;
    double seconds = 0;
};

// Loads a cached table when it covers N for this curve; otherwise builds (and stores) one.
inline TableBundle obtain_table(const RealQuadField& F, const CurveOverF& E, std::int64_t N, int threads,
                                const std::string& cache_path, std::ostream* log = nullptr) {
    auto t0 = std::chrono::steady_clock::now();
    TableBundle b;
    if (!cache_path.empty() && std::filesystem::exists(cache_path)) {
        try {
            CoeffTable t = load_table(cache_path);
            if (table_matches(t, F, E) && t.N_max >= N) {
                b.ideals = enumerate_ideals(F, N);
                b.table = truncate_table(t, b.ideals, N);
                if (b.table.coeffs.size() != b.ideals.ideals.size())
                    fail(errc::corrupt_cache, "entry count does not match the ideal enumeration");
                b.from_cache = true;
            }
        } catch (const error& e) {
            if (e.code() != errc::corrupt_cache && e.code() != errc::version_mismatch) throw;
            if (log) *log << "warning: " << e.what() << "; rebuilding " << cache_path << "\n";
        }
    }
    if (!b.from_cache) {
        b.table = build_table(F, E, N, threads, &b.ideals);
        if (!cache_path.empty()) {
            auto parent = std::filesystem::path(cache_path).parent_path();
            if (!parent.empty()) std::filesystem::create_directories(parent);
            save_table(b.table, cache_path);
        }
    }
    b.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return b;
}

// ---- reports ------------------------------------------------------------------------

inline std::string fmt_hp(const hp_real& x, int digits) { return x.str(digits, std::ios_base::scientific); }

inline std::string fmt_ld(long double x, int digits = 21) {
    std::ostringstream os;
    os << std::setprecision(digits) << x;
    return os.str();
}

inline json complex_json(const hp_complex& z, int digits) {
    return {{"re", fmt_hp(z.real(), digits)}, {"im", fmt_hp(z.imag(), digits)}};
}

inline json complex_json(const std::complex<long double>& z) {
    return {{"re", fmt_ld(z.real())}, {"im", fmt_ld(z.imag())}};
}

inline json matrix_json(const Mat2& m) { return json::array({m.a.str(), m.b.str(), m.c.str(), m.d.str()}); }

inline json plan_json(const CuspPlan<long double>& p) {
    json coeffs = json::array();
    for (const auto& b : p.expansion.coeffs) coeffs.push_back(b.str());
    return {{"target_cusp", p.target.str()},
            {"chain_rule", chain_rule_name(p.rule)},
            {"candidates", p.candidates},
            {"expansion", coeffs},
            {"chain_regions", p.chain_regions},
            {"chain_eps_min", fmt_ld(p.chain_eps_min, 8)},
            {"regions", p.regions.size()},
            {"eps_min", fmt_ld(p.eps_min, 8)}};
}

struct PlannedRun {
    std::vector<CuspPlan<long double>> plans;
    long double eps_min = 0;
    std::int64_t N = 0;
};

inline PlannedRun plan_run(const Problem& p) {
    PlannedRun r;
    bool first = true;
    for (std::size_t i = 0; i < p.embeddings.size(); ++i) {
        r.plans.push_back(plan_j_phi<long double>(p.F, p.embeddings[i], p.options[i]));
        if (first || r.plans.back().eps_min < r.eps_min) r.eps_min = r.plans.back().eps_min;
        first = false;
    }
    if (p.cfg.norm_bound) {
        r.N = *p.cfg.norm_bound;
    } else if (!r.plans.empty()) {
        r.N = tail_norm_bound(p.F, r.eps_min, std::pow(10.0L, -p.cfg.tolerance_digits));
    }
    return r;
}

inline json problem_json(const Problem& p) {
    json j;
    j["D"] = p.cfg.D;
    j["v0_sqrtD_sign"] = p.cfg.v0_sqrtD_sign;
    json curve = json::array();
    for (const auto& a : p.E.coeffs()) curve.push_back(a.str());
    j["curve"] = curve;
    if (p.beta) j["beta"] = p.beta->str();
    return j;
}

// Machine-readable report; "result" depends only on config and table, "timing" does not.
inline json cmd_atr(const Problem& p, bool dry_run, std::ostream* log = nullptr) {
    if (p.embeddings.empty()) fail(errc::config, "no [embedding] sections; add at least one with M = a, b, c, d");
    auto t0 = std::chrono::steady_clock::now();
    json rep;
    rep["schema_version"] = kReportSchemaVersion;
    rep["name"] = p.cfg.name;
    rep["problem"] = problem_json(p);
    PlannedRun plan = plan_run(p);
    json embs = json::array();
    for (std::size_t i = 0; i < p.embeddings.size(); ++i) {
        const auto& e = p.embeddings[i];
        embs.push_back({{"M", matrix_json(e.M)},
                        {"tau0", complex_json(e.tau0, p.cfg.precision_digits)},
                        {"gamma_phi", matrix_json(e.gamma_phi)},
                        {"plan", plan_json(plan.plans[i])}});
    }
    json res;
    res["embeddings"] = embs;
    res["N"] = plan.N;
    res["eps_min"] = fmt_ld(plan.eps_min, 8);
    json timing;
    if (dry_run) {
        rep["dry_run"] = true;
        rep["result"] = res;
        return rep;
    }
    auto tb = obtain_table(p.F, p.E, plan.N, p.cfg.threads, p.cfg.cache_path, log);
    timing["table_seconds"] = tb.seconds;
    timing["table_from_cache"] = tb.from_cache;
    auto T = make_integration_table<long double>(p.F, tb.table, tb.ideals);
    compensated_csum<long double> total;
    for (std::size_t i = 0; i < p.embeddings.size(); ++i) {
        auto s = evaluate_regions(T, plan.plans[i].regions, p.options[i]);
        res["embeddings"][i]["J"] = complex_json(s.value);
        res["embeddings"][i]["est_error"] = fmt_ld(s.est_error, 4);
        res["embeddings"][i]["N_used"] = s.N_used;
        total.add(s.value);
    }
    auto J = total.value();
    res["J"] = complex_json(J);
    if (p.point) {
        auto c0 = embed_curve(p.F, p.E, 0), c1 = embed_curve(p.F, p.E, 1);
        auto L0 = period_lattice(c0), L1 = period_lattice(c1);
        hp_complex z = elliptic_log(c0, L0, p.point->x, p.point->y);
        auto tors = torsion_bound(p.F, p.E);
        auto rel = recognize_relation(hp_complex(hp_real(J.real()), hp_real(J.imag())), z, L0, L1.lambda_plus,
                                      p.cfg.relation_bound, hp_real(p.cfg.relation_threshold), true,
                                      static_cast<int>(tors));
        res["z"] = complex_json(z, p.cfg.precision_digits);
        res["lattice_v0"] = {{"w1", complex_json(L0.w1, p.cfg.precision_digits)},
                             {"w2", complex_json(L0.w2, p.cfg.precision_digits)}};
        res["lambda1_plus"] = fmt_hp(L1.lambda_plus, p.cfg.precision_digits);
        res["relation"] = {{"found", rel.found},       {"m", rel.m},
                           {"n", rel.n},               {"k", rel.k},
                           {"l", rel.l},               {"torsion_multiplier", rel.torsion},
                           {"scaling", rel.convention == 0 ? "J/lambda1+" : "J"},
                           {"residual", fmt_hp(rel.residual, 6)}};
    }
    rep["result"] = res;
    timing["threads"] = p.cfg.threads;
    timing["total_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    rep["timing"] = timing;
    return rep;
}

inline json cmd_coeffs(const Problem& p, std::ostream* log = nullptr) {
    std::int64_t N = p.cfg.norm_bound ? *p.cfg.norm_bound : plan_run(p).N;
    if (N <= 0) fail(errc::config, "no norm bound: set norm_bound or supply an embedding to derive one");
    if (p.cfg.cache_path.empty()) fail(errc::config, "coeffs needs a cache path (--cache or cache_path)");
    auto tb = obtain_table(p.F, p.E, N, p.cfg.threads, p.cfg.cache_path, log);
    return {{"schema_version", kReportSchemaVersion},
            {"N", N},
            {"ideals", tb.table.coeffs.size()},
            {"from_cache", tb.from_cache},
            {"threads", p.cfg.threads},
            {"seconds", tb.seconds},
            {"cache", p.cfg.cache_path}};
}

} // namespace atr::cli
