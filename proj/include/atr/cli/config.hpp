#pragma once

#include "atr/core/errors.hpp"
#include "atr/core/numeric.hpp"
#include "atr/numfield/field.hpp"

#include <cctype>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace atr::cli {

// ---- literals -----------------------------------------------------------------------
// Arithmetic expressions over exact rationals and named constants: + - * / ^, parentheses,
// unary minus, integer exponents.  "a+b*w" is the usual shape.

template <class V> class ExprParser {
public:
    using Lookup = std::function<std::optional<V>(const std::string&)>;
    using FromRational = std::function<V(const rational&)>;

    ExprParser(std::string src, Lookup lookup, FromRational from_q)
        : s_(std::move(src)), lookup_(std::move(lookup)), from_q_(std::move(from_q)) {}

    V parse() {
        V v = expr();
        skip();
        if (pos_ != s_.size()) bad("unexpected '" + std::string(1, s_[pos_]) + "'");
        return v;
    }

private:
    std::string s_;
    std::size_t pos_ = 0;
    Lookup lookup_;
    FromRational from_q_;

    [[noreturn]] void bad(const std::string& why) const {
        fail(errc::config, "cannot parse '" + s_ + "' at column " + std::to_string(pos_ + 1) + ": " + why);
    }
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool eat(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    V expr() {
        V v = term();
        for (;;) {
            if (eat('+'))
                v = v + term();
            else if (eat('-'))
                v = v - term();
            else
                return v;
        }
    }
    V term() {
        V v = unary();
        for (;;) {
            if (eat('*'))
                v = v * unary();
            else if (eat('/'))
                v = v / unary();
            else
                return v;
        }
    }
    V unary() {
        if (eat('-')) return from_q_(rational(0)) - unary();
        if (eat('+')) return unary();
        return power();
    }
    V power() {
        V b = atom();
        if (!eat('^')) return b;
        skip();
        std::size_t st = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (st == pos_) bad("exponent must be a non-negative integer");
        int e = std::stoi(s_.substr(st, pos_ - st));
        V r = from_q_(rational(1));
        for (int i = 0; i < e; ++i) r = r * b;
        return r;
    }
    V atom() {
        skip();
        if (pos_ >= s_.size()) bad("unexpected end");
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            V v = expr();
            if (!eat(')')) bad("missing ')'");
            return v;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t st = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            return from_q_(rational(bigint(s_.substr(st, pos_ - st))));
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t st = pos_;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
            std::string name = s_.substr(st, pos_ - st);
            if (auto v = lookup_(name)) return *v;
            bad("unknown name '" + name + "'");
        }
        bad("unexpected '" + std::string(1, c) + "'");
    }
};

// Exact element of F; names w (the standard integral basis element) and sqrtD.
inline FieldElement parse_field_element(std::int64_t D, const std::string& s) {
    FieldElement w = one_mod_four(D) ? FieldElement(D, rational(0), rational(1)) : FieldElement(D, 0, 1);
    FieldElement sq = one_mod_four(D) ? FieldElement(D, rational(-1), rational(2)) : FieldElement(D, 0, 1);
    ExprParser<FieldElement> p(
        s,
        [&](const std::string& n) -> std::optional<FieldElement> {
            if (n == "w") return w;
            if (n == "sqrtD") return sq;
            return std::nullopt;
        },
        [&](const rational& q) { return FieldElement(D, q); });
    return p.parse();
}

// Element of K = F(s), s^2 = beta, evaluated at the complex place above v0.
inline hp_complex eval_k_literal(const RealQuadField& F, const FieldElement& beta, const std::string& s) {
    hp_real b0 = F.embed<hp_real>(beta, 0);
    if (!(b0 < 0)) fail(errc::config, "beta is not negative at v0");
    hp_complex root(0, boost::multiprecision::sqrt(-b0));
    hp_complex w0(F.embed<hp_real>(F.w, 0)), sq0(F.embed<hp_real>(F.sqrt_d(), 0));
    ExprParser<hp_complex> p(
        s,
        [&](const std::string& n) -> std::optional<hp_complex> {
            if (n == "w") return w0;
            if (n == "sqrtD") return sq0;
            if (n == "s") return root;
            return std::nullopt;
        },
        [](const rational& q) {
            using boost::multiprecision::denominator;
            using boost::multiprecision::numerator;
            return hp_complex(hp_real(numerator(q)) / hp_real(denominator(q)));
        });
    return p.parse();
}

// ---- config file --------------------------------------------------------------------
// key = value lines under [section] headers; '#' starts a comment.  Each [embedding]
// header opens a new embedding record.

struct EmbeddingSpec {
    std::array<std::string, 4> M;
    std::optional<std::array<std::string, 4>> gamma_phi;
    std::string chain_rule = "optimized"; // optimized | baseline | pinned
    std::vector<std::string> chain;
};

struct RunConfig {
    std::string name;
    std::int64_t D = 0;
    int v0_sqrtD_sign = -1;
    std::array<std::string, 5> curve{"0", "0", "0", "0", "0"};
    std::optional<std::string> beta;
    std::vector<EmbeddingSpec> embeddings;
    std::optional<std::string> point_x, point_y;

    int precision_digits = 30;
    int tolerance_digits = 12;
    std::optional<std::int64_t> norm_bound;
    double eps0_factor = 0.81;
    int max_cf_len = 5;
    int cf_radius = 2;
    bool split = true;
    int threads = 1;
    std::string cache_path;
    int relation_bound = 16;
    double relation_threshold = 1e-8;
};

inline std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n"), b = s.find_last_not_of(" \t\r\n");
    return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

inline std::vector<std::string> split_list(const std::string& s, char sep = ',') {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

template <std::size_t K> std::array<std::string, K> fixed_list(const std::string& key, const std::string& v) {
    auto xs = split_list(v);
    if (xs.size() != K) fail(errc::config, key + " needs " + std::to_string(K) + " comma-separated entries");
    std::array<std::string, K> a;
    std::copy(xs.begin(), xs.end(), a.begin());
    return a;
}

inline RunConfig parse_config(std::istream& in, const std::string& origin = "<config>") {
    RunConfig c;
    std::string section, line;
    int lineno = 0;
    auto where = [&] { return origin + ":" + std::to_string(lineno) + ": "; };
    auto to_int = [&](const std::string& v) -> std::int64_t {
        try {
            std::size_t k = 0;
            long double x = std::stold(v, &k);
            if (k != v.size() || x != std::floor(x)) throw std::invalid_argument(v);
            return static_cast<std::int64_t>(x);
        } catch (const std::exception&) {
            fail(errc::config, where() + "expected an integer, got '" + v + "'");
        }
    };
    auto to_double = [&](const std::string& v) {
        try {
            std::size_t k = 0;
            double x = std::stod(v, &k);
            if (k != v.size()) throw std::invalid_argument(v);
            return x;
        } catch (const std::exception&) {
            fail(errc::config, where() + "expected a number, got '" + v + "'");
        }
    };
    auto to_bool = [&](const std::string& v) {
        if (v == "true" || v == "1" || v == "yes") return true;
        if (v == "false" || v == "0" || v == "no") return false;
        fail(errc::config, where() + "expected a boolean, got '" + v + "'");
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') fail(errc::config, where() + "bad section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section == "embedding") c.embeddings.emplace_back();
            else if (section != "field" && section != "curve" && section != "extension" && section != "point" &&
                     section != "run")
                fail(errc::config, where() + "unknown section [" + section + "]");
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) fail(errc::config, where() + "expected key = value");
        std::string k = trim(line.substr(0, eq)), v = trim(line.substr(eq + 1));
        auto unknown = [&] { fail(errc::config, where() + "unknown key '" + k + "' in [" + section + "]"); };
        if (section == "field") {
            if (k == "D") c.D = to_int(v);
            else if (k == "v0_sqrtD_sign") c.v0_sqrtD_sign = static_cast<int>(to_int(v));
            else if (k == "name") c.name = v;
            else unknown();
        } else if (section == "curve") {
            static const std::map<std::string, int> idx{{"a1", 0}, {"a2", 1}, {"a3", 2}, {"a4", 3}, {"a6", 4}};
            auto it = idx.find(k);
            if (it == idx.end()) unknown();
            c.curve[it->second] = v;
        } else if (section == "extension") {
            if (k == "beta") c.beta = v;
            else unknown();
        } else if (section == "embedding") {
            auto& e = c.embeddings.back();
            if (k == "M") e.M = fixed_list<4>(k, v);
            else if (k == "gamma_phi") e.gamma_phi = fixed_list<4>(k, v);
            else if (k == "chain_rule") e.chain_rule = v;
            else if (k == "chain") e.chain = split_list(v);
            else unknown();
        } else if (section == "point") {
            if (k == "x") c.point_x = v;
            else if (k == "y") c.point_y = v;
            else unknown();
        } else if (section == "run") {
            if (k == "precision_digits") c.precision_digits = static_cast<int>(to_int(v));
            else if (k == "tolerance_digits") c.tolerance_digits = static_cast<int>(to_int(v));
            else if (k == "norm_bound") c.norm_bound = to_int(v);
            else if (k == "eps0_factor") c.eps0_factor = to_double(v);
            else if (k == "max_cf_len") c.max_cf_len = static_cast<int>(to_int(v));
            else if (k == "cf_radius") c.cf_radius = static_cast<int>(to_int(v));
            else if (k == "split") c.split = to_bool(v);
            else if (k == "threads") c.threads = static_cast<int>(to_int(v));
            else if (k == "cache_path") c.cache_path = v;
            else if (k == "relation_bound") c.relation_bound = static_cast<int>(to_int(v));
            else if (k == "relation_threshold") c.relation_threshold = to_double(v);
            else unknown();
        } else {
            fail(errc::config, where() + "key outside of a section");
        }
    }
    if (c.D == 0) fail(errc::config, origin + ": [field] D is required");
    if (c.v0_sqrtD_sign != 1 && c.v0_sqrtD_sign != -1) fail(errc::config, origin + ": v0_sqrtD_sign must be 1 or -1");
    if (!(c.eps0_factor > 0 && c.eps0_factor < 1)) fail(errc::config, origin + ": eps0_factor must lie in (0, 1)");
    if (c.point_x.has_value() != c.point_y.has_value())
        fail(errc::config, origin + ": [point] needs both x and y");
    if (c.point_x && !c.beta) fail(errc::config, origin + ": a point over K needs [extension] beta");
    for (const auto& e : c.embeddings) {
        if (e.chain_rule != "optimized" && e.chain_rule != "baseline" && e.chain_rule != "pinned")
            fail(errc::config, origin + ": chain_rule must be optimized, baseline or pinned");
        if (e.chain_rule == "pinned" && e.chain.empty())
            fail(errc::config, origin + ": chain_rule = pinned needs a chain");
    }
    return c;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(errc::config, "cannot open config " + path);
    return parse_config(in, path);
}

} // namespace atr::cli
