// atr_cli: coefficient tables, ATR points and the verification suite from the command line.

#include "atr/cli/pipeline.hpp"
#include "atr/cli/verify.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace atr;
using namespace atr::cli;

namespace {

struct Overrides {
    std::string config, cache;
    int threads = 0;
    int precision_digits = 0;
    std::int64_t norm_bound = 0;
    double eps0_factor = 0;
    int max_cf_len = 0;
    bool dry_run = false;
};

RunConfig load_with_overrides(const Overrides& o) {
    if (o.config.empty()) fail(errc::config, "--config is required");
    RunConfig c = load_config(o.config);
    if (!o.cache.empty()) c.cache_path = o.cache;
    if (o.threads > 0) c.threads = o.threads;
    if (o.precision_digits > 0) c.precision_digits = o.precision_digits;
    if (o.norm_bound > 0) c.norm_bound = o.norm_bound;
    if (o.eps0_factor > 0) {
        if (!(o.eps0_factor < 1)) fail(errc::config, "--eps0-factor must lie in (0, 1)");
        c.eps0_factor = o.eps0_factor;
    }
    if (o.max_cf_len > 0) c.max_cf_len = o.max_cf_len;
    return c;
}

void add_common(CLI::App* sub, Overrides& o) {
    sub->add_option("--config", o.config, "run configuration file");
    sub->add_option("--cache", o.cache, "coefficient cache file");
    sub->add_option("--threads", o.threads, "worker threads");
    sub->add_option("--precision-digits", o.precision_digits, "working precision in decimal digits");
    sub->add_option("--norm-bound", o.norm_bound, "largest ideal norm in the Fourier sums");
    sub->add_option("--eps0-factor", o.eps0_factor, "eps0 as a fraction of eps_F");
    sub->add_option("--max-cf-len", o.max_cf_len, "longest continued fraction considered");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"ATR Darmon points over real quadratic fields"};
    app.require_subcommand(1);
    Overrides o;
    auto* coeffs = app.add_subcommand("coeffs", "build or refresh the coefficient cache");
    add_common(coeffs, o);
    auto* atr = app.add_subcommand("atr", "compute J and recognize the point");
    add_common(atr, o);
    atr->add_flag("--dry-run", o.dry_run, "plan regions and N without integrating");
    auto* verify = app.add_subcommand("verify", "run the acceptance suite");
    VerifyOptions vo;
    verify->add_option("--only", vo.only, "comma-separated criterion numbers");
    verify->add_flag("--properties-only", vo.properties_only, "skip the golden reproductions");
    verify->add_option("--cache-dir", vo.cache_dir, "directory for coefficient caches");
    verify->add_option("--configs", vo.config_dir, "directory holding e29.cfg, e37.cfg, e109.cfg, e509.cfg");
    verify->add_option("--threads", vo.threads, "worker threads");
    CLI11_PARSE(app, argc, argv);

    try {
        if (coeffs->parsed()) {
            Problem p = resolve(load_with_overrides(o));
            std::cout << cmd_coeffs(p, &std::cerr).dump(2) << "\n";
            return exit_ok;
        }
        if (atr->parsed()) {
            Problem p = resolve(load_with_overrides(o));
            json rep = cmd_atr(p, o.dry_run, &std::cerr);
            std::cout << rep.dump(2) << "\n";
            if (rep["result"].contains("relation") && !rep["result"]["relation"]["found"].get<bool>())
                return exit_verification;
            return exit_ok;
        }
        if (verify->parsed()) return run_verification(vo, std::cout) ? exit_ok : exit_verification;
    } catch (const error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_runtime;
    }
    return exit_ok;
}
