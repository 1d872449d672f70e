// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "atr/cli/verify.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"ATR acceptance criteria"};
    atr::cli::VerifyOptions vo;
    app.add_option("--only", vo.only, "comma-separated criterion numbers");
    app.add_flag("--properties-only", vo.properties_only, "skip the golden reproductions");
    app.add_option("--cache-dir", vo.cache_dir, "directory for coefficient caches");
    app.add_option("--configs", vo.config_dir, "directory holding the curve configs");
    app.add_option("--threads", vo.threads, "worker threads");
    CLI11_PARSE(app, argc, argv);
    try {
        return atr::cli::run_verification(vo, std::cout) ? atr::cli::exit_ok : atr::cli::exit_verification;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return atr::cli::exit_runtime;
    }
}
