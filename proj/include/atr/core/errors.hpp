#pragma once

#include <stdexcept>
#include <string>

namespace atr {

enum class errc {
    not_squarefree,
    no_norm_minus_one_unit,
    class_number_not_one,
    search_bound_exceeded,
    two_stage_search_failed,
    bad_reduction,
    corrupt_cache,
    version_mismatch,
    insufficient_table,
    precision_loss,
    no_collision,
    height_not_attained,
    invariant_violation,
    worklist_overflow,
    no_chain_found,
    none_found,
    no_complex_root,
    point_not_on_curve,
    precondition,
    config,
};

inline const char* errc_name(errc c) {
    switch (c) {
    case errc::not_squarefree: return "NotSquarefree";
    case errc::no_norm_minus_one_unit: return "NoNormMinusOneUnit";
    case errc::class_number_not_one: return "ClassNumberNotOne";
    case errc::search_bound_exceeded: return "SearchBoundExceeded";
    case errc::two_stage_search_failed: return "TwoStageSearchFailed";
    case errc::bad_reduction: return "BadReduction";
    case errc::corrupt_cache: return "CorruptCache";
    case errc::version_mismatch: return "VersionMismatch";
    case errc::insufficient_table: return "InsufficientTable";
    case errc::precision_loss: return "PrecisionLoss";
    case errc::no_collision: return "NoCollision";
    case errc::height_not_attained: return "HeightNotAttained";
    case errc::invariant_violation: return "InvariantViolation";
    case errc::worklist_overflow: return "WorklistOverflow";
    case errc::no_chain_found: return "NoChainFound";
    case errc::none_found: return "NoneFound";
    case errc::no_complex_root: return "NoComplexRoot";
    case errc::point_not_on_curve: return "PointNotOnCurve";
    case errc::precondition: return "Precondition";
    case errc::config: return "ConfigError";
    }
    return "Unknown";
}

class error : public std::runtime_error {
public:
    error(errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
    errc code() const noexcept { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw error(code, what); }

inline void require(bool cond, const std::string& what) {
    if (!cond) fail(errc::precondition, what);
}

} // namespace atr
