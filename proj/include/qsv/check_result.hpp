#pragma once

#include <cmath>
#include <string>

namespace qsv {

enum class CheckStatus { pass, fail, skipped_pole, diverged };

inline const char* to_string(CheckStatus s) {
    switch (s) {
        case CheckStatus::pass: return "pass";
        case CheckStatus::fail: return "fail";
        case CheckStatus::skipped_pole: return "skipped-pole";
        case CheckStatus::diverged: return "diverged";
    }
    return "unknown";
}

/// Outcome of verifying one identity instance: both sides, their absolute
/// and relative deviation, and diagnostics.
struct CheckResult {
    double lhs = 0.0;
    double rhs = 0.0;
    double abs_err = 0.0;
    double rel_err = 0.0;
    CheckStatus status = CheckStatus::fail;
    long terms_used = 0;
    std::string note;

    bool passed() const { return status == CheckStatus::pass; }
};

inline CheckResult make_check(double lhs, double rhs, double tol, long terms_used = 0,
                              std::string note = {}) {
    CheckResult r;
    r.lhs = lhs;
    r.rhs = rhs;
    r.abs_err = std::fabs(lhs - rhs);
    r.rel_err = r.abs_err / std::max({std::fabs(lhs), std::fabs(rhs), 1e-300});
    r.status = (std::isfinite(lhs) && std::isfinite(rhs) && r.rel_err <= tol)
                   ? CheckStatus::pass
                   : CheckStatus::fail;
    r.terms_used = terms_used;
    r.note = std::move(note);
    return r;
}

inline CheckResult skipped_pole_result(std::string note) {
    CheckResult r;
    r.status = CheckStatus::skipped_pole;
    r.note = std::move(note);
    return r;
}

inline CheckResult diverged_result(std::string note) {
    CheckResult r;
    r.status = CheckStatus::diverged;
    r.note = std::move(note);
    return r;
}

}  // namespace qsv
