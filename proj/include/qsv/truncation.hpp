#pragma once

#include <stdexcept>
#include <string>

namespace qsv {

/// Tail-termination rules and precision targets for infinite sums and
/// products. A series is considered converged once `consecutive_small`
/// successive terms fall below max(abs_floor, rel_floor * |partial sum|).
struct TruncationPolicy {
    double abs_floor = 1e-16;
    double rel_floor = 1e-15;
    int consecutive_small = 3;
    long max_terms = 10000;

    void validate() const {
        if (!(abs_floor > 0.0) || !(rel_floor > 0.0))
            throw std::invalid_argument("TruncationPolicy: floors must be positive");
        if (consecutive_small < 1)
            throw std::invalid_argument("TruncationPolicy: consecutive_small must be >= 1");
        if (max_terms < 1)
            throw std::invalid_argument("TruncationPolicy: max_terms must be >= 1");
    }

    TruncationPolicy with_max_terms(long m) const {
        TruncationPolicy p = *this;
        p.max_terms = m;
        return p;
    }
};

inline const TruncationPolicy kDefaultPolicy{};

// Tighter policy for series nested inside other sums or integrands, so the
// inner truncation error does not dominate the outer tolerance.
inline const TruncationPolicy kInnerPolicy{1e-18, 1e-16, 3, 40000};

/// Vanishing denominator, pole, or otherwise invalid parameter point.
class DomainError : public std::domain_error {
 public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// Nonterminating series outside its convergence region, or a tail that
/// does not decay.
class DivergenceError : public std::runtime_error {
 public:
    explicit DivergenceError(const std::string& what) : std::runtime_error(what) {}
};

/// Term budget exceeded before convergence. Carries the partial value.
class TruncationError : public std::runtime_error {
 public:
    TruncationError(const std::string& what, double partial, long terms)
        : std::runtime_error(what), partial_(partial), terms_(terms) {}
    double partial() const { return partial_; }
    long terms() const { return terms_; }

 private:
    double partial_;
    long terms_;
};

}  // namespace qsv
