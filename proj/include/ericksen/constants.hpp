#pragma once

#include <stdexcept>
#include <string>

namespace ericksen {

/// Material coefficients of the Ericksen density.
struct ElasticConstants {
    double k1 = 1.0, k2 = 1.0, k3 = 1.0, k4 = 0.0;
    double alpha = 1.0;
    double beta = 1.0;
    double L1 = 0.0, L2 = 0.0, L3 = 0.0, L4 = 0.0;
};

/// Completed-square coefficients of the reorganized density.
struct DerivedConstants {
    double sigma = 0.0;
    double nu = 0.0;
    double kbar1 = 0.0;
    double kbar3 = 0.0;
    double k5 = 0.0;
    double k6 = 0.0;
};

enum class CaseTag { A, B, C };

std::string to_string(CaseTag tag);
/// Accepts "A", "B", "C" (case-insensitive); throws std::invalid_argument otherwise.
CaseTag parse_case(const std::string& text);

/// Throws std::invalid_argument when beta + L1 <= 0 or beta + L2 <= 0.
DerivedConstants derive_constants(const ElasticConstants& c);

/// Rejection of a constant set; `inequality` names the first violated condition
/// ("cond1", "cond2", "positivity:kbar1", "frank:k2>=|k4|", ...).
class ValidationError : public std::invalid_argument {
public:
    ValidationError(std::string inequality, const std::string& what)
        : std::invalid_argument(inequality + ": " + what), inequality_(std::move(inequality)) {}

    const std::string& inequality() const noexcept { return inequality_; }

private:
    std::string inequality_;
};

/// lambda (|grad s|^2 + s^2 |grad n|^2) <= W2 <= Lambda (|grad s|^2 + s^2 |grad n|^2).
struct Coercivity {
    double lambda = 0.0;
    double Lambda = 0.0;
};

/// Checks sign constraints, the case structure, the strict case inequality and positivity, in
/// that order, then returns the sharp coercivity pair. Throws ValidationError.
Coercivity validate(const ElasticConstants& c, CaseTag tag);

/// Sharp coercivity pair of the quadratic form, without any admissibility checks.
Coercivity coercivity_bounds(const ElasticConstants& c);

struct ReducedCase {
    CaseTag tag;
    ElasticConstants constants;
    /// Multiple of the null Lagrangian div(s^2((grad n)n - (div n)n)) added by the reduction.
    double null_lagrangian_coeff = 0.0;
};

/// Rewrites the L1/L2 terms through |grad s|^2 = (grad s.n)^2 + |grad s ^ n|^2 and removes
/// L4 (case A), L3 (case B) or both (case C, only when L4 = -L3) with a null Lagrangian.
/// Throws ValidationError when no case applies.
ReducedCase reduce_case(const ElasticConstants& c);

}  // namespace ericksen
