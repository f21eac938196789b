#pragma once

#include <map>
#include <optional>
#include <string>

#include "sf/expr.hpp"

namespace sf {

// Evaluation point: exact rational values for variables plus replacement
// bodies for opaque symbols. Derivatives of replacement bodies are cached.
struct Binding {
    std::map<std::string, Rat> vars;
    std::map<std::string, OpaqueDef> opaques;

    mutable std::map<std::pair<std::string, std::vector<int>>, ExprPtr> body_cache;

    const ExprPtr& derived_opaque_body(const std::string& symbol,
                                       const std::vector<int>& deriv) const;
    std::string describe() const;
};

struct SingularPointError : ExprError {
    std::string subexpression;
    explicit SingularPointError(const std::string& sub)
        : ExprError("singular point while evaluating " + sub), subexpression(sub) {}
};

struct UnboundSymbolError : ExprError {
    using ExprError::ExprError;
};

struct NotExactError : ExprError {
    using ExprError::ExprError;
};

// True when e evaluates within rational arithmetic (no exp, all exponents
// integers; opaque replacement bodies are checked the same way).
bool exact_evaluable(const ExprPtr& e, const Binding& b);

Rat eval_exact(const ExprPtr& e, const Binding& b);

// Float evaluation; when max_mag is non-null it receives the largest
// intermediate magnitude (for residual scaling).
double eval_float(const ExprPtr& e, const Binding& b, double* max_mag = nullptr);

}  // namespace sf
