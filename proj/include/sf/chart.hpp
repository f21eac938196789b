#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sf/expr.hpp"

namespace sf {

// Ordered canonical chart: coordinate i is conjugate to momentum i under
// the Darboux form. Variable order everywhere is q1..qn, p1..pn.
struct Chart {
    std::vector<std::string> coords;
    std::vector<std::string> momenta;

    static Chart make(std::vector<std::string> coords, std::vector<std::string> momenta);

    int dof() const { return static_cast<int>(coords.size()); }
    int dim() const { return 2 * dof(); }

    std::vector<std::string> vars() const;
    std::optional<int> coord_index(const std::string& name) const;
    std::optional<int> momentum_index(const std::string& name) const;
    bool owns(const std::string& name) const;

    // free variables of e that are not chart variables
    std::vector<std::string> foreign_vars(const ExprPtr& e) const;
};

struct ChartError : ExprError {
    using ExprError::ExprError;
};

}  // namespace sf
