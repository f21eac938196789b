#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sf/chart.hpp"
#include "sf/stackel.hpp"
#include "sf/zero.hpp"

namespace sf {

// {F,G} = sum_i dF/dq^i dG/dp_i - dF/dp_i dG/dq^i
ExprPtr poisson_bracket(const ExprPtr& F, const ExprPtr& G, const Chart& chart);

struct InvolutionTable {
    std::size_t size = 0;
    // verdict for i<j at flat index; symmetric closure implied
    std::vector<ZeroVerdict> upper;

    const ZeroVerdict& at(std::size_t i, std::size_t j) const;
    bool all_zero() const;
};

InvolutionTable involution_table(const HamiltonianSystem& sys, const ZeroConfig& cfg = {});

// components ordered q-dots then p-dots
struct VectorField {
    Chart chart;
    std::vector<ExprPtr> comp;
};

VectorField hamiltonian_vector_field(const ExprPtr& H, const Chart& chart);

// Forward map lists target variables (Q1..Qn, P1..Pn) as expressions in the
// source chart. The inverse, when absent, is derived for triangular
// gauge-style maps by back-substitution.
struct CanonicalTransform {
    Chart source;
    Chart target;
    std::vector<ExprPtr> forward;
    std::optional<std::vector<ExprPtr>> inverse;  // source vars in target vars
};

struct CanonicalFailure {
    std::string lhs, rhs;  // the two target variables of the offending bracket
    ZeroVerdict verdict;
};

struct CanonicalReport {
    bool ok = true;
    std::vector<CanonicalFailure> failures;
    bool inconclusive = false;
};

CanonicalReport verify_canonical(const CanonicalTransform& t, const ZeroConfig& cfg = {});

// source variable -> expression in target variables
std::vector<ExprPtr> transform_inverse(const CanonicalTransform& t);

// Hamiltonians rewritten in target variables. `verified` records whether
// verify_canonical was run by the caller.
HamiltonianSystem push_forward(const HamiltonianSystem& sys, const CanonicalTransform& t,
                               bool verified = false);

}  // namespace sf
