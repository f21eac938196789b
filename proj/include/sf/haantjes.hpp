#pragma once

#include <string>
#include <vector>

#include "sf/chart.hpp"
#include "sf/matrix.hpp"
#include "sf/poisson.hpp"
#include "sf/stackel.hpp"
#include "sf/zero.hpp"

namespace sf {

// (1,1)-tensor field on a phase-space chart: K^i_j acting on the coordinate
// frame, indices running over (q1..qn, p1..pn).
struct TensorField11 {
    Chart chart;
    ExprMatrix K;  // dim x dim
};

// Vector-valued antisymmetric 2-form: components T^k_{ij}, stored for i<j.
class TorsionField {
public:
    TorsionField(Chart chart, std::size_t dim);

    std::size_t dim() const { return dim_; }
    const Chart& chart() const { return chart_; }

    // signed access; zero on the diagonal
    ExprPtr at(std::size_t k, std::size_t i, std::size_t j) const;
    void set(std::size_t k, std::size_t i, std::size_t j, ExprPtr v);

    // all stored components pass is_zero
    bool all_zero(const ZeroConfig& cfg, std::string* first_failure = nullptr) const;

private:
    Chart chart_;
    std::size_t dim_;
    std::vector<ExprPtr> c_;  // k major, then (i<j) pairs
    std::size_t pair_index(std::size_t i, std::size_t j) const;
};

VectorField lie_bracket(const VectorField& X, const VectorField& Y);

TorsionField nijenhuis_torsion(const TensorField11& K);

// Built from the Nijenhuis components by tensoriality (arguments expanded in
// the coordinate frame), not by re-deriving brackets of composite fields.
TorsionField haantjes_torsion(const TensorField11& K);

struct PivotError : ExprError {
    int component;
    PivotError(const std::string& msg, int comp) : ExprError(msg), component(comp) {}
};

// Diagonal operators with doubled eigenvalue fields
//   mu_i = (dH_j/dp_i) / (dH_pivot/dp_i)
// on the q_i and p_i slots, one operator per family member. pivot is 0-based.
std::vector<TensorField11> build_chain_operators(const HamiltonianSystem& sys, int pivot,
                                                 const ZeroConfig& cfg = {});

struct ChainReport {
    bool ok = true;
    std::vector<std::pair<std::size_t, std::size_t>> offending;  // variable index pairs
    std::vector<ZeroVerdict> verdicts;
};

// d(K^T dH) = 0: curl of the 1-form alpha_j = sum_i K^i_j d_i H.
ChainReport chain_check(const TensorField11& K, const ExprPtr& H, const ZeroConfig& cfg = {});

struct CompatReport {
    bool ok = true;
    std::vector<std::pair<std::size_t, std::size_t>> offending;
};

// Omega K = K^T Omega with the constant Darboux matrix.
CompatReport compatibility_check(const TensorField11& K, const ZeroConfig& cfg = {});

struct AlgebraReport {
    bool ok = true;
    // human-readable names of failing closure checks
    std::vector<std::string> failures;
};

// Pairwise commutators, Haantjes torsion of products, and Haantjes torsion of
// f*K_a + g*K_b for the provided coefficient samples.
AlgebraReport algebra_checks(const std::vector<TensorField11>& ops,
                             const std::vector<std::pair<ExprPtr, ExprPtr>>& samples,
                             const ZeroConfig& cfg = {});

struct Eq43Mismatch {
    std::size_t j, r;  // 0-based family slot and component
    std::string detail;
};

struct Eq43Report {
    bool consistent = true;
    std::vector<Eq43Mismatch> mismatches;
};

// Cross-check of the cofactor-quotient eigenvalue formula against the
// derivative quotient actually used by build_chain_operators. Informational:
// the two routes agree for momentum-free matrices and may differ otherwise.
Eq43Report eigenvalue_formula_cross_check(const LiftMatrix& m, const StackelFunctions& f,
                                          const HamiltonianSystem& sys, int pivot,
                                          const ZeroConfig& cfg = {});

}  // namespace sf
