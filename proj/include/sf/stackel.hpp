#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sf/chart.hpp"
#include "sf/matrix.hpp"
#include "sf/zero.hpp"

namespace sf {

// Row-locality disciplines for a lifting matrix on a chart of matching size:
//   Classical   — row a depends only on q^a
//   Lifted      — rows 1..n of columns 1..n depend only on q^a, the last
//                 column of row a on (q^a, p_a), the last row is zero except
//                 its corner entry, which must not vanish identically
//   Generalized — row a depends on (q^a, p_a) throughout
enum class ShapeMode { Classical, Lifted, Generalized };

ShapeMode shape_mode_from_string(const std::string& s);
std::string shape_mode_name(ShapeMode m);

struct LiftMatrix {
    Chart chart;         // chart of the full (lifted) phase space; size == chart.dof()
    ExprMatrix entries;
    ShapeMode mode = ShapeMode::Generalized;
};

struct ShapeViolation {
    std::size_t row, col;
    std::string detail;
};

struct ShapeReport {
    bool ok = true;
    std::vector<ShapeViolation> violations;
    std::string message() const;
};

ShapeReport validate_shape(const LiftMatrix& m, ShapeMode mode, const ZeroConfig& cfg = {});

// Separated generators: f[k] may depend only on (q^{k+1}, p_{k+1}).
struct StackelFunctions {
    std::vector<ExprPtr> f;
};

ShapeReport validate_functions(const StackelFunctions& f, const Chart& chart);

enum class ProvenanceKind { Generated, Manual, Derived };

struct Provenance {
    ProvenanceKind kind = ProvenanceKind::Manual;
    std::string note;
};

struct HamiltonianSystem {
    Chart chart;
    std::vector<ExprPtr> H;
    Provenance prov;
};

// Solve S * H = f through the adjugate inverse: H_j = sum_k (S^-1)_{jk} f_k.
HamiltonianSystem akn_system(const LiftMatrix& m, const StackelFunctions& f,
                             const ZeroConfig& cfg = {});

// f_a - <row_a(L), H> for every row a.
std::vector<ExprPtr> separation_residuals(const LiftMatrix& m, const StackelFunctions& f,
                                          const HamiltonianSystem& sys);

// New family from expressions in slots H1..Hm and chart variables.
HamiltonianSystem change_basis(const HamiltonianSystem& sys, const std::vector<ExprPtr>& recipe);

// Reorder slots: out[j] = sys.H[perm[j]-1]; perm is 1-based.
HamiltonianSystem permute_basis(const HamiltonianSystem& sys, const std::vector<int>& perm);

// Max momentum degree of H, or -1 when not polynomial in the momenta.
int momentum_degree(const ExprPtr& H, const Chart& chart);

}  // namespace sf
