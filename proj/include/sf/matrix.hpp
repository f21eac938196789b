#pragma once

#include <vector>

#include "sf/expr.hpp"
#include "sf/zero.hpp"

namespace sf {

// Dense matrix of expressions. Sizes in this project stay small (<= 8x8),
// so everything is done directly.
class ExprMatrix {
public:
    ExprMatrix() = default;
    ExprMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), a_(rows * cols, zero()) {}

    static ExprMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    const ExprPtr& at(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }
    ExprPtr& at(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<ExprPtr> a_;
};

struct SingularMatrixError : ExprError {
    using ExprError::ExprError;
};

ExprMatrix mat_mul(const ExprMatrix& a, const ExprMatrix& b);
ExprMatrix mat_sub(const ExprMatrix& a, const ExprMatrix& b);
ExprMatrix mat_transpose(const ExprMatrix& a);
ExprMatrix mat_scale(const ExprPtr& s, const ExprMatrix& a);
ExprMatrix mat_add(const ExprMatrix& a, const ExprMatrix& b);
ExprMatrix mat_simplify(const ExprMatrix& a);

ExprPtr determinant(const ExprMatrix& m);
ExprPtr cofactor(const ExprMatrix& m, std::size_t i, std::size_t j);
ExprMatrix adjugate(const ExprMatrix& m);

// adjugate(m) / det(m); throws SingularMatrixError when the determinant is
// identically zero under the randomized test
ExprMatrix invert(const ExprMatrix& m, const ZeroConfig& cfg = {});

}  // namespace sf
