#include "sf/matrix.hpp"

namespace sf {

ExprMatrix ExprMatrix::identity(std::size_t n) {
    ExprMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = one();
    return m;
}

ExprMatrix mat_mul(const ExprMatrix& a, const ExprMatrix& b) {
    if (a.cols() != b.rows()) throw ExprError("matrix product size mismatch");
    ExprMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) {
            std::vector<ExprPtr> terms;
            for (std::size_t k = 0; k < a.cols(); ++k)
                terms.push_back(mul(a.at(i, k), b.at(k, j)));
            out.at(i, j) = make_sum(std::move(terms));
        }
    return out;
}

ExprMatrix mat_sub(const ExprMatrix& a, const ExprMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw ExprError("matrix size mismatch");
    ExprMatrix out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out.at(i, j) = sub(a.at(i, j), b.at(i, j));
    return out;
}

ExprMatrix mat_add(const ExprMatrix& a, const ExprMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw ExprError("matrix size mismatch");
    ExprMatrix out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out.at(i, j) = add(a.at(i, j), b.at(i, j));
    return out;
}

ExprMatrix mat_transpose(const ExprMatrix& a) {
    ExprMatrix out(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out.at(j, i) = a.at(i, j);
    return out;
}

ExprMatrix mat_scale(const ExprPtr& s, const ExprMatrix& a) {
    ExprMatrix out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out.at(i, j) = mul(s, a.at(i, j));
    return out;
}

ExprMatrix mat_simplify(const ExprMatrix& a) {
    ExprMatrix out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out.at(i, j) = simplify(a.at(i, j));
    return out;
}

namespace {

ExprMatrix minor_matrix(const ExprMatrix& m, std::size_t row, std::size_t col) {
    ExprMatrix out(m.rows() - 1, m.cols() - 1);
    std::size_t r = 0;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        if (i == row) continue;
        std::size_t c = 0;
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j == col) continue;
            out.at(r, c) = m.at(i, j);
            ++c;
        }
        ++r;
    }
    return out;
}

}  // namespace

ExprPtr determinant(const ExprMatrix& m) {
    if (!m.square()) throw ExprError("determinant of non-square matrix");
    const std::size_t n = m.rows();
    if (n == 1) return m.at(0, 0);
    if (n == 2)
        return sub(mul(m.at(0, 0), m.at(1, 1)), mul(m.at(0, 1), m.at(1, 0)));
    // Laplace expansion along the sparsest row
    std::size_t best_row = 0, best_nonzero = n + 1;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t nz = 0;
        for (std::size_t j = 0; j < n; ++j)
            if (!is_zero_literal(m.at(i, j))) ++nz;
        if (nz < best_nonzero) {
            best_nonzero = nz;
            best_row = i;
        }
    }
    std::vector<ExprPtr> terms;
    for (std::size_t j = 0; j < n; ++j) {
        if (is_zero_literal(m.at(best_row, j))) continue;
        ExprPtr t = mul(m.at(best_row, j), determinant(minor_matrix(m, best_row, j)));
        if ((best_row + j) % 2 == 1) t = neg(t);
        terms.push_back(std::move(t));
    }
    return make_sum(std::move(terms));
}

ExprPtr cofactor(const ExprMatrix& m, std::size_t i, std::size_t j) {
    ExprPtr d = determinant(minor_matrix(m, i, j));
    return (i + j) % 2 == 0 ? d : neg(d);
}

ExprMatrix adjugate(const ExprMatrix& m) {
    if (!m.square()) throw ExprError("adjugate of non-square matrix");
    const std::size_t n = m.rows();
    ExprMatrix out(n, n);
    if (n == 1) {
        out.at(0, 0) = one();
        return out;
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out.at(j, i) = simplify(cofactor(m, i, j));
    return out;
}

ExprMatrix invert(const ExprMatrix& m, const ZeroConfig& cfg) {
    ExprPtr det = simplify(determinant(m));
    ZeroVerdict v = is_zero(det, cfg);
    if (v.ok())
        throw SingularMatrixError("matrix is identically singular (det = " + to_string(det) + ")");
    ExprMatrix adj = adjugate(m);
    // a single shared det^{-1} node keeps the denominator syntactically shared
    ExprPtr dinv = make_power(det, Rat(-1));
    ExprMatrix out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            out.at(i, j) = simplify(mul(adj.at(i, j), dinv));
    return out;
}

}  // namespace sf
