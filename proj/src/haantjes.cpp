#include "sf/haantjes.hpp"

#include <sstream>

namespace sf {

TorsionField::TorsionField(Chart chart, std::size_t dim)
    : chart_(std::move(chart)), dim_(dim), c_(dim * dim * (dim - 1) / 2, zero()) {}

std::size_t TorsionField::pair_index(std::size_t i, std::size_t j) const {
    // index of (i,j), i<j, in row-major upper-triangle order
    return i * dim_ - i * (i + 1) / 2 + (j - i - 1);
}

ExprPtr TorsionField::at(std::size_t k, std::size_t i, std::size_t j) const {
    if (i == j) return zero();
    if (i < j) return c_[k * (dim_ * (dim_ - 1) / 2) + pair_index(i, j)];
    return neg(c_[k * (dim_ * (dim_ - 1) / 2) + pair_index(j, i)]);
}

void TorsionField::set(std::size_t k, std::size_t i, std::size_t j, ExprPtr v) {
    if (i >= j) throw ExprError("torsion components are stored for i<j");
    c_[k * (dim_ * (dim_ - 1) / 2) + pair_index(i, j)] = std::move(v);
}

bool TorsionField::all_zero(const ZeroConfig& cfg, std::string* first_failure) const {
    for (std::size_t k = 0; k < dim_; ++k)
        for (std::size_t i = 0; i < dim_; ++i)
            for (std::size_t j = i + 1; j < dim_; ++j) {
                ZeroVerdict v = is_zero(at(k, i, j), cfg);
                if (!v.ok()) {
                    if (first_failure) {
                        std::ostringstream os;
                        os << "component T^" << k + 1 << "_(" << i + 1 << "," << j + 1 << ")";
                        *first_failure = os.str();
                    }
                    return false;
                }
            }
    return true;
}

VectorField lie_bracket(const VectorField& X, const VectorField& Y) {
    if (X.chart.vars() != Y.chart.vars()) throw ChartError("lie bracket needs a common chart");
    const auto vars = X.chart.vars();
    VectorField out;
    out.chart = X.chart;
    for (std::size_t k = 0; k < vars.size(); ++k) {
        std::vector<ExprPtr> terms;
        for (std::size_t i = 0; i < vars.size(); ++i) {
            terms.push_back(mul(X.comp[i], differentiate(Y.comp[k], vars[i])));
            terms.push_back(neg(mul(Y.comp[i], differentiate(X.comp[k], vars[i]))));
        }
        out.comp.push_back(simplify(make_sum(std::move(terms))));
    }
    return out;
}

TorsionField nijenhuis_torsion(const TensorField11& K) {
    const auto vars = K.chart.vars();
    const std::size_t d = vars.size();
    if (K.K.rows() != d || K.K.cols() != d)
        throw ExprError("tensor size does not match chart dimension");

    // cache the entry derivatives d_a K^k_j
    std::vector<ExprPtr> dK(d * d * d);  // [a][k][j]
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t k = 0; k < d; ++k)
            for (std::size_t j = 0; j < d; ++j)
                dK[(a * d + k) * d + j] = differentiate(K.K.at(k, j), vars[a]);
    auto dk = [&](std::size_t a, std::size_t k, std::size_t j) -> const ExprPtr& {
        return dK[(a * d + k) * d + j];
    };

    TorsionField t(K.chart, d);
    for (std::size_t k = 0; k < d; ++k)
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = i + 1; j < d; ++j) {
                std::vector<ExprPtr> terms;
                for (std::size_t a = 0; a < d; ++a) {
                    // [K d_i, K d_j]^k
                    terms.push_back(mul(K.K.at(a, i), dk(a, k, j)));
                    terms.push_back(neg(mul(K.K.at(a, j), dk(a, k, i))));
                    // -K([d_i, K d_j] + [K d_i, d_j])^k
                    terms.push_back(neg(mul(K.K.at(k, a), dk(i, a, j))));
                    terms.push_back(mul(K.K.at(k, a), dk(j, a, i)));
                }
                t.set(k, i, j, simplify(make_sum(std::move(terms))));
            }
    return t;
}

TorsionField haantjes_torsion(const TensorField11& K) {
    const auto vars = K.chart.vars();
    const std::size_t d = vars.size();
    TorsionField tau = nijenhuis_torsion(K);

    TorsionField h(K.chart, d);
    for (std::size_t m = 0; m < d; ++m)
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = i + 1; j < d; ++j) {
                std::vector<ExprPtr> terms;
                for (std::size_t a = 0; a < d; ++a) {
                    // K^2 tau(d_i, d_j)
                    for (std::size_t b = 0; b < d; ++b) {
                        if (!is_zero_literal(K.K.at(m, a)) && !is_zero_literal(K.K.at(a, b)))
                            terms.push_back(mul(K.K.at(m, a), K.K.at(a, b), tau.at(b, i, j)));
                        // tau(K d_i, K d_j) by tensoriality
                        if (!is_zero_literal(K.K.at(a, i)) && !is_zero_literal(K.K.at(b, j)))
                            terms.push_back(mul(K.K.at(a, i), K.K.at(b, j), tau.at(m, a, b)));
                        // -K(tau(d_i, K d_j) + tau(K d_i, d_j))
                        if (!is_zero_literal(K.K.at(m, a)) && !is_zero_literal(K.K.at(b, j)))
                            terms.push_back(
                                neg(mul(K.K.at(m, a), K.K.at(b, j), tau.at(a, i, b))));
                        if (!is_zero_literal(K.K.at(m, a)) && !is_zero_literal(K.K.at(b, i)))
                            terms.push_back(
                                neg(mul(K.K.at(m, a), K.K.at(b, i), tau.at(a, b, j))));
                    }
                }
                h.set(m, i, j, simplify(make_sum(std::move(terms))));
            }
    return h;
}

std::vector<TensorField11> build_chain_operators(const HamiltonianSystem& sys, int pivot,
                                                 const ZeroConfig& cfg) {
    const int n = sys.chart.dof();
    if (pivot < 0 || static_cast<std::size_t>(pivot) >= sys.H.size())
        throw ExprError("pivot index out of range");
    const ExprPtr& Hp = sys.H[static_cast<std::size_t>(pivot)];

    std::vector<ExprPtr> dHp(n);
    for (int i = 0; i < n; ++i) {
        dHp[i] = simplify(differentiate(Hp, sys.chart.momenta[i]));
        ZeroVerdict v = is_zero(dHp[i], cfg);
        if (v.ok())
            throw PivotError("pivot Hamiltonian has identically vanishing momentum gradient in " +
                                 sys.chart.momenta[i],
                             i);
    }

    std::vector<TensorField11> out;
    for (const auto& Hj : sys.H) {
        TensorField11 K{sys.chart, ExprMatrix(2 * n, 2 * n)};
        for (int i = 0; i < n; ++i) {
            ExprPtr dHj = differentiate(Hj, sys.chart.momenta[i]);
            ExprPtr mu = simplify(div(dHj, dHp[i]));
            K.K.at(i, i) = mu;
            K.K.at(n + i, n + i) = mu;
        }
        out.push_back(std::move(K));
    }
    return out;
}

ChainReport chain_check(const TensorField11& K, const ExprPtr& H, const ZeroConfig& cfg) {
    const auto vars = K.chart.vars();
    const std::size_t d = vars.size();
    std::vector<ExprPtr> alpha(d);
    for (std::size_t j = 0; j < d; ++j) {
        std::vector<ExprPtr> terms;
        for (std::size_t i = 0; i < d; ++i)
            terms.push_back(mul(K.K.at(i, j), differentiate(H, vars[i])));
        alpha[j] = simplify(make_sum(std::move(terms)));
    }
    ChainReport rep;
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = a + 1; b < d; ++b) {
            ExprPtr curl = sub(differentiate(alpha[b], vars[a]), differentiate(alpha[a], vars[b]));
            ZeroVerdict v = is_zero(curl, cfg);
            rep.verdicts.push_back(v);
            if (!v.ok()) {
                rep.ok = false;
                rep.offending.emplace_back(a, b);
            }
        }
    return rep;
}

CompatReport compatibility_check(const TensorField11& K, const ZeroConfig& cfg) {
    const int n = K.chart.dof();
    const std::size_t d = static_cast<std::size_t>(2 * n);
    // Darboux matrix of omega = sum dp_i ^ dq^i on the (q,p) frame
    ExprMatrix omega(d, d);
    for (int i = 0; i < n; ++i) {
        omega.at(static_cast<std::size_t>(i), static_cast<std::size_t>(n + i)) = make_int(-1);
        omega.at(static_cast<std::size_t>(n + i), static_cast<std::size_t>(i)) = one();
    }
    ExprMatrix lhs = mat_mul(omega, K.K);
    ExprMatrix rhs = mat_mul(mat_transpose(K.K), omega);
    CompatReport rep;
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            ZeroVerdict v = is_zero(sub(lhs.at(i, j), rhs.at(i, j)), cfg);
            if (!v.ok()) {
                rep.ok = false;
                rep.offending.emplace_back(i, j);
            }
        }
    return rep;
}

AlgebraReport algebra_checks(const std::vector<TensorField11>& ops,
                             const std::vector<std::pair<ExprPtr, ExprPtr>>& samples,
                             const ZeroConfig& cfg) {
    AlgebraReport rep;
    auto note_fail = [&](const std::string& what) {
        rep.ok = false;
        rep.failures.push_back(what);
    };
    for (std::size_t a = 0; a < ops.size(); ++a)
        for (std::size_t b = a + 1; b < ops.size(); ++b) {
            const auto& Ka = ops[a];
            const auto& Kb = ops[b];
            ExprMatrix comm = mat_sub(mat_mul(Ka.K, Kb.K), mat_mul(Kb.K, Ka.K));
            bool comm_ok = true;
            for (std::size_t i = 0; i < comm.rows() && comm_ok; ++i)
                for (std::size_t j = 0; j < comm.cols() && comm_ok; ++j)
                    comm_ok = is_zero(comm.at(i, j), cfg).ok();
            if (!comm_ok)
                note_fail("commutator K" + std::to_string(a + 1) + "K" + std::to_string(b + 1));

            TensorField11 prod{Ka.chart, mat_simplify(mat_mul(Ka.K, Kb.K))};
            std::string where;
            if (!haantjes_torsion(prod).all_zero(cfg, &where))
                note_fail("product K" + std::to_string(a + 1) + "K" + std::to_string(b + 1) +
                          " torsion: " + where);

            for (std::size_t s = 0; s < samples.size(); ++s) {
                const auto& [fc, gc] = samples[s];
                TensorField11 combo{
                    Ka.chart,
                    mat_simplify(mat_add(mat_scale(fc, Ka.K), mat_scale(gc, Kb.K)))};
                if (!haantjes_torsion(combo).all_zero(cfg, &where))
                    note_fail("module combo " + std::to_string(s + 1) + " of K" +
                              std::to_string(a + 1) + ",K" + std::to_string(b + 1) +
                              " torsion: " + where);
            }
        }
    if (ops.size() == 1) {
        std::string where;
        if (!haantjes_torsion(ops[0]).all_zero(cfg, &where)) note_fail("torsion: " + where);
    }
    return rep;
}

Eq43Report eigenvalue_formula_cross_check(const LiftMatrix& m, const StackelFunctions& f,
                                          const HamiltonianSystem& sys, int pivot,
                                          const ZeroConfig& cfg) {
    const std::size_t size = m.entries.rows();
    ExprMatrix adj = adjugate(m.entries);  // adj(j,k) = cofactor of entry (k,j)
    Eq43Report rep;
    auto cof_quot = [&](std::size_t j, std::size_t r) -> ExprPtr {
        // cofactor route: (adj_{jr} df_r/dp_r + delta_{jr} d adj_{j,last}/dp_r * f_last)
        const auto& pr = m.chart.momenta[r];
        ExprPtr dfr = differentiate(f.f[r], pr);
        ExprPtr num = mul(adj.at(j, r), dfr);
        if (j == r)
            num = add(num, mul(differentiate(adj.at(j, size - 1), pr), f.f[size - 1]));
        return num;
    };
    for (std::size_t j = 0; j < size; ++j) {
        for (std::size_t r = 0; r < size; ++r) {
            ExprPtr alt = div(cof_quot(j, r), cof_quot(static_cast<std::size_t>(pivot), r));
            ExprPtr quot = div(differentiate(sys.H[j], m.chart.momenta[r]),
                               differentiate(sys.H[static_cast<std::size_t>(pivot)],
                                             m.chart.momenta[r]));
            try {
                ZeroVerdict v = is_zero(sub(alt, quot), cfg);
                if (!v.ok()) {
                    rep.consistent = false;
                    rep.mismatches.push_back(
                        {j, r, "cofactor route gives " + to_string(simplify(alt))});
                }
            } catch (const InconclusiveError&) {
                rep.consistent = false;
                rep.mismatches.push_back({j, r, "cross-check inconclusive (singular samples)"});
            }
        }
    }
    return rep;
}

}  // namespace sf
