#include "sf/poisson.hpp"

namespace sf {

ExprPtr poisson_bracket(const ExprPtr& F, const ExprPtr& G, const Chart& chart) {
    std::vector<ExprPtr> terms;
    for (int i = 0; i < chart.dof(); ++i) {
        const auto& q = chart.coords[i];
        const auto& p = chart.momenta[i];
        ExprPtr a = mul(differentiate(F, q), differentiate(G, p));
        ExprPtr b = mul(differentiate(F, p), differentiate(G, q));
        terms.push_back(sub(std::move(a), std::move(b)));
    }
    return simplify(make_sum(std::move(terms)));
}

const ZeroVerdict& InvolutionTable::at(std::size_t i, std::size_t j) const {
    if (i == j) {
        static const ZeroVerdict diag{ZeroState::ProvenZero};
        return diag;
    }
    if (i > j) std::swap(i, j);
    std::size_t idx = 0;
    for (std::size_t a = 0; a < size; ++a)
        for (std::size_t b = a + 1; b < size; ++b) {
            if (a == i && b == j) return upper[idx];
            ++idx;
        }
    throw ExprError("involution table index out of range");
}

bool InvolutionTable::all_zero() const {
    for (const auto& v : upper)
        if (!v.ok()) return false;
    return true;
}

InvolutionTable involution_table(const HamiltonianSystem& sys, const ZeroConfig& cfg) {
    InvolutionTable t;
    t.size = sys.H.size();
    for (std::size_t i = 0; i < sys.H.size(); ++i)
        for (std::size_t j = i + 1; j < sys.H.size(); ++j)
            t.upper.push_back(is_zero(poisson_bracket(sys.H[i], sys.H[j], sys.chart), cfg));
    return t;
}

VectorField hamiltonian_vector_field(const ExprPtr& H, const Chart& chart) {
    VectorField f;
    f.chart = chart;
    for (int i = 0; i < chart.dof(); ++i)
        f.comp.push_back(simplify(differentiate(H, chart.momenta[i])));
    for (int i = 0; i < chart.dof(); ++i)
        f.comp.push_back(simplify(neg(differentiate(H, chart.coords[i]))));
    return f;
}

CanonicalReport verify_canonical(const CanonicalTransform& t, const ZeroConfig& cfg) {
    if (t.source.dof() != t.target.dof())
        throw ChartError("canonical transform charts must have equal dimension");
    const int n = t.source.dof();
    if (t.forward.size() != static_cast<std::size_t>(2 * n))
        throw ExprError("forward map must cover every target variable");
    CanonicalReport rep;
    auto tvars = t.target.vars();
    auto bracket_check = [&](int a, int b, const Rat& want) {
        ExprPtr pb = poisson_bracket(t.forward[a], t.forward[b], t.source);
        ExprPtr res = sub(pb, make_rational(want));
        try {
            ZeroVerdict v = is_zero(res, cfg);
            if (!v.ok()) {
                rep.ok = false;
                rep.failures.push_back({tvars[a], tvars[b], v});
            }
        } catch (const InconclusiveError&) {
            rep.ok = false;
            rep.inconclusive = true;
            rep.failures.push_back({tvars[a], tvars[b], {}});
        }
    };
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            bracket_check(i, j, Rat(0));          // {Q_i, Q_j}
            bracket_check(n + i, n + j, Rat(0));  // {P_i, P_j}
        }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) bracket_check(i, n + j, Rat(i == j ? 1 : 0));  // {Q_i, P_j}
    return rep;
}

std::vector<ExprPtr> transform_inverse(const CanonicalTransform& t) {
    if (t.inverse) return *t.inverse;
    // Back-substitution for triangular maps: each forward entry is
    // source_var + (terms in already-solved source variables).
    const auto svars = t.source.vars();
    const auto tvars = t.target.vars();
    std::map<std::string, ExprPtr> solved;  // source var -> expr in target vars
    std::vector<bool> used(t.forward.size(), false);

    auto try_solve = [&](std::size_t idx) -> bool {
        const ExprPtr& f = t.forward[idx];
        ExprPtr target_var = make_var(tvars[idx]);
        // candidate split: f = candidate + rest
        std::vector<ExprPtr> terms = f->kind == Kind::Sum ? f->kids : std::vector<ExprPtr>{f};
        for (std::size_t ci = 0; ci < terms.size(); ++ci) {
            const ExprPtr& cand = terms[ci];
            if (cand->kind != Kind::Var || solved.count(cand->name) ||
                !t.source.owns(cand->name))
                continue;
            // remaining terms must only involve solved source variables
            bool okrest = true;
            std::vector<ExprPtr> rest;
            for (std::size_t cj = 0; cj < terms.size(); ++cj) {
                if (cj == ci) continue;
                for (const auto& v : free_vars(terms[cj]))
                    if (t.source.owns(v) && !solved.count(v)) okrest = false;
                rest.push_back(terms[cj]);
            }
            if (!okrest) continue;
            SubstMap m;
            for (const auto& [sv, te] : solved) m.vars[sv] = te;
            ExprPtr solved_expr = sub(target_var, substitute(make_sum(rest), m));
            solved[cand->name] = simplify(solved_expr);
            return true;
        }
        return false;
    };

    bool progress = true;
    while (progress) {
        progress = false;
        for (std::size_t i = 0; i < t.forward.size(); ++i) {
            if (used[i]) continue;
            if (try_solve(i)) {
                used[i] = true;
                progress = true;
            }
        }
    }
    std::vector<ExprPtr> out;
    for (const auto& sv : svars) {
        auto it = solved.find(sv);
        if (it == solved.end())
            throw ExprError("transform inverse unavailable and not derivable for " + sv);
        out.push_back(it->second);
    }
    return out;
}

HamiltonianSystem push_forward(const HamiltonianSystem& sys, const CanonicalTransform& t,
                               bool verified) {
    auto inv = transform_inverse(t);
    const auto svars = t.source.vars();
    SubstMap m;
    for (std::size_t i = 0; i < svars.size(); ++i) m.vars[svars[i]] = inv[i];
    HamiltonianSystem out;
    out.chart = t.target;
    out.prov = {ProvenanceKind::Derived,
                verified ? "push-forward along verified canonical transform"
                         : "push-forward (canonicity not verified)"};
    for (const auto& H : sys.H) out.H.push_back(simplify(substitute(H, m)));
    return out;
}

}  // namespace sf
