#include "sf/stackel.hpp"

#include <set>
#include <sstream>

namespace sf {

ShapeMode shape_mode_from_string(const std::string& s) {
    if (s == "classical") return ShapeMode::Classical;
    if (s == "lifted") return ShapeMode::Lifted;
    if (s == "generalized") return ShapeMode::Generalized;
    throw ExprError("unknown shape mode: " + s);
}

std::string shape_mode_name(ShapeMode m) {
    switch (m) {
        case ShapeMode::Classical: return "classical";
        case ShapeMode::Lifted: return "lifted";
        case ShapeMode::Generalized: return "generalized";
    }
    return "?";
}

std::string ShapeReport::message() const {
    if (ok) return "ok";
    std::ostringstream os;
    for (const auto& v : violations) {
        os << "entry (" << v.row + 1 << "," << v.col + 1 << "): " << v.detail << "; ";
    }
    return os.str();
}

namespace {

void check_entry_locality(ShapeReport& rep, const ExprPtr& e, std::size_t i, std::size_t j,
                          const std::set<std::string>& allowed) {
    for (const auto& v : free_vars(e)) {
        if (!allowed.count(v)) {
            rep.ok = false;
            rep.violations.push_back({i, j, "stray variable " + v});
        }
    }
}

}  // namespace

ShapeReport validate_shape(const LiftMatrix& m, ShapeMode mode, const ZeroConfig& cfg) {
    ShapeReport rep;
    const std::size_t size = m.entries.rows();
    if (!m.entries.square()) {
        rep.ok = false;
        rep.violations.push_back({0, 0, "matrix is not square"});
        return rep;
    }
    if (size != static_cast<std::size_t>(m.chart.dof()))
        throw ExprError("lift matrix size does not match chart dimension");

    auto row_coord = [&](std::size_t a) { return m.chart.coords[a]; };
    auto row_momentum = [&](std::size_t a) { return m.chart.momenta[a]; };

    switch (mode) {
        case ShapeMode::Classical:
            for (std::size_t i = 0; i < size; ++i)
                for (std::size_t j = 0; j < size; ++j)
                    check_entry_locality(rep, m.entries.at(i, j), i, j, {row_coord(i)});
            break;
        case ShapeMode::Generalized:
            for (std::size_t i = 0; i < size; ++i)
                for (std::size_t j = 0; j < size; ++j)
                    check_entry_locality(rep, m.entries.at(i, j), i, j,
                                         {row_coord(i), row_momentum(i)});
            break;
        case ShapeMode::Lifted: {
            if (size < 2) {
                rep.ok = false;
                rep.violations.push_back({0, 0, "lifted shape needs size >= 2"});
                break;
            }
            const std::size_t n = size - 1;
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j)
                    check_entry_locality(rep, m.entries.at(i, j), i, j, {row_coord(i)});
                check_entry_locality(rep, m.entries.at(i, n), i, n,
                                     {row_coord(i), row_momentum(i)});
            }
            for (std::size_t j = 0; j < n; ++j) {
                if (!is_zero_literal(simplify(m.entries.at(n, j)))) {
                    rep.ok = false;
                    rep.violations.push_back({n, j, "last row must vanish off the corner"});
                }
            }
            check_entry_locality(rep, m.entries.at(n, n), n, n, {row_coord(n), row_momentum(n)});
            ZeroVerdict corner = is_zero(m.entries.at(n, n), cfg);
            if (corner.ok()) {
                rep.ok = false;
                rep.violations.push_back({n, n, "corner entry vanishes identically"});
            }
            break;
        }
    }
    return rep;
}

ShapeReport validate_functions(const StackelFunctions& f, const Chart& chart) {
    ShapeReport rep;
    if (f.f.size() != static_cast<std::size_t>(chart.dof()))
        throw ExprError("need one separated generator per degree of freedom");
    for (std::size_t k = 0; k < f.f.size(); ++k)
        check_entry_locality(rep, f.f[k], k, 0, {chart.coords[k], chart.momenta[k]});
    return rep;
}

HamiltonianSystem akn_system(const LiftMatrix& m, const StackelFunctions& f,
                             const ZeroConfig& cfg) {
    if (f.f.size() != m.entries.rows()) throw ExprError("generator count does not match matrix");
    ExprMatrix inv = invert(m.entries, cfg);
    HamiltonianSystem sys;
    sys.chart = m.chart;
    sys.prov = {ProvenanceKind::Generated, "solved S*H = f by adjugate inverse"};
    for (std::size_t j = 0; j < inv.rows(); ++j) {
        std::vector<ExprPtr> terms;
        for (std::size_t k = 0; k < inv.cols(); ++k) terms.push_back(mul(inv.at(j, k), f.f[k]));
        sys.H.push_back(simplify(make_sum(std::move(terms))));
    }
    return sys;
}

std::vector<ExprPtr> separation_residuals(const LiftMatrix& m, const StackelFunctions& f,
                                          const HamiltonianSystem& sys) {
    if (sys.H.size() != m.entries.rows() || f.f.size() != m.entries.rows())
        throw ExprError("residuals: inconsistent dimensions");
    std::vector<ExprPtr> out;
    for (std::size_t a = 0; a < m.entries.rows(); ++a) {
        std::vector<ExprPtr> terms{f.f[a]};
        for (std::size_t b = 0; b < m.entries.cols(); ++b)
            terms.push_back(neg(mul(m.entries.at(a, b), sys.H[b])));
        out.push_back(simplify(make_sum(std::move(terms))));
    }
    return out;
}

namespace {

std::string slot_name(std::size_t j) { return "H" + std::to_string(j + 1); }

}  // namespace

HamiltonianSystem change_basis(const HamiltonianSystem& sys, const std::vector<ExprPtr>& recipe) {
    SubstMap map;
    for (std::size_t j = 0; j < sys.H.size(); ++j) map.vars[slot_name(j)] = sys.H[j];
    HamiltonianSystem out;
    out.chart = sys.chart;
    out.prov = {ProvenanceKind::Derived, "basis change"};
    for (const auto& r : recipe) {
        for (const auto& v : free_vars(r)) {
            if (sys.chart.owns(v)) continue;
            if (!map.vars.count(v)) throw ExprError("unknown slot or variable in recipe: " + v);
        }
        out.H.push_back(simplify(substitute(r, map)));
    }
    return out;
}

HamiltonianSystem permute_basis(const HamiltonianSystem& sys, const std::vector<int>& perm) {
    HamiltonianSystem out;
    out.chart = sys.chart;
    out.prov = {ProvenanceKind::Derived, "slot permutation"};
    for (int p : perm) {
        if (p < 1 || static_cast<std::size_t>(p) > sys.H.size())
            throw ExprError("permutation index out of range");
        out.H.push_back(sys.H[static_cast<std::size_t>(p - 1)]);
    }
    return out;
}

int momentum_degree(const ExprPtr& H, const Chart& chart) {
    std::set<std::string> ps(chart.momenta.begin(), chart.momenta.end());
    return polynomial_degree(H, ps);
}

}  // namespace sf
