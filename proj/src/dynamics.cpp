#include "sf/dynamics.hpp"

#include <cmath>
#include <functional>
#include <ostream>
#include <unordered_map>

#include "sf/poisson.hpp"

namespace sf {

Tape Tape::compile(const ExprPtr& e, const std::vector<std::string>& var_order) {
    Tape t;
    std::unordered_map<const Expr*, std::int32_t> slot;

    std::function<std::int32_t(const ExprPtr&)> emit = [&](const ExprPtr& n) -> std::int32_t {
        if (auto it = slot.find(n.get()); it != slot.end()) return it->second;
        auto out = [&](Instr ins) {
            t.code_.push_back(ins);
            std::int32_t s = static_cast<std::int32_t>(t.code_.size() - 1);
            slot.emplace(n.get(), s);
            return s;
        };
        switch (n->kind) {
            case Kind::Rational: return out({Op::Const, 0, 0, n->value_d, 0});
            case Kind::Var: {
                for (std::size_t i = 0; i < var_order.size(); ++i)
                    if (var_order[i] == n->name)
                        return out({Op::Load, static_cast<std::int32_t>(i), 0, 0, 0});
                throw ExprError("tape: variable not in order list: " + n->name);
            }
            case Kind::Opaque: throw ExprError("tape: opaque symbol not instantiated: " + n->name);
            case Kind::Exp: {
                std::int32_t a = emit(n->kids[0]);
                return out({Op::Exp, a, 0, 0, 0});
            }
            case Kind::Power: {
                std::int32_t a = emit(n->kids[0]);
                if (rat_is_integer(n->exponent) && rat_exponent_small(n->exponent, 64))
                    return out({Op::PowInt, a, 0, 0, n->exponent.get_num().get_si()});
                return out({Op::PowReal, a, 0, rat_to_double(n->exponent), 0});
            }
            case Kind::Sum:
            case Kind::Product: {
                std::int32_t acc = emit(n->kids[0]);
                for (std::size_t i = 1; i < n->kids.size(); ++i) {
                    std::int32_t b = emit(n->kids[i]);
                    t.code_.push_back({n->kind == Kind::Sum ? Op::Add : Op::Mul, acc, b, 0, 0});
                    acc = static_cast<std::int32_t>(t.code_.size() - 1);
                }
                slot.emplace(n.get(), acc);
                return acc;
            }
        }
        throw ExprError("tape: unreachable");
    };
    emit(e);
    t.regs_.resize(t.code_.size());
    return t;
}

double Tape::eval(std::span<const double> vars) const {
    double* r = regs_.data();
    for (std::size_t i = 0; i < code_.size(); ++i) {
        const Instr& ins = code_[i];
        switch (ins.op) {
            case Op::Const: r[i] = ins.imm; break;
            case Op::Load: r[i] = vars[static_cast<std::size_t>(ins.a)]; break;
            case Op::Add: r[i] = r[ins.a] + r[ins.b]; break;
            case Op::Mul: r[i] = r[ins.a] * r[ins.b]; break;
            case Op::PowInt: {
                double base = r[ins.a];
                long e = ins.iexp;
                bool invert = e < 0;
                if (invert) e = -e;
                double acc = 1, b = base;
                while (e) {
                    if (e & 1) acc *= b;
                    b *= b;
                    e >>= 1;
                }
                r[i] = invert ? 1.0 / acc : acc;
                break;
            }
            case Op::PowReal: r[i] = std::pow(r[ins.a], ins.imm); break;
            case Op::Exp: r[i] = std::exp(r[ins.a]); break;
        }
    }
    return code_.empty() ? 0.0 : r[code_.size() - 1];
}

ConcretizedSystem concretize(const HamiltonianSystem& sys,
                             const std::map<std::string, OpaqueDef>& inst) {
    ConcretizedSystem cs;
    cs.sys = sys;
    cs.inst = inst;
    SubstMap m;
    m.opaques = inst;
    const auto vars = sys.chart.vars();
    for (const auto& H : sys.H) {
        ExprPtr c = simplify(substitute(H, m));
        if (!opaque_symbols(c).empty())
            throw ExprError("concretize: free opaque symbols remain in " + to_string(c));
        cs.concrete.push_back(c);
        cs.h_tapes.push_back(Tape::compile(c, vars));
    }
    return cs;
}

Method method_from_string(const std::string& s) {
    if (s == "rk4") return Method::RK4;
    if (s == "verlet" || s == "symplectic" || s == "stormer-verlet") return Method::StormerVerlet;
    throw ExprError("unknown integration method: " + s);
}

bool separable_kinetic_potential(const ExprPtr& H, const Chart& chart) {
    ExprPtr s = simplify(H);
    std::vector<ExprPtr> terms = s->kind == Kind::Sum ? s->kids : std::vector<ExprPtr>{s};
    for (const auto& t : terms) {
        bool has_q = false, has_p = false;
        for (const auto& v : free_vars(t)) {
            if (chart.coord_index(v)) has_q = true;
            if (chart.momentum_index(v)) has_p = true;
        }
        if (has_q && has_p) return false;
    }
    return true;
}

namespace {

std::vector<Tape> compile_field(const std::vector<ExprPtr>& comps,
                                const std::vector<std::string>& vars) {
    std::vector<Tape> out;
    out.reserve(comps.size());
    for (const auto& c : comps) out.push_back(Tape::compile(c, vars));
    return out;
}

void check_finite(const std::vector<double>& x, double t) {
    for (double v : x)
        if (!std::isfinite(v)) throw IntegrationError("non-finite state during integration", t);
}

}  // namespace

Trajectory integrate(const ConcretizedSystem& cs, int which, std::span<const double> ic,
                     double T, double dt, Method method) {
    if (dt <= 0) throw ExprError("integration step must be positive");
    if (which < 0 || static_cast<std::size_t>(which) >= cs.concrete.size())
        throw ExprError("flow index out of range");
    const Chart& chart = cs.chart();
    const auto vars = chart.vars();
    const int n = chart.dof();
    if (ic.size() != vars.size()) throw ExprError("initial condition dimension mismatch");

    const ExprPtr& H = cs.concrete[static_cast<std::size_t>(which)];
    Trajectory tr;
    tr.varnames = vars;
    tr.dt = dt;
    tr.steps = static_cast<int>(std::llround(T / dt));

    bool want_symplectic = method == Method::StormerVerlet;
    bool separable = separable_kinetic_potential(H, chart);
    if (want_symplectic && !separable) {
        tr.symplectic_declined = true;
        method = Method::RK4;
    }
    tr.method_used = method == Method::RK4 ? "rk4" : "stormer-verlet";

    VectorField field = hamiltonian_vector_field(H, chart);
    std::vector<Tape> rhs = compile_field(field.comp, vars);

    std::vector<double> x(ic.begin(), ic.end());
    auto record = [&](const std::vector<double>& state) {
        tr.points.push_back(state);
        std::vector<double> hv;
        hv.reserve(cs.h_tapes.size());
        for (const auto& t : cs.h_tapes) hv.push_back(t.eval(state));
        tr.hvals.push_back(std::move(hv));
    };
    record(x);

    const std::size_t d = vars.size();
    if (method == Method::RK4) {
        std::vector<double> k1(d), k2(d), k3(d), k4(d), tmp(d);
        auto deriv = [&](const std::vector<double>& s, std::vector<double>& out) {
            for (std::size_t i = 0; i < d; ++i) out[i] = rhs[i].eval(s);
        };
        for (int step = 0; step < tr.steps; ++step) {
            deriv(x, k1);
            for (std::size_t i = 0; i < d; ++i) tmp[i] = x[i] + 0.5 * dt * k1[i];
            deriv(tmp, k2);
            for (std::size_t i = 0; i < d; ++i) tmp[i] = x[i] + 0.5 * dt * k2[i];
            deriv(tmp, k3);
            for (std::size_t i = 0; i < d; ++i) tmp[i] = x[i] + dt * k3[i];
            deriv(tmp, k4);
            for (std::size_t i = 0; i < d; ++i)
                x[i] += dt / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
            check_finite(x, tr.time_at(step + 1));
            record(x);
        }
    } else {
        // Stormer-Verlet for H = T(p) + V(q):
        //   p half step, q full step, p half step
        std::vector<Tape> dTdp, dVdq;
        for (int i = 0; i < n; ++i)
            dTdp.push_back(Tape::compile(simplify(differentiate(H, chart.momenta[i])), vars));
        for (int i = 0; i < n; ++i)
            dVdq.push_back(Tape::compile(simplify(differentiate(H, chart.coords[i])), vars));
        for (int step = 0; step < tr.steps; ++step) {
            for (int i = 0; i < n; ++i)
                x[static_cast<std::size_t>(n + i)] -= 0.5 * dt * dVdq[i].eval(x);
            for (int i = 0; i < n; ++i)
                x[static_cast<std::size_t>(i)] += dt * dTdp[i].eval(x);
            for (int i = 0; i < n; ++i)
                x[static_cast<std::size_t>(n + i)] -= 0.5 * dt * dVdq[i].eval(x);
            check_finite(x, tr.time_at(step + 1));
            record(x);
        }
    }
    return tr;
}

std::vector<Drift> conservation_report(const Trajectory& tr) {
    std::vector<Drift> out;
    if (tr.hvals.empty()) return out;
    const std::size_t m = tr.hvals.front().size();
    out.resize(m);
    for (std::size_t j = 0; j < m; ++j) {
        out[j].initial = tr.hvals.front()[j];
        for (const auto& row : tr.hvals)
            out[j].max_abs = std::max(out[j].max_abs, std::fabs(row[j] - out[j].initial));
        out[j].max_rel = out[j].max_abs / std::max(1.0, std::fabs(out[j].initial));
    }
    return out;
}

void write_csv(std::ostream& os, const Trajectory& tr) {
    os << "t";
    for (const auto& v : tr.varnames) os << ", " << v;
    for (std::size_t j = 0; j < (tr.hvals.empty() ? 0 : tr.hvals.front().size()); ++j)
        os << ", H" << j + 1;
    os << "\n";
    os.precision(17);
    for (std::size_t s = 0; s < tr.points.size(); ++s) {
        os << tr.time_at(static_cast<int>(s));
        for (double v : tr.points[s]) os << ", " << v;
        for (double v : tr.hvals[s]) os << ", " << v;
        os << "\n";
    }
}

}  // namespace sf
