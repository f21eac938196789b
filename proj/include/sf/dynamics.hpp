#pragma once

#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "sf/chart.hpp"
#include "sf/eval.hpp"
#include "sf/stackel.hpp"

namespace sf {

// Flat evaluation program for a fixed variable order; expressions are
// compiled once and evaluated per step without tree walking.
class Tape {
public:
    double eval(std::span<const double> vars) const;
    static Tape compile(const ExprPtr& e, const std::vector<std::string>& var_order);

private:
    enum class Op : std::uint8_t { Const, Load, Add, Mul, PowInt, PowReal, Exp };
    struct Instr {
        Op op;
        std::int32_t a = 0, b = 0;
        double imm = 0;
        long iexp = 0;
    };
    std::vector<Instr> code_;
    mutable std::vector<double> regs_;
};

struct IntegrationError : ExprError {
    double time;
    IntegrationError(const std::string& msg, double t) : ExprError(msg), time(t) {}
};

// Hamiltonian family with every opaque symbol instantiated and the flows
// compiled to tapes.
struct ConcretizedSystem {
    HamiltonianSystem sys;                  // original (symbolic) family
    std::map<std::string, OpaqueDef> inst;  // instantiation map
    std::vector<ExprPtr> concrete;          // instantiated Hamiltonians
    std::vector<Tape> h_tapes;

    const Chart& chart() const { return sys.chart; }
};

ConcretizedSystem concretize(const HamiltonianSystem& sys,
                             const std::map<std::string, OpaqueDef>& inst);

enum class Method { RK4, StormerVerlet };

Method method_from_string(const std::string& s);

// True when H splits as T(momenta) + V(coordinates).
bool separable_kinetic_potential(const ExprPtr& H, const Chart& chart);

struct Trajectory {
    std::vector<std::string> varnames;
    double dt = 0;
    int steps = 0;
    std::vector<std::vector<double>> points;  // steps+1 rows of dim values
    std::vector<std::vector<double>> hvals;   // steps+1 rows, one per Hamiltonian
    std::string method_used;
    bool symplectic_declined = false;

    double time_at(int step) const { return dt * step; }
};

Trajectory integrate(const ConcretizedSystem& cs, int which, std::span<const double> ic,
                     double T, double dt, Method method);

struct Drift {
    double initial = 0;
    double max_abs = 0;
    double max_rel = 0;  // max_abs / max(1, |initial|)
};

std::vector<Drift> conservation_report(const Trajectory& tr);

void write_csv(std::ostream& os, const Trajectory& tr);

}  // namespace sf
