#pragma once

#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "sf/rational.hpp"

namespace sf {

// Immutable symbolic expression tree over exact rationals, named variables,
// opaque function applications (with a per-argument derivative multi-index),
// n-ary sums/products, powers with rational exponents, and exp().
//
// Nodes are shared via shared_ptr and never mutated after construction, so
// expressions are safe to share across threads.

class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

enum class Kind { Rational, Var, Opaque, Sum, Product, Power, Exp };

class Expr {
public:
    Kind kind;
    Rat value;                   // Rational
    double value_d = 0.0;        // cached double of `value`
    std::string name;            // Var name / Opaque symbol
    std::vector<ExprPtr> kids;   // Sum/Product terms, Opaque args, Power base [0], Exp arg [0]
    std::vector<int> deriv;      // Opaque: derivative order per argument; -1 = antiderivative
    Rat exponent;                // Power
    std::uint64_t hash = 0;

    explicit Expr(Kind k) : kind(k) {}
};

struct ExprError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// --- construction (normalizing, but deliberately shallow: nested sums and
// --- products are flattened and rational constants folded, nothing more) ---
ExprPtr make_rational(Rat v);
ExprPtr make_int(long v);
ExprPtr make_var(std::string name);
ExprPtr make_opaque(std::string symbol, std::vector<ExprPtr> args, std::vector<int> deriv = {});
ExprPtr make_sum(std::vector<ExprPtr> terms);
ExprPtr make_product(std::vector<ExprPtr> factors);
ExprPtr make_power(ExprPtr base, Rat exponent);
ExprPtr make_exp(ExprPtr arg);

// arithmetic sugar
ExprPtr add(ExprPtr a, ExprPtr b);
ExprPtr sub(ExprPtr a, ExprPtr b);
ExprPtr mul(ExprPtr a, ExprPtr b);
ExprPtr mul(ExprPtr a, ExprPtr b, ExprPtr c);
ExprPtr div(ExprPtr a, ExprPtr b);
ExprPtr neg(ExprPtr a);

ExprPtr zero();
ExprPtr one();

inline bool is_rational(const ExprPtr& e) { return e->kind == Kind::Rational; }
inline bool is_zero_literal(const ExprPtr& e) { return is_rational(e) && rat_is_zero(e->value); }
inline bool is_one_literal(const ExprPtr& e) { return is_rational(e) && e->value == 1; }

// --- structure ---
// Total order; 0 iff structurally equal. Deterministic across runs.
int compare(const ExprPtr& a, const ExprPtr& b);
bool struct_equal(const ExprPtr& a, const ExprPtr& b);

std::set<std::string> free_vars(const ExprPtr& e);
std::set<std::string> opaque_symbols(const ExprPtr& e);
// arity per opaque symbol; throws on inconsistent use
std::map<std::string, int> opaque_arities(const ExprPtr& e);
// largest derivative order any argument slot of `symbol` carries anywhere in e
int max_deriv_order(const ExprPtr& e, const std::string& symbol);
// variables appearing inside the base of a negative power (anything that can
// end up in a denominator at evaluation time)
std::set<std::string> denominator_vars(const ExprPtr& e);
bool contains_exp(const ExprPtr& e);
bool contains_fractional_power(const ExprPtr& e);
std::size_t node_count(const ExprPtr& e);

// --- calculus / rewriting ---
ExprPtr differentiate(const ExprPtr& e, const std::string& var);

// Replacement body for an opaque symbol: body uses only `params` as free vars.
struct OpaqueDef {
    std::vector<std::string> params;
    ExprPtr body;
};

struct SubstMap {
    std::map<std::string, ExprPtr> vars;
    std::map<std::string, OpaqueDef> opaques;
};

// Simultaneous substitution. Opaque applications carrying derivative indices
// substitute the correspondingly differentiated (or antidifferentiated) body.
ExprPtr substitute(const ExprPtr& e, const SubstMap& map);

// Weak structural simplifier: flatten, fold constants, sort, collect like
// terms/factors, merge a syntactically shared denominator. No factoring.
ExprPtr simplify(const ExprPtr& e);

// Distribute products over sums and expand small integer powers, then
// collect. Returns nullptr when the term budget would be exceeded.
ExprPtr expand(const ExprPtr& e, std::size_t term_budget = 4096);

// Antiderivative of a polynomial in `var` (integration constant 0).
// Throws ExprError when e is not polynomial in var.
ExprPtr polynomial_antiderivative(const ExprPtr& e, const std::string& var);

// Momentum degree helper: max total degree of e in the given variables, or
// -1 when e is not polynomial in them (opaque args containing them included).
int polynomial_degree(const ExprPtr& e, const std::set<std::string>& vars);

std::string to_string(const ExprPtr& e);

}  // namespace sf
