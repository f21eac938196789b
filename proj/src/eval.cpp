#include "sf/eval.hpp"

#include <cmath>
#include <sstream>
#include <unordered_map>

namespace sf {

const ExprPtr& Binding::derived_opaque_body(const std::string& symbol,
                                            const std::vector<int>& deriv) const {
    auto key = std::make_pair(symbol, deriv);
    if (auto it = body_cache.find(key); it != body_cache.end()) return it->second;
    auto oit = opaques.find(symbol);
    if (oit == opaques.end()) throw UnboundSymbolError("unbound opaque symbol: " + symbol);
    const OpaqueDef& def = oit->second;
    if (def.params.size() != deriv.size())
        throw ExprError("opaque arity mismatch in binding for " + symbol);
    ExprPtr body = def.body;
    for (std::size_t j = 0; j < deriv.size(); ++j) {
        if (deriv[j] == -1) {
            body = polynomial_antiderivative(body, def.params[j]);
        } else {
            for (int k = 0; k < deriv[j]; ++k) body = differentiate(body, def.params[j]);
        }
    }
    body = simplify(body);
    return body_cache.emplace(std::move(key), std::move(body)).first->second;
}

std::string Binding::describe() const {
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, v] : vars) {
        if (!first) os << ", ";
        os << k << "=" << rat_to_string(v);
        first = false;
    }
    for (const auto& [k, def] : opaques) {
        if (!first) os << ", ";
        os << k << "(";
        for (std::size_t i = 0; i < def.params.size(); ++i)
            os << (i ? "," : "") << def.params[i];
        os << ")=" << to_string(def.body);
        first = false;
    }
    return os.str();
}

// ---------------------------------------------------------------------------

namespace {

bool exact_rec(const ExprPtr& e, const Binding& b, std::unordered_map<const Expr*, bool>& memo) {
    if (auto it = memo.find(e.get()); it != memo.end()) return it->second;
    bool ok = true;
    switch (e->kind) {
        case Kind::Exp: ok = false; break;
        case Kind::Power: ok = rat_is_integer(e->exponent) && exact_rec(e->kids[0], b, memo); break;
        case Kind::Opaque: {
            for (const auto& k : e->kids) ok = ok && exact_rec(k, b, memo);
            if (ok && b.opaques.count(e->name)) {
                const ExprPtr& body = b.derived_opaque_body(e->name, e->deriv);
                ok = !contains_exp(body) && !contains_fractional_power(body);
            }
            break;
        }
        default:
            for (const auto& k : e->kids) ok = ok && exact_rec(k, b, memo);
            break;
    }
    memo.emplace(e.get(), ok);
    return ok;
}

Rat eval_exact_rec(const ExprPtr& e, const Binding& b,
                   std::unordered_map<const Expr*, Rat>& memo) {
    if (auto it = memo.find(e.get()); it != memo.end()) return it->second;
    Rat v;
    switch (e->kind) {
        case Kind::Rational: v = e->value; break;
        case Kind::Var: {
            auto it = b.vars.find(e->name);
            if (it == b.vars.end()) throw UnboundSymbolError("unbound variable: " + e->name);
            v = it->second;
            break;
        }
        case Kind::Sum: {
            v = 0;
            for (const auto& k : e->kids) v += eval_exact_rec(k, b, memo);
            break;
        }
        case Kind::Product: {
            v = 1;
            for (const auto& k : e->kids) v *= eval_exact_rec(k, b, memo);
            break;
        }
        case Kind::Power: {
            if (!rat_is_integer(e->exponent)) throw NotExactError("fractional power");
            Rat base = eval_exact_rec(e->kids[0], b, memo);
            long ex = e->exponent.get_num().get_si();
            if (rat_is_zero(base) && ex < 0) throw SingularPointError(to_string(e));
            v = rat_pow(base, ex);
            break;
        }
        case Kind::Exp: throw NotExactError("exp is not exactly evaluable");
        case Kind::Opaque: {
            const ExprPtr& body = b.derived_opaque_body(e->name, e->deriv);
            Binding local;
            const OpaqueDef& def = b.opaques.at(e->name);
            for (std::size_t j = 0; j < def.params.size(); ++j)
                local.vars[def.params[j]] = eval_exact_rec(e->kids[j], b, memo);
            std::unordered_map<const Expr*, Rat> m2;
            v = eval_exact_rec(body, local, m2);
            break;
        }
    }
    memo.emplace(e.get(), v);
    return v;
}

double eval_float_rec(const ExprPtr& e, const Binding& b, double& mag,
                      std::unordered_map<const Expr*, double>& memo) {
    if (auto it = memo.find(e.get()); it != memo.end()) return it->second;
    double v = 0;
    switch (e->kind) {
        case Kind::Rational: v = e->value_d; break;
        case Kind::Var: {
            auto it = b.vars.find(e->name);
            if (it == b.vars.end()) throw UnboundSymbolError("unbound variable: " + e->name);
            v = rat_to_double(it->second);
            break;
        }
        case Kind::Sum: {
            for (const auto& k : e->kids) v += eval_float_rec(k, b, mag, memo);
            break;
        }
        case Kind::Product: {
            v = 1;
            for (const auto& k : e->kids) v *= eval_float_rec(k, b, mag, memo);
            break;
        }
        case Kind::Power: {
            double base = eval_float_rec(e->kids[0], b, mag, memo);
            double ex = rat_to_double(e->exponent);
            if (base == 0.0 && ex < 0) throw SingularPointError(to_string(e));
            if (base < 0.0 && !rat_is_integer(e->exponent)) throw SingularPointError(to_string(e));
            v = std::pow(base, ex);
            break;
        }
        case Kind::Exp: v = std::exp(eval_float_rec(e->kids[0], b, mag, memo)); break;
        case Kind::Opaque: {
            const ExprPtr& body = b.derived_opaque_body(e->name, e->deriv);
            Binding local;
            const OpaqueDef& def = b.opaques.at(e->name);
            for (std::size_t j = 0; j < def.params.size(); ++j) {
                double av = eval_float_rec(e->kids[j], b, mag, memo);
                Rat r(av);  // binds the float image exactly
                local.vars[def.params[j]] = r;
            }
            std::unordered_map<const Expr*, double> m2;
            v = eval_float_rec(body, local, mag, m2);
            break;
        }
    }
    if (!std::isfinite(v)) throw SingularPointError(to_string(e));
    mag = std::max(mag, std::fabs(v));
    memo.emplace(e.get(), v);
    return v;
}

}  // namespace

bool exact_evaluable(const ExprPtr& e, const Binding& b) {
    std::unordered_map<const Expr*, bool> memo;
    return exact_rec(e, b, memo);
}

Rat eval_exact(const ExprPtr& e, const Binding& b) {
    std::unordered_map<const Expr*, Rat> memo;
    return eval_exact_rec(e, b, memo);
}

double eval_float(const ExprPtr& e, const Binding& b, double* max_mag) {
    double mag = 0;
    std::unordered_map<const Expr*, double> memo;
    double v = eval_float_rec(e, b, mag, memo);
    if (max_mag) *max_mag = mag;
    return v;
}

}  // namespace sf
