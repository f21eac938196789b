#include "sf/expr.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <optional>
#include <unordered_map>

namespace sf {

namespace {

std::uint64_t fnv1a(const void* data, std::size_t len, std::uint64_t h = 1469598103934665603ull) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 1099511628211ull;
    }
    return h;
}

std::uint64_t hash_string(const std::string& s, std::uint64_t h) {
    return fnv1a(s.data(), s.size(), h);
}

std::uint64_t hash_u64(std::uint64_t v, std::uint64_t h) { return fnv1a(&v, sizeof v, h); }

std::uint64_t node_hash(const Expr& e) {
    std::uint64_t h = hash_u64(static_cast<std::uint64_t>(e.kind) + 0x9e37, 1469598103934665603ull);
    switch (e.kind) {
        case Kind::Rational: return hash_u64(rat_hash(e.value), h);
        case Kind::Var: return hash_string(e.name, h);
        case Kind::Opaque:
            h = hash_string(e.name, h);
            for (int d : e.deriv) h = hash_u64(static_cast<std::uint64_t>(d + 16), h);
            for (const auto& k : e.kids) h = hash_u64(k->hash, h);
            return h;
        case Kind::Power:
            h = hash_u64(e.kids[0]->hash, h);
            return hash_u64(rat_hash(e.exponent), h);
        case Kind::Exp: return hash_u64(e.kids[0]->hash ^ 0xe0e0e0ull, h);
        case Kind::Sum:
        case Kind::Product:
            for (const auto& k : e.kids) h = hash_u64(k->hash, h);
            return hash_u64(e.kids.size(), h);
    }
    return h;
}

ExprPtr finish(std::shared_ptr<Expr> e) {
    if (e->kind == Kind::Rational) e->value_d = rat_to_double(e->value);
    e->hash = node_hash(*e);
    return e;
}

}  // namespace

Rat rat_pow(const Rat& base, long e) {
    if (e == 0) return Rat(1);
    mpz_class num = base.get_num(), den = base.get_den();
    if (e < 0) {
        if (sgn(base) == 0) throw ExprError("zero raised to a negative power");
        std::swap(num, den);
        e = -e;
    }
    mpz_class rn, rd;
    mpz_pow_ui(rn.get_mpz_t(), num.get_mpz_t(), static_cast<unsigned long>(e));
    mpz_pow_ui(rd.get_mpz_t(), den.get_mpz_t(), static_cast<unsigned long>(e));
    Rat r(rn, rd);
    r.canonicalize();
    return r;
}

bool rat_exponent_small(const Rat& r, long limit) {
    if (!rat_is_integer(r)) return false;
    return r.get_num().fits_slong_p() && std::abs(r.get_num().get_si()) <= limit;
}

std::uint64_t rat_hash(const Rat& r) {
    const std::string s = r.get_str();
    return fnv1a(s.data(), s.size());
}

// ---------------------------------------------------------------------------
// construction

ExprPtr zero() {
    static const ExprPtr z = make_rational(Rat(0));
    return z;
}

ExprPtr one() {
    static const ExprPtr o = make_rational(Rat(1));
    return o;
}

ExprPtr make_rational(Rat v) {
    auto e = std::make_shared<Expr>(Kind::Rational);
    e->value = std::move(v);
    return finish(std::move(e));
}

ExprPtr make_int(long v) { return make_rational(Rat(v)); }

ExprPtr make_var(std::string name) {
    auto e = std::make_shared<Expr>(Kind::Var);
    e->name = std::move(name);
    return finish(std::move(e));
}

ExprPtr make_opaque(std::string symbol, std::vector<ExprPtr> args, std::vector<int> deriv) {
    if (args.empty()) throw ExprError("opaque application needs at least one argument: " + symbol);
    if (deriv.empty()) deriv.assign(args.size(), 0);
    if (deriv.size() != args.size())
        throw ExprError("derivative multi-index size mismatch for " + symbol);
    for (int d : deriv)
        if (d < -1) throw ExprError("derivative order below -1 for " + symbol);
    auto e = std::make_shared<Expr>(Kind::Opaque);
    e->name = std::move(symbol);
    e->kids = std::move(args);
    e->deriv = std::move(deriv);
    return finish(std::move(e));
}

ExprPtr make_sum(std::vector<ExprPtr> terms) {
    std::vector<ExprPtr> out;
    Rat c(0);
    for (auto& t : terms) {
        if (!t) throw ExprError("null term in sum");
        if (t->kind == Kind::Sum) {
            for (const auto& k : t->kids) {
                if (is_rational(k))
                    c += k->value;
                else
                    out.push_back(k);
            }
        } else if (is_rational(t)) {
            c += t->value;
        } else {
            out.push_back(std::move(t));
        }
    }
    if (!rat_is_zero(c)) out.push_back(make_rational(c));
    if (out.empty()) return zero();
    if (out.size() == 1) return out[0];
    auto e = std::make_shared<Expr>(Kind::Sum);
    e->kids = std::move(out);
    return finish(std::move(e));
}

ExprPtr make_product(std::vector<ExprPtr> factors) {
    std::vector<ExprPtr> out;
    Rat c(1);
    for (auto& f : factors) {
        if (!f) throw ExprError("null factor in product");
        if (f->kind == Kind::Product) {
            for (const auto& k : f->kids) {
                if (is_rational(k))
                    c *= k->value;
                else
                    out.push_back(k);
            }
        } else if (is_rational(f)) {
            c *= f->value;
        } else {
            out.push_back(std::move(f));
        }
    }
    if (rat_is_zero(c)) return zero();
    if (out.empty()) return make_rational(c);
    if (c != 1) out.insert(out.begin(), make_rational(c));
    if (out.size() == 1) return out[0];
    auto e = std::make_shared<Expr>(Kind::Product);
    e->kids = std::move(out);
    return finish(std::move(e));
}

ExprPtr make_power(ExprPtr base, Rat exponent) {
    if (!base) throw ExprError("null power base");
    if (rat_is_zero(exponent)) return one();
    if (exponent == 1) return base;
    if (is_rational(base)) {
        if (rat_is_zero(base->value)) {
            if (sgn(exponent) > 0) return zero();
            // 0^negative kept symbolic; evaluation reports the singular point
        } else if (base->value == 1) {
            return one();
        } else if (rat_exponent_small(exponent)) {
            return make_rational(rat_pow(base->value, exponent.get_num().get_si()));
        }
    }
    if (base->kind == Kind::Power && rat_is_integer(exponent)) {
        // (b^a)^n = b^(a n) is sound for integer n
        return make_power(base->kids[0], base->exponent * exponent);
    }
    auto e = std::make_shared<Expr>(Kind::Power);
    e->kids.push_back(std::move(base));
    e->exponent = std::move(exponent);
    return finish(std::move(e));
}

ExprPtr make_exp(ExprPtr arg) {
    if (!arg) throw ExprError("null exp argument");
    if (is_zero_literal(arg)) return one();
    auto e = std::make_shared<Expr>(Kind::Exp);
    e->kids.push_back(std::move(arg));
    return finish(std::move(e));
}

ExprPtr add(ExprPtr a, ExprPtr b) { return make_sum({std::move(a), std::move(b)}); }
ExprPtr sub(ExprPtr a, ExprPtr b) { return make_sum({std::move(a), neg(std::move(b))}); }
ExprPtr mul(ExprPtr a, ExprPtr b) { return make_product({std::move(a), std::move(b)}); }
ExprPtr mul(ExprPtr a, ExprPtr b, ExprPtr c) {
    return make_product({std::move(a), std::move(b), std::move(c)});
}
ExprPtr div(ExprPtr a, ExprPtr b) {
    if (is_rational(b) && !rat_is_zero(b->value))
        return mul(std::move(a), make_rational(1 / b->value));
    return mul(std::move(a), make_power(std::move(b), Rat(-1)));
}
ExprPtr neg(ExprPtr a) { return mul(make_int(-1), std::move(a)); }

// ---------------------------------------------------------------------------
// ordering / equality

static int kind_rank(Kind k) {
    switch (k) {
        case Kind::Rational: return 0;
        case Kind::Var: return 1;
        case Kind::Opaque: return 2;
        case Kind::Exp: return 3;
        case Kind::Power: return 4;
        case Kind::Product: return 5;
        case Kind::Sum: return 6;
    }
    return 7;
}

static int compare_deep(const Expr& a, const Expr& b) {
    if (&a == &b) return 0;
    if (kind_rank(a.kind) != kind_rank(b.kind)) return kind_rank(a.kind) < kind_rank(b.kind) ? -1 : 1;
    switch (a.kind) {
        case Kind::Rational: return cmp(a.value, b.value) < 0 ? -1 : (cmp(a.value, b.value) > 0 ? 1 : 0);
        case Kind::Var: return a.name.compare(b.name) < 0 ? -1 : (a.name == b.name ? 0 : 1);
        case Kind::Opaque: {
            if (int c = a.name.compare(b.name); c != 0) return c < 0 ? -1 : 1;
            if (a.deriv != b.deriv) return a.deriv < b.deriv ? -1 : 1;
            break;
        }
        case Kind::Power: {
            if (int c = compare(a.kids[0], b.kids[0]); c != 0) return c;
            int c = cmp(a.exponent, b.exponent);
            return c < 0 ? -1 : (c > 0 ? 1 : 0);
        }
        default: break;
    }
    if (a.kids.size() != b.kids.size()) return a.kids.size() < b.kids.size() ? -1 : 1;
    for (std::size_t i = 0; i < a.kids.size(); ++i)
        if (int c = compare(a.kids[i], b.kids[i]); c != 0) return c;
    return 0;
}

int compare(const ExprPtr& a, const ExprPtr& b) {
    if (a.get() == b.get()) return 0;
    if (a->hash != b->hash) return a->hash < b->hash ? -1 : 1;
    return compare_deep(*a, *b);
}

bool struct_equal(const ExprPtr& a, const ExprPtr& b) { return compare(a, b) == 0; }

// ---------------------------------------------------------------------------
// analysis walkers

namespace {

template <typename Fn>
void walk(const ExprPtr& e, std::set<const Expr*>& seen, Fn&& fn) {
    if (!seen.insert(e.get()).second) return;
    fn(e);
    for (const auto& k : e->kids) walk(k, seen, fn);
}

}  // namespace

std::set<std::string> free_vars(const ExprPtr& e) {
    std::set<std::string> out;
    std::set<const Expr*> seen;
    walk(e, seen, [&](const ExprPtr& n) {
        if (n->kind == Kind::Var) out.insert(n->name);
    });
    return out;
}

std::set<std::string> opaque_symbols(const ExprPtr& e) {
    std::set<std::string> out;
    std::set<const Expr*> seen;
    walk(e, seen, [&](const ExprPtr& n) {
        if (n->kind == Kind::Opaque) out.insert(n->name);
    });
    return out;
}

std::map<std::string, int> opaque_arities(const ExprPtr& e) {
    std::map<std::string, int> out;
    std::set<const Expr*> seen;
    walk(e, seen, [&](const ExprPtr& n) {
        if (n->kind != Kind::Opaque) return;
        auto [it, fresh] = out.emplace(n->name, static_cast<int>(n->kids.size()));
        if (!fresh && it->second != static_cast<int>(n->kids.size()))
            throw ExprError("opaque symbol used with inconsistent arity: " + n->name);
    });
    return out;
}

int max_deriv_order(const ExprPtr& e, const std::string& symbol) {
    int best = 0;
    std::set<const Expr*> seen;
    walk(e, seen, [&](const ExprPtr& n) {
        if (n->kind == Kind::Opaque && n->name == symbol)
            for (int d : n->deriv) best = std::max(best, d);
    });
    return best;
}

std::set<std::string> denominator_vars(const ExprPtr& e) {
    std::set<std::string> out;
    std::set<const Expr*> seen;
    walk(e, seen, [&](const ExprPtr& n) {
        if (n->kind == Kind::Power && sgn(n->exponent) < 0) {
            auto fv = free_vars(n->kids[0]);
            out.insert(fv.begin(), fv.end());
        }
    });
    return out;
}

bool contains_exp(const ExprPtr& e) {
    bool found = false;
    std::set<const Expr*> seen;
    walk(e, seen, [&](const ExprPtr& n) {
        if (n->kind == Kind::Exp) found = true;
    });
    return found;
}

bool contains_fractional_power(const ExprPtr& e) {
    bool found = false;
    std::set<const Expr*> seen;
    walk(e, seen, [&](const ExprPtr& n) {
        if (n->kind == Kind::Power && !rat_is_integer(n->exponent)) found = true;
    });
    return found;
}

std::size_t node_count(const ExprPtr& e) {
    std::size_t n = 0;
    std::set<const Expr*> seen;
    walk(e, seen, [&](const ExprPtr&) { ++n; });
    return n;
}

// ---------------------------------------------------------------------------
// differentiation

ExprPtr differentiate(const ExprPtr& e, const std::string& var) {
    switch (e->kind) {
        case Kind::Rational: return zero();
        case Kind::Var: return e->name == var ? one() : zero();
        case Kind::Sum: {
            std::vector<ExprPtr> ts;
            ts.reserve(e->kids.size());
            for (const auto& k : e->kids) ts.push_back(differentiate(k, var));
            return make_sum(std::move(ts));
        }
        case Kind::Product: {
            std::vector<ExprPtr> ts;
            for (std::size_t i = 0; i < e->kids.size(); ++i) {
                ExprPtr di = differentiate(e->kids[i], var);
                if (is_zero_literal(di)) continue;
                std::vector<ExprPtr> fs;
                fs.reserve(e->kids.size());
                for (std::size_t j = 0; j < e->kids.size(); ++j)
                    fs.push_back(j == i ? di : e->kids[j]);
                ts.push_back(make_product(std::move(fs)));
            }
            return make_sum(std::move(ts));
        }
        case Kind::Power: {
            ExprPtr db = differentiate(e->kids[0], var);
            if (is_zero_literal(db)) return zero();
            return make_product({make_rational(e->exponent),
                                 make_power(e->kids[0], e->exponent - 1), std::move(db)});
        }
        case Kind::Exp: {
            ExprPtr da = differentiate(e->kids[0], var);
            if (is_zero_literal(da)) return zero();
            return mul(e, std::move(da));
        }
        case Kind::Opaque: {
            // chain rule over arguments, bumping the slot's derivative order
            std::vector<ExprPtr> ts;
            for (std::size_t j = 0; j < e->kids.size(); ++j) {
                ExprPtr dj = differentiate(e->kids[j], var);
                if (is_zero_literal(dj)) continue;
                std::vector<int> d = e->deriv;
                d[j] += 1;
                ts.push_back(mul(make_opaque(e->name, e->kids, std::move(d)), std::move(dj)));
            }
            return make_sum(std::move(ts));
        }
    }
    throw ExprError("unreachable");
}

// ---------------------------------------------------------------------------
// substitution

namespace {

ExprPtr derived_body(const OpaqueDef& def, const std::vector<int>& deriv) {
    ExprPtr b = def.body;
    for (std::size_t j = 0; j < deriv.size(); ++j) {
        if (j >= def.params.size()) throw ExprError("opaque replacement arity mismatch");
        int d = deriv[j];
        if (d == -1) {
            b = polynomial_antiderivative(b, def.params[j]);
        } else {
            for (int k = 0; k < d; ++k) b = differentiate(b, def.params[j]);
        }
    }
    return b;
}

ExprPtr subst_rec(const ExprPtr& e, const SubstMap& map,
                  std::unordered_map<const Expr*, ExprPtr>& memo) {
    if (auto it = memo.find(e.get()); it != memo.end()) return it->second;
    ExprPtr out;
    switch (e->kind) {
        case Kind::Rational: out = e; break;
        case Kind::Var: {
            auto it = map.vars.find(e->name);
            out = (it != map.vars.end()) ? it->second : e;
            break;
        }
        case Kind::Opaque: {
            std::vector<ExprPtr> args;
            args.reserve(e->kids.size());
            for (const auto& k : e->kids) args.push_back(subst_rec(k, map, memo));
            auto it = map.opaques.find(e->name);
            if (it == map.opaques.end()) {
                out = make_opaque(e->name, std::move(args), e->deriv);
            } else {
                const OpaqueDef& def = it->second;
                if (def.params.size() != e->kids.size())
                    throw ExprError("opaque replacement arity mismatch for " + e->name);
                ExprPtr body = derived_body(def, e->deriv);
                SubstMap inner;
                for (std::size_t j = 0; j < def.params.size(); ++j)
                    inner.vars[def.params[j]] = args[j];
                std::unordered_map<const Expr*, ExprPtr> m2;
                out = subst_rec(body, inner, m2);
            }
            break;
        }
        case Kind::Sum:
        case Kind::Product: {
            std::vector<ExprPtr> ks;
            ks.reserve(e->kids.size());
            for (const auto& k : e->kids) ks.push_back(subst_rec(k, map, memo));
            out = e->kind == Kind::Sum ? make_sum(std::move(ks)) : make_product(std::move(ks));
            break;
        }
        case Kind::Power: out = make_power(subst_rec(e->kids[0], map, memo), e->exponent); break;
        case Kind::Exp: out = make_exp(subst_rec(e->kids[0], map, memo)); break;
    }
    memo.emplace(e.get(), out);
    return out;
}

}  // namespace

ExprPtr substitute(const ExprPtr& e, const SubstMap& map) {
    std::unordered_map<const Expr*, ExprPtr> memo;
    return subst_rec(e, map, memo);
}

// ---------------------------------------------------------------------------
// simplifier

namespace {

struct ExprLess {
    bool operator()(const ExprPtr& a, const ExprPtr& b) const { return compare(a, b) < 0; }
};

// split a (already simplified) term into rational coefficient and the rest
std::pair<Rat, ExprPtr> coeff_split(const ExprPtr& t) {
    if (is_rational(t)) return {t->value, one()};
    if (t->kind == Kind::Product && is_rational(t->kids[0])) {
        std::vector<ExprPtr> rest(t->kids.begin() + 1, t->kids.end());
        return {t->kids[0]->value, make_product(std::move(rest))};
    }
    return {Rat(1), t};
}

// factors of a term that sit in the denominator (negative exponent)
std::vector<ExprPtr> denominator_factors(const ExprPtr& t) {
    std::vector<ExprPtr> out;
    auto consider = [&](const ExprPtr& f) {
        if (f->kind == Kind::Power && sgn(f->exponent) < 0) out.push_back(f);
    };
    if (t->kind == Kind::Product)
        for (const auto& f : t->kids) consider(f);
    else
        consider(t);
    std::sort(out.begin(), out.end(), ExprLess{});
    return out;
}

ExprPtr strip_factors(const ExprPtr& t, const std::vector<ExprPtr>& drop) {
    std::vector<ExprPtr> fs;
    auto dropped = [&](const ExprPtr& f) {
        for (const auto& d : drop)
            if (struct_equal(d, f)) return true;
        return false;
    };
    if (t->kind == Kind::Product) {
        std::vector<bool> used(drop.size(), false);
        for (const auto& f : t->kids) {
            bool skip = false;
            for (std::size_t i = 0; i < drop.size(); ++i)
                if (!used[i] && struct_equal(drop[i], f)) {
                    used[i] = true;
                    skip = true;
                    break;
                }
            if (!skip) fs.push_back(f);
        }
        return make_product(std::move(fs));
    }
    return dropped(t) ? one() : t;
}

ExprPtr simp_rec(const ExprPtr& e, std::unordered_map<const Expr*, ExprPtr>& memo);

ExprPtr simp_sum(const std::vector<ExprPtr>& kids) {
    // collect like terms by their non-constant part
    std::map<ExprPtr, Rat, ExprLess> buckets;
    Rat constant(0);
    for (const auto& t : kids) {
        auto [c, rest] = coeff_split(t);
        if (is_one_literal(rest)) {
            constant += c;
            continue;
        }
        buckets[rest] += c;
    }
    std::vector<ExprPtr> terms;
    for (const auto& [rest, c] : buckets) {
        if (rat_is_zero(c)) continue;
        terms.push_back(c == 1 ? rest : mul(make_rational(c), rest));
    }

    // merge over a syntactically shared denominator: applies when every term
    // with a denominator shares the same one
    std::vector<ExprPtr> denkey;
    bool single_key = true;
    std::size_t with_den = 0;
    for (const auto& t : terms) {
        auto dk = denominator_factors(t);
        if (dk.empty()) continue;
        ++with_den;
        if (denkey.empty())
            denkey = dk;
        else if (dk.size() != denkey.size() ||
                 !std::equal(dk.begin(), dk.end(), denkey.begin(),
                             [](const ExprPtr& a, const ExprPtr& b) { return struct_equal(a, b); }))
            single_key = false;
    }
    if (single_key && !denkey.empty() && with_den >= 2 && terms.size() >= 2) {
        // D = product of inverted denominator factors
        std::vector<ExprPtr> dinv;
        for (const auto& f : denkey) dinv.push_back(make_power(f->kids[0], -f->exponent));
        ExprPtr big = make_product(dinv);
        std::vector<ExprPtr> nums;
        for (const auto& t : terms) {
            if (denominator_factors(t).empty())
                nums.push_back(mul(t, big));
            else
                nums.push_back(strip_factors(t, denkey));
        }
        std::unordered_map<const Expr*, ExprPtr> m2;
        ExprPtr numsum = simp_rec(make_sum(std::move(nums)), m2);
        if (is_zero_literal(numsum) && rat_is_zero(constant)) return zero();
        std::vector<ExprPtr> fs{numsum};
        for (const auto& f : denkey) fs.push_back(f);
        ExprPtr merged = make_product(std::move(fs));
        return rat_is_zero(constant) ? merged : add(merged, make_rational(constant));
    }

    std::sort(terms.begin(), terms.end(), ExprLess{});
    if (!rat_is_zero(constant)) terms.push_back(make_rational(constant));
    return make_sum(std::move(terms));
}

ExprPtr simp_product(const std::vector<ExprPtr>& kids) {
    // collect factors by base, summing exponents; identical bases cancel
    std::map<ExprPtr, Rat, ExprLess> buckets;
    Rat constant(1);
    std::vector<ExprPtr> order;  // first-seen order not needed; map is sorted
    for (const auto& f : kids) {
        if (is_rational(f)) {
            constant *= f->value;
            continue;
        }
        if (f->kind == Kind::Power)
            buckets[f->kids[0]] += f->exponent;
        else
            buckets[f] += 1;
    }
    if (rat_is_zero(constant)) return zero();
    std::vector<ExprPtr> fs;
    for (const auto& [base, ex] : buckets) {
        if (rat_is_zero(ex)) continue;
        fs.push_back(make_power(base, ex));
    }
    std::sort(fs.begin(), fs.end(), ExprLess{});
    if (constant != 1) fs.insert(fs.begin(), make_rational(constant));
    return make_product(std::move(fs));
}

ExprPtr simp_rec(const ExprPtr& e, std::unordered_map<const Expr*, ExprPtr>& memo) {
    if (auto it = memo.find(e.get()); it != memo.end()) return it->second;
    ExprPtr out;
    switch (e->kind) {
        case Kind::Rational:
        case Kind::Var: out = e; break;
        case Kind::Opaque: {
            std::vector<ExprPtr> args;
            for (const auto& k : e->kids) args.push_back(simp_rec(k, memo));
            out = make_opaque(e->name, std::move(args), e->deriv);
            break;
        }
        case Kind::Exp: out = make_exp(simp_rec(e->kids[0], memo)); break;
        case Kind::Power: {
            ExprPtr b = simp_rec(e->kids[0], memo);
            if (b->kind == Kind::Product && rat_is_integer(e->exponent)) {
                std::vector<ExprPtr> fs;
                for (const auto& f : b->kids) fs.push_back(make_power(f, e->exponent));
                out = simp_rec(make_product(std::move(fs)), memo);
            } else {
                out = make_power(std::move(b), e->exponent);
            }
            break;
        }
        case Kind::Sum: {
            std::vector<ExprPtr> ks;
            for (const auto& k : e->kids) ks.push_back(simp_rec(k, memo));
            ExprPtr flat = make_sum(std::move(ks));
            out = flat->kind == Kind::Sum ? simp_sum(flat->kids) : flat;
            break;
        }
        case Kind::Product: {
            std::vector<ExprPtr> ks;
            for (const auto& k : e->kids) ks.push_back(simp_rec(k, memo));
            ExprPtr flat = make_product(std::move(ks));
            out = flat->kind == Kind::Product ? simp_product(flat->kids) : flat;
            break;
        }
    }
    memo.emplace(e.get(), out);
    return out;
}

}  // namespace

ExprPtr simplify(const ExprPtr& e) {
    std::unordered_map<const Expr*, ExprPtr> memo;
    return simp_rec(e, memo);
}

// ---------------------------------------------------------------------------
// bounded expansion

namespace {

using Terms = std::optional<std::vector<ExprPtr>>;

Terms expand_rec(const ExprPtr& e, std::size_t budget,
                 std::unordered_map<const Expr*, Terms>& memo) {
    if (auto it = memo.find(e.get()); it != memo.end()) return it->second;
    Terms out;
    switch (e->kind) {
        case Kind::Sum: {
            std::vector<ExprPtr> acc;
            for (const auto& k : e->kids) {
                Terms t = expand_rec(k, budget, memo);
                if (!t) {
                    out = std::nullopt;
                    memo.emplace(e.get(), out);
                    return out;
                }
                acc.insert(acc.end(), t->begin(), t->end());
                if (acc.size() > budget) {
                    out = std::nullopt;
                    memo.emplace(e.get(), out);
                    return out;
                }
            }
            out = std::move(acc);
            break;
        }
        case Kind::Product: {
            std::vector<ExprPtr> acc{one()};
            for (const auto& k : e->kids) {
                Terms t = expand_rec(k, budget, memo);
                if (!t || acc.size() * t->size() > budget) {
                    out = std::nullopt;
                    memo.emplace(e.get(), out);
                    return out;
                }
                std::vector<ExprPtr> next;
                next.reserve(acc.size() * t->size());
                for (const auto& a : acc)
                    for (const auto& b : *t) next.push_back(mul(a, b));
                acc = std::move(next);
            }
            out = std::move(acc);
            break;
        }
        case Kind::Power: {
            if (rat_is_integer(e->exponent) && sgn(e->exponent) > 0 &&
                rat_exponent_small(e->exponent, 16)) {
                long n = e->exponent.get_num().get_si();
                Terms base = expand_rec(e->kids[0], budget, memo);
                if (!base) {
                    out = std::nullopt;
                    break;
                }
                std::vector<ExprPtr> acc{one()};
                for (long i = 0; i < n; ++i) {
                    if (acc.size() * base->size() > budget) {
                        acc.clear();
                        out = std::nullopt;
                        break;
                    }
                    std::vector<ExprPtr> next;
                    next.reserve(acc.size() * base->size());
                    for (const auto& a : acc)
                        for (const auto& b : *base) next.push_back(mul(a, b));
                    acc = std::move(next);
                }
                if (out.has_value() || !acc.empty()) out = std::move(acc);
                break;
            }
            out = std::vector<ExprPtr>{e};
            break;
        }
        default: out = std::vector<ExprPtr>{e}; break;
    }
    memo.emplace(e.get(), out);
    return out;
}

}  // namespace

ExprPtr expand(const ExprPtr& e, std::size_t term_budget) {
    ExprPtr s = simplify(e);
    std::unordered_map<const Expr*, Terms> memo;
    Terms t = expand_rec(s, term_budget, memo);
    if (!t) return nullptr;
    return simplify(make_sum(std::move(*t)));
}

// ---------------------------------------------------------------------------
// polynomial helpers

ExprPtr polynomial_antiderivative(const ExprPtr& e, const std::string& var) {
    ExprPtr x = expand(e, 4096);
    if (!x) throw ExprError("antiderivative: expression too large to expand");
    std::vector<ExprPtr> terms = x->kind == Kind::Sum ? x->kids : std::vector<ExprPtr>{x};
    std::vector<ExprPtr> out;
    for (const auto& t : terms) {
        std::vector<ExprPtr> factors =
            t->kind == Kind::Product ? t->kids : std::vector<ExprPtr>{t};
        long deg = 0;
        std::vector<ExprPtr> rest;
        for (const auto& f : factors) {
            bool in_var = free_vars(f).count(var) > 0;
            if (!in_var) {
                rest.push_back(f);
                continue;
            }
            if (f->kind == Kind::Var) {
                deg += 1;
            } else if (f->kind == Kind::Power && f->kids[0]->kind == Kind::Var &&
                       f->kids[0]->name == var && rat_is_integer(f->exponent) &&
                       sgn(f->exponent) > 0) {
                deg += f->exponent.get_num().get_si();
            } else {
                throw ExprError("not a polynomial in " + var + ": " + to_string(f));
            }
        }
        rest.push_back(make_rational(Rat(1, deg + 1)));
        rest.push_back(make_power(make_var(var), Rat(deg + 1)));
        out.push_back(make_product(std::move(rest)));
    }
    return simplify(make_sum(std::move(out)));
}

int polynomial_degree(const ExprPtr& e, const std::set<std::string>& vars) {
    switch (e->kind) {
        case Kind::Rational: return 0;
        case Kind::Var: return vars.count(e->name) ? 1 : 0;
        case Kind::Sum: {
            int best = 0;
            for (const auto& k : e->kids) {
                int d = polynomial_degree(k, vars);
                if (d < 0) return -1;
                best = std::max(best, d);
            }
            return best;
        }
        case Kind::Product: {
            int total = 0;
            for (const auto& k : e->kids) {
                int d = polynomial_degree(k, vars);
                if (d < 0) return -1;
                total += d;
            }
            return total;
        }
        case Kind::Power: {
            int d = polynomial_degree(e->kids[0], vars);
            if (d < 0) return -1;
            if (d == 0) return 0;
            if (!rat_is_integer(e->exponent) || sgn(e->exponent) < 0) return -1;
            return d * static_cast<int>(e->exponent.get_num().get_si());
        }
        case Kind::Exp:
        case Kind::Opaque: {
            for (const auto& k : e->kids)
                if (polynomial_degree(k, vars) != 0) return -1;
            return 0;
        }
    }
    return -1;
}

// ---------------------------------------------------------------------------
// rendering

namespace {

// precedence levels: 0 sum, 1 product, 2 unary minus handled via constants,
// 3 power operands
void render(const ExprPtr& e, std::string& s, int parent_prec);

void render_product(const ExprPtr& e, std::string& s, int parent_prec) {
    // pull a leading -1 out as a sign when the caller is a sum
    if (parent_prec >= 2) s += "(";
    bool first = true;
    for (const auto& f : e->kids) {
        if (!first) s += "*";
        render(f, s, 2);
        first = false;
    }
    if (parent_prec >= 2) s += ")";
}

void render(const ExprPtr& e, std::string& s, int parent_prec) {
    switch (e->kind) {
        case Kind::Rational: {
            const bool neg = sgn(e->value) < 0;
            const bool frac = !rat_is_integer(e->value);
            if ((neg && parent_prec >= 1) || (frac && parent_prec >= 2)) {
                s += "(";
                s += rat_to_string(e->value);
                s += ")";
            } else {
                s += rat_to_string(e->value);
            }
            break;
        }
        case Kind::Var: s += e->name; break;
        case Kind::Opaque: {
            bool plain = true;
            for (int d : e->deriv) plain = plain && d == 0;
            bool primes = e->kids.size() == 1 && !plain && e->deriv[0] >= 1 && e->deriv[0] <= 3;
            if (primes) {
                s += e->name;
                s.append(static_cast<std::size_t>(e->deriv[0]), '\'');
            } else if (!plain) {
                s += "D[";
                for (std::size_t i = 0; i < e->deriv.size(); ++i) {
                    if (i) s += ",";
                    s += std::to_string(e->deriv[i]);
                }
                s += "]";
                s += e->name;
            } else {
                s += e->name;
            }
            s += "(";
            for (std::size_t i = 0; i < e->kids.size(); ++i) {
                if (i) s += ",";
                render(e->kids[i], s, 0);
            }
            s += ")";
            break;
        }
        case Kind::Exp:
            s += "exp(";
            render(e->kids[0], s, 0);
            s += ")";
            break;
        case Kind::Power: {
            if (parent_prec >= 3) s += "(";
            render(e->kids[0], s, 3);
            s += "^";
            const bool wrap = sgn(e->exponent) < 0 || !rat_is_integer(e->exponent);
            if (wrap) s += "(";
            s += rat_to_string(e->exponent);
            if (wrap) s += ")";
            if (parent_prec >= 3) s += ")";
            break;
        }
        case Kind::Product: render_product(e, s, parent_prec); break;
        case Kind::Sum: {
            if (parent_prec >= 1) s += "(";
            bool first = true;
            for (const auto& t : e->kids) {
                auto [c, rest] = coeff_split(t);
                if (!first && sgn(c) < 0) {
                    s += " - ";
                    ExprPtr pos = is_one_literal(rest) ? make_rational(-c)
                                                       : mul(make_rational(-c), rest);
                    render(pos, s, 1);
                } else {
                    if (!first) s += " + ";
                    render(t, s, 1);
                }
                first = false;
            }
            if (parent_prec >= 1) s += ")";
            break;
        }
    }
}

}  // namespace

std::string to_string(const ExprPtr& e) {
    std::string s;
    render(e, s, 0);
    return s;
}

}  // namespace sf
