#include "sf/zero.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <random>

namespace sf {

namespace {

struct Sampler {
    std::mt19937_64 rng;
    explicit Sampler(std::uint64_t seed) : rng(seed) {}

    std::uint64_t next(std::uint64_t n) { return rng() % n; }

    // rational in [lo,hi] with denominator <= max_den
    Rat rational(long lo, long hi, long max_den) {
        long d = 1 + static_cast<long>(next(static_cast<std::uint64_t>(max_den)));
        long lo_i = lo * d, hi_i = hi * d;
        long n = lo_i + static_cast<long>(next(static_cast<std::uint64_t>(hi_i - lo_i + 1)));
        return rat(n, d);
    }

    // nonnegative-lb boxes use quarters: [1/4, 4]
    Rat positive_box() {
        // numerator in [d/4 .. 4d] over denominator d<=8; keep it simple with d=8
        long n = 2 + static_cast<long>(next(31));  // 2/8 .. 32/8
        return rat(n, 8);
    }
};

// dense polynomial of total degree `deg` in the given parameters
ExprPtr random_polynomial(Sampler& s, const std::vector<std::string>& params, int deg) {
    std::vector<ExprPtr> terms;
    std::vector<int> exps(params.size(), 0);
    // enumerate exponent tuples with total degree <= deg
    std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
        if (i == params.size()) {
            std::vector<ExprPtr> fs{make_rational(s.rational(-5, 5, 8))};
            for (std::size_t j = 0; j < params.size(); ++j)
                if (exps[j] > 0) fs.push_back(make_power(make_var(params[j]), Rat(exps[j])));
            terms.push_back(make_product(std::move(fs)));
            return;
        }
        for (int k = 0; k <= left; ++k) {
            exps[i] = k;
            rec(i + 1, left - k);
        }
        exps[i] = 0;
    };
    rec(0, deg);
    return make_sum(std::move(terms));
}

std::vector<std::string> opaque_params(int arity) {
    std::vector<std::string> ps;
    for (int i = 0; i < arity; ++i) ps.push_back("_arg" + std::to_string(i + 1));
    return ps;
}

}  // namespace

ZeroVerdict worst(const ZeroVerdict& a, const ZeroVerdict& b) {
    auto rank = [](ZeroState s) {
        return s == ZeroState::NonZero ? 2 : (s == ZeroState::LikelyZero ? 1 : 0);
    };
    return rank(a.state) >= rank(b.state) ? a : b;
}

ZeroVerdict is_zero(const ExprPtr& e, const ZeroConfig& cfg) {
    if (cfg.trials < 1) throw ExprError("is_zero needs at least one trial");

    ExprPtr s = simplify(e);
    if (is_zero_literal(s)) return {ZeroState::ProvenZero};
    if (ExprPtr x = expand(s, cfg.expand_budget); x && is_zero_literal(x))
        return {ZeroState::ProvenZero};

    const auto vars = free_vars(s);
    const auto den_vars = denominator_vars(s);
    const auto arities = opaque_arities(s);

    // degree must outrun the highest derivative order present
    std::map<std::string, int> degree;
    for (const auto& [sym, arity] : arities)
        degree[sym] = std::max(cfg.instantiation_degree, max_deriv_order(s, sym) + 1);

    Sampler sampler(cfg.seed);
    ZeroVerdict verdict{ZeroState::LikelyZero};
    int successes = 0;

    for (int t = 0; t < cfg.trials; ++t) {
        bool evaluated = false;
        for (int attempt = 0; attempt <= cfg.max_redraws && !evaluated; ++attempt) {
            auto b = std::make_shared<Binding>();
            for (const auto& [sym, arity] : arities) {
                auto params = opaque_params(arity);
                b->opaques[sym] = OpaqueDef{params, random_polynomial(sampler, params, degree[sym])};
            }
            for (const auto& v : vars) {
                if (den_vars.count(v))
                    b->vars[v] = sampler.positive_box();
                else
                    b->vars[v] = sampler.rational(-2, 2, 8);
            }
            try {
                if (exact_evaluable(s, *b)) {
                    Rat v = eval_exact(s, *b);
                    evaluated = true;
                    ++successes;
                    if (!rat_is_zero(v)) {
                        verdict.state = ZeroState::NonZero;
                        verdict.witness = b;
                        verdict.witness_residual = rat_to_double(v);
                        verdict.trials = successes;
                        return verdict;
                    }
                } else {
                    double mag = 0;
                    double v = eval_float(s, *b, &mag);
                    evaluated = true;
                    ++successes;
                    double scale = 1.0 + mag;
                    if (std::fabs(v) > cfg.tol * scale) {
                        verdict.state = ZeroState::NonZero;
                        verdict.witness = b;
                        verdict.witness_residual = v;
                        verdict.trials = successes;
                        return verdict;
                    }
                    verdict.max_residual = std::max(verdict.max_residual, std::fabs(v) / scale);
                }
            } catch (const SingularPointError&) {
                // redraw
            }
        }
    }
    if (successes == 0)
        throw InconclusiveError("all samples hit singular points for " + to_string(s));
    verdict.trials = successes;
    return verdict;
}

}  // namespace sf
