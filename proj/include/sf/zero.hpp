#pragma once

#include <cstdint>
#include <memory>
#include <optional>

#include "sf/eval.hpp"
#include "sf/expr.hpp"

namespace sf {

struct ZeroConfig {
    int trials = 100;
    double tol = 1e-9;
    std::uint64_t seed = 0;
    int max_redraws = 20;
    int instantiation_degree = 3;
    std::size_t expand_budget = 4096;
};

enum class ZeroState { ProvenZero, LikelyZero, NonZero };

struct ZeroVerdict {
    ZeroState state = ZeroState::ProvenZero;
    int trials = 0;           // successful randomized trials run
    double max_residual = 0;  // largest scaled residual seen among passing trials
    std::shared_ptr<Binding> witness;  // NonZero only
    double witness_residual = 0;

    bool ok() const { return state != ZeroState::NonZero; }
    const char* name() const {
        switch (state) {
            case ZeroState::ProvenZero: return "proven-zero";
            case ZeroState::LikelyZero: return "likely-zero";
            case ZeroState::NonZero: return "nonzero";
        }
        return "?";
    }
};

struct InconclusiveError : ExprError {
    using ExprError::ExprError;
};

// Randomized identity-to-zero test. Structural simplification (plus bounded
// expansion) first; otherwise every opaque symbol is instantiated with a
// random dense polynomial and variables are bound to random rationals,
// coordinates feeding denominators drawn from [1/4,4], everything else from
// [-2,2]. Deterministic for a fixed seed.
ZeroVerdict is_zero(const ExprPtr& e, const ZeroConfig& cfg = {});

// Worst verdict combinator (NonZero dominates, then LikelyZero).
ZeroVerdict worst(const ZeroVerdict& a, const ZeroVerdict& b);

}  // namespace sf
