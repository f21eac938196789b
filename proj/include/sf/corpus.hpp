#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sf/dynamics.hpp"
#include "sf/poisson.hpp"
#include "sf/stackel.hpp"

namespace sf {

// One declarative system definition: lifting matrix, separated generators,
// optional printed family (slot permutation and presentation recipe),
// optional second basis, expected expressions, expected operators, canonical
// transform, concretization and integration defaults.
struct OperatorExpectation {
    int slot = 0;  // 1-based slot in the presented family
    ExprMatrix matrix;
};

struct TransformSpec {
    Chart target;
    std::vector<ExprPtr> forward;
    std::string apply_family = "printed";  // raw | printed | tilde
    int apply_slot = 1;                    // 1-based, for the expect match
    std::optional<ExprPtr> expect;
    bool expect_documented_mismatch = false;
};

struct IntegrationSpec {
    std::map<std::string, double> ic;
    int flow = 1;  // 1-based slot of the presented family
    double T = 10.0;
    double dt = 1e-3;
    std::string method = "rk4";
};

struct SystemDefinition {
    std::string name;
    std::string title;
    Chart chart;
    ShapeMode mode = ShapeMode::Generalized;
    ExprMatrix matrix;
    std::vector<ExprPtr> functions;
    std::vector<int> permutation;          // optional, 1-based, raw rows -> slots
    std::vector<ExprPtr> presentation;     // optional recipe over permuted slots
    std::vector<ExprPtr> expected;         // printed family expectations
    std::vector<ExprPtr> tilde;            // optional recipe over printed slots
    std::vector<ExprPtr> expected_tilde;
    std::vector<OperatorExpectation> expected_operators;
    std::optional<TransformSpec> transform;
    std::map<std::string, OpaqueDef> concretization;
    IntegrationSpec integration;
    bool theorem41 = false;
    bool chain_ops = true;
    int pivot = 1;  // 1-based
    std::string source_text;

    LiftMatrix lift() const { return LiftMatrix{chart, matrix, mode}; }
};

struct DefinitionError : ExprError {
    using ExprError::ExprError;
};

SystemDefinition parse_definition(const std::string& text, const std::string& origin);
SystemDefinition load(const std::string& path);

const std::vector<std::string>& builtin_names();
SystemDefinition builtin(const std::string& name);
const std::string& builtin_text(const std::string& name);

}  // namespace sf
