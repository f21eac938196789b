#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "sf/corpus.hpp"
#include "sf/zero.hpp"

namespace sf {

struct SuiteConfig {
    ZeroConfig zero;
    std::set<std::string> checks;  // empty = run everything
    int workers = 0;               // 0 = SF_WORKERS env or hardware default
    double drift_tol = 1e-6;       // relative conserved-quantity drift bound

    bool wants(const std::string& name) const { return checks.empty() || checks.count(name); }
};

struct CheckEntry {
    std::string check;
    std::string target;
    std::string verdict;  // proven | likely | failed | inconclusive | skipped
    std::string detail;
    double ms = 0;

    bool passed() const {
        return verdict == "proven" || verdict == "likely" || verdict == "skipped";
    }
};

struct SystemReport {
    std::string name;
    bool pass = true;
    std::vector<CheckEntry> checks;
    std::vector<CheckEntry> info;  // informational, not counted toward pass
};

struct Report {
    std::string schema = "sf-report/1";
    std::uint64_t seed = 0;
    int trials = 0;
    double tol = 0;
    int workers = 1;
    bool pass = true;
    std::vector<SystemReport> systems;
};

Report run_suite(const SystemDefinition& def, const SuiteConfig& cfg);
Report run_many(const std::vector<SystemDefinition>& defs, const SuiteConfig& cfg);

std::string report_to_json(const Report& r, bool with_timing = true);

int resolve_workers(int requested);

}  // namespace sf
