#include "sf/suite.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <functional>
#include <random>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "sf/dynamics.hpp"
#include "sf/haantjes.hpp"
#include "sf/poisson.hpp"

namespace sf {

namespace {

std::uint64_t mix_seed(std::uint64_t seed, const std::string& a, const std::string& b) {
    std::uint64_t h = 1469598103934665603ull ^ seed;
    for (char c : a) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    h ^= 0x7c;
    for (char c : b) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    return h;
}

std::string fmt_double(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

std::string verdict_of(const ZeroVerdict& v) {
    switch (v.state) {
        case ZeroState::ProvenZero: return "proven";
        case ZeroState::LikelyZero: return "likely";
        case ZeroState::NonZero: return "failed";
    }
    return "failed";
}

std::string zero_detail(const ZeroVerdict& v) {
    if (v.state == ZeroState::NonZero) {
        std::string d = "residual " + fmt_double(v.witness_residual);
        if (v.witness) d += " at " + v.witness->describe();
        return d;
    }
    if (v.state == ZeroState::LikelyZero)
        return "trials " + std::to_string(v.trials) + ", max residual " +
               fmt_double(v.max_residual);
    return "";
}

// Deterministic parallel execution: tasks write into pre-assigned slots, so
// the report layout is independent of scheduling.
void run_tasks(std::vector<std::function<void()>>& tasks, int workers) {
    if (workers <= 1 || tasks.size() <= 1) {
        for (auto& t : tasks) t();
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            tasks[i]();
        }
    };
    std::vector<std::thread> pool;
    int n = std::min<int>(workers, static_cast<int>(tasks.size()));
    for (int i = 0; i < n; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
}

struct Families {
    HamiltonianSystem raw;
    HamiltonianSystem printed;  // == raw when no permutation/presentation
    bool printed_distinct = false;
    std::optional<HamiltonianSystem> tilde;
};

std::string slot_list(const HamiltonianSystem& s, std::size_t i, std::size_t j) {
    return "{H" + std::to_string(i + 1) + ",H" + std::to_string(j + 1) + "}";
}

}  // namespace

int resolve_workers(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("SF_WORKERS")) {
        int v = std::atoi(env);
        if (v > 0) return v;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return static_cast<int>(hw == 0 ? 1 : std::min(hw, 8u));
}

Report run_suite(const SystemDefinition& def, const SuiteConfig& cfg) {
    Report rep;
    rep.seed = cfg.zero.seed;
    rep.trials = cfg.zero.trials;
    rep.tol = cfg.zero.tol;
    rep.workers = resolve_workers(cfg.workers);

    SystemReport sr;
    sr.name = def.name;

    auto cfg_for = [&](const std::string& check, const std::string& target) {
        ZeroConfig z = cfg.zero;
        z.seed = mix_seed(cfg.zero.seed, def.name + "/" + check, target);
        return z;
    };

    struct Timer {
        std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
        double ms() const {
            return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                .count();
        }
    };

    // tasks fill slots; entries assembled in order afterwards
    std::vector<CheckEntry> entries;
    std::vector<std::function<void()>> tasks;
    auto add_task = [&](std::string check, std::string target,
                        std::function<void(CheckEntry&)> body) {
        entries.push_back({std::move(check), std::move(target), "skipped", "", 0});
        std::size_t slot = entries.size() - 1;
        tasks.push_back([&entries, slot, body = std::move(body)] {
            CheckEntry& e = entries[slot];
            Timer t;
            try {
                body(e);
            } catch (const InconclusiveError& ex) {
                e.verdict = "inconclusive";
                e.detail = ex.what();
            } catch (const ExprError& ex) {
                e.verdict = "failed";
                e.detail = ex.what();
            }
            e.ms = t.ms();
        });
    };
    auto add_zero_task = [&](const std::string& check, const std::string& target, ExprPtr e) {
        ZeroConfig z = cfg_for(check, target);
        add_task(check, target, [e = std::move(e), z](CheckEntry& out) {
            ZeroVerdict v = is_zero(e, z);
            out.verdict = verdict_of(v);
            out.detail = zero_detail(v);
        });
    };

    // ---- stage 1: shape -------------------------------------------------
    LiftMatrix lift = def.lift();
    if (cfg.wants("shape")) {
        add_task("shape", "matrix", [&, lift](CheckEntry& e) {
            ShapeReport s = validate_shape(lift, lift.mode, cfg_for("shape", "matrix"));
            e.verdict = s.ok ? "proven" : "failed";
            e.detail = s.ok ? shape_mode_name(lift.mode) : s.message();
        });
        add_task("shape", "functions", [&](CheckEntry& e) {
            StackelFunctions f{def.functions};
            ShapeReport s = validate_functions(f, def.chart);
            e.verdict = s.ok ? "proven" : "failed";
            e.detail = s.ok ? "" : s.message();
        });
    }
    run_tasks(tasks, rep.workers);
    tasks.clear();

    // ---- stage 2: generation (prerequisite for everything else) ---------
    Families fam;
    bool generated = false;
    {
        CheckEntry e{"generate", "akn", "failed", "", 0};
        Timer t;
        try {
            StackelFunctions f{def.functions};
            fam.raw = akn_system(lift, f, cfg_for("generate", "akn"));
            fam.printed = fam.raw;
            if (!def.permutation.empty()) {
                fam.printed = permute_basis(fam.printed, def.permutation);
                fam.printed_distinct = true;
            }
            if (!def.presentation.empty()) {
                fam.printed = change_basis(fam.printed, def.presentation);
                fam.printed_distinct = true;
            }
            if (!def.tilde.empty()) fam.tilde = change_basis(fam.printed, def.tilde);
            generated = true;
            e.verdict = "proven";
            e.detail = std::to_string(fam.raw.H.size()) + " Hamiltonians";
        } catch (const ExprError& ex) {
            e.detail = ex.what();
        }
        e.ms = t.ms();
        entries.push_back(e);
    }

    if (generated) {
        // ---- stage 3: expected matches ----------------------------------
        if (cfg.wants("expected") && !def.expected.empty()) {
            for (std::size_t j = 0; j < def.expected.size() && j < fam.printed.H.size(); ++j)
                add_zero_task("expected", "H" + std::to_string(j + 1),
                              sub(fam.printed.H[j], def.expected[j]));
        }
        if (cfg.wants("expected") && !def.expected_tilde.empty() && fam.tilde) {
            for (std::size_t j = 0; j < def.expected_tilde.size() && j < fam.tilde->H.size(); ++j)
                add_zero_task("expected", "tilde H" + std::to_string(j + 1),
                              sub(fam.tilde->H[j], def.expected_tilde[j]));
        }

        // ---- stage 4: separation residuals -------------------------------
        if (cfg.wants("residuals")) {
            StackelFunctions f{def.functions};
            auto res = separation_residuals(lift, f, fam.raw);
            for (std::size_t a = 0; a < res.size(); ++a)
                add_zero_task("residuals", "row " + std::to_string(a + 1), res[a]);
        }

        // ---- stage 5: involution -----------------------------------------
        if (cfg.wants("involution")) {
            auto add_family = [&](const std::string& famname, const HamiltonianSystem& sys) {
                for (std::size_t i = 0; i < sys.H.size(); ++i)
                    for (std::size_t j = i + 1; j < sys.H.size(); ++j)
                        add_zero_task("involution", famname + " " + slot_list(sys, i, j),
                                      poisson_bracket(sys.H[i], sys.H[j], sys.chart));
            };
            add_family("raw", fam.raw);
            if (fam.printed_distinct) add_family("printed", fam.printed);
            if (fam.tilde) add_family("tilde", *fam.tilde);
        }
        run_tasks(tasks, rep.workers);
        tasks.clear();

        // ---- stage 6: chain operators -------------------------------------
        bool want_ops = def.chain_ops && (cfg.wants("torsion") || cfg.wants("chain") ||
                                          cfg.wants("compat") || cfg.wants("expected"));
        if (want_ops) {
            std::vector<TensorField11> ops;
            CheckEntry build{"operators", "build", "failed", "", 0};
            Timer t;
            try {
                ops = build_chain_operators(fam.printed, def.pivot - 1,
                                            cfg_for("operators", "build"));
                build.verdict = "proven";
                build.detail = std::to_string(ops.size()) + " diagonal operators, pivot H" +
                               std::to_string(def.pivot);
            } catch (const ExprError& ex) {
                build.detail = ex.what();
            }
            build.ms = t.ms();
            entries.push_back(build);

            if (!ops.empty()) {
                if (cfg.wants("expected")) {
                    for (const auto& exp_op : def.expected_operators) {
                        if (exp_op.slot < 1 ||
                            static_cast<std::size_t>(exp_op.slot) > ops.size())
                            continue;
                        const auto& K = ops[static_cast<std::size_t>(exp_op.slot - 1)].K;
                        std::vector<ExprPtr> diffs;
                        for (std::size_t i = 0; i < K.rows(); ++i)
                            for (std::size_t j = 0; j < K.cols(); ++j)
                                diffs.push_back(sub(K.at(i, j), exp_op.matrix.at(i, j)));
                        // a single aggregated residual per expected operator
                        std::vector<ExprPtr> sq;
                        for (auto& d : diffs) sq.push_back(mul(d, d));
                        add_zero_task("expected", "operator slot " + std::to_string(exp_op.slot),
                                      make_sum(std::move(sq)));
                    }
                }
                if (cfg.wants("torsion")) {
                    for (std::size_t j = 0; j < ops.size(); ++j) {
                        ZeroConfig z = cfg_for("torsion", "K" + std::to_string(j + 1));
                        const TensorField11& K = ops[j];
                        add_task("torsion", "K" + std::to_string(j + 1), [K, z](CheckEntry& e) {
                            std::string where;
                            bool ok = haantjes_torsion(K).all_zero(z, &where);
                            e.verdict = ok ? "likely" : "failed";
                            e.detail = ok ? "" : where;
                        });
                    }
                    // ring and module closure with deterministic coefficient samples
                    ZeroConfig z = cfg_for("torsion", "algebra");
                    auto chart = fam.printed.chart;
                    add_task("torsion", "algebra closure", [ops, z, chart](CheckEntry& e) {
                        std::mt19937_64 rng(z.seed);
                        auto coeff = [&]() {
                            std::vector<ExprPtr> terms{
                                make_int(1 + static_cast<long>(rng() % 5))};
                            for (const auto& q : chart.coords)
                                if (rng() % 2)
                                    terms.push_back(mul(
                                        make_int(1 + static_cast<long>(rng() % 3)),
                                        make_var(q)));
                            return make_sum(std::move(terms));
                        };
                        std::vector<std::pair<ExprPtr, ExprPtr>> samples;
                        for (int s = 0; s < 5; ++s) samples.emplace_back(coeff(), coeff());
                        AlgebraReport a = algebra_checks(ops, samples, z);
                        e.verdict = a.ok ? "likely" : "failed";
                        if (!a.ok) {
                            for (const auto& f : a.failures) e.detail += f + "; ";
                        }
                    });
                }
                if (cfg.wants("compat")) {
                    for (std::size_t j = 0; j < ops.size(); ++j) {
                        ZeroConfig z = cfg_for("compat", "K" + std::to_string(j + 1));
                        const TensorField11& K = ops[j];
                        add_task("compat", "K" + std::to_string(j + 1), [K, z](CheckEntry& e) {
                            CompatReport c = compatibility_check(K, z);
                            e.verdict = c.ok ? "likely" : "failed";
                            if (!c.ok)
                                e.detail = "entry (" + std::to_string(c.offending[0].first + 1) +
                                           "," + std::to_string(c.offending[0].second + 1) + ")";
                        });
                    }
                }
                if (cfg.wants("chain")) {
                    const ExprPtr pivotH = fam.printed.H[static_cast<std::size_t>(def.pivot - 1)];
                    for (std::size_t j = 0; j < ops.size(); ++j) {
                        ZeroConfig z = cfg_for("chain", "K" + std::to_string(j + 1));
                        const TensorField11& K = ops[j];
                        add_task("chain", "K" + std::to_string(j + 1),
                                 [K, pivotH, z](CheckEntry& e) {
                                     ChainReport c = chain_check(K, pivotH, z);
                                     e.verdict = c.ok ? "likely" : "failed";
                                     if (!c.ok)
                                         e.detail = "curl (" +
                                                    std::to_string(c.offending[0].first + 1) +
                                                    "," +
                                                    std::to_string(c.offending[0].second + 1) +
                                                    ")";
                                 });
                    }
                }
                // informational: cofactor-quotient eigenvalue formula
                {
                    CheckEntry info{"eigenvalue-formula", "cross-check", "likely", "", 0};
                    Timer ti;
                    try {
                        StackelFunctions f{def.functions};
                        Eq43Report r = eigenvalue_formula_cross_check(
                            lift, f, fam.raw, 0, cfg_for("info", "eq-formula"));
                        if (!r.consistent) {
                            info.verdict = "mismatch";
                            std::size_t shown = 0;
                            for (const auto& m : r.mismatches) {
                                if (shown++ >= 3) {
                                    info.detail += "(+" +
                                                   std::to_string(r.mismatches.size() - 3) +
                                                   " more)";
                                    break;
                                }
                                info.detail += "(j=" + std::to_string(m.j + 1) +
                                               ",r=" + std::to_string(m.r + 1) + ") ";
                            }
                            info.detail +=
                                "cofactor route differs from the derivative quotient";
                        } else {
                            info.detail = "cofactor route agrees with the derivative quotient";
                        }
                    } catch (const ExprError& ex) {
                        info.verdict = "inconclusive";
                        info.detail = ex.what();
                    }
                    info.ms = ti.ms();
                    sr.info.push_back(info);
                }
            }
        }
        run_tasks(tasks, rep.workers);
        tasks.clear();

        // ---- stage 7: canonical transform ---------------------------------
        if (cfg.wants("transform") && def.transform) {
            const TransformSpec& ts = *def.transform;
            CanonicalTransform T{def.chart, ts.target, ts.forward, std::nullopt};
            bool canonical_ok = false;
            {
                CheckEntry e{"transform", "canonical", "failed", "", 0};
                Timer t;
                try {
                    CanonicalReport c = verify_canonical(T, cfg_for("transform", "canonical"));
                    canonical_ok = c.ok;
                    e.verdict = c.ok ? "likely" : (c.inconclusive ? "inconclusive" : "failed");
                    if (!c.ok && !c.failures.empty())
                        e.detail = "{" + c.failures[0].lhs + "," + c.failures[0].rhs + "} " +
                                   zero_detail(c.failures[0].verdict);
                } catch (const ExprError& ex) {
                    e.detail = ex.what();
                }
                e.ms = t.ms();
                entries.push_back(e);
            }
            const HamiltonianSystem* src = &fam.printed;
            if (ts.apply_family == "raw") src = &fam.raw;
            if (ts.apply_family == "tilde" && fam.tilde) src = &*fam.tilde;
            try {
                HamiltonianSystem pushed = push_forward(*src, T, canonical_ok);
                if (ts.expect && (ts.apply_slot < 1 ||
                                  static_cast<std::size_t>(ts.apply_slot) > pushed.H.size()))
                    throw ExprError("transform apply slot out of range");
                if (ts.expect) {
                    std::string target = "pushforward " + ts.apply_family + " H" +
                                         std::to_string(ts.apply_slot);
                    ExprPtr diff =
                        sub(pushed.H[static_cast<std::size_t>(ts.apply_slot - 1)], *ts.expect);
                    ZeroConfig z = cfg_for("transform", target);
                    bool documented = ts.expect_documented_mismatch;
                    add_task("transform", target, [diff, z, documented](CheckEntry& e) {
                        ZeroVerdict v = is_zero(diff, z);
                        e.verdict = verdict_of(v);
                        e.detail = zero_detail(v);
                        if (!v.ok() && documented)
                            e.detail = "documented mismatch; " + e.detail;
                        if (v.ok() && documented)
                            e.detail = "recorded as documented mismatch but matched; " + e.detail;
                    });
                }
                if (cfg.wants("involution")) {
                    for (std::size_t i = 0; i < pushed.H.size(); ++i)
                        for (std::size_t j = i + 1; j < pushed.H.size(); ++j)
                            add_zero_task("involution", "pushed " + slot_list(pushed, i, j),
                                          poisson_bracket(pushed.H[i], pushed.H[j], pushed.chart));
                }
            } catch (const ExprError& ex) {
                entries.push_back({"transform", "pushforward", "failed", ex.what(), 0});
            }
        }
        run_tasks(tasks, rep.workers);
        tasks.clear();

        // ---- stage 8: integration -----------------------------------------
        if (cfg.wants("integrate")) {
            CheckEntry e{"integrate", "drift", "failed", "", 0};
            Timer t;
            try {
                ConcretizedSystem cs = concretize(fam.printed, def.concretization);
                const auto vars = def.chart.vars();
                std::vector<double> ic(vars.size(), 0.0);
                for (std::size_t i = 0; i < vars.size(); ++i) {
                    auto it = def.integration.ic.find(vars[i]);
                    if (it != def.integration.ic.end()) ic[i] = it->second;
                }
                Trajectory tr =
                    integrate(cs, def.integration.flow - 1, ic, def.integration.T,
                              def.integration.dt, method_from_string(def.integration.method));
                auto drifts = conservation_report(tr);
                double worst = 0;
                for (const auto& d : drifts) worst = std::max(worst, d.max_rel);
                bool ok = worst <= cfg.drift_tol;
                e.verdict = ok ? "likely" : "failed";
                e.detail = "method " + tr.method_used +
                           (tr.symplectic_declined ? " (symplectic declined: mixed terms)" : "") +
                           ", worst relative drift " + fmt_double(worst) + " over T=" +
                           fmt_double(def.integration.T);
            } catch (const ExprError& ex) {
                e.detail = ex.what();
            }
            e.ms = t.ms();
            entries.push_back(e);
        }
    }

    for (auto& e : entries) {
        if (!e.passed()) sr.pass = false;
        sr.checks.push_back(std::move(e));
    }
    rep.pass = sr.pass;
    rep.systems.push_back(std::move(sr));
    return rep;
}

Report run_many(const std::vector<SystemDefinition>& defs, const SuiteConfig& cfg) {
    Report all;
    all.seed = cfg.zero.seed;
    all.trials = cfg.zero.trials;
    all.tol = cfg.zero.tol;
    all.workers = resolve_workers(cfg.workers);
    for (const auto& def : defs) {
        Report r = run_suite(def, cfg);
        for (auto& s : r.systems) {
            if (!s.pass) all.pass = false;
            all.systems.push_back(std::move(s));
        }
    }
    return all;
}

std::string report_to_json(const Report& r, bool with_timing) {
    nlohmann::ordered_json j;
    j["schema"] = r.schema;
    j["seed"] = r.seed;
    j["trials"] = r.trials;
    j["tol"] = r.tol;
    j["workers"] = r.workers;
    j["pass"] = r.pass;
    j["systems"] = nlohmann::ordered_json::array();
    for (const auto& s : r.systems) {
        nlohmann::ordered_json js;
        js["name"] = s.name;
        js["pass"] = s.pass;
        js["checks"] = nlohmann::ordered_json::array();
        for (const auto& c : s.checks) {
            nlohmann::ordered_json jc;
            jc["check"] = c.check;
            jc["target"] = c.target;
            jc["verdict"] = c.verdict;
            if (!c.detail.empty()) jc["detail"] = c.detail;
            if (with_timing) jc["ms"] = c.ms;
            js["checks"].push_back(std::move(jc));
        }
        js["info"] = nlohmann::ordered_json::array();
        for (const auto& c : s.info) {
            nlohmann::ordered_json jc;
            jc["check"] = c.check;
            jc["target"] = c.target;
            jc["verdict"] = c.verdict;
            if (!c.detail.empty()) jc["detail"] = c.detail;
            if (with_timing) jc["ms"] = c.ms;
            js["info"].push_back(std::move(jc));
        }
        j["systems"].push_back(std::move(js));
    }
    return j.dump(2) + "\n";
}

}  // namespace sf
