#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "sf/corpus.hpp"
#include "sf/dynamics.hpp"
#include "sf/suite.hpp"

namespace {

sf::SystemDefinition resolve(const std::string& name_or_path) {
    if (std::filesystem::exists(name_or_path)) return sf::load(name_or_path);
    return sf::builtin(name_or_path);
}

void print_report(const sf::Report& rep) {
    for (const auto& s : rep.systems) {
        std::cout << s.name << ": " << (s.pass ? "PASS" : "FAIL") << "\n";
        for (const auto& c : s.checks) {
            std::cout << "  [" << c.verdict << "] " << c.check << " " << c.target;
            if (!c.detail.empty()) std::cout << "  -- " << c.detail;
            std::cout << "\n";
        }
        for (const auto& c : s.info) {
            std::cout << "  (info) " << c.check << " " << c.target << ": " << c.verdict;
            if (!c.detail.empty()) std::cout << "  -- " << c.detail;
            std::cout << "\n";
        }
    }
    std::cout << (rep.pass ? "all checks passed" : "some checks failed") << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sf - separable Hamiltonian lift construction and verification"};
    app.require_subcommand(1);

    // list
    auto* list = app.add_subcommand("list", "List built-in system definitions");

    // show
    std::string show_name;
    auto* show = app.add_subcommand("show", "Print a system definition");
    show->add_option("name", show_name, "built-in name or file path")->required();

    // verify
    std::string verify_name;
    std::vector<std::string> checks;
    int trials = 100;
    double tol = 1e-9;
    std::uint64_t seed = 0;
    std::string json_out;
    bool no_timing = false;
    int workers = 0;
    auto* verify = app.add_subcommand("verify", "Run the verification suite");
    verify->add_option("name", verify_name, "built-in name, file path, or 'all'")->required();
    verify->add_option("--checks", checks,
                       "subset: shape,expected,residuals,involution,torsion,chain,compat,"
                       "transform,integrate")
        ->delimiter(',');
    verify->add_option("--trials", trials, "randomized trials per zero test");
    verify->add_option("--tol", tol, "zero-test tolerance");
    verify->add_option("--seed", seed, "random seed");
    verify->add_option("--json", json_out, "write a JSON report to this path");
    verify->add_flag("--no-timing", no_timing, "omit timing fields from the JSON report");
    verify->add_option("--workers", workers, "parallel check workers (default SF_WORKERS)");

    // integrate
    std::string int_name, ic_str, csv_out, method = "rk4";
    int hamiltonian = 1;
    double T = 10.0, dt = 1e-3;
    auto* integ = app.add_subcommand("integrate", "Integrate a flow and track drifts");
    integ->add_option("name", int_name, "built-in name or file path")->required();
    integ->add_option("--hamiltonian", hamiltonian, "1-based flow generator slot");
    integ->add_option("--ic", ic_str, "initial condition, e.g. \"x1=0.2 p1=0.4\"");
    integ->add_option("--T", T, "duration");
    integ->add_option("--dt", dt, "time step");
    integ->add_option("--method", method, "rk4 | verlet");
    integ->add_option("--csv", csv_out, "write the trajectory as CSV to this path");

    // report
    std::vector<std::string> merge_files;
    std::string merged_out;
    auto* report = app.add_subcommand("report", "Merge JSON reports");
    report->add_option("--merge", merge_files, "report files to merge")->required();
    report->add_option("--out", merged_out, "output path (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*list) {
            for (const auto& n : sf::builtin_names()) {
                auto def = sf::builtin(n);
                std::cout << n << "  -  " << def.title << "\n";
            }
            return 0;
        }
        if (*show) {
            const auto def = resolve(show_name);
            std::cout << def.source_text;
            return 0;
        }
        if (*verify) {
            sf::SuiteConfig cfg;
            cfg.zero.trials = trials;
            cfg.zero.tol = tol;
            cfg.zero.seed = seed;
            cfg.workers = workers;
            for (const auto& c : checks) cfg.checks.insert(c);

            std::vector<sf::SystemDefinition> defs;
            if (verify_name == "all") {
                for (const auto& n : sf::builtin_names()) defs.push_back(sf::builtin(n));
            } else {
                defs.push_back(resolve(verify_name));
            }
            sf::Report rep = sf::run_many(defs, cfg);
            print_report(rep);
            if (!json_out.empty()) {
                std::ofstream out(json_out);
                out << sf::report_to_json(rep, !no_timing);
            }
            return rep.pass ? 0 : 1;
        }
        if (*integ) {
            const auto def = resolve(int_name);
            sf::LiftMatrix lift = def.lift();
            sf::StackelFunctions f{def.functions};
            sf::HamiltonianSystem sys = sf::akn_system(lift, f);
            if (!def.permutation.empty()) sys = sf::permute_basis(sys, def.permutation);
            if (!def.presentation.empty()) sys = sf::change_basis(sys, def.presentation);
            sf::ConcretizedSystem cs = sf::concretize(sys, def.concretization);

            auto ic_map = def.integration.ic;
            std::istringstream is(ic_str);
            std::string w;
            while (is >> w) {
                auto eq = w.find('=');
                if (eq == std::string::npos) throw sf::ExprError("ic entries are name=value");
                ic_map[w.substr(0, eq)] = std::stod(w.substr(eq + 1));
            }
            const auto vars = def.chart.vars();
            std::vector<double> ic(vars.size(), 0.0);
            for (std::size_t i = 0; i < vars.size(); ++i)
                if (auto it = ic_map.find(vars[i]); it != ic_map.end()) ic[i] = it->second;

            sf::Trajectory tr = sf::integrate(cs, hamiltonian - 1, ic, T, dt,
                                              sf::method_from_string(method));
            auto drifts = sf::conservation_report(tr);
            std::cout << "method: " << tr.method_used
                      << (tr.symplectic_declined ? " (symplectic declined: mixed terms)" : "")
                      << ", steps: " << tr.steps << "\n";
            for (std::size_t j = 0; j < drifts.size(); ++j)
                std::cout << "H" << j + 1 << ": initial " << drifts[j].initial << ", max drift "
                          << drifts[j].max_abs << " (relative " << drifts[j].max_rel << ")\n";
            if (!csv_out.empty()) {
                std::ofstream out(csv_out);
                sf::write_csv(out, tr);
            }
            return 0;
        }
        if (*report) {
            nlohmann::ordered_json merged;
            merged["schema"] = "sf-report/1";
            merged["merged"] = nlohmann::ordered_json::array();
            bool pass = true;
            for (const auto& f : merge_files) {
                std::ifstream in(f);
                if (!in) throw sf::ExprError("cannot open report: " + f);
                nlohmann::ordered_json j;
                in >> j;
                merged["merged"].push_back(j);
                if (j.contains("pass") && !j["pass"].get<bool>()) pass = false;
            }
            merged["pass"] = pass;
            if (merged_out.empty()) {
                std::cout << merged.dump(2) << "\n";
            } else {
                std::ofstream out(merged_out);
                out << merged.dump(2) << "\n";
            }
            return pass ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
