#include "sf/corpus.hpp"

#include <fstream>
#include <sstream>

#include "sf/parse.hpp"

namespace sf {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream is(s);
    std::vector<std::string> out;
    std::string w;
    while (is >> w) out.push_back(w);
    return out;
}

struct Section {
    std::string name;
    std::vector<std::string> lines;
};

std::vector<Section> split_sections(const std::string& text, std::string& head_name,
                                    std::string& head_title) {
    std::vector<Section> out;
    Section* cur = nullptr;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (t.front() == '[' && t.back() == ']') {
            out.push_back({t.substr(1, t.size() - 2), {}});
            cur = &out.back();
            continue;
        }
        if (!cur) {
            auto colon = t.find(':');
            if (colon == std::string::npos)
                throw DefinitionError("line " + std::to_string(lineno) +
                                      ": expected 'key: value' before first section");
            std::string key = trim(t.substr(0, colon));
            std::string val = trim(t.substr(colon + 1));
            if (key == "name")
                head_name = val;
            else if (key == "title")
                head_title = val;
            else
                throw DefinitionError("unknown header key: " + key);
            continue;
        }
        cur->lines.push_back(t);
    }
    return out;
}

std::map<std::string, std::string> keyvals(const Section& sec) {
    std::map<std::string, std::string> out;
    for (const auto& l : sec.lines) {
        auto colon = l.find(':');
        if (colon == std::string::npos)
            throw DefinitionError("[" + sec.name + "]: expected 'key: value', got: " + l);
        out[trim(l.substr(0, colon))] = trim(l.substr(colon + 1));
    }
    return out;
}

ExprPtr parse_entry(const std::string& s, const std::string& where) {
    try {
        return parse(s);
    } catch (const ParseError& e) {
        throw DefinitionError(where + ": " + e.what() + " in '" + s + "'");
    }
}

ExprMatrix parse_matrix_rows(const std::vector<std::string>& lines, const std::string& where) {
    std::vector<std::vector<ExprPtr>> rows;
    for (const auto& l : lines) {
        std::vector<ExprPtr> row;
        std::string cell;
        std::istringstream is(l);
        while (std::getline(is, cell, '|')) row.push_back(parse_entry(trim(cell), where));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw DefinitionError(where + ": empty matrix");
    ExprMatrix m(rows.size(), rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != rows[0].size())
            throw DefinitionError(where + ": ragged matrix row " + std::to_string(i + 1));
        for (std::size_t j = 0; j < rows[i].size(); ++j) m.at(i, j) = rows[i][j];
    }
    return m;
}

}  // namespace

SystemDefinition parse_definition(const std::string& text, const std::string& origin) {
    SystemDefinition def;
    def.source_text = text;
    std::string name, title;
    auto sections = split_sections(text, name, title);
    def.name = name;
    def.title = title;
    if (def.name.empty()) throw DefinitionError(origin + ": missing 'name:' header");

    bool have_chart = false, have_matrix = false, have_functions = false;
    std::string matrix_mode = "generalized";
    std::vector<std::string> matrix_lines;

    for (const auto& sec : sections) {
        const std::string where = origin + " [" + sec.name + "]";
        if (sec.name == "chart") {
            auto kv = keyvals(sec);
            if (!kv.count("coords") || !kv.count("momenta"))
                throw DefinitionError(where + ": needs coords and momenta");
            def.chart = Chart::make(split_ws(kv["coords"]), split_ws(kv["momenta"]));
            have_chart = true;
        } else if (sec.name == "matrix") {
            for (const auto& l : sec.lines) {
                if (l.rfind("mode:", 0) == 0)
                    matrix_mode = trim(l.substr(5));
                else
                    matrix_lines.push_back(l);
            }
            have_matrix = true;
        } else if (sec.name == "functions") {
            for (const auto& l : sec.lines) def.functions.push_back(parse_entry(l, where));
            have_functions = true;
        } else if (sec.name == "permutation") {
            for (const auto& l : sec.lines)
                for (const auto& w : split_ws(l)) def.permutation.push_back(std::stoi(w));
        } else if (sec.name == "presentation") {
            for (const auto& l : sec.lines) def.presentation.push_back(parse_entry(l, where));
        } else if (sec.name == "expected") {
            for (const auto& l : sec.lines) def.expected.push_back(parse_entry(l, where));
        } else if (sec.name == "tilde") {
            for (const auto& l : sec.lines) def.tilde.push_back(parse_entry(l, where));
        } else if (sec.name == "expected_tilde") {
            for (const auto& l : sec.lines) def.expected_tilde.push_back(parse_entry(l, where));
        } else if (sec.name == "operators") {
            OperatorExpectation cur;
            std::vector<std::string> rows;
            auto flush = [&]() {
                if (cur.slot == 0) return;
                cur.matrix = parse_matrix_rows(rows, where);
                def.expected_operators.push_back(cur);
                rows.clear();
            };
            for (const auto& l : sec.lines) {
                if (l.rfind("slot:", 0) == 0) {
                    flush();
                    cur.slot = std::stoi(trim(l.substr(5)));
                } else {
                    rows.push_back(l);
                }
            }
            flush();
        } else if (sec.name == "transform") {
            TransformSpec t;
            std::vector<std::string> tc, tm;
            std::vector<std::pair<std::string, ExprPtr>> assigns;
            for (const auto& l : sec.lines) {
                if (l.rfind("target_coords:", 0) == 0) {
                    tc = split_ws(trim(l.substr(14)));
                } else if (l.rfind("target_momenta:", 0) == 0) {
                    tm = split_ws(trim(l.substr(15)));
                } else if (l.rfind("apply:", 0) == 0) {
                    auto ws = split_ws(trim(l.substr(6)));
                    if (ws.size() != 2) throw DefinitionError(where + ": apply: <family> <slot>");
                    t.apply_family = ws[0];
                    t.apply_slot = std::stoi(ws[1]);
                } else if (l.rfind("expect_status:", 0) == 0) {
                    t.expect_documented_mismatch = trim(l.substr(14)) == "documented-mismatch";
                } else if (l.rfind("expect:", 0) == 0) {
                    t.expect = parse_entry(trim(l.substr(7)), where);
                } else {
                    auto eq = l.find('=');
                    if (eq == std::string::npos)
                        throw DefinitionError(where + ": expected 'Var = expr', got: " + l);
                    assigns.emplace_back(trim(l.substr(0, eq)),
                                         parse_entry(trim(l.substr(eq + 1)), where));
                }
            }
            if (tc.empty() || tm.empty())
                throw DefinitionError(where + ": needs target_coords and target_momenta");
            t.target = Chart::make(tc, tm);
            auto tvars = t.target.vars();
            t.forward.resize(tvars.size());
            std::vector<bool> got(tvars.size(), false);
            for (auto& [lhs, rhs] : assigns) {
                bool matched = false;
                for (std::size_t i = 0; i < tvars.size(); ++i)
                    if (tvars[i] == lhs) {
                        t.forward[i] = rhs;
                        got[i] = true;
                        matched = true;
                    }
                if (!matched) throw DefinitionError(where + ": unknown target variable " + lhs);
            }
            for (std::size_t i = 0; i < tvars.size(); ++i)
                if (!got[i]) throw DefinitionError(where + ": missing map for " + tvars[i]);
            def.transform = std::move(t);
        } else if (sec.name == "concretization") {
            for (const auto& l : sec.lines) {
                auto eq = l.find('=');
                auto paren = l.find('(');
                if (eq == std::string::npos || paren == std::string::npos || paren > eq)
                    throw DefinitionError(where + ": expected 'F(x,..) = poly', got: " + l);
                std::string sym = trim(l.substr(0, paren));
                std::string params_str = l.substr(paren + 1, l.find(')') - paren - 1);
                std::vector<std::string> params;
                std::istringstream ps(params_str);
                std::string p;
                while (std::getline(ps, p, ',')) params.push_back(trim(p));
                def.concretization[sym] =
                    OpaqueDef{params, parse_entry(trim(l.substr(eq + 1)), where)};
            }
        } else if (sec.name == "integration") {
            auto kv = keyvals(sec);
            if (kv.count("flow")) def.integration.flow = std::stoi(kv["flow"]);
            if (kv.count("T")) def.integration.T = std::stod(kv["T"]);
            if (kv.count("dt")) def.integration.dt = std::stod(kv["dt"]);
            if (kv.count("method")) def.integration.method = kv["method"];
            if (kv.count("ic")) {
                for (const auto& w : split_ws(kv["ic"])) {
                    auto eq = w.find('=');
                    if (eq == std::string::npos)
                        throw DefinitionError(where + ": ic entries are name=value");
                    def.integration.ic[w.substr(0, eq)] = std::stod(w.substr(eq + 1));
                }
            }
        } else if (sec.name == "flags") {
            auto kv = keyvals(sec);
            if (kv.count("theorem41")) def.theorem41 = kv["theorem41"] == "true";
            if (kv.count("chain_ops")) def.chain_ops = kv["chain_ops"] == "true";
            if (kv.count("pivot")) def.pivot = std::stoi(kv["pivot"]);
        } else {
            throw DefinitionError(origin + ": unknown section [" + sec.name + "]");
        }
    }

    if (!have_chart) throw DefinitionError(origin + ": missing [chart]");
    if (!have_matrix) throw DefinitionError(origin + ": missing [matrix]");
    if (!have_functions) throw DefinitionError(origin + ": missing [functions]");

    def.mode = shape_mode_from_string(matrix_mode);
    def.matrix = parse_matrix_rows(matrix_lines, origin + " [matrix]");
    if (!def.matrix.square() || def.matrix.rows() != static_cast<std::size_t>(def.chart.dof()))
        throw DefinitionError(origin + ": matrix size must match chart degrees of freedom");
    if (def.functions.size() != def.matrix.rows())
        throw DefinitionError(origin + ": one generator per matrix row required");
    if (!def.permutation.empty() && def.permutation.size() != def.functions.size())
        throw DefinitionError(origin + ": permutation must list every slot");

    // chart-variable resolution for matrix entries and generators
    for (std::size_t i = 0; i < def.matrix.rows(); ++i)
        for (std::size_t j = 0; j < def.matrix.cols(); ++j)
            for (const auto& v : def.chart.foreign_vars(def.matrix.at(i, j)))
                throw DefinitionError(origin + ": matrix entry (" + std::to_string(i + 1) + "," +
                                      std::to_string(j + 1) + ") references unknown variable " + v);
    for (const auto& fk : def.functions)
        for (const auto& v : def.chart.foreign_vars(fk))
            throw DefinitionError(origin + ": generator references unknown variable " + v);

    return def;
}

SystemDefinition load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DefinitionError("cannot open definition file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return parse_definition(os.str(), path);
}

}  // namespace sf
