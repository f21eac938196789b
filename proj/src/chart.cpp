#include "sf/chart.hpp"

#include <set>

namespace sf {

Chart Chart::make(std::vector<std::string> coords, std::vector<std::string> momenta) {
    if (coords.size() != momenta.size())
        throw ChartError("chart needs one momentum per coordinate");
    if (coords.empty()) throw ChartError("empty chart");
    std::set<std::string> seen;
    for (const auto& n : coords)
        if (!seen.insert(n).second) throw ChartError("duplicate chart name: " + n);
    for (const auto& n : momenta)
        if (!seen.insert(n).second) throw ChartError("duplicate chart name: " + n);
    Chart c;
    c.coords = std::move(coords);
    c.momenta = std::move(momenta);
    return c;
}

std::vector<std::string> Chart::vars() const {
    std::vector<std::string> out = coords;
    out.insert(out.end(), momenta.begin(), momenta.end());
    return out;
}

std::optional<int> Chart::coord_index(const std::string& name) const {
    for (std::size_t i = 0; i < coords.size(); ++i)
        if (coords[i] == name) return static_cast<int>(i);
    return std::nullopt;
}

std::optional<int> Chart::momentum_index(const std::string& name) const {
    for (std::size_t i = 0; i < momenta.size(); ++i)
        if (momenta[i] == name) return static_cast<int>(i);
    return std::nullopt;
}

bool Chart::owns(const std::string& name) const {
    return coord_index(name).has_value() || momentum_index(name).has_value();
}

std::vector<std::string> Chart::foreign_vars(const ExprPtr& e) const {
    std::vector<std::string> out;
    for (const auto& v : free_vars(e))
        if (!owns(v)) out.push_back(v);
    return out;
}

}  // namespace sf
