#include "stablelab/report.hpp"

#include <cmath>
#include <cstdio>

#include "stablelab/errors.hpp"

namespace stablelab {

void EstimateReport::add(const std::string& key, double value) { meta.emplace_back(key, format_double(value)); }

void EstimateReport::add(const std::string& key, std::uint64_t value) {
    meta.emplace_back(key, std::to_string(value));
}

void EstimateReport::add(const std::string& key, const std::string& value) { meta.emplace_back(key, value); }

std::optional<std::string> EstimateReport::find(const std::string& key) const {
    for (const auto& [k, v] : meta)
        if (k == key) return v;
    return std::nullopt;
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_header() { return "name,lhs,se,rhs,implied_constant,regime_ok,pass"; }

std::string csv_row(const EstimateReport& r) {
    if (r.pass && !r.regime_ok) throw InvariantError("report " + r.name + ": pass without regime_ok");
    if (r.name.find_first_of(",\"\n") != std::string::npos)
        throw ContractError("report name must not contain commas, quotes or newlines: " + r.name);
    std::string row = r.name;
    row += ',' + format_double(r.lhs);
    row += ',' + (r.se ? format_double(*r.se) : std::string());
    row += ',' + format_double(r.rhs);
    row += ',' + format_double(r.implied_constant);
    row += r.regime_ok ? ",true" : ",false";
    row += r.pass ? ",true" : ",false";
    return row;
}

}  // namespace stablelab
