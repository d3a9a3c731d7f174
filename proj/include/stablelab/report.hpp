#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace stablelab {

/// Measured sides of one inequality or identity.
struct EstimateReport {
    std::string name;
    double lhs = 0.0;
    /// Standard error of lhs when it is a Monte Carlo quantity.
    std::optional<double> se;
    double rhs = 0.0;
    double implied_constant = 0.0;
    bool regime_ok = true;
    bool pass = false;
    std::vector<std::pair<std::string, std::string>> meta;

    void add(const std::string& key, double value);
    void add(const std::string& key, std::uint64_t value);
    void add(const std::string& key, const std::string& value);

    /// Value of a meta key, or nullopt.
    std::optional<std::string> find(const std::string& key) const;

    /// pass = regime_ok && ok.
    void decide(bool ok) { pass = regime_ok && ok; }
};

/// Round-trip formatting of a double ("%.17g"; nan and inf spelled out).
std::string format_double(double v);

/// name,lhs,se,rhs,implied_constant,regime_ok,pass
std::string csv_header();
std::string csv_row(const EstimateReport& r);

}  // namespace stablelab
