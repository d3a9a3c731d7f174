#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stablelab/config.hpp"
#include "stablelab/report.hpp"

namespace stablelab {

inline constexpr const char* kVersion = "stablelab 0.1.0";

struct RunRecord {
    ExperimentConfig config;
    std::string version = kVersion;
    double wall_seconds = 0.0;
    std::vector<EstimateReport> reports;
    /// Set when the experiment left its regime; reports then hold a single
    /// out-of-regime row.
    std::optional<std::string> regime_error;
};

/// Validates cfg (ValidationError) and runs the named experiment. A
/// RegimeError is caught and recorded; other errors propagate.
RunRecord run(const ExperimentConfig& cfg);

/// Key-value dump of the record (config echo, version, wall time, every
/// report with its meta entries).
std::string record_text(const RunRecord& r);
/// Header plus one row per report.
std::string reports_csv(const RunRecord& r);

/// Writes <dir>/record.txt and <dir>/reports.csv, each through a temporary
/// file and a rename.
void write_run(const RunRecord& r, const std::string& dir);

}  // namespace stablelab
