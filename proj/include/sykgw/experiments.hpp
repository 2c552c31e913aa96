#pragma once

// Disorder-ensemble experiment drivers. Each run produces a set of named
// tables (written as <name>.tsv) plus wall-clock timings, which are kept in a
// separate file so that the tables themselves are reproducible bit for bit.

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "sykgw/config.hpp"
#include "sykgw/persist.hpp"

namespace sykgw {

/// Version tag stamped into every table row.
std::string artifact_version();

struct OperatingPoint {
    std::string mode;  // "calibrated" or "fixed"
    double g = 0.0;
    double t_star = 0.0;
    double t_r = 0.0;
    double f_calibration = 0.0;  // seed-mean F at the optimum, NaN when fixed
    int seeds = 0;
};

struct ExperimentResult {
    ExperimentKind kind = ExperimentKind::Calibrate;
    std::string config_hash;
    std::string config_json;
    std::vector<std::pair<std::string, Table>> tables;
    std::vector<std::pair<std::string, double>> timing;  // stage, seconds

    const Table& table(const std::string& name) const;
};

/// Runs the experiment selected by cfg.kind. Progress lines go to `log` when
/// it is non-null.
ExperimentResult run_experiment(const ExperimentConfig& cfg, std::ostream* log = nullptr);

/// Writes every table as <out_dir>/<name>.tsv, the canonical configuration as
/// <kind>_config.json and timings as <kind>_timing.tsv. Creates out_dir.
std::vector<std::string> write_experiment(const ExperimentResult& result, const std::string& out_dir);

}  // namespace sykgw
