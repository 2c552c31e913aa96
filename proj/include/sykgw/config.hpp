#pragma once

// Experiment configuration. Files are JSON objects whose keys mirror the
// fields below; every key is optional and falls back to the per-experiment
// default. Grids may be written as a list or as {"start", "stop", "step"}.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "sykgw/hamiltonians.hpp"
#include "sykgw/propagation.hpp"
#include "sykgw/protocol.hpp"

namespace sykgw {

enum class ExperimentKind { AmplitudeScan, FrequencyScan, Chirp, Otoc, ReoptMap, Scaling, Convergence, Calibrate };

const char* to_string(ExperimentKind kind);
ExperimentKind parse_experiment_kind(const std::string& name);

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::Calibrate;
    int n = 12;
    double beta = 2.0;
    double j = 1.0;
    std::uint64_t base_seed = 1;
    int n_avg = 20;

    HamiltonianOptions hamiltonian;
    PropagatorConfig propagator;
    ProtocolOptions protocol;

    // Operating point: "calibrated" runs the optimizer at eps = 0 on
    // calibration_seeds realizations first; "fixed" uses g, t_star, t_r.
    std::string operating_point = "calibrated";
    double g = 12.0;
    double t_star = 7.0;
    double t_r = 7.0;
    int calibration_seeds = 3;
    std::vector<double> calibration_g;
    std::vector<double> calibration_t;

    // Drive
    double epsilon = 0.2;
    double omega = 1.5;
    std::vector<double> eps_grid;
    std::vector<double> omega_grid;
    double chirp_omega_t = 0.5;
    double chirp_omega_l = 3.14;
    double chirp_epsilon = 0.5;

    // Grids
    std::vector<double> t_grid;      // readout (chirp) or OTOC times
    std::vector<double> opt_g_grid;  // re-optimization / scaling
    std::vector<double> opt_t_grid;
    std::vector<std::pair<int, int>> otoc_pairs;
    double plateau_fraction = 0.25;
    std::vector<int> n_list;
    std::vector<int> n_avg_list;     // per-N override for scaling, same length as n_list
    std::vector<double> dt_list;

    std::string out_dir = "results";
    int threads = 1;

    void validate() const;
};

ExperimentConfig default_config(ExperimentKind kind);

/// Defaults for `kind` overlaid with the keys of a JSON document.
ExperimentConfig parse_config(ExperimentKind kind, const std::string& json_text);
ExperimentConfig load_config(ExperimentKind kind, const std::string& path);

/// Canonical JSON (sorted keys) of every result-affecting field. out_dir and
/// threads are excluded: they do not change any number in the output.
std::string canonical_json(const ExperimentConfig& cfg);
/// FNV-1a 64 of canonical_json, as 16 hex digits.
std::string config_hash(const ExperimentConfig& cfg);

}  // namespace sykgw
