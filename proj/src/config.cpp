#include "sykgw/config.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "sykgw/errors.hpp"

namespace sykgw {

using nlohmann::json;

namespace {

struct KindName {
    ExperimentKind kind;
    const char* name;
};

constexpr KindName kKinds[] = {
    {ExperimentKind::AmplitudeScan, "amplitude-scan"}, {ExperimentKind::FrequencyScan, "freq-scan"},
    {ExperimentKind::Chirp, "chirp"},                  {ExperimentKind::Otoc, "otoc"},
    {ExperimentKind::ReoptMap, "reopt-map"},           {ExperimentKind::Scaling, "scaling"},
    {ExperimentKind::Convergence, "convergence"},      {ExperimentKind::Calibrate, "calibrate"},
};

}  // namespace

const char* to_string(ExperimentKind kind) {
    for (const auto& k : kKinds)
        if (k.kind == kind) return k.name;
    return "?";
}

ExperimentKind parse_experiment_kind(const std::string& name) {
    for (const auto& k : kKinds)
        if (name == k.name) return k.kind;
    throw InvalidArgument("unknown experiment '" + name + "'");
}

ExperimentConfig default_config(ExperimentKind kind) {
    ExperimentConfig c;
    c.kind = kind;
    c.calibration_g = linear_grid(8.0, 28.0, 1.0);
    c.calibration_t = linear_grid(3.0, 14.0, 0.5);
    c.opt_g_grid = c.calibration_g;
    c.opt_t_grid = c.calibration_t;
    switch (kind) {
        case ExperimentKind::AmplitudeScan:
            c.eps_grid = {0.0, 0.1, 0.2, 0.3, 0.5, 0.75, 1.0, 1.25, 1.5, 2.0, 2.5};
            c.omega = 1.5;
            break;
        case ExperimentKind::FrequencyScan:
            c.epsilon = 0.2;
            c.omega_grid = {0.1, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 2.0, 2.5, 3.0, 3.14, 3.5, 4.0};
            break;
        case ExperimentKind::Chirp:
            c.t_grid = linear_grid(3.0, 14.0, 0.1);
            break;
        case ExperimentKind::Otoc:
            c.t_grid = linear_grid(0.0, 12.0, 0.1);
            c.eps_grid = {0.0, 0.2, 0.5};
            c.otoc_pairs = {{0, 2}, {0, 4}, {2, 6}};
            break;
        case ExperimentKind::ReoptMap:
            c.n_avg = 5;
            c.eps_grid = {0.0, 0.5, 1.0, 1.5, 2.0};
            c.omega_grid = {0.5, 1.0, 1.5, 2.5};
            c.opt_g_grid = linear_grid(5.0, 35.0, 1.0);
            c.calibration_g = c.opt_g_grid;
            break;
        case ExperimentKind::Scaling:
            c.n_avg = 50;
            c.n_list = {10, 12, 14, 16};
            c.opt_t_grid = linear_grid(3.0, 24.0, 0.5);
            break;
        case ExperimentKind::Convergence:
            c.n_avg = 3;
            c.dt_list = {0.05, 0.025, 0.0125};
            c.propagator.adaptive = false;
            break;
        case ExperimentKind::Calibrate:
            c.n_avg = 3;
            break;
    }
    return c;
}

void ExperimentConfig::validate() const {
    build_layout(n);
    if (!(beta >= 0.0)) throw InvalidArgument("beta must be >= 0");
    if (!(j > 0.0)) throw InvalidArgument("J must be positive");
    if (n_avg < 1) throw InvalidArgument("n_avg must be >= 1");
    if (threads < 1) throw InvalidArgument("threads must be >= 1");
    if (operating_point != "calibrated" && operating_point != "fixed")
        throw InvalidArgument("operating_point must be 'calibrated' or 'fixed'");
    if (calibration_seeds < 1) throw InvalidArgument("calibration_seeds must be >= 1");
    if (!(plateau_fraction > 0.0 && plateau_fraction <= 1.0)) throw InvalidArgument("plateau_fraction must be in (0, 1]");
    if (!n_avg_list.empty() && n_avg_list.size() != n_list.size())
        throw InvalidArgument("n_avg_list must match n_list in length");
    for (int v : n_avg_list)
        if (v < 1) throw InvalidArgument("n_avg_list entries must be >= 1");
    for (int v : n_list) build_layout(v);
    for (double e : eps_grid)
        if (!(e >= 0.0)) throw InvalidArgument("eps_grid entries must be >= 0");
    propagator.validate();
    ProtocolParams{g, t_star, t_r, beta}.validate();
}

// --- JSON ------------------------------------------------------------------

namespace {

std::vector<double> read_grid(const json& v, const char* key) {
    if (v.is_array()) return v.get<std::vector<double>>();
    if (v.is_object()) {
        for (const char* k : {"start", "stop", "step"})
            if (!v.contains(k)) throw InvalidArgument(std::string("grid '") + key + "' needs start, stop and step");
        return linear_grid(v.at("start").get<double>(), v.at("stop").get<double>(), v.at("step").get<double>());
    }
    throw InvalidArgument(std::string("grid '") + key + "' must be a list or {start, stop, step}");
}

const char* insertion_name(InsertionMode m) { return m == InsertionMode::Swap ? "swap" : "pauli_twirl"; }

InsertionMode parse_insertion(const std::string& s) {
    if (s == "swap") return InsertionMode::Swap;
    if (s == "pauli_twirl") return InsertionMode::PauliTwirl;
    throw InvalidArgument("insertion must be 'swap' or 'pauli_twirl'");
}

json to_json_tree(const ExperimentConfig& c) {
    json j;
    j["experiment"] = to_string(c.kind);
    j["n"] = c.n;
    j["beta"] = c.beta;
    j["j"] = c.j;
    j["base_seed"] = c.base_seed;
    j["n_avg"] = c.n_avg;
    j["syk_prefactor"] = c.hamiltonian.syk_prefactor;
    j["strain_norm"] = c.hamiltonian.strain_norm;
    j["dt"] = c.propagator.dt_base;
    j["scheme"] = to_string(c.propagator.scheme);
    j["adaptive"] = c.propagator.adaptive;
    j["expm_tolerance"] = c.propagator.expm_tolerance;
    j["krylov_dim"] = c.propagator.krylov_dim;
    j["insertion_qubit"] = c.protocol.insertion_qubit;
    j["readout_qubit"] = c.protocol.readout_qubit;
    j["insertion"] = insertion_name(c.protocol.insertion);
    j["operating_point"] = c.operating_point;
    j["g"] = c.g;
    j["t_star"] = c.t_star;
    j["t_r"] = c.t_r;
    j["calibration_seeds"] = c.calibration_seeds;
    j["calibration_g"] = c.calibration_g;
    j["calibration_t"] = c.calibration_t;
    j["epsilon"] = c.epsilon;
    j["omega"] = c.omega;
    j["eps_grid"] = c.eps_grid;
    j["omega_grid"] = c.omega_grid;
    j["chirp_omega_t"] = c.chirp_omega_t;
    j["chirp_omega_l"] = c.chirp_omega_l;
    j["chirp_epsilon"] = c.chirp_epsilon;
    j["t_grid"] = c.t_grid;
    j["opt_g_grid"] = c.opt_g_grid;
    j["opt_t_grid"] = c.opt_t_grid;
    json pairs = json::array();
    for (const auto& [a, b] : c.otoc_pairs) pairs.push_back({a, b});
    j["otoc_pairs"] = pairs;
    j["plateau_fraction"] = c.plateau_fraction;
    j["n_list"] = c.n_list;
    j["n_avg_list"] = c.n_avg_list;
    j["dt_list"] = c.dt_list;
    return j;
}

}  // namespace

ExperimentConfig parse_config(ExperimentKind kind, const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw InvalidArgument(std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw InvalidArgument("config must be a JSON object");
    ExperimentConfig c = default_config(kind);
    static const std::set<std::string> known = [] {
        std::set<std::string> k;
        const json tree = to_json_tree(ExperimentConfig{});
        for (const auto& [key, _] : tree.items()) k.insert(key);
        k.insert("out_dir");
        k.insert("threads");
        return k;
    }();
    try {
        for (const auto& [key, v] : doc.items()) {
            if (!known.count(key)) throw InvalidArgument("unknown config key '" + key + "'");
            if (key == "experiment") {
                if (parse_experiment_kind(v.get<std::string>()) != kind)
                    throw InvalidArgument("config is for experiment '" + v.get<std::string>() + "'");
            } else if (key == "n") c.n = v.get<int>();
            else if (key == "beta") c.beta = v.get<double>();
            else if (key == "j") c.j = v.get<double>();
            else if (key == "base_seed") c.base_seed = v.get<std::uint64_t>();
            else if (key == "n_avg") c.n_avg = v.get<int>();
            else if (key == "syk_prefactor") c.hamiltonian.syk_prefactor = v.get<double>();
            else if (key == "strain_norm") c.hamiltonian.strain_norm = v.get<double>();
            else if (key == "dt") c.propagator.dt_base = v.get<double>();
            else if (key == "scheme") c.propagator.scheme = parse_scheme(v.get<std::string>());
            else if (key == "adaptive") c.propagator.adaptive = v.get<bool>();
            else if (key == "expm_tolerance") c.propagator.expm_tolerance = v.get<double>();
            else if (key == "krylov_dim") c.propagator.krylov_dim = v.get<int>();
            else if (key == "insertion_qubit") c.protocol.insertion_qubit = v.get<int>();
            else if (key == "readout_qubit") c.protocol.readout_qubit = v.get<int>();
            else if (key == "insertion") c.protocol.insertion = parse_insertion(v.get<std::string>());
            else if (key == "operating_point") c.operating_point = v.get<std::string>();
            else if (key == "g") c.g = v.get<double>();
            else if (key == "t_star") c.t_star = v.get<double>();
            else if (key == "t_r") c.t_r = v.get<double>();
            else if (key == "calibration_seeds") c.calibration_seeds = v.get<int>();
            else if (key == "calibration_g") c.calibration_g = read_grid(v, "calibration_g");
            else if (key == "calibration_t") c.calibration_t = read_grid(v, "calibration_t");
            else if (key == "epsilon") c.epsilon = v.get<double>();
            else if (key == "omega") c.omega = v.get<double>();
            else if (key == "eps_grid") c.eps_grid = read_grid(v, "eps_grid");
            else if (key == "omega_grid") c.omega_grid = read_grid(v, "omega_grid");
            else if (key == "chirp_omega_t") c.chirp_omega_t = v.get<double>();
            else if (key == "chirp_omega_l") c.chirp_omega_l = v.get<double>();
            else if (key == "chirp_epsilon") c.chirp_epsilon = v.get<double>();
            else if (key == "t_grid") c.t_grid = read_grid(v, "t_grid");
            else if (key == "opt_g_grid") c.opt_g_grid = read_grid(v, "opt_g_grid");
            else if (key == "opt_t_grid") c.opt_t_grid = read_grid(v, "opt_t_grid");
            else if (key == "otoc_pairs") {
                c.otoc_pairs.clear();
                for (const auto& p : v) c.otoc_pairs.emplace_back(p.at(0).get<int>(), p.at(1).get<int>());
            } else if (key == "plateau_fraction") c.plateau_fraction = v.get<double>();
            else if (key == "n_list") c.n_list = v.get<std::vector<int>>();
            else if (key == "n_avg_list") c.n_avg_list = v.get<std::vector<int>>();
            else if (key == "dt_list") c.dt_list = v.get<std::vector<double>>();
            else if (key == "out_dir") c.out_dir = v.get<std::string>();
            else if (key == "threads") c.threads = v.get<int>();
        }
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("config value has the wrong type: ") + e.what());
    }
    c.validate();
    return c;
}

ExperimentConfig load_config(ExperimentKind kind, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(kind, ss.str());
}

std::string canonical_json(const ExperimentConfig& cfg) { return to_json_tree(cfg).dump(); }

std::string config_hash(const ExperimentConfig& cfg) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : canonical_json(cfg)) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace sykgw
