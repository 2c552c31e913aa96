// Acceptance suite: one PASS/FAIL line per criterion.
//
//   sykgw_acceptance                 run every criterion
//   sykgw_acceptance --criterion 6   run one
//
// Experiment outputs land under --out (default acceptance_out/criterion_<k>).

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "dense_model.hpp"
#include "oracles.hpp"
#include "sykgw/experiments.hpp"

using namespace sykgw;
namespace fs = std::filesystem;

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

class Checker {
public:
    void require(bool ok, const std::string& what) {
        lines_.push_back(std::string(ok ? "  ok   " : "  FAIL ") + what);
        ok_ = ok_ && ok;
    }
    void note(const std::string& what) { lines_.push_back("  note " + what); }
    bool ok() const { return ok_; }
    const std::vector<std::string>& lines() const { return lines_; }

private:
    bool ok_ = true;
    std::vector<std::string> lines_;
};

bool within(double v, double target, double tol) { return std::abs(v - target) <= tol; }

double combined(double a, double b) { return std::sqrt(a * a + b * b); }

int worker_threads() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

fs::path g_out = "acceptance_out";

ExperimentResult run(ExperimentKind kind, const std::string& json, const std::string& subdir, int threads) {
    ExperimentConfig cfg = parse_config(kind, json);
    cfg.threads = threads;
    ExperimentResult res = run_experiment(cfg);
    write_experiment(res, (g_out / subdir).string());
    return res;
}

std::vector<std::size_t> rows_where(const Table& t, const std::string& col, double v) {
    std::vector<std::size_t> out;
    for (std::size_t r = 0; r < t.rows.size(); ++r)
        if (std::abs(t.number(r, col) - v) < 1e-9) out.push_back(r);
    return out;
}

std::size_t row_named(const Table& t, const std::string& col, const std::string& v) {
    for (std::size_t r = 0; r < t.rows.size(); ++r)
        if (t.at(r, col) == v) return r;
    throw std::runtime_error("no row with " + col + " = " + v);
}

// --- 1: algebra ------------------------------------------------------------

void algebra(Checker& c) {
    std::mt19937_64 rng(11);
    for (int n : {4, 6, 8, 10, 12}) {
        const auto layout = build_layout(n);
        const MajoranaSet m(layout);
        const StateVector psi(layout, oracle::random_vector(layout.total_dim(), rng));
        const StateVector phi(layout, oracle::random_vector(layout.total_dim(), rng));

        std::vector<const PauliString*> gammas;
        for (Side s : {Side::Left, Side::Right})
            for (int i = 0; i < n; ++i) gammas.push_back(&m.full(s, i));
        std::vector<StateVector> once;
        for (const auto* g : gammas) {
            StateVector v = psi;
            apply_pauli(v, *g);
            once.push_back(std::move(v));
        }
        double anti = 0.0;
        for (std::size_t a = 0; a < gammas.size(); ++a)
            for (std::size_t b = 0; b < gammas.size(); ++b) {
                StateVector ab = once[b], ba = once[a];
                apply_pauli(ab, *gammas[a]);
                apply_pauli(ba, *gammas[b]);
                Eigen::VectorXcd r = ab.amplitudes + ba.amplitudes;
                if (a == b) r -= 2.0 * psi.amplitudes;
                anti = std::max(anti, r.norm());
            }

        // Unitarity: inner products survive U_g, and U_{-g} U_g = 1.
        double unit = 0.0;
        for (double g : {0.7, 12.0, 13.0}) {
            StateVector up = psi, uq = phi;
            apply_coupling(up, g, m);
            apply_coupling(uq, g, m);
            unit = std::max(unit, std::abs(up.amplitudes.dot(uq.amplitudes) - psi.amplitudes.dot(phi.amplitudes)));
            unit = std::max(unit, std::abs(up.norm() - 1.0));
            apply_coupling(up, -g, m);
            unit = std::max(unit, (up.amplitudes - psi.amplitudes).norm());
            if (n <= 8) {
                const Eigen::MatrixXcd u = Eigen::MatrixXcd(coupling_unitary(g, layout, m).matrix);
                unit = std::max(unit, (u.adjoint() * u - Eigen::MatrixXcd::Identity(u.rows(), u.cols())).norm());
            }
        }

        const StateVector inf = build_infinite_tfd(layout, m);
        double fixed = 0.0;
        for (double g : {0.7, 12.0, 13.0}) {
            StateVector v = inf;
            apply_coupling(v, g, m);
            fixed = std::max(fixed, (v.amplitudes - inf.amplitudes).norm());
        }
        double annihilate = 0.0;
        for (int i = 0; i < n; ++i) {
            StateVector a = inf, b = inf;
            apply_pauli(a, m.full(Side::Left, i));
            apply_pauli(b, m.full(Side::Right, i));
            annihilate = std::max(annihilate, 0.5 * (a.amplitudes + cplx(0, 1) * b.amplitudes).norm());
        }
        double sym = 0.0;
        for (std::uint64_t seed : {1, 2}) {
            const auto cpl = sample_couplings(n, 1.0, seed);
            StateVector hl = inf, hr = inf;
            apply_boundary(hl, build_syk(cpl, Side::Left, m));
            apply_boundary(hr, build_syk(cpl, Side::Right, m));
            sym = std::max(sym, (hl.amplitudes - hr.amplitudes).norm());
        }
        const std::string tag = "N=" + std::to_string(n) + " ";
        c.require(anti <= 1e-10, tag + "anticommutators max error " + fmt(anti));
        c.require(unit <= 1e-10, tag + "U_g unitarity max error " + fmt(unit));
        c.require(fixed <= 1e-10, tag + "U_g|I> - |I> = " + fmt(fixed));
        c.require(annihilate <= 1e-10, tag + "max |c_i|I>| = " + fmt(annihilate));
        c.require(sym <= 1e-10, tag + "|(H_L - H_R)|I>| = " + fmt(sym));
    }
}

// --- 2: thermofield double ---------------------------------------------------

void tfd(Checker& c) {
    const auto start = std::chrono::steady_clock::now();
    const auto layout = build_layout(8);
    const MajoranaSet m(layout);
    const StateVector inf = build_infinite_tfd(layout, m);
    double worst = 0.0;
    for (std::uint64_t seed : {1, 2, 3}) {
        const auto h = build_hamiltonians(sample_couplings(8, 1.0, seed), m);
        const StateVector state = build_tfd(2.0, h.h_left, inf);
        const double dl = oracle::trace_norm_half(reduced_boundary(state, Side::Left) - oracle::gibbs(h.h_left.block, 2.0));
        const double dr =
            oracle::trace_norm_half(reduced_boundary(state, Side::Right) - oracle::gibbs(h.h_right.block, 2.0));
        c.note("seed " + std::to_string(seed) + " trace distance left " + fmt(dl) + " right " + fmt(dr));
        worst = std::max({worst, dl, dr});
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    c.require(worst < 1e-8, "N=8 beta=2 marginal vs Gibbs, max trace distance " + fmt(worst) + " < 1e-8");
    c.require(secs < 60.0, "runtime " + fmt(secs) + " s < 60 s");
}

// --- 3: oracle equivalence ---------------------------------------------------

void oracles(Checker& c) {
    for (int n : {6, 8, 10}) {
        double worst = 0.0, scale = 0.0;
        for (std::uint64_t seed : {1, 2, 3}) {
            const auto cpl = sample_couplings(n, 1.0, seed);
            const auto s = contract_strain(cpl);
            const double divisor = static_cast<double>((n - 2) * (n - 3) / 2);
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j) {
                    double acc = 0.0;
                    for (int k = 0; k < n; ++k)
                        for (int l = k + 1; l < n; ++l) {
                            if (k == i || k == j || l == i || l == j) continue;
                            std::array<int, 4> q{i, j, k, l};
                            std::sort(q.begin(), q.end());
                            acc += cpl.at(q[0], q[1], q[2], q[3]);
                        }
                    acc /= divisor;
                    worst = std::max(worst, std::abs(acc - s.at(i, j)));
                    scale = std::max(scale, std::abs(acc));
                }
        }
        c.require(worst == 0.0,
                  "N=" + std::to_string(n) + " contraction vs explicit loop, max diff " + fmt(worst) +
                      " (|J~| up to " + fmt(scale) + ")");
    }

    // Protocol with insertion as a Pauli channel or as SWAP, state-vector
    // branches against a dense density matrix at N=4.
    const oracle::DenseModel dm(4);
    const auto layout = build_layout(4);
    const MajoranaSet m(layout);
    const Eigen::Index dim = Eigen::Index{1} << dm.nq;
    const double g = 1.7, t_star = 2.3, t_r = 1.9;
    double worst = 0.0, twirl = 0.0;
    for (std::uint64_t seed : {3, 4}) {
        const auto cpl = sample_couplings(4, 1.0, seed);
        const BoundaryOperator hl = build_syk(cpl, Side::Left, m), hr = build_syk(cpl, Side::Right, m);
        const StateVector psi0 = assemble_initial_state(build_tfd(2.0, hl, build_infinite_tfd(layout, m)));
        const BoundaryEvolution el(hl, {Side::Left, Eigen::MatrixXcd::Zero(hl.dim(), hl.dim())});
        const BoundaryEvolution er(hr, {Side::Right, Eigen::MatrixXcd::Zero(hr.dim(), hr.dim())});

        const Eigen::MatrixXcd back = dm.left(oracle::expm_hermitian(hl.block, cplx(0, t_star)));
        const Eigen::MatrixXcd fwd = dm.left(oracle::expm_hermitian(hl.block, cplx(0, -t_star)));
        const Eigen::MatrixXcd read = dm.right(oracle::expm_hermitian(hr.block, cplx(0, -t_r)));
        const Eigen::MatrixXcd u = read * dm.coupling(g) * fwd;
        const Eigen::VectorXcd v0 = back * psi0.amplitudes;
        const Eigen::MatrixXcd rho0 = v0 * v0.adjoint();

        for (int q : {0, 1})
            for (int readout : {0, 1}) {
                StateVector psi = psi0;
                apply_boundary(psi, Side::Left, el.static_propagator(-t_star));
                const Decoder dec = build_decoder(m, readout);
                auto finish = [&](StateVector s) {
                    apply_boundary(s, Side::Left, el.static_propagator(t_star));
                    apply_coupling(s, g, m);
                    apply_boundary(s, Side::Right, er.static_propagator(t_r));
                    return s;
                };
                const auto br = insert_message_branches(psi, q);
                std::vector<StateVector> branches;
                for (const auto& b : br) branches.push_back(finish(b));
                const double f_channel = decoded_fidelity(branches, dec);
                const double f_swap = decoded_fidelity(finish(insert_message_swap(psi, q)), dec);

                Eigen::MatrixXcd mixed = Eigen::MatrixXcd::Zero(dim, dim), swap = Eigen::MatrixXcd::Zero(dim, dim);
                for (int mu = 0; mu < 4; ++mu) {
                    const Eigen::MatrixXcd p = dm.insertion(mu, q);
                    mixed += 0.25 * p * rho0 * p.adjoint();
                    swap += 0.5 * p;
                }
                const auto obs = dm.decoder(readout);
                const double d_channel = oracle::dense_fidelity(u * mixed * u.adjoint(), obs);
                const double d_swap = oracle::dense_fidelity(u * swap * rho0 * swap.adjoint() * u.adjoint(), obs);
                worst = std::max({worst, std::abs(f_channel - d_channel), std::abs(f_swap - d_swap)});
                twirl = std::max(twirl, std::abs(f_channel - 0.25));
            }
    }
    c.require(worst <= 1e-10, "N=4 branch-averaged channel and SWAP vs density matrix, max diff " + fmt(worst));
    c.note("Pauli-channel fidelity deviates from 1/4 by at most " + fmt(twirl));
}

// --- 4: integrator orders ------------------------------------------------------

void integrators(Checker& c) {
    const auto res = run(ExperimentKind::Convergence, "{}", "criterion_4", worker_threads());
    const Table& s = res.table("convergence_slopes");
    for (std::size_t r = 0; r < s.rows.size(); ++r) {
        const std::string point = s.at(r, "point");
        if (point == "unperturbed") {
            c.note("unperturbed: single exact exponential, no discretization error");
            continue;
        }
        const double lt = s.number(r, "slope_lt"), st = s.number(r, "slope_strang");
        const double ratio = s.number(r, "lt_over_strang");
        c.require(within(lt, 1.0, 0.2), point + " Lie-Trotter slope " + fmt(lt) + " in 1.0 +- 0.2");
        c.require(within(st, 2.0, 0.3), point + " Strang slope " + fmt(st) + " in 2.0 +- 0.3");
        c.require(ratio >= 10.0, point + " LT/Strang error at dt=" + fmt(s.number(r, "ratio_dt")) + " is " +
                                     fmt(ratio) + " >= 10");
    }
}

// --- 5: baseline calibration ---------------------------------------------------

void calibration(Checker& c) {
    const auto res = run(ExperimentKind::Calibrate, R"({"n": 12, "n_avg": 3})", "criterion_5", worker_threads());
    const Table& s = res.table("calibrate_summary");
    const double f = s.number(0, "f_opt_mean"), g = s.number(0, "g_opt"), t = s.number(0, "t_opt");
    c.require(within(f, 0.626, 0.03), "F_opt " + fmt(f) + " +- " + fmt(s.number(0, "f_opt_stderr")) +
                                          " in 0.626 +- 0.03");
    c.require(std::abs(g - 12.0) <= 1.0 + 1e-9, "g* = " + fmt(g) + " within one cell (1.0) of 12");
    c.require(std::abs(t - 7.0) <= 0.5 + 1e-9, "t* = " + fmt(t) + " within one cell (0.5) of 7");
}

// --- 6: amplitude scan ---------------------------------------------------------

void amplitude(Checker& c) {
    const auto res = run(ExperimentKind::AmplitudeScan, R"({"n": 12, "n_avg": 20, "omega": 1.5})", "criterion_6",
                         worker_threads());
    const Table& s = res.table("amplitude-scan_summary");
    const Table& op = res.table("amplitude-scan_operating_point");
    c.note("operating point g=" + op.at(0, "g") + " t*=t_R=" + op.at(0, "t_star"));
    for (std::size_t r = 0; r < s.rows.size(); ++r) {
        const double eps = s.number(r, "epsilon"), f = s.number(r, "f_mean"), ratio = s.number(r, "ratio");
        const std::string tag = "eps=" + fmt(eps) + " ";
        c.require(f > 0.25, tag + "F " + fmt(f) + " > 0.25");
        if (eps <= 1.0 + 1e-9) c.require(ratio > 0.90, tag + "R " + fmt(ratio) + " > 0.90");
        if (r > 0) {
            const double prev = s.number(r - 1, "f_mean");
            const double tol = 2.0 * combined(s.number(r, "f_stderr"), s.number(r - 1, "f_stderr"));
            c.require(f <= prev + tol, tag + "F non-increasing: " + fmt(f) + " <= " + fmt(prev) + " + " + fmt(tol));
        }
    }
}

// --- 7: frequency scan ---------------------------------------------------------

void frequency(Checker& c) {
    const auto res = run(ExperimentKind::FrequencyScan, R"({"n": 12, "n_avg": 20, "epsilon": 0.2})", "criterion_7",
                         worker_threads());
    const Table& s = res.table("freq-scan_summary");
    const double d0 = s.number(0, "delta_f_mean");
    c.require(within(d0, 0.036, 0.015), "dF at omega=" + s.at(0, "omega") + " is " + fmt(d0) + " +- " +
                                            fmt(s.number(0, "delta_f_stderr")) + ", target 0.036 +- 0.015");
    for (std::size_t r = 0; r < s.rows.size(); ++r) {
        const double w = s.number(r, "omega"), d = s.number(r, "delta_f_mean"), se = s.number(r, "delta_f_stderr");
        const std::string tag = "omega=" + fmt(w) + " ";
        if (w >= 3.0 - 1e-9) c.require(std::abs(d) <= 2.0 * se, tag + "|dF| " + fmt(std::abs(d)) + " <= 2se " + fmt(2 * se));
        if (r > 0) {
            const double prev = s.number(r - 1, "delta_f_mean");
            const double tol = 2.0 * combined(se, s.number(r - 1, "delta_f_stderr"));
            c.require(d <= prev + tol, tag + "dF non-increasing: " + fmt(d) + " <= " + fmt(prev) + " + " + fmt(tol));
        }
    }
}

// --- 8: chirp ------------------------------------------------------------------

void chirp(Checker& c) {
    const auto res = run(ExperimentKind::Chirp, R"({"n": 12, "n_avg": 20})", "criterion_8", worker_threads());
    const Table& p = res.table("chirp_peaks");
    const std::size_t dt = row_named(p, "quantity", "delta_t_fid"), df = row_named(p, "quantity", "delta_f_peak");
    const double shift = p.number(dt, "mean_curve"), shift_se = p.number(dt, "seed_stderr");
    const double supp = p.number(df, "mean_curve");
    c.require(within(shift, 0.11, 0.06), "peak shift " + fmt(shift) + " in 0.11 +- 0.06");
    c.require(shift > shift_se, "peak shift positive beyond 1 stderr (" + fmt(shift_se) + ")");
    c.require(within(supp, 0.030, 0.015), "peak suppression " + fmt(supp) + " +- " + fmt(p.number(df, "seed_stderr")) +
                                              " in 0.030 +- 0.015");
    const Table& s = res.table("chirp_summary");
    const std::size_t n = s.rows.size(), first = n - n / 4;
    double worst = 0.0;
    bool late_ok = true;
    for (std::size_t r = first; r < n; ++r) {
        const double d = s.number(r, "delta_f_mean"), se = s.number(r, "delta_f_stderr");
        late_ok = late_ok && std::abs(d) <= 2.0 * se;
        worst = std::max(worst, se > 0 ? std::abs(d) / se : INFINITY);
    }
    c.require(late_ok, "late-time curves (t_R >= " + s.at(first, "t_r") + ") agree within 2 stderr, worst |dF|/se " +
                           fmt(worst));
}

// --- 9: OTOC -------------------------------------------------------------------

void otoc(Checker& c) {
    const auto res = run(ExperimentKind::Otoc, R"({"n": 12, "n_avg": 20, "omega": 1.5, "eps_grid": [0, 0.2, 0.5]})",
                         "criterion_9", worker_threads());
    const Table& s = res.table("otoc_summary");
    const auto r0 = rows_where(s, "epsilon", 0.0).at(0), r2 = rows_where(s, "epsilon", 0.2).at(0),
               r5 = rows_where(s, "epsilon", 0.5).at(0);
    double c0 = 0.0;
    for (std::size_t r = 0; r < s.rows.size(); ++r) c0 = std::max(c0, s.number(r, "c0_max_abs"));
    c.require(c0 <= 1e-8, "max |C(0)| " + fmt(c0) + " <= 1e-8");
    const double plateau = s.number(r0, "plateau_mean_curve"), tscr = s.number(r0, "t_scr_mean_curve");
    c.require(within(plateau, 0.49, 0.03), "plateau " + fmt(plateau) + " in 0.49 +- 0.03");
    c.require(within(tscr, 3.44, 0.3), "t_scr(0) " + fmt(tscr) + " in 3.44 +- 0.3");
    const double d2 = s.number(r2, "delay_mean_curve"), d5 = s.number(r5, "delay_mean_curve");
    c.note("per-seed delays: " + fmt(s.number(r2, "delay_mean")) + " +- " + fmt(s.number(r2, "delay_stderr")) +
           " and " + fmt(s.number(r5, "delay_mean")) + " +- " + fmt(s.number(r5, "delay_stderr")));
    c.require(within(d2, 0.20, 0.12) && d2 > 0, "delay(0.2) " + fmt(d2) + " in 0.20 +- 0.12, positive");
    c.require(within(d5, 0.85, 0.25) && d5 > 0, "delay(0.5) " + fmt(d5) + " in 0.85 +- 0.25, positive");
    c.require(0.0 < d2 && d2 < d5, "delay monotone in eps");
    const double ratio = d2 != 0.0 ? d5 / d2 : NAN;
    c.require(ratio >= 2.0 && ratio <= 7.0, "delay ratio delay(0.5) / delay(0.2) " + fmt(ratio) + " in [2, 7]");
}

// --- 10: re-optimization -------------------------------------------------------

void reopt(Checker& c) {
    const auto res = run(ExperimentKind::ReoptMap, R"({"n": 12, "n_avg": 5})", "criterion_10", worker_threads());
    const Table& s = res.table("reopt-map_summary");
    bool found = false;
    for (std::size_t r = 0; r < s.rows.size(); ++r) {
        const double eps = s.number(r, "epsilon"), w = s.number(r, "omega"), ratio = s.number(r, "ratio");
        const double se = s.number(r, "seed_ratio_stderr");
        const std::string tag = "(eps=" + fmt(eps) + ", omega=" + fmt(w) + ") ";
        if (eps <= 1.0 + 1e-9) c.require(within(ratio, 1.0, 0.05), tag + "r " + fmt(ratio) + " in 1 +- 0.05");
        if (within(eps, 2.0, 1e-9) && within(w, 0.5, 1e-9)) {
            found = true;
            c.require(ratio >= 1.05 && ratio <= 1.25, tag + "r " + fmt(ratio) + " in [1.05, 1.25]");
        }
        c.require(ratio >= 1.0 - 2.0 * se, tag + "r " + fmt(ratio) + " >= 1 - 2 x " + fmt(se));
    }
    c.require(found, "cell (2.0, 0.5) present");
}

// --- 11: scaling ---------------------------------------------------------------

void scaling(Checker& c) {
    const auto main = run(ExperimentKind::Scaling, R"({"n_list": [10, 12, 14], "n_avg": 50})", "criterion_11",
                          worker_threads());
    const auto smoke = run(ExperimentKind::Scaling, R"({"n_list": [16], "n_avg": 1})", "criterion_11_n16",
                           worker_threads());
    const Table& s = main.table("scaling_summary");
    for (std::size_t r = 0; r < s.rows.size(); ++r) {
        const std::string tag = "N=" + s.at(r, "n") + " ";
        c.note(tag + "F*=" + fmt(s.number(r, "f_opt_mean")) + " +- " + fmt(s.number(r, "f_opt_stderr")) +
               " at (g, t)=(" + s.at(r, "g_opt") + ", " + s.at(r, "t_opt") + ")");
        c.require(s.number(r, "delta_f_mean") > 0.0, tag + "dF* " + fmt(s.number(r, "delta_f_mean")) + " > 0");
        if (r > 0) {
            const double f = s.number(r, "f_opt_mean"), prev = s.number(r - 1, "f_opt_mean");
            const double se = combined(s.number(r, "f_opt_stderr"), s.number(r - 1, "f_opt_stderr"));
            c.require(f > prev - se, tag + "F* increasing within stderr: " + fmt(f) + " > " + fmt(prev) + " - " + fmt(se));
            c.require(s.number(r, "t_opt") >= s.number(r - 1, "t_opt"), tag + "t* non-decreasing");
        }
    }
    const Table& t = smoke.table("scaling_summary");
    const double f16 = t.number(0, "f_opt_mean"), d16 = t.number(0, "delta_f_mean");
    c.require(std::isfinite(f16) && f16 > 0.25 && f16 <= 1.0, "N=16 single-seed smoke F*=" + fmt(f16));
    c.require(d16 > 0.0, "N=16 single-seed dF* " + fmt(d16) + " > 0");
}

// --- 12: determinism -----------------------------------------------------------

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void determinism(Checker& c) {
    const std::string cal = R"("calibration_seeds": 2, "calibration_g": [12, 13], "calibration_t": [4, 5])";
    const std::vector<std::pair<ExperimentKind, std::string>> configs{
        {ExperimentKind::AmplitudeScan, R"({"n": 8, "n_avg": 2, "eps_grid": [0, 0.5], )" + cal + "}"},
        {ExperimentKind::FrequencyScan, R"({"n": 8, "n_avg": 2, "omega_grid": [0.5, 3.14], )" + cal + "}"},
        {ExperimentKind::Chirp, R"({"n": 8, "n_avg": 2, "t_grid": {"start": 3, "stop": 6, "step": 0.5}, )" + cal + "}"},
        {ExperimentKind::Otoc, R"({"n": 8, "n_avg": 2, "eps_grid": [0, 0.2], "otoc_pairs": [[0, 2], [1, 4]],
                                   "t_grid": {"start": 0, "stop": 8, "step": 0.2}})"},
        {ExperimentKind::ReoptMap, R"({"n": 8, "n_avg": 2, "eps_grid": [0, 1], "omega_grid": [0.5],
                                       "opt_g_grid": [12, 13], "opt_t_grid": [4, 5], )" + cal + "}"},
        {ExperimentKind::Scaling, R"({"n_list": [6, 8], "n_avg": 2, "opt_g_grid": [12, 13], "opt_t_grid": [4, 5]})"},
        {ExperimentKind::Convergence, R"({"n": 8, "n_avg": 1, "dt_list": [0.05, 0.025], "operating_point": "fixed",
                                          "g": 13, "t_star": 4, "t_r": 4})"},
        {ExperimentKind::Calibrate, R"({"n": 8, "n_avg": 2, "calibration_g": [12, 13], "calibration_t": [4, 5]})"},
    };
    for (const auto& [kind, json] : configs) {
        const std::string name = to_string(kind);
        const std::vector<std::pair<std::string, int>> runs{{"a", 1}, {"b", 1}, {"c", 2}};
        for (const auto& [tag, threads] : runs) {
            fs::remove_all(g_out / "criterion_12" / (name + "_" + tag));
            run(kind, json, "criterion_12/" + name + "_" + tag, threads);
        }
        std::size_t files = 0;
        bool same = true;
        const fs::path a = g_out / "criterion_12" / (name + "_a");
        for (const auto& entry : fs::directory_iterator(a)) {
            const std::string file = entry.path().filename().string();
            if (file.find("_timing") != std::string::npos) continue;
            ++files;
            const std::string ref = slurp(entry.path());
            for (const char* other : {"_b", "_c"})
                same = same && ref == slurp(g_out / "criterion_12" / (name + other) / file);
        }
        c.require(same && files > 0, name + ": " + std::to_string(files) +
                                         " files bit-identical across reruns and thread counts");
    }
}

struct Criterion {
    int id;
    const char* title;
    std::function<void(Checker&)> body;
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance checks"};
    int only = 0;
    std::string out = g_out.string();
    app.add_option("--criterion", only, "run one criterion (1-12)")->check(CLI::Range(1, 12));
    app.add_option("--out", out, "directory for experiment outputs");
    CLI11_PARSE(app, argc, argv);
    g_out = out;

    const std::vector<Criterion> all{
        {1, "algebra", algebra},
        {2, "thermofield double", tfd},
        {3, "oracle equivalence", oracles},
        {4, "integrator orders", integrators},
        {5, "baseline calibration", calibration},
        {6, "amplitude scan", amplitude},
        {7, "frequency scan", frequency},
        {8, "chirp", chirp},
        {9, "OTOC", otoc},
        {10, "re-optimization map", reopt},
        {11, "scaling", scaling},
        {12, "determinism", determinism},
    };
    int failures = 0;
    for (const auto& cr : all) {
        if (only != 0 && cr.id != only) continue;
        Checker c;
        const auto start = std::chrono::steady_clock::now();
        try {
            cr.body(c);
        } catch (const std::exception& e) {
            c.require(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        for (const auto& line : c.lines()) std::cout << line << "\n";
        std::cout << (c.ok() ? "PASS" : "FAIL") << " criterion " << cr.id << ": " << cr.title << " (" << fmt(secs)
                  << " s)" << std::endl;
        if (!c.ok()) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
