#include "sykgw/experiments.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>
#include <ostream>
#include <sstream>

#include "sykgw/diagnostics.hpp"
#include "sykgw/errors.hpp"
#include "sykgw/parallel.hpp"
#include "sykgw/stats.hpp"

#ifndef SYKGW_VERSION
#define SYKGW_VERSION "0"
#endif

namespace sykgw {

std::string artifact_version() { return std::string("sykgw-") + SYKGW_VERSION + "/tables-1"; }

const Table& ExperimentResult::table(const std::string& name) const {
    for (const auto& [n, t] : tables)
        if (n == name) return t;
    throw InvalidArgument("experiment produced no table '" + name + "'");
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
using Clock = std::chrono::steady_clock;
using RealizationList = std::vector<std::unique_ptr<Realization>>;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

class Context {
public:
    Context(const ExperimentConfig& cfg, std::ostream* log) : cfg(cfg), log_(log) {
        result.kind = cfg.kind;
        result.config_hash = config_hash(cfg);
        result.config_json = canonical_json(cfg);
    }

    void note(const std::string& msg) const {
        if (log_) *log_ << "[" << to_string(cfg.kind) << "] " << msg << std::endl;
    }

    void timed(const std::string& stage, Clock::time_point t0) { result.timing.emplace_back(stage, seconds_since(t0)); }

    /// Appends config_hash and version to every row and stores the table.
    void emit(const std::string& suffix, Table t) {
        t.columns.push_back("config_hash");
        t.columns.push_back("version");
        const std::string v = artifact_version();
        for (auto& row : t.rows) {
            row.push_back(result.config_hash);
            row.push_back(v);
        }
        result.tables.emplace_back(std::string(to_string(cfg.kind)) + "_" + suffix, std::move(t));
    }

    const ExperimentConfig& cfg;
    ExperimentResult result;

private:
    std::ostream* log_;
};

std::uint64_t seed_of(const ExperimentConfig& cfg, int r) { return cfg.base_seed + static_cast<std::uint64_t>(r); }

RealizationList build_realizations(const ExperimentConfig& cfg, int n, int count) {
    RealizationList out(static_cast<std::size_t>(count));
    parallel_for(out.size(), cfg.threads, [&](std::size_t i) {
        out[i] = std::make_unique<Realization>(n, cfg.j, seed_of(cfg, static_cast<int>(i)), cfg.beta, cfg.hamiltonian,
                                               cfg.protocol);
    });
    return out;
}

std::vector<const Realization*> pointers(const RealizationList& list, std::size_t count) {
    std::vector<const Realization*> out;
    for (std::size_t i = 0; i < count && i < list.size(); ++i) out.push_back(list[i].get());
    return out;
}

std::vector<std::string> stat_columns(const std::string& prefix) {
    return {prefix + "_mean", prefix + "_sigma", prefix + "_stderr"};
}

void add_stats(RowBuilder& row, const SummaryStats& s) { row.add(s.mean).add(s.sigma).add(s.std_error); }

std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

double mean_of(const std::vector<double>& v) { return summarize(v).mean; }

std::vector<double> difference(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return out;
}

DriveSpec monochromatic_drive(double eps, double omega) {
    return DriveSpec::bilateral(eps, Waveform::monochromatic(omega));
}

DriveSpec chirp_drive(const ExperimentConfig& cfg, double eps, double t_star) {
    return DriveSpec::right_readout(eps, Waveform::chirp(cfg.chirp_omega_t, cfg.chirp_omega_l, t_star));
}

// --- operating point ---------------------------------------------------------

OperatingPoint operating_point(Context& ctx, const RealizationList& pool, const std::vector<double>& g_grid,
                               const std::vector<double>& t_grid) {
    const ExperimentConfig& cfg = ctx.cfg;
    OperatingPoint op;
    op.mode = cfg.operating_point;
    if (cfg.operating_point == "fixed") {
        op.g = cfg.g;
        op.t_star = cfg.t_star;
        op.t_r = cfg.t_r;
        op.f_calibration = kNaN;
        return op;
    }
    const auto t0 = Clock::now();
    RealizationList extra;
    std::vector<const Realization*> rs = pointers(pool, static_cast<std::size_t>(cfg.calibration_seeds));
    if (rs.size() < static_cast<std::size_t>(cfg.calibration_seeds)) {
        extra = build_realizations(cfg, cfg.n, cfg.calibration_seeds);
        rs = pointers(extra, extra.size());
    }
    const OptResult opt = optimize(rs, DriveSpec::none(), g_grid, t_grid, cfg.propagator, cfg.threads);
    op.g = opt.g_opt;
    op.t_star = op.t_r = opt.t_opt;
    op.f_calibration = opt.f_opt;
    op.seeds = static_cast<int>(rs.size());
    ctx.timed("calibration", t0);
    ctx.note("operating point g=" + format_number(op.g) + " t=" + format_number(op.t_star) +
             " F=" + format_number(op.f_calibration));
    return op;
}

void emit_operating_point(Context& ctx, const OperatingPoint& op) {
    Table t;
    t.columns = {"mode", "g", "t_star", "t_r", "f_calibration", "calibration_seeds", "base_seed"};
    t.rows.push_back(RowBuilder()
                         .add(op.mode)
                         .add(op.g)
                         .add(op.t_star)
                         .add(op.t_r)
                         .add(op.f_calibration)
                         .add(op.seeds)
                         .add(static_cast<long long>(ctx.cfg.base_seed))
                         .done());
    ctx.emit("operating_point", std::move(t));
}

ProtocolParams params_of(const OperatingPoint& op, double beta) { return {op.g, op.t_star, op.t_r, beta}; }

/// F for every (drive, realization) pair: out[d][r].
std::vector<std::vector<double>> fidelity_grid(const ExperimentConfig& cfg, const std::vector<DriveSpec>& drives,
                                               const RealizationList& rs, const ProtocolParams& params) {
    const std::size_t nd = drives.size(), nr = rs.size();
    std::vector<std::vector<double>> out(nd, std::vector<double>(nr));
    parallel_for(nd * nr, cfg.threads, [&](std::size_t slot) {
        const std::size_t d = slot / nr, r = slot % nr;
        out[d][r] = run_teleportation(params, *rs[r], drives[d], cfg.propagator);
    });
    return out;
}

// --- amplitude scan ----------------------------------------------------------

void amplitude_scan(Context& ctx) {
    const ExperimentConfig& cfg = ctx.cfg;
    auto t0 = Clock::now();
    const RealizationList rs = build_realizations(cfg, cfg.n, cfg.n_avg);
    ctx.timed("realizations", t0);
    const OperatingPoint op = operating_point(ctx, rs, cfg.calibration_g, cfg.calibration_t);
    emit_operating_point(ctx, op);

    t0 = Clock::now();
    std::vector<DriveSpec> drives{DriveSpec::none()};
    for (double e : cfg.eps_grid) drives.push_back(monochromatic_drive(e, cfg.omega));
    const auto f = fidelity_grid(cfg, drives, rs, params_of(op, cfg.beta));
    ctx.timed("scan", t0);

    const std::vector<double>& f0 = f[0];
    const double excess0 = mean_of(f0) - 0.25;

    Table raw;
    raw.columns = {"seed", "epsilon", "omega", "fidelity", "fidelity_undriven"};
    Table sum;
    sum.columns = concat(concat({"epsilon", "omega"}, stat_columns("f")),
                         concat(concat({"n_avg", "ratio", "ratio_stderr"}, stat_columns("delta_f")),
                                {"base_seed", "g", "t_star", "t_r"}));
    for (std::size_t e = 0; e < cfg.eps_grid.size(); ++e) {
        const auto& fe = f[e + 1];
        for (std::size_t r = 0; r < rs.size(); ++r)
            raw.rows.push_back(RowBuilder()
                                   .add(static_cast<long long>(seed_of(cfg, static_cast<int>(r))))
                                   .add(cfg.eps_grid[e])
                                   .add(cfg.omega)
                                   .add(fe[r])
                                   .add(f0[r])
                                   .done());
        const SummaryStats sf = summarize(fe);
        // Paired suppression F0 - F; the ratio's error follows from it at fixed F0.
        const SummaryStats sd = summarize(difference(f0, fe));
        RowBuilder row;
        row.add(cfg.eps_grid[e]).add(cfg.omega);
        add_stats(row, sf);
        row.add(cfg.n_avg).add((sf.mean - 0.25) / excess0).add(sd.std_error / std::abs(excess0));
        add_stats(row, sd);
        row.add(static_cast<long long>(cfg.base_seed)).add(op.g).add(op.t_star).add(op.t_r);
        sum.rows.push_back(row.done());
    }
    ctx.emit("raw", std::move(raw));
    ctx.emit("summary", std::move(sum));
}

// --- frequency scan ----------------------------------------------------------

void frequency_scan(Context& ctx) {
    const ExperimentConfig& cfg = ctx.cfg;
    auto t0 = Clock::now();
    const RealizationList rs = build_realizations(cfg, cfg.n, cfg.n_avg);
    ctx.timed("realizations", t0);
    const OperatingPoint op = operating_point(ctx, rs, cfg.calibration_g, cfg.calibration_t);
    emit_operating_point(ctx, op);

    t0 = Clock::now();
    std::vector<DriveSpec> drives{DriveSpec::none()};
    for (double w : cfg.omega_grid) drives.push_back(monochromatic_drive(cfg.epsilon, w));
    const auto f = fidelity_grid(cfg, drives, rs, params_of(op, cfg.beta));
    ctx.timed("scan", t0);
    const std::vector<double>& f0 = f[0];

    auto marker = [&](double w) -> std::string {
        if (std::abs(w - cfg.chirp_omega_t) < 1e-9) return "omega_T";
        if (std::abs(w - cfg.chirp_omega_l) < 1e-9) return "omega_L";
        return "-";
    };

    Table raw;
    raw.columns = {"seed", "omega", "epsilon", "fidelity", "fidelity_undriven", "delta_f"};
    Table sum;
    sum.columns = concat(concat(concat({"omega", "epsilon"}, stat_columns("f")), stat_columns("delta_f")),
                         {"f_undriven_mean", "n_avg", "marker", "base_seed", "g", "t_star", "t_r"});
    for (std::size_t w = 0; w < cfg.omega_grid.size(); ++w) {
        const auto& fw = f[w + 1];
        const auto d = difference(f0, fw);
        for (std::size_t r = 0; r < rs.size(); ++r)
            raw.rows.push_back(RowBuilder()
                                   .add(static_cast<long long>(seed_of(cfg, static_cast<int>(r))))
                                   .add(cfg.omega_grid[w])
                                   .add(cfg.epsilon)
                                   .add(fw[r])
                                   .add(f0[r])
                                   .add(d[r])
                                   .done());
        RowBuilder row;
        row.add(cfg.omega_grid[w]).add(cfg.epsilon);
        add_stats(row, summarize(fw));
        add_stats(row, summarize(d));
        row.add(mean_of(f0)).add(cfg.n_avg).add(marker(cfg.omega_grid[w]));
        row.add(static_cast<long long>(cfg.base_seed)).add(op.g).add(op.t_star).add(op.t_r);
        sum.rows.push_back(row.done());
    }
    ctx.emit("raw", std::move(raw));
    ctx.emit("summary", std::move(sum));
}

// --- chirp -------------------------------------------------------------------

void chirp_experiment(Context& ctx) {
    const ExperimentConfig& cfg = ctx.cfg;
    auto t0 = Clock::now();
    const RealizationList rs = build_realizations(cfg, cfg.n, cfg.n_avg);
    ctx.timed("realizations", t0);
    const OperatingPoint op = operating_point(ctx, rs, cfg.calibration_g, cfg.calibration_t);
    emit_operating_point(ctx, op);

    const DriveSpec driven = chirp_drive(cfg, cfg.chirp_epsilon, op.t_star);
    const std::vector<DriveSpec> drives{DriveSpec::none(), driven};
    const std::size_t nr = rs.size();
    const std::vector<double> s_grid = linear_grid(0.1, cfg.t_grid.back(), 0.1);

    t0 = Clock::now();
    std::vector<std::vector<double>> prof(2 * nr);   // [drive * nr + r]
    std::vector<StrainResponse> strain(2 * nr);
    parallel_for(4 * nr, cfg.threads, [&](std::size_t slot) {
        const std::size_t kind = slot / (2 * nr), rest = slot % (2 * nr);
        const std::size_t d = rest / nr, r = rest % nr;
        if (kind == 0)
            prof[rest] = fidelity_profile(*rs[r], op.g, op.t_star, cfg.t_grid, drives[d], cfg.propagator);
        else
            strain[rest] = strain_response(*rs[r], op.g, op.t_star, drives[d], s_grid, cfg.propagator);
    });
    ctx.timed("scan", t0);

    const std::size_t nt = cfg.t_grid.size();
    std::vector<std::vector<double>> p0(prof.begin(), prof.begin() + static_cast<std::ptrdiff_t>(nr));
    std::vector<std::vector<double>> p1(prof.begin() + static_cast<std::ptrdiff_t>(nr), prof.end());

    Table raw;
    raw.columns = {"seed", "t_r", "f_undriven", "f_driven"};
    for (std::size_t r = 0; r < nr; ++r)
        for (std::size_t k = 0; k < nt; ++k)
            raw.rows.push_back(RowBuilder()
                                   .add(static_cast<long long>(seed_of(cfg, static_cast<int>(r))))
                                   .add(cfg.t_grid[k])
                                   .add(p0[r][k])
                                   .add(p1[r][k])
                                   .done());

    Table sum;
    sum.columns = concat(concat(concat({"t_r"}, stat_columns("f_undriven")), stat_columns("f_driven")),
                         concat(stat_columns("delta_f"), {"n_avg", "epsilon0", "g", "t_star"}));
    std::vector<double> m0(nt), m1(nt);
    for (std::size_t k = 0; k < nt; ++k) {
        std::vector<double> a(nr), b(nr);
        for (std::size_t r = 0; r < nr; ++r) {
            a[r] = p0[r][k];
            b[r] = p1[r][k];
        }
        const SummaryStats sa = summarize(a), sb = summarize(b);
        m0[k] = sa.mean;
        m1[k] = sb.mean;
        RowBuilder row;
        row.add(cfg.t_grid[k]);
        add_stats(row, sa);
        add_stats(row, sb);
        add_stats(row, summarize(difference(a, b)));
        row.add(cfg.n_avg).add(cfg.chirp_epsilon).add(op.g).add(op.t_star);
        sum.rows.push_back(row.done());
    }

    // Peaks: from the mean curves, and per seed for the error bars.
    const Peak k0 = quadratic_peak(cfg.t_grid, m0), k1 = quadratic_peak(cfg.t_grid, m1);
    std::vector<double> tp0, tp1, fp0, fp1;
    for (std::size_t r = 0; r < nr; ++r) {
        const Peak a = quadratic_peak(cfg.t_grid, p0[r]), b = quadratic_peak(cfg.t_grid, p1[r]);
        tp0.push_back(a.t);
        tp1.push_back(b.t);
        fp0.push_back(a.value);
        fp1.push_back(b.value);
    }
    Table peaks;
    peaks.columns = concat(concat({"quantity", "mean_curve"}, stat_columns("seed")), {"n_avg"});
    auto peak_row = [&](const std::string& name, double curve_value, const std::vector<double>& per_seed) {
        RowBuilder row;
        row.add(name).add(curve_value);
        add_stats(row, summarize(per_seed));
        row.add(cfg.n_avg);
        peaks.rows.push_back(row.done());
    };
    peak_row("t_peak_undriven", k0.t, tp0);
    peak_row("t_peak_driven", k1.t, tp1);
    peak_row("f_peak_undriven", k0.value, fp0);
    peak_row("f_peak_driven", k1.value, fp1);
    peak_row("delta_t_fid", k1.t - k0.t, difference(tp1, tp0));
    peak_row("delta_f_peak", k0.value - k1.value, difference(fp0, fp1));

    // Boundary strain response: driven, undriven and their paired difference.
    Table st;
    st.columns = concat(concat(concat({"t", "h"}, stat_columns("s_driven")), stat_columns("s_undriven")),
                        concat(stat_columns("response"), {"n_avg"}));
    StrainResponse mean_resp;
    for (std::size_t k = 0; k < s_grid.size(); ++k) {
        std::vector<double> sd(nr), su(nr);
        for (std::size_t r = 0; r < nr; ++r) {
            su[r] = strain[r].s[k];
            sd[r] = strain[nr + r].s[k];
        }
        const SummaryStats resp = summarize(difference(sd, su));
        RowBuilder row;
        row.add(s_grid[k]).add(strain[nr].h[k]);
        add_stats(row, summarize(sd));
        add_stats(row, summarize(su));
        add_stats(row, resp);
        row.add(cfg.n_avg);
        st.rows.push_back(row.done());
        mean_resp.t.push_back(s_grid[k]);
        mean_resp.s.push_back(resp.mean);
        mean_resp.h.push_back(strain[nr].h[k]);
    }
    Table chi;
    chi.columns = {"epsilon0", "strain_norm", "s_peak", "t_peak", "h_peak", "chi"};
    if (cfg.chirp_epsilon > 0.0) {
        const Susceptibility s = strain_susceptibility(mean_resp, cfg.chirp_epsilon, cfg.hamiltonian.strain_norm);
        chi.rows.push_back(RowBuilder()
                               .add(cfg.chirp_epsilon)
                               .add(cfg.hamiltonian.strain_norm)
                               .add(s.s_peak)
                               .add(s.t_peak)
                               .add(s.h_peak)
                               .add(s.chi)
                               .done());
    }

    ctx.emit("raw", std::move(raw));
    ctx.emit("summary", std::move(sum));
    ctx.emit("peaks", std::move(peaks));
    ctx.emit("strain", std::move(st));
    ctx.emit("susceptibility", std::move(chi));
}

// --- OTOC --------------------------------------------------------------------

std::string pair_name(int i, int j) { return std::to_string(i) + ":" + std::to_string(j); }

void otoc_experiment(Context& ctx) {
    const ExperimentConfig& cfg = ctx.cfg;
    auto t0 = Clock::now();
    const RealizationList rs = build_realizations(cfg, cfg.n, cfg.n_avg);
    ctx.timed("realizations", t0);

    t0 = Clock::now();
    const auto scan = scrambling_delay_scan(cfg.eps_grid, cfg.omega, pointers(rs, rs.size()), cfg.otoc_pairs,
                                            cfg.t_grid, cfg.propagator, cfg.plateau_fraction, cfg.threads);
    ctx.timed("scan", t0);

    const std::size_t nr = rs.size(), np = cfg.otoc_pairs.size(), nt = cfg.t_grid.size();
    Table raw;
    raw.columns = {"seed", "epsilon", "pair", "t", "c"};
    Table curves;
    curves.columns = concat(concat({"epsilon", "pair", "t"}, stat_columns("c")), {"n_avg"});
    Table tscr_raw;
    tscr_raw.columns = {"seed", "epsilon", "t_scr", "delay"};
    Table sum;
    sum.columns = concat(concat(concat({"epsilon", "omega", "t_scr_mean_curve", "plateau_mean_curve",
                                        "delay_mean_curve", "c0_max_abs"},
                                       stat_columns("t_scr")),
                                stat_columns("delay")),
                         {"n_avg"});

    const ScramblingResult base = extract_t_scr(cfg.t_grid, scan.front().mean_c, cfg.plateau_fraction);
    for (const auto& pt : scan) {
        double c0 = 0.0;
        for (std::size_t p = 0; p <= np; ++p) {
            const bool avg = p == np;
            const std::string name = avg ? "all" : pair_name(cfg.otoc_pairs[p].first, cfg.otoc_pairs[p].second);
            for (std::size_t k = 0; k < nt; ++k) {
                std::vector<double> v(nr);
                for (std::size_t r = 0; r < nr; ++r) {
                    if (avg) {
                        double acc = 0.0;
                        for (std::size_t q = 0; q < np; ++q) acc += pt.curves[r][q].c[k];
                        v[r] = acc / static_cast<double>(np);
                    } else {
                        v[r] = pt.curves[r][p].c[k];
                        if (k == 0) c0 = std::max(c0, std::abs(v[r]));
                        raw.rows.push_back(RowBuilder()
                                               .add(static_cast<long long>(seed_of(cfg, static_cast<int>(r))))
                                               .add(pt.epsilon)
                                               .add(name)
                                               .add(cfg.t_grid[k])
                                               .add(v[r])
                                               .done());
                    }
                }
                RowBuilder row;
                row.add(pt.epsilon).add(name).add(cfg.t_grid[k]);
                add_stats(row, summarize(v));
                row.add(cfg.n_avg);
                curves.rows.push_back(row.done());
            }
        }
        for (std::size_t r = 0; r < nr; ++r)
            tscr_raw.rows.push_back(RowBuilder()
                                        .add(static_cast<long long>(seed_of(cfg, static_cast<int>(r))))
                                        .add(pt.epsilon)
                                        .add(pt.t_scr[r])
                                        .add(pt.delay[r])
                                        .done());
        const ScramblingResult s = extract_t_scr(cfg.t_grid, pt.mean_c, cfg.plateau_fraction);
        RowBuilder row;
        row.add(pt.epsilon).add(cfg.omega).add(s.t_scr).add(s.plateau).add(s.t_scr - base.t_scr).add(c0);
        add_stats(row, summarize(pt.t_scr));
        add_stats(row, summarize(pt.delay));
        row.add(cfg.n_avg);
        sum.rows.push_back(row.done());
    }
    ctx.emit("raw", std::move(raw));
    ctx.emit("curves", std::move(curves));
    ctx.emit("tscr_raw", std::move(tscr_raw));
    ctx.emit("summary", std::move(sum));
}

// --- re-optimization map -----------------------------------------------------

void reopt_map(Context& ctx) {
    const ExperimentConfig& cfg = ctx.cfg;
    auto t0 = Clock::now();
    const RealizationList rs = build_realizations(cfg, cfg.n, cfg.n_avg);
    ctx.timed("realizations", t0);
    // The fixed point comes from the same seeds and grid the re-optimization uses.
    ExperimentConfig cal_cfg = cfg;
    cal_cfg.calibration_seeds = cfg.n_avg;
    Context cal_ctx(cal_cfg, nullptr);
    const OperatingPoint op = operating_point(cal_ctx, rs, cfg.opt_g_grid, cfg.opt_t_grid);
    for (const auto& tm : cal_ctx.result.timing) ctx.result.timing.push_back(tm);
    ctx.note("fixed point g=" + format_number(op.g) + " t=" + format_number(op.t_star));
    emit_operating_point(ctx, op);

    t0 = Clock::now();
    const auto rp = pointers(rs, rs.size());
    Table raw;
    raw.columns = {"seed", "epsilon", "omega", "f_fixed", "f_reopt", "ratio"};
    Table sum;
    sum.columns = concat(concat({"epsilon", "omega", "f_fixed", "f_reopt", "ratio"}, stat_columns("seed_ratio")),
                         {"g_fixed", "t_fixed", "g_reopt", "t_reopt", "n_avg"});
    std::vector<std::pair<double, ReoptResult>> undriven;  // by omega, reused when eps = 0
    for (double eps : cfg.eps_grid) {
        for (double w : cfg.omega_grid) {
            ReoptResult res;
            if (eps == 0.0 && !undriven.empty()) {
                res = undriven.front().second;
            } else {
                res = reopt_ratio(rp, monochromatic_drive(eps, w), op.g, op.t_star, cfg.opt_g_grid, cfg.opt_t_grid,
                                  cfg.propagator, cfg.threads);
                if (eps == 0.0) undriven.emplace_back(w, res);
            }
            std::vector<double> ratios;
            for (std::size_t r = 0; r < rs.size(); ++r) {
                ratios.push_back(res.f_reopt_per_seed[r] / res.f_fixed_per_seed[r]);
                raw.rows.push_back(RowBuilder()
                                       .add(static_cast<long long>(seed_of(cfg, static_cast<int>(r))))
                                       .add(eps)
                                       .add(w)
                                       .add(res.f_fixed_per_seed[r])
                                       .add(res.f_reopt_per_seed[r])
                                       .add(ratios.back())
                                       .done());
            }
            RowBuilder row;
            row.add(eps).add(w).add(res.f_fixed).add(res.f_reopt).add(res.ratio);
            add_stats(row, summarize(ratios));
            row.add(op.g).add(op.t_star).add(res.g_reopt).add(res.t_reopt).add(cfg.n_avg);
            sum.rows.push_back(row.done());
            ctx.note("eps=" + format_number(eps) + " omega=" + format_number(w) + " r=" + format_number(res.ratio));
        }
    }
    ctx.timed("scan", t0);
    ctx.emit("raw", std::move(raw));
    ctx.emit("summary", std::move(sum));
}

// --- system-size scaling -----------------------------------------------------

void scaling(Context& ctx) {
    const ExperimentConfig& cfg = ctx.cfg;
    const DriveSpec driven = monochromatic_drive(cfg.epsilon, cfg.omega);
    Table raw;
    raw.columns = {"n", "seed", "f_at_opt", "f_driven_at_opt", "delta_f"};
    Table sum;
    sum.columns = concat(concat(concat({"n", "n_avg", "g_opt", "t_opt"}, stat_columns("f_opt")),
                                concat({"g_opt_driven", "t_opt_driven"}, stat_columns("f_opt_driven"))),
                         concat(stat_columns("delta_f"), {"epsilon", "omega", "base_seed"}));
    for (std::size_t k = 0; k < cfg.n_list.size(); ++k) {
        const int n = cfg.n_list[k];
        const int n_avg = cfg.n_avg_list.empty() ? cfg.n_avg : cfg.n_avg_list[k];
        const auto t0 = Clock::now();
        // Realizations are built inside the workers and dropped after use to
        // bound memory at the largest sizes.
        std::vector<FidelityMap> m0(static_cast<std::size_t>(n_avg)), m1(static_cast<std::size_t>(n_avg));
        parallel_for(static_cast<std::size_t>(n_avg), cfg.threads, [&](std::size_t r) {
            const Realization real(n, cfg.j, seed_of(cfg, static_cast<int>(r)), cfg.beta, cfg.hamiltonian,
                                   cfg.protocol);
            m0[r] = fidelity_map(real, cfg.opt_g_grid, cfg.opt_t_grid, DriveSpec::none(), cfg.propagator);
            m1[r] = fidelity_map(real, cfg.opt_g_grid, cfg.opt_t_grid, driven, cfg.propagator);
        });
        const OptResult o0 = optimum_of(std::move(m0)), o1 = optimum_of(std::move(m1));
        ctx.timed("n=" + std::to_string(n), t0);

        auto at = [](const OptResult& o, std::size_t r) {
            const auto& m = o.per_seed[r];
            Eigen::Index ig = 0, it = 0;
            while (m.g[static_cast<std::size_t>(ig)] != o.g_opt) ++ig;
            while (m.t[static_cast<std::size_t>(it)] != o.t_opt) ++it;
            return m.f(ig, it);
        };
        std::vector<double> f0, f1;
        for (std::size_t r = 0; r < static_cast<std::size_t>(n_avg); ++r) {
            f0.push_back(at(o0, r));
            f1.push_back(at(o1, r));
            raw.rows.push_back(RowBuilder()
                                   .add(n)
                                   .add(static_cast<long long>(seed_of(cfg, static_cast<int>(r))))
                                   .add(f0.back())
                                   .add(f1.back())
                                   .add(f0.back() - f1.back())
                                   .done());
        }
        RowBuilder row;
        row.add(n).add(n_avg).add(o0.g_opt).add(o0.t_opt);
        add_stats(row, summarize(f0));
        row.add(o1.g_opt).add(o1.t_opt);
        add_stats(row, summarize(f1));
        add_stats(row, summarize(difference(f0, f1)));
        row.add(cfg.epsilon).add(cfg.omega).add(static_cast<long long>(cfg.base_seed));
        sum.rows.push_back(row.done());
        ctx.note("N=" + std::to_string(n) + " g*=" + format_number(o0.g_opt) + " t*=" + format_number(o0.t_opt) +
                 " F*=" + format_number(o0.f_opt) + " F*_drive=" + format_number(o1.f_opt));
    }
    ctx.emit("raw", std::move(raw));
    ctx.emit("summary", std::move(sum));
}

// --- integrator convergence --------------------------------------------------

struct TestPoint {
    std::string name;
    DriveSpec drive;
};

void convergence(Context& ctx) {
    const ExperimentConfig& cfg = ctx.cfg;
    auto t0 = Clock::now();
    const RealizationList rs = build_realizations(cfg, cfg.n, cfg.n_avg);
    ctx.timed("realizations", t0);
    const OperatingPoint op = operating_point(ctx, rs, cfg.calibration_g, cfg.calibration_t);
    emit_operating_point(ctx, op);

    const std::vector<TestPoint> points{
        {"unperturbed", DriveSpec::none()},
        {"mono_eps0.2_w1.5", monochromatic_drive(0.2, 1.5)},
        {"mono_eps0.5_w1.5", monochromatic_drive(0.5, 1.5)},
        {"mono_eps1_w1.5", monochromatic_drive(1.0, 1.5)},
        {"mono_eps2_w0.5", monochromatic_drive(2.0, 0.5)},
        {"chirp_eps0.5", chirp_drive(cfg, cfg.chirp_epsilon, op.t_star)},
    };
    const std::vector<Scheme> schemes{Scheme::LieTrotter, Scheme::StrangMidpoint};
    double dt_min = cfg.dt_list.front();
    for (double dt : cfg.dt_list) dt_min = std::min(dt_min, dt);
    const double dt_ref = dt_min / 8.0;

    // Slot layout per (point, seed): reference first, then scheme-major dt runs.
    const std::size_t np = points.size(), nr = rs.size(), ndt = cfg.dt_list.size();
    const std::size_t runs = 1 + schemes.size() * ndt;
    std::vector<std::vector<StateVector>> states(np * nr * runs);
    const ProtocolParams params = params_of(op, cfg.beta);
    t0 = Clock::now();
    parallel_for(states.size(), cfg.threads, [&](std::size_t slot) {
        const std::size_t run = slot % runs, pr = slot / runs;
        const std::size_t p = pr / nr, r = pr % nr;
        PropagatorConfig pc = cfg.propagator;
        pc.adaptive = false;
        if (run == 0) {
            pc.dt_base = dt_ref;
            pc.scheme = Scheme::StrangMidpoint;
        } else {
            pc.scheme = schemes[(run - 1) / ndt];
            pc.dt_base = cfg.dt_list[(run - 1) % ndt];
        }
        states[slot] = decoder_input(params, *rs[r], points[p].drive, pc);
    });
    ctx.timed("scan", t0);

    Table raw;
    raw.columns = {"point", "seed", "scheme", "dt", "fidelity", "f_error", "state_error"};
    Table sum;
    sum.columns = concat(concat(concat({"point", "scheme", "dt"}, stat_columns("f")), stat_columns("f_error")),
                         concat(stat_columns("state_error"), {"halving_delta_f", "n_avg"}));
    Table slopes;
    slopes.columns = {"point", "slope_lt", "slope_strang", "slope_f_lt", "slope_f_strang", "ratio_dt", "lt_over_strang"};

    std::size_t ratio_k = 0;
    for (std::size_t k = 0; k < ndt; ++k)
        if (std::abs(cfg.dt_list[k] - 0.0125) < std::abs(cfg.dt_list[ratio_k] - 0.0125)) ratio_k = k;

    for (std::size_t p = 0; p < np; ++p) {
        // err[s][k] = per-seed errors
        std::vector<std::vector<double>> state_mean(schemes.size()), f_mean_err(schemes.size());
        for (std::size_t s = 0; s < schemes.size(); ++s) {
            std::vector<double> fbar;
            std::vector<std::vector<std::string>> rows;
            for (std::size_t k = 0; k < ndt; ++k) {
                std::vector<double> f, fe, se;
                for (std::size_t r = 0; r < nr; ++r) {
                    const std::size_t base = (p * nr + r) * runs;
                    const auto& ref = states[base];
                    const auto& st = states[base + 1 + s * ndt + k];
                    const double fr = decoded_fidelity(ref, rs[r]->decoder);
                    const double fv = decoded_fidelity(st, rs[r]->decoder);
                    double err2 = 0.0;
                    for (std::size_t b = 0; b < st.size(); ++b)
                        err2 += (st[b].amplitudes - ref[b].amplitudes).squaredNorm();
                    f.push_back(fv);
                    fe.push_back(std::abs(fv - fr));
                    se.push_back(std::sqrt(err2));
                    raw.rows.push_back(RowBuilder()
                                           .add(points[p].name)
                                           .add(static_cast<long long>(seed_of(cfg, static_cast<int>(r))))
                                           .add(to_string(schemes[s]))
                                           .add(cfg.dt_list[k])
                                           .add(fv)
                                           .add(fe.back())
                                           .add(se.back())
                                           .done());
                }
                const SummaryStats sf = summarize(f), sfe = summarize(fe), sse = summarize(se);
                fbar.push_back(sf.mean);
                state_mean[s].push_back(sse.mean);
                f_mean_err[s].push_back(sfe.mean);
                RowBuilder row;
                row.add(points[p].name).add(to_string(schemes[s])).add(cfg.dt_list[k]);
                add_stats(row, sf);
                add_stats(row, sfe);
                add_stats(row, sse);
                rows.push_back(row.done());
            }
            // |F(dt) - F(dt/2)| against the next entry of the list.
            for (std::size_t k = 0; k < ndt; ++k) {
                const double h = k + 1 < ndt ? std::abs(fbar[k] - fbar[k + 1]) : kNaN;
                rows[k].push_back(format_number(h));
                rows[k].push_back(format_number(static_cast<long long>(nr)));
                sum.rows.push_back(std::move(rows[k]));
            }
        }
        auto slope = [&](const std::vector<double>& y) {
            for (double v : y)
                if (!(v > 0.0)) return kNaN;
            return ndt >= 2 ? loglog_slope(cfg.dt_list, y) : kNaN;
        };
        const double lt = state_mean[0][ratio_k], sm = state_mean[1][ratio_k];
        slopes.rows.push_back(RowBuilder()
                                  .add(points[p].name)
                                  .add(slope(state_mean[0]))
                                  .add(slope(state_mean[1]))
                                  .add(slope(f_mean_err[0]))
                                  .add(slope(f_mean_err[1]))
                                  .add(cfg.dt_list[ratio_k])
                                  .add(sm > 0.0 ? lt / sm : kNaN)
                                  .done());
    }
    ctx.emit("raw", std::move(raw));
    ctx.emit("summary", std::move(sum));
    ctx.emit("slopes", std::move(slopes));
}

// --- calibration -------------------------------------------------------------

void calibrate(Context& ctx) {
    const ExperimentConfig& cfg = ctx.cfg;
    auto t0 = Clock::now();
    const RealizationList rs = build_realizations(cfg, cfg.n, cfg.n_avg);
    ctx.timed("realizations", t0);
    t0 = Clock::now();
    const OptResult opt = optimize(pointers(rs, rs.size()), DriveSpec::none(), cfg.calibration_g, cfg.calibration_t,
                                   cfg.propagator, cfg.threads);
    ctx.timed("scan", t0);

    const std::size_t ng = cfg.calibration_g.size(), nt = cfg.calibration_t.size(), nr = rs.size();
    Table raw;
    raw.columns = {"seed", "g", "t", "fidelity"};
    Table map;
    map.columns = concat(concat({"g", "t"}, stat_columns("f")), {"n_avg"});
    std::vector<double> at_opt;
    for (std::size_t ig = 0; ig < ng; ++ig)
        for (std::size_t it = 0; it < nt; ++it) {
            std::vector<double> v;
            for (std::size_t r = 0; r < nr; ++r) {
                const double f = opt.per_seed[r].f(static_cast<Eigen::Index>(ig), static_cast<Eigen::Index>(it));
                v.push_back(f);
                raw.rows.push_back(RowBuilder()
                                       .add(static_cast<long long>(seed_of(cfg, static_cast<int>(r))))
                                       .add(cfg.calibration_g[ig])
                                       .add(cfg.calibration_t[it])
                                       .add(f)
                                       .done());
            }
            if (cfg.calibration_g[ig] == opt.g_opt && cfg.calibration_t[it] == opt.t_opt) at_opt = v;
            RowBuilder row;
            row.add(cfg.calibration_g[ig]).add(cfg.calibration_t[it]);
            add_stats(row, summarize(v));
            row.add(cfg.n_avg);
            map.rows.push_back(row.done());
        }
    Table sum;
    sum.columns = concat(concat({"g_opt", "t_opt"}, stat_columns("f_opt")), {"n_avg", "base_seed", "beta", "n"});
    RowBuilder row;
    row.add(opt.g_opt).add(opt.t_opt);
    add_stats(row, summarize(at_opt));
    row.add(cfg.n_avg).add(static_cast<long long>(cfg.base_seed)).add(cfg.beta).add(cfg.n);
    sum.rows.push_back(row.done());
    ctx.note("g*=" + format_number(opt.g_opt) + " t*=" + format_number(opt.t_opt) + " F*=" + format_number(opt.f_opt));
    ctx.emit("raw", std::move(raw));
    ctx.emit("map", std::move(map));
    ctx.emit("summary", std::move(sum));
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg, std::ostream* log) {
    cfg.validate();
    Context ctx(cfg, log);
    const auto t0 = Clock::now();
    switch (cfg.kind) {
        case ExperimentKind::AmplitudeScan: amplitude_scan(ctx); break;
        case ExperimentKind::FrequencyScan: frequency_scan(ctx); break;
        case ExperimentKind::Chirp: chirp_experiment(ctx); break;
        case ExperimentKind::Otoc: otoc_experiment(ctx); break;
        case ExperimentKind::ReoptMap: reopt_map(ctx); break;
        case ExperimentKind::Scaling: scaling(ctx); break;
        case ExperimentKind::Convergence: convergence(ctx); break;
        case ExperimentKind::Calibrate: calibrate(ctx); break;
    }
    ctx.timed("total", t0);
    return std::move(ctx.result);
}

std::vector<std::string> write_experiment(const ExperimentResult& result, const std::string& out_dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw std::runtime_error("cannot create " + out_dir + ": " + ec.message());
    std::vector<std::string> written;
    for (const auto& [name, table] : result.tables) {
        const std::string path = (fs::path(out_dir) / (name + ".tsv")).string();
        write_table(path, table);
        written.push_back(path);
    }
    const std::string kind = to_string(result.kind);
    const std::string cfg_path = (fs::path(out_dir) / (kind + "_config.json")).string();
    {
        std::ofstream os(cfg_path, std::ios::binary | std::ios::trunc);
        if (!os) throw std::runtime_error("cannot open " + cfg_path + " for writing");
        os << result.config_json << '\n';
        if (!os) throw std::runtime_error("write failed for " + cfg_path);
    }
    written.push_back(cfg_path);
    Table timing;
    timing.columns = {"stage", "seconds", "config_hash"};
    for (const auto& [stage, s] : result.timing)
        timing.rows.push_back(RowBuilder().add(stage).add(s).add(result.config_hash).done());
    const std::string tpath = (fs::path(out_dir) / (kind + "_timing.tsv")).string();
    write_table(tpath, timing);
    written.push_back(tpath);
    return written;
}

}  // namespace sykgw
