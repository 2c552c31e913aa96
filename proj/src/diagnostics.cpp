#include "sykgw/diagnostics.hpp"

#include <cmath>

#include "sykgw/errors.hpp"
#include "sykgw/parallel.hpp"

namespace sykgw {

namespace {

void check_grid(const std::vector<double>& t_grid) {
    if (t_grid.size() < 2) throw InvalidArgument("time grid needs at least two points");
    if (t_grid.front() < 0.0) throw InvalidArgument("time grid must start at t >= 0");
    for (std::size_t k = 1; k < t_grid.size(); ++k)
        if (!(t_grid[k] > t_grid[k - 1])) throw InvalidArgument("time grid must be increasing");
}

}  // namespace

std::vector<OTOCCurve> compute_otoc_pairs(const std::vector<std::pair<int, int>>& pairs,
                                          const BoundaryEvolution& left, const MajoranaSet& majoranas,
                                          const StateVector& tfd, const DriveSpec& drive,
                                          const std::vector<double>& t_grid, const PropagatorConfig& cfg,
                                          double plateau_fraction) {
    check_grid(t_grid);
    cfg.validate();
    if (left.side() != Side::Left) throw InvalidArgument("OTOC needs the left-boundary evolution");
    const int n = majoranas.layout().n_majorana;
    const int nb = majoranas.layout().boundary_qubits();
    std::vector<Eigen::MatrixXcd> gammas(static_cast<std::size_t>(n));
    for (const auto& [i, j] : pairs) {
        if (i == j) throw InvalidArgument("OTOC pair must have distinct Majoranas");
        if (i < 0 || j < 0 || i >= n || j >= n) throw InvalidArgument("OTOC Majorana index out of range");
        for (int k : {i, j})
            if (gammas[static_cast<std::size_t>(k)].size() == 0)
                gammas[static_cast<std::size_t>(k)] = dense_matrix(majoranas.local(k), nb);
    }

    const double eps = drive.left ? drive.epsilon : 0.0;
    const double dt = adaptive_dt(eps, cfg);
    // Left operators act on the (0,0) block as B -> B A^T.
    const Eigen::MatrixXcd b = tfd.block(0);
    std::vector<OTOCCurve> out;
    for (const auto& [i, j] : pairs) out.push_back({i, j, t_grid, {}, 0.0});

    const auto d = left.dim();
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(d, d);
    double t_prev = 0.0;
    for (double t : t_grid) {
        u = left.propagator(eps, drive.waveform, t_prev, t, dt, cfg.scheme) * u;
        t_prev = t;
        for (auto& curve : out) {
            const auto& gi = gammas[static_cast<std::size_t>(curve.i)];
            const auto& v = gammas[static_cast<std::size_t>(curve.j)];
            const Eigen::MatrixXcd w = u.adjoint() * gi * u;
            const Eigen::MatrixXcd phi1 = b * (w * v).transpose();
            const Eigen::MatrixXcd phi2 = b * (v * w).transpose();
            const double f = (phi2.conjugate().cwiseProduct(phi1)).sum().real();
            curve.c.push_back(0.5 * (f + 1.0));
        }
    }
    for (auto& curve : out) curve.plateau = plateau_estimate(curve.c, plateau_fraction);
    return out;
}

OTOCCurve compute_otoc(int i, int j, const BoundaryEvolution& left, const MajoranaSet& majoranas,
                       const StateVector& tfd, const DriveSpec& drive, const std::vector<double>& t_grid,
                       const PropagatorConfig& cfg, double plateau_fraction) {
    return compute_otoc_pairs({{i, j}}, left, majoranas, tfd, drive, t_grid, cfg, plateau_fraction).front();
}

double plateau_estimate(const std::vector<double>& c, double plateau_fraction) {
    if (c.empty()) throw InvalidArgument("empty curve");
    if (!(plateau_fraction > 0.0 && plateau_fraction <= 1.0)) throw InvalidArgument("plateau fraction must be in (0, 1]");
    const auto n = c.size();
    auto start = static_cast<std::size_t>(std::floor((1.0 - plateau_fraction) * static_cast<double>(n)));
    start = std::min(start, n - 1);
    double acc = 0.0;
    for (std::size_t k = start; k < n; ++k) acc += c[k];
    return acc / static_cast<double>(n - start);
}

ScramblingResult extract_t_scr(const std::vector<double>& t, const std::vector<double>& c, double plateau_fraction) {
    if (t.size() != c.size()) throw InvalidArgument("time and value grids differ in length");
    if (t.size() < 2) throw InvalidArgument("scrambling time needs at least two points");
    ScramblingResult res;
    res.plateau = plateau_estimate(c, plateau_fraction);
    res.threshold = 0.5 * res.plateau;
    for (std::size_t k = 1; k < c.size(); ++k) {
        if (c[k - 1] < res.threshold && c[k] >= res.threshold) {
            res.t_lo = t[k - 1];
            res.t_hi = t[k];
            res.t_scr = t[k - 1] + (res.threshold - c[k - 1]) * (t[k] - t[k - 1]) / (c[k] - c[k - 1]);
            return res;
        }
    }
    throw NoCrossing("OTOC never crosses half of its plateau " + std::to_string(res.plateau) +
                     "; extend the evolution window");
}

ScramblingResult extract_t_scr(const OTOCCurve& curve, double plateau_fraction) {
    return extract_t_scr(curve.t, curve.c, plateau_fraction);
}

std::vector<double> mean_curve(const std::vector<std::vector<double>>& curves) {
    if (curves.empty()) throw InvalidArgument("no curves to average");
    std::vector<double> out(curves.front().size(), 0.0);
    for (const auto& c : curves) {
        if (c.size() != out.size()) throw InvalidArgument("curves differ in length");
        for (std::size_t k = 0; k < c.size(); ++k) out[k] += c[k];
    }
    for (double& v : out) v /= static_cast<double>(curves.size());
    return out;
}

std::vector<DelayPoint> scrambling_delay_scan(const std::vector<double>& eps_list, double omega,
                                              const std::vector<const Realization*>& realizations,
                                              const std::vector<std::pair<int, int>>& pairs,
                                              const std::vector<double>& t_grid, const PropagatorConfig& cfg,
                                              double plateau_fraction, int threads) {
    if (eps_list.empty() || eps_list.front() != 0.0) throw InvalidArgument("amplitude list must start with 0");
    for (std::size_t k = 1; k < eps_list.size(); ++k)
        if (!(eps_list[k] > eps_list[k - 1])) throw InvalidArgument("amplitude list must be ascending");
    if (realizations.empty() || pairs.empty()) throw InvalidArgument("need realizations and operator pairs");

    const std::size_t ne = eps_list.size(), nr = realizations.size();
    std::vector<std::vector<double>> curves(ne * nr);  // pair-averaged, slot e * nr + r
    std::vector<std::vector<OTOCCurve>> pair_curves(ne * nr);
    parallel_for(ne * nr, threads, [&](std::size_t slot) {
        const std::size_t e = slot / nr, r = slot % nr;
        const DriveSpec drive = DriveSpec::bilateral(eps_list[e], Waveform::monochromatic(omega));
        const Realization& real = *realizations[r];
        const auto pc = compute_otoc_pairs(pairs, real.left, real.majoranas, real.tfd, drive, t_grid, cfg,
                                           plateau_fraction);
        std::vector<std::vector<double>> cs;
        for (const auto& c : pc) cs.push_back(c.c);
        curves[slot] = mean_curve(cs);
        pair_curves[slot] = pc;
    });

    std::vector<DelayPoint> out;
    for (std::size_t e = 0; e < ne; ++e) {
        DelayPoint p;
        p.epsilon = eps_list[e];
        std::vector<std::vector<double>> cs;
        for (std::size_t r = 0; r < nr; ++r) {
            const auto& c = curves[e * nr + r];
            cs.push_back(c);
            p.t_scr.push_back(extract_t_scr(t_grid, c, plateau_fraction).t_scr);
            p.curves.push_back(std::move(pair_curves[e * nr + r]));
        }
        p.mean_c = mean_curve(cs);
        out.push_back(std::move(p));
    }
    for (auto& p : out)
        for (std::size_t r = 0; r < nr; ++r) p.delay.push_back(p.t_scr[r] - out.front().t_scr[r]);
    return out;
}

StrainResponse strain_response(const Realization& r, double g, double t_star, const DriveSpec& drive,
                               const std::vector<double>& t_grid, const PropagatorConfig& cfg) {
    if (t_grid.empty()) throw InvalidArgument("time grid is empty");
    for (std::size_t k = 1; k < t_grid.size(); ++k)
        if (!(t_grid[k] > t_grid[k - 1])) throw InvalidArgument("time grid must be increasing");
    std::vector<StateVector> branches = prepare_inserted(r, t_star, drive, cfg);
    for (auto& b : branches) apply_coupling(b, g, r.majoranas);
    const Eigen::MatrixXcd& s = r.hamiltonians.strain_right.block;
    StrainResponse out;
    double t_prev = 0.0;
    for (double t : t_grid) {
        const Eigen::MatrixXcd u = step_propagator(r.right, drive, ProtocolStep::Readout, t_prev, t, cfg);
        double acc = 0.0;
        for (auto& b : branches) {
            apply_boundary(b, Side::Right, u);
            acc += boundary_expectation(b, Side::Right, s).real();
        }
        out.t.push_back(t);
        out.s.push_back(acc / static_cast<double>(branches.size()));
        out.h.push_back(drive.acts_on(Side::Right, ProtocolStep::Readout) ? eval_waveform(drive.waveform, t) : 0.0);
        t_prev = t;
    }
    return out;
}

Susceptibility strain_susceptibility(const StrainResponse& resp, double eps0, double strain_norm) {
    if (resp.s.empty()) throw InvalidArgument("empty strain response");
    if (!(eps0 > 0.0) || !(strain_norm > 0.0)) throw InvalidArgument("amplitude and norm must be positive");
    std::size_t k = 0;
    for (std::size_t i = 1; i < resp.s.size(); ++i)
        if (std::abs(resp.s[i]) > std::abs(resp.s[k])) k = i;
    Susceptibility out;
    out.s_peak = resp.s[k];
    out.t_peak = resp.t[k];
    out.h_peak = resp.h[k];
    out.chi = out.s_peak / (eps0 * strain_norm * out.h_peak);
    return out;
}

}  // namespace sykgw
