#include "sykgw/protocol.hpp"

#include <cmath>

#include "sykgw/errors.hpp"
#include "sykgw/parallel.hpp"

namespace sykgw {

void ProtocolParams::validate() const {
    if (!(t_star > 0.0)) throw InvalidArgument("t_star must be positive");
    if (!(beta >= 0.0)) throw InvalidArgument("beta must be >= 0");
    if (!(t_r >= 0.0)) throw InvalidArgument("readout time must be >= 0");
}

// --- coupling --------------------------------------------------------------

namespace {

constexpr int kFirstCoupledMode = 2;

// psi <- n_i psi with n_i = (1 + K_i) / 2
StateVector occupied_part(const StateVector& psi, const PauliString& k) {
    StateVector kpsi = psi;
    apply_pauli(kpsi, k);
    kpsi.amplitudes = 0.5 * (psi.amplitudes + kpsi.amplitudes);
    return kpsi;
}

}  // namespace

void apply_coupling(StateVector& psi, double g, const MajoranaSet& majoranas) {
    const cplx factor = std::exp(cplx{0.0, g}) - 1.0;
    for (int i = kFirstCoupledMode; i < majoranas.layout().n_majorana; ++i) {
        const StateVector occ = occupied_part(psi, nonlocal_parity_string(majoranas, i));
        psi.amplitudes += factor * occ.amplitudes;
    }
}

OperatorMatrix coupling_unitary(double g, const RegisterLayout& layout, const MajoranaSet& majoranas) {
    if (layout.n_majorana > 10) throw InvalidArgument("coupling_unitary is for N <= 10; use apply_coupling");
    if (!(majoranas.layout() == layout)) throw InvalidArgument("Majorana set built for a different layout");
    const std::int64_t dim = layout.total_dim();
    std::vector<Eigen::Triplet<cplx>> triplets;
    StateVector col(layout);
    for (std::int64_t c = 0; c < dim; ++c) {
        col.amplitudes.setZero();
        col.amplitudes(c) = 1.0;
        apply_coupling(col, g, majoranas);
        for (std::int64_t r = 0; r < dim; ++r)
            if (std::abs(col.amplitudes(r)) > 1e-15) triplets.emplace_back(r, c, col.amplitudes(r));
    }
    OperatorMatrix op;
    op.matrix.resize(dim, dim);
    op.matrix.setFromTriplets(triplets.begin(), triplets.end());
    op.unitary = true;
    op.hermitian = std::abs(std::sin(g)) < 1e-15;
    return op;
}

std::vector<StateVector> coupling_sectors(const StateVector& psi, const MajoranaSet& majoranas) {
    // Mode by mode: sector k splits into (1 - n_i) part staying at k and n_i part moving to k + 1.
    std::vector<StateVector> sectors{psi};
    for (int i = kFirstCoupledMode; i < majoranas.layout().n_majorana; ++i) {
        const PauliString k = nonlocal_parity_string(majoranas, i);
        std::vector<StateVector> next(sectors.size() + 1, StateVector(psi.layout));
        for (std::size_t s = 0; s < sectors.size(); ++s) {
            const StateVector occ = occupied_part(sectors[s], k);
            next[s].amplitudes += sectors[s].amplitudes - occ.amplitudes;
            next[s + 1].amplitudes += occ.amplitudes;
        }
        sectors = std::move(next);
    }
    return sectors;
}

// --- insertion -------------------------------------------------------------

PauliString insertion_string(const RegisterLayout& layout, int mu, int qubit) {
    if (mu < 0 || mu > 3) throw InvalidArgument("Pauli index must be 0..3");
    if (qubit < 0 || qubit >= layout.boundary_qubits()) throw InvalidArgument("insertion qubit out of range");
    if (mu == 0) return PauliString::identity();
    const char p = "IXYZ"[mu];
    const int nq = layout.total_qubits();
    return PauliString::single(p, 0, nq) * PauliString::single(p, RegisterLayout::register_qubit_of_chain(qubit), nq);
}

std::array<StateVector, 4> insert_message_branches(const StateVector& psi, int insertion_qubit) {
    std::array<StateVector, 4> out;
    for (int mu = 0; mu < 4; ++mu) {
        out[mu] = psi;
        apply_pauli(out[mu], insertion_string(psi.layout, mu, insertion_qubit));
    }
    return out;
}

StateVector insert_message_swap(const StateVector& psi, int insertion_qubit) {
    const auto branches = insert_message_branches(psi, insertion_qubit);
    StateVector out(psi.layout);
    for (const auto& b : branches) out.amplitudes += 0.5 * b.amplitudes;
    return out;
}

// --- decoder ---------------------------------------------------------------

Decoder build_decoder(const MajoranaSet& majoranas, int readout_qubit) {
    const RegisterLayout& layout = majoranas.layout();
    if (readout_qubit < 0 || readout_qubit >= layout.boundary_qubits())
        throw InvalidArgument("readout qubit out of range");
    const int nq = layout.total_qubits();
    const PauliString& gx = majoranas.full(Side::Right, 2 * readout_qubit);
    const PauliString& gy = majoranas.full(Side::Right, 2 * readout_qubit + 1);
    const PauliString gz = (gx * gy).scaled_by_i(-1);
    Decoder d;
    d.observables = {gx * PauliString::single('X', 1, nq), gy * PauliString::single('Y', 1, nq),
                     gz * PauliString::single('Z', 1, nq)};
    return d;
}

double decoded_fidelity(const StateVector& psi, const Decoder& decoder) {
    double f = 1.0;
    for (int o = 0; o < 3; ++o) f += decoder.signs[o] * expectation(psi, decoder.observables[o]).real();
    return 0.25 * f;
}

double decoded_fidelity(const std::vector<StateVector>& branches, const Decoder& decoder) {
    if (branches.empty()) throw InvalidArgument("no branches to average");
    double acc = 0.0;
    for (const auto& b : branches) acc += decoded_fidelity(b, decoder);
    return acc / static_cast<double>(branches.size());
}

// --- realization -----------------------------------------------------------

namespace {

StateVector make_tfd(const RegisterLayout& layout, const MajoranaSet& m, const HamiltonianSet& h, double beta) {
    return build_tfd(beta, h.h_left, build_infinite_tfd(layout, m));
}

}  // namespace

Realization::Realization(int n, double j, std::uint64_t seed, double beta_, const HamiltonianOptions& ham,
                         const ProtocolOptions& opts)
    : layout(build_layout(n)),
      majoranas(layout),
      couplings(sample_couplings(n, j, seed)),
      hamiltonians(build_hamiltonians(couplings, majoranas, ham)),
      left(hamiltonians.h_left, hamiltonians.strain_left),
      right(hamiltonians.h_right, hamiltonians.strain_right),
      tfd(make_tfd(layout, majoranas, hamiltonians, beta_)),
      initial(assemble_initial_state(tfd)),
      beta(beta_),
      options(opts),
      decoder(build_decoder(majoranas, opts.readout_qubit)) {
    insertion_string(layout, 1, opts.insertion_qubit);  // validates the qubit index
}

// --- protocol --------------------------------------------------------------

namespace {

std::vector<StateVector> insert(const StateVector& psi, const ProtocolOptions& options) {
    if (options.insertion == InsertionMode::Swap) return {insert_message_swap(psi, options.insertion_qubit)};
    const auto b = insert_message_branches(psi, options.insertion_qubit);
    return {b.begin(), b.end()};
}

// Fidelity of sum_k e^{igk} phi_k from the sector cross terms c[o](k', k) = <phi_k'|O_o|phi_k>.
double sector_fidelity(const std::array<Eigen::MatrixXcd, 3>& c, const Decoder& decoder, double g) {
    const Eigen::Index n = c[0].rows();
    Eigen::VectorXcd ph(n);
    for (Eigen::Index k = 0; k < n; ++k) ph(k) = std::exp(cplx{0.0, g * static_cast<double>(k)});
    double f = 1.0;
    for (int o = 0; o < 3; ++o) f += decoder.signs[o] * ph.dot(c[o] * ph).real();
    return 0.25 * f;
}

std::array<Eigen::MatrixXcd, 3> sector_cross_terms(const std::vector<StateVector>& sectors, const Decoder& decoder) {
    const Eigen::Index dim = sectors.front().dim();
    const auto n = static_cast<Eigen::Index>(sectors.size());
    Eigen::MatrixXcd phi(dim, n), ophi(dim, n);
    for (Eigen::Index k = 0; k < n; ++k) phi.col(k) = sectors[static_cast<std::size_t>(k)].amplitudes;
    std::array<Eigen::MatrixXcd, 3> out;
    for (int o = 0; o < 3; ++o) {
        for (Eigen::Index k = 0; k < n; ++k) {
            const Eigen::VectorXcd col = phi.col(k);
            sykgw::apply_pauli(decoder.observables[o], {col.data(), static_cast<std::size_t>(dim)},
                               {ophi.col(k).data(), static_cast<std::size_t>(dim)});
        }
        out[o] = phi.adjoint() * ophi;
    }
    return out;
}

}  // namespace

std::vector<StateVector> prepare_inserted(const Realization& r, double t_star, const DriveSpec& drive,
                                          const PropagatorConfig& cfg) {
    if (!(t_star > 0.0)) throw InvalidArgument("t_star must be positive");
    StateVector psi = r.initial;
    apply_boundary(psi, Side::Left, step_propagator(r.left, drive, ProtocolStep::PrepBackward, 0.0, -t_star, cfg));
    std::vector<StateVector> branches = insert(psi, r.options);
    const Eigen::MatrixXcd fwd = step_propagator(r.left, drive, ProtocolStep::PrepForward, -t_star, 0.0, cfg);
    for (auto& b : branches) apply_boundary(b, Side::Left, fwd);
    return branches;
}

std::vector<StateVector> decoder_input(const ProtocolParams& params, const Realization& r, const DriveSpec& drive,
                                       const PropagatorConfig& cfg) {
    params.validate();
    cfg.validate();
    std::vector<StateVector> branches = prepare_inserted(r, params.t_star, drive, cfg);
    const Eigen::MatrixXcd readout = step_propagator(r.right, drive, ProtocolStep::Readout, 0.0, params.t_r, cfg);
    for (auto& b : branches) {
        apply_coupling(b, params.g, r.majoranas);
        apply_boundary(b, Side::Right, readout);
    }
    return branches;
}

double run_teleportation(const ProtocolParams& params, const Realization& r, const DriveSpec& drive,
                         const PropagatorConfig& cfg) {
    return decoded_fidelity(decoder_input(params, r, drive, cfg), r.decoder);
}

std::vector<double> fidelity_profile(const Realization& r, double g, double t_star, const std::vector<double>& t_grid,
                                     const DriveSpec& drive, const PropagatorConfig& cfg) {
    if (t_grid.empty()) throw InvalidArgument("readout grid is empty");
    for (std::size_t k = 1; k < t_grid.size(); ++k)
        if (!(t_grid[k] > t_grid[k - 1])) throw InvalidArgument("readout grid must be increasing");
    if (t_grid.front() < 0.0) throw InvalidArgument("readout times must be >= 0");
    cfg.validate();
    std::vector<StateVector> branches = prepare_inserted(r, t_star, drive, cfg);
    for (auto& b : branches) apply_coupling(b, g, r.majoranas);
    std::vector<double> out;
    double t_prev = 0.0;
    for (double t : t_grid) {
        const Eigen::MatrixXcd u = step_propagator(r.right, drive, ProtocolStep::Readout, t_prev, t, cfg);
        for (auto& b : branches) apply_boundary(b, Side::Right, u);
        out.push_back(decoded_fidelity(branches, r.decoder));
        t_prev = t;
    }
    return out;
}

FidelityMap fidelity_map(const Realization& r, const std::vector<double>& g_grid, const std::vector<double>& t_grid,
                         const DriveSpec& drive, const PropagatorConfig& cfg) {
    if (g_grid.empty() || t_grid.empty()) throw InvalidArgument("optimizer grids must be nonempty");
    for (std::size_t k = 1; k < t_grid.size(); ++k)
        if (!(t_grid[k] > t_grid[k - 1])) throw InvalidArgument("time grid must be increasing");
    if (!(t_grid.front() > 0.0)) throw InvalidArgument("time grid must be positive");
    cfg.validate();

    FidelityMap map{g_grid, t_grid, Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(g_grid.size()),
                                                          static_cast<Eigen::Index>(t_grid.size()))};
    const auto d = r.layout.boundary_dim();
    Eigen::MatrixXcd back = Eigen::MatrixXcd::Identity(d, d);  // U_L(-t <- 0)
    Eigen::MatrixXcd fwd = Eigen::MatrixXcd::Identity(d, d);   // U_L(0 <- -t)
    Eigen::MatrixXcd read = Eigen::MatrixXcd::Identity(d, d);  // U_R(t <- 0)
    double t_prev = 0.0;
    for (std::size_t it = 0; it < t_grid.size(); ++it) {
        const double t = t_grid[it];
        back = step_propagator(r.left, drive, ProtocolStep::PrepBackward, -t_prev, -t, cfg) * back;
        fwd = fwd * step_propagator(r.left, drive, ProtocolStep::PrepForward, -t, -t_prev, cfg);
        read = step_propagator(r.right, drive, ProtocolStep::Readout, t_prev, t, cfg) * read;
        t_prev = t;

        StateVector psi = r.initial;
        apply_boundary(psi, Side::Left, back);
        std::vector<StateVector> branches = insert(psi, r.options);
        std::array<Eigen::MatrixXcd, 3> cross;
        for (std::size_t b = 0; b < branches.size(); ++b) {
            apply_boundary(branches[b], Side::Left, fwd);
            std::vector<StateVector> sectors = coupling_sectors(branches[b], r.majoranas);
            for (auto& s : sectors) apply_boundary(s, Side::Right, read);
            const auto c = sector_cross_terms(sectors, r.decoder);
            for (int o = 0; o < 3; ++o) cross[o] = b == 0 ? c[o] : Eigen::MatrixXcd(cross[o] + c[o]);
        }
        for (int o = 0; o < 3; ++o) cross[o] /= static_cast<double>(branches.size());
        for (std::size_t ig = 0; ig < g_grid.size(); ++ig)
            map.f(static_cast<Eigen::Index>(ig), static_cast<Eigen::Index>(it)) =
                sector_fidelity(cross, r.decoder, g_grid[ig]);
    }
    return map;
}

OptResult optimum_of(std::vector<FidelityMap> per_seed) {
    if (per_seed.empty()) throw InvalidArgument("optimum needs at least one map");
    OptResult res;
    res.per_seed = std::move(per_seed);
    res.mean = res.per_seed.front();
    for (std::size_t i = 1; i < res.per_seed.size(); ++i) {
        if (res.per_seed[i].g != res.mean.g || res.per_seed[i].t != res.mean.t)
            throw InvalidArgument("fidelity maps are on different grids");
        res.mean.f += res.per_seed[i].f;
    }
    res.mean.f /= static_cast<double>(res.per_seed.size());
    // Strict comparison in g-major order keeps the smallest g, then t, on ties.
    Eigen::Index bg = 0, bt = 0;
    for (Eigen::Index ig = 0; ig < res.mean.f.rows(); ++ig)
        for (Eigen::Index it = 0; it < res.mean.f.cols(); ++it)
            if (res.mean.f(ig, it) > res.mean.f(bg, bt)) {
                bg = ig;
                bt = it;
            }
    res.g_opt = res.mean.g[static_cast<std::size_t>(bg)];
    res.t_opt = res.mean.t[static_cast<std::size_t>(bt)];
    res.f_opt = res.mean.f(bg, bt);
    return res;
}

OptResult optimize(const std::vector<const Realization*>& realizations, const DriveSpec& drive,
                   const std::vector<double>& g_grid, const std::vector<double>& t_grid, const PropagatorConfig& cfg,
                   int threads) {
    if (realizations.empty()) throw InvalidArgument("optimize needs at least one realization");
    std::vector<FidelityMap> maps(realizations.size());
    parallel_for(realizations.size(), threads,
                 [&](std::size_t i) { maps[i] = fidelity_map(*realizations[i], g_grid, t_grid, drive, cfg); });
    return optimum_of(std::move(maps));
}

namespace {

std::ptrdiff_t grid_index(const std::vector<double>& grid, double v) {
    for (std::size_t k = 0; k < grid.size(); ++k)
        if (std::abs(grid[k] - v) < 1e-9) return static_cast<std::ptrdiff_t>(k);
    return -1;
}

}  // namespace

ReoptResult reopt_ratio(const std::vector<const Realization*>& realizations, const DriveSpec& drive, double g_fixed,
                        double t_fixed, const std::vector<double>& g_grid, const std::vector<double>& t_grid,
                        const PropagatorConfig& cfg, int threads) {
    const OptResult opt = optimize(realizations, drive, g_grid, t_grid, cfg, threads);
    ReoptResult res;
    const std::ptrdiff_t ig = grid_index(g_grid, g_fixed), it = grid_index(t_grid, t_fixed);
    const auto bg = grid_index(g_grid, opt.g_opt), bt = grid_index(t_grid, opt.t_opt);
    for (std::size_t i = 0; i < realizations.size(); ++i) {
        double f;
        if (ig >= 0 && it >= 0)
            f = opt.per_seed[i].f(ig, it);
        else
            f = run_teleportation({g_fixed, t_fixed, t_fixed, realizations[i]->beta}, *realizations[i], drive, cfg);
        res.f_fixed_per_seed.push_back(f);
        res.f_reopt_per_seed.push_back(opt.per_seed[i].f(bg, bt));
    }
    double acc = 0.0;
    for (double f : res.f_fixed_per_seed) acc += f;
    res.f_fixed = acc / static_cast<double>(realizations.size());
    res.f_reopt = opt.f_opt;
    res.ratio = res.f_reopt / res.f_fixed;
    res.g_reopt = opt.g_opt;
    res.t_reopt = opt.t_opt;
    return res;
}

std::vector<double> linear_grid(double start, double stop, double step) {
    if (!(step > 0.0)) throw InvalidArgument("grid step must be positive");
    if (stop < start) throw InvalidArgument("grid stop precedes start");
    std::vector<double> out;
    const auto n = static_cast<long>(std::floor((stop - start) / step + 1e-3));
    for (long k = 0; k <= n; ++k) out.push_back(start + static_cast<double>(k) * step);
    return out;
}

}  // namespace sykgw
