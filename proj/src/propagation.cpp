#include "sykgw/propagation.hpp"

#include <algorithm>
#include <cmath>

#include "sykgw/errors.hpp"

namespace sykgw {

const char* to_string(Scheme s) { return s == Scheme::LieTrotter ? "lie_trotter" : "strang_midpoint"; }

Scheme parse_scheme(const std::string& name) {
    if (name == "lt" || name == "lie_trotter") return Scheme::LieTrotter;
    if (name == "strang" || name == "strang_midpoint") return Scheme::StrangMidpoint;
    throw InvalidArgument("unknown scheme '" + name + "' (expected lt or strang)");
}

void PropagatorConfig::validate() const {
    if (!(dt_base > 0.0)) throw InvalidArgument("dt must be positive");
    if (!(expm_tolerance > 0.0)) throw InvalidArgument("expm tolerance must be positive");
    if (krylov_dim < 2) throw InvalidArgument("Krylov dimension must be at least 2");
}

// --- Krylov ----------------------------------------------------------------

namespace {

// Error estimate of the k-step Lanczos approximation at the given scale.
bool converged(const std::vector<double>& alpha, const std::vector<double>& beta, double next_beta, cplx scale,
               double beta0, double bound) {
    const auto k = static_cast<Eigen::Index>(alpha.size());
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(k, k);
    for (Eigen::Index j = 0; j < k; ++j) t(j, j) = alpha[static_cast<std::size_t>(j)];
    for (Eigen::Index j = 0; j + 1 < k; ++j) t(j, j + 1) = t(j + 1, j) = beta[static_cast<std::size_t>(j)];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    cplx last = 0.0;
    for (Eigen::Index j = 0; j < k; ++j)
        last += es.eigenvectors()(k - 1, j) * std::exp(scale * es.eigenvalues()(j)) * es.eigenvectors()(0, j);
    return next_beta * std::abs(last) * beta0 <= bound;
}

}  // namespace

Eigen::VectorXcd expm_action(const MatVec& a, cplx scale, const Eigen::VectorXcd& v, double tol, int krylov_dim) {
    if (!(tol > 0.0)) throw InvalidArgument("expm tolerance must be positive");
    const Eigen::Index n = v.size();
    const int kmax = static_cast<int>(std::min<Eigen::Index>(krylov_dim, n));
    const double norm0 = v.norm();
    if (norm0 == 0.0 || scale == cplx{}) return v;

    Eigen::VectorXcd w = v;
    std::vector<Eigen::VectorXcd> basis;
    Eigen::VectorXcd tmp(n);
    double done = 0.0;
    double h = 1.0;
    int substeps = 0;
    while (done < 1.0) {
        const double beta0 = w.norm();
        if (beta0 == 0.0) return w;
        basis.assign(1, w / beta0);
        std::vector<double> alpha, beta;
        double next_beta = 0.0;
        for (int j = 0; j < kmax; ++j) {
            a(basis[j], tmp);
            const double aj = basis[j].dot(tmp).real();
            tmp -= aj * basis[j];
            if (j > 0) tmp -= beta.back() * basis[j - 1];
            // Full reorthogonalization keeps small-dimension runs exact.
            for (const auto& q : basis) tmp -= q.dot(tmp) * q;
            alpha.push_back(aj);
            next_beta = tmp.norm();
            if (next_beta <= 1e-13 * std::max(1.0, std::abs(aj)) || j + 1 == kmax) break;
            if (j % 4 == 3 && converged(alpha, beta, next_beta, scale * (1.0 - done), beta0, tol * (1.0 - done) * beta0))
                break;
            beta.push_back(next_beta);
            basis.push_back(tmp / next_beta);
        }
        const int k = static_cast<int>(alpha.size());
        const bool exact = next_beta <= 1e-13 * std::max(1.0, std::abs(alpha.back())) || k == n;
        Eigen::MatrixXd t = Eigen::MatrixXd::Zero(k, k);
        for (int j = 0; j < k; ++j) t(j, j) = alpha[j];
        for (int j = 0; j + 1 < k; ++j) t(j, j + 1) = t(j + 1, j) = beta[j];
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);

        h = exact || k < kmax ? 1.0 - done : std::min(1.0 - done, 2.0 * h);
        Eigen::VectorXcd y;
        while (true) {
            Eigen::VectorXcd phases(k);
            for (int j = 0; j < k; ++j) phases(j) = std::exp(scale * h * es.eigenvalues()(j));
            y = es.eigenvectors().cast<cplx>() * phases.cwiseProduct(es.eigenvectors().row(0).transpose().cast<cplx>());
            const double err = exact ? 0.0 : next_beta * std::abs(y(k - 1)) * beta0;
            if (exact || err <= std::max(tol * h, 1e-13) * beta0) break;
            h *= 0.5;
            if (h < 1e-14) throw NumericalFailure("Krylov exponential did not converge", err / beta0);
        }
        Eigen::VectorXcd out = Eigen::VectorXcd::Zero(n);
        for (int j = 0; j < k; ++j) out += (beta0 * y(j)) * basis[j];
        w = std::move(out);
        done += h;
        if (1.0 - done < 1e-15) done = 1.0;
        if (++substeps > 100000) throw NumericalFailure("Krylov exponential exceeded substep cap", 1.0 - done);
    }
    return w;
}

Eigen::VectorXcd expm_action(const OperatorMatrix& a, cplx scale, const Eigen::VectorXcd& v, double tol,
                             int krylov_dim) {
    if (a.dimension() != v.size()) throw InvalidArgument("operator and vector dimensions differ");
    if (a.hermiticity_error() > 1e-12) throw InvalidArgument("expm_action needs a Hermitian operator");
    MatVec mv = [&a](const Eigen::VectorXcd& in, Eigen::VectorXcd& out) { out = a.matrix * in; };
    return expm_action(mv, scale, v, tol, krylov_dim);
}

StateVector expm_action(const OperatorMatrix& a, cplx scale, const StateVector& psi, double tol) {
    return StateVector(psi.layout, expm_action(a, scale, psi.amplitudes, tol));
}

// --- step rules ------------------------------------------------------------

double adaptive_dt(double eps, const PropagatorConfig& cfg) {
    if (!(eps >= 0.0)) throw InvalidArgument("strain amplitude must be >= 0");
    if (!cfg.adaptive || eps <= 1.0) return cfg.dt_base;
    return std::max(0.4 * cfg.dt_base, cfg.dt_base / (1.0 + 0.5 * eps));
}

long step_count(double t0, double t1, double dt) {
    if (!(dt > 0.0)) throw InvalidArgument("step must be positive");
    return std::max(1L, static_cast<long>(std::ceil(std::abs(t1 - t0) / dt - 1e-9)));
}

// --- BoundaryEvolution -----------------------------------------------------

BoundaryEvolution::BoundaryEvolution(const BoundaryOperator& h, const BoundaryOperator& strain)
    : side_(h.side), h_(h.block), s_(strain.block) {
    if (h.side != strain.side) throw InvalidArgument("Hamiltonian and strain act on different boundaries");
    if (h_.rows() != s_.rows()) throw InvalidArgument("Hamiltonian and strain dimensions differ");
    if (h.hermiticity_error() > 1e-12 || strain.hermiticity_error() > 1e-12)
        throw InvalidArgument("evolution generators must be Hermitian");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h_);
    energies_ = es.eigenvalues();
    modes_ = es.eigenvectors();
}

namespace {

Eigen::MatrixXcd hermitian_exp(const Eigen::VectorXd& e, const Eigen::MatrixXcd& v, double dt) {
    Eigen::VectorXcd ph(e.size());
    for (Eigen::Index k = 0; k < e.size(); ++k) ph(k) = std::exp(cplx{0.0, -dt * e(k)});
    return v * ph.asDiagonal() * v.adjoint();
}

}  // namespace

Eigen::MatrixXcd BoundaryEvolution::step(double dt, double a) const {
    if (a == 0.0) return static_propagator(dt);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h_ + a * s_);
    return hermitian_exp(es.eigenvalues(), es.eigenvectors(), dt);
}

Eigen::MatrixXcd BoundaryEvolution::static_propagator(double dt) const {
    return hermitian_exp(energies_, modes_, dt);
}

Eigen::MatrixXcd BoundaryEvolution::propagator(double eps, const Waveform& w, double t0, double t1, double dt,
                                               Scheme scheme) const {
    if (t1 == t0) return Eigen::MatrixXcd::Identity(dim(), dim());
    if (eps == 0.0 || w.kind == WaveformKind::None) return static_propagator(t1 - t0);
    const long n = step_count(t0, t1, dt);
    const double h = (t1 - t0) / static_cast<double>(n);
    const double offset = scheme == Scheme::LieTrotter ? 0.0 : 0.5;
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(dim(), dim());
    for (long k = 0; k < n; ++k) {
        const double ts = t0 + (static_cast<double>(k) + offset) * h;
        u = step(h, eps * eval_waveform(w, ts)) * u;
    }
    return u;
}

Eigen::MatrixXcd step_propagator(const BoundaryEvolution& ev, const DriveSpec& drive, ProtocolStep step,
                                 double t0, double t1, const PropagatorConfig& cfg) {
    const double eps = drive.amplitude(ev.side(), step);
    return ev.propagator(eps, drive.waveform, t0, t1, adaptive_dt(eps, cfg), cfg.scheme);
}

StateVector evolve(const StateVector& psi, const BoundaryOperator& h, const BoundaryOperator& strain,
                   const DriveSpec& drive, ProtocolStep step, double t0, double t1, const PropagatorConfig& cfg) {
    cfg.validate();
    const BoundaryEvolution ev(h, strain);
    StateVector out = psi;
    apply_boundary(out, h.side, step_propagator(ev, drive, step, t0, t1, cfg));
    return out;
}

}  // namespace sykgw
