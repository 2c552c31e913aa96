#include "sykgw/states.hpp"

#include <cmath>

#include "sykgw/errors.hpp"
#include "sykgw/propagation.hpp"

namespace sykgw {

StateVector::StateVector(const RegisterLayout& l) : layout(l), amplitudes(Eigen::VectorXcd::Zero(l.total_dim())) {}

StateVector::StateVector(const RegisterLayout& l, Eigen::VectorXcd amps) : layout(l), amplitudes(std::move(amps)) {
    if (amplitudes.size() != l.total_dim()) throw InvalidArgument("amplitude vector does not match layout");
}

void StateVector::normalize() {
    const double n = norm();
    if (!(n > 0.0)) throw DegenerateInput("cannot normalize a zero state");
    amplitudes /= n;
}

Eigen::Map<Eigen::MatrixXcd> StateVector::blocks() {
    const auto d = layout.boundary_dim();
    return {amplitudes.data(), d, 4 * d};
}

Eigen::Map<const Eigen::MatrixXcd> StateVector::blocks() const {
    const auto d = layout.boundary_dim();
    return {amplitudes.data(), d, 4 * d};
}

Eigen::Map<Eigen::MatrixXcd> StateVector::block(int ma) {
    const auto d = layout.boundary_dim();
    return {amplitudes.data() + ma * d * d, d, d};
}

Eigen::Map<const Eigen::MatrixXcd> StateVector::block(int ma) const {
    const auto d = layout.boundary_dim();
    return {amplitudes.data() + ma * d * d, d, d};
}

void apply_boundary(StateVector& psi, Side side, const Eigen::MatrixXcd& a) {
    const auto d = psi.layout.boundary_dim();
    if (a.rows() != d || a.cols() != d) throw InvalidArgument("boundary matrix does not match layout");
    if (side == Side::Right) {
        auto b = psi.blocks();
        b = (a * b).eval();
        return;
    }
    const Eigen::MatrixXcd at = a.transpose();
    for (int ma = 0; ma < 4; ++ma) {
        auto b = psi.block(ma);
        if (b.isZero(0.0)) continue;
        b = (b * at).eval();
    }
}

void apply_boundary(StateVector& psi, const BoundaryOperator& op) { apply_boundary(psi, op.side, op.block); }

void apply_pauli(StateVector& psi, const PauliString& p) {
    Eigen::VectorXcd out(psi.dim());
    sykgw::apply_pauli(p, psi.span(), {out.data(), static_cast<std::size_t>(out.size())});
    psi.amplitudes = std::move(out);
}

cplx expectation(const StateVector& psi, const PauliString& p) { return sykgw::expectation(p, psi.span()); }

cplx boundary_expectation(const StateVector& psi, Side side, const Eigen::MatrixXcd& a) {
    StateVector tmp = psi;
    apply_boundary(tmp, side, a);
    return psi.amplitudes.dot(tmp.amplitudes);
}

// --- |I> -------------------------------------------------------------------

namespace {

StateVector project_vacuum(const RegisterLayout& layout, const std::vector<PauliString>& k_strings,
                           std::uint64_t seed) {
    StateVector psi(layout);
    Rng rng(seed);
    auto b = psi.block(0);
    for (Eigen::Index c = 0; c < b.cols(); ++c)
        for (Eigen::Index r = 0; r < b.rows(); ++r) b(r, c) = cplx{rng.normal(), rng.normal()};
    const double start = psi.norm();
    // 1 - n_i = (1 - K_i) / 2
    for (const PauliString& k : k_strings) {
        StateVector kpsi = psi;
        apply_pauli(kpsi, k);
        psi.amplitudes = 0.5 * (psi.amplitudes - kpsi.amplitudes);
    }
    if (!(psi.norm() > 1e-8 * start))
        throw InternalConsistency("no state is annihilated by every nonlocal fermion");
    psi.normalize();
    return psi;
}

}  // namespace

StateVector build_infinite_tfd(const RegisterLayout& layout, const MajoranaSet& majoranas) {
    if (!(majoranas.layout() == layout)) throw InvalidArgument("Majorana set built for a different layout");
    std::vector<PauliString> k_strings;
    for (int i = 0; i < layout.n_majorana; ++i) k_strings.push_back(nonlocal_parity_string(majoranas, i));

    StateVector a = project_vacuum(layout, k_strings, 0x5eed0001);
    const StateVector b = project_vacuum(layout, k_strings, 0x5eed0002);
    // Two independent starts land on the same ray iff the null space is one-dimensional.
    if (std::abs(a.amplitudes.dot(b.amplitudes)) < 1.0 - 1e-10)
        throw InternalConsistency("vacuum of the nonlocal fermions is degenerate");

    Eigen::Index pick = 0;
    const double top = a.amplitudes.cwiseAbs().maxCoeff();
    while (std::abs(a.amplitudes(pick)) < (1.0 - 1e-8) * top) ++pick;
    a.amplitudes *= std::conj(a.amplitudes(pick)) / std::abs(a.amplitudes(pick));
    return a;
}

// --- TFD -------------------------------------------------------------------

StateVector build_tfd(double beta, const BoundaryOperator& h_left, const StateVector& infinite, double dtau,
                      double tol) {
    if (!(beta >= 0.0)) throw InvalidArgument("beta must be >= 0");
    if (h_left.side != Side::Left) throw InvalidArgument("TFD preparation needs the left Hamiltonian");
    if (h_left.hermiticity_error() > 1e-12) throw InvalidArgument("left Hamiltonian is not Hermitian");
    if (beta == 0.0) return infinite;
    if (dtau <= 0.0) dtau = beta / 64.0;

    const auto d = infinite.layout.boundary_dim();
    if (h_left.dim() != d) throw InvalidArgument("Hamiltonian does not match the state layout");
    const Eigen::MatrixXcd ht = h_left.block.transpose();
    MatVec mv = [&ht, d](const Eigen::VectorXcd& in, Eigen::VectorXcd& out) {
        out.resize(in.size());
        Eigen::Map<Eigen::MatrixXcd>(out.data(), d, d) = Eigen::Map<const Eigen::MatrixXcd>(in.data(), d, d) * ht;
    };

    const double total = 0.5 * beta;
    const long n = step_count(0.0, total, dtau);
    const double h = total / static_cast<double>(n);
    StateVector out = infinite;
    for (int ma = 0; ma < 4; ++ma) {
        auto blk = out.block(ma);
        if (blk.isZero(0.0)) continue;
        Eigen::VectorXcd v = Eigen::Map<const Eigen::VectorXcd>(blk.data(), d * d);
        for (long k = 0; k < n; ++k) {
            v = expm_action(mv, cplx{-h, 0.0}, v, tol);
            v.normalize();
        }
        Eigen::Map<Eigen::VectorXcd>(blk.data(), d * d) = v;
    }
    out.normalize();
    return out;
}

StateVector assemble_initial_state(const StateVector& tfd) {
    const double n = tfd.norm();
    if (std::abs(n - 1.0) > 1e-10) throw InvalidArgument("TFD state is not normalized");
    double rest = 0.0;
    for (int ma = 1; ma < 4; ++ma) rest += tfd.block(ma).squaredNorm();
    if (std::sqrt(rest) > 1e-10) throw InvalidArgument("TFD state must have message/ancilla in |00>");
    StateVector psi(tfd.layout);
    const double s = 1.0 / std::sqrt(2.0);
    psi.block(0) = s * tfd.block(0);
    psi.block(3) = s * tfd.block(0);
    return psi;
}

// --- reduced states --------------------------------------------------------

Eigen::MatrixXcd reduced_boundary(const StateVector& psi, Side side) {
    const auto d = psi.layout.boundary_dim();
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(d, d);
    for (int ma = 0; ma < 4; ++ma) {
        const auto b = psi.block(ma);
        if (side == Side::Left)
            rho += b.transpose() * b.conjugate();
        else
            rho += b * b.adjoint();
    }
    return rho;
}

Eigen::Matrix4cd reduced_message_ancilla(const StateVector& psi) {
    const auto d2 = psi.layout.boundary_dim() * psi.layout.boundary_dim();
    const Eigen::Map<const Eigen::MatrixXcd> phi(psi.amplitudes.data(), d2, 4);
    return phi.transpose() * phi.conjugate();
}

Eigen::Matrix2cd reduced_message(const StateVector& psi) {
    const Eigen::Matrix4cd rho = reduced_message_ancilla(psi);
    Eigen::Matrix2cd out;
    for (int m = 0; m < 2; ++m)
        for (int mp = 0; mp < 2; ++mp) out(m, mp) = rho(2 * m, 2 * mp) + rho(2 * m + 1, 2 * mp + 1);
    return out;
}

Eigen::MatrixXcd gibbs_state(const Eigen::MatrixXcd& h, double beta) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    const Eigen::VectorXd e = es.eigenvalues();
    Eigen::VectorXd w = (-beta * (e.array() - e.minCoeff())).exp();
    w /= w.sum();
    return es.eigenvectors() * w.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

double trace_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a - b, Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

}  // namespace sykgw
