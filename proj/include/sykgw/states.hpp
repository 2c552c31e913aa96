#pragma once

// Register states: the infinite-temperature state |I>, the thermofield double
// and the protocol initial state with the message/ancilla Bell pair.
//
// Amplitudes are stored so that the (m, a) block of the state is a d x d
// column-major matrix B with B(r, l) = psi[((m*2 + a)*d + l)*d + r]. A left
// boundary operator A then acts as B -> B A^T and a right one as B -> A B.

#include "sykgw/hamiltonians.hpp"
#include "sykgw/register.hpp"

namespace sykgw {

struct StateVector {
    RegisterLayout layout;
    Eigen::VectorXcd amplitudes;

    StateVector() = default;
    explicit StateVector(const RegisterLayout& l);
    StateVector(const RegisterLayout& l, Eigen::VectorXcd amps);

    std::int64_t dim() const { return amplitudes.size(); }
    double norm() const { return amplitudes.norm(); }
    void normalize();
    std::span<const cplx> span() const { return {amplitudes.data(), static_cast<std::size_t>(amplitudes.size())}; }
    std::span<cplx> span() { return {amplitudes.data(), static_cast<std::size_t>(amplitudes.size())}; }

    /// All four (m, a) blocks side by side: d rows (right index), 4d columns.
    Eigen::Map<Eigen::MatrixXcd> blocks();
    Eigen::Map<const Eigen::MatrixXcd> blocks() const;
    /// Block of message/ancilla basis state (m, a), index m*2 + a.
    Eigen::Map<Eigen::MatrixXcd> block(int ma);
    Eigen::Map<const Eigen::MatrixXcd> block(int ma) const;
};

/// psi <- (identity x A) psi for a boundary matrix A on `side`.
void apply_boundary(StateVector& psi, Side side, const Eigen::MatrixXcd& a);
void apply_boundary(StateVector& psi, const BoundaryOperator& op);
/// psi <- P psi for a full-register Pauli string.
void apply_pauli(StateVector& psi, const PauliString& p);
cplx expectation(const StateVector& psi, const PauliString& p);
/// <psi| (identity x A) |psi> for a boundary matrix.
cplx boundary_expectation(const StateVector& psi, Side side, const Eigen::MatrixXcd& a);

/// Unique state annihilated by every c_i = (gamma_i^L + i gamma_i^R) / 2, with
/// message/ancilla in |00>. Largest amplitude real and positive.
StateVector build_infinite_tfd(const RegisterLayout& layout, const MajoranaSet& majoranas);

/// e^{-beta H_L / 2} |I>, normalized, by repeated Krylov exponential action
/// with step dtau (default beta / 64) and renormalization after each step.
StateVector build_tfd(double beta, const BoundaryOperator& h_left, const StateVector& infinite,
                      double dtau = 0.0, double tol = 1e-12);

/// Bell pair (|00> + |11>) / sqrt2 on message/ancilla tensored with the
/// boundary factor of `tfd` (its (m, a) = (0, 0) block).
StateVector assemble_initial_state(const StateVector& tfd);

/// Reduced density matrix of one boundary (everything else traced out).
Eigen::MatrixXcd reduced_boundary(const StateVector& psi, Side side);
/// Reduced density matrix of (message, ancilla), basis index m*2 + a.
Eigen::Matrix4cd reduced_message_ancilla(const StateVector& psi);
Eigen::Matrix2cd reduced_message(const StateVector& psi);

/// e^{-beta H} / Z for a Hermitian block.
Eigen::MatrixXcd gibbs_state(const Eigen::MatrixXcd& h, double beta);
/// (1/2) sum |eigenvalues of (a - b)| for Hermitian a, b.
double trace_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

}  // namespace sykgw
