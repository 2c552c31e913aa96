#pragma once

// Qubit register and Majorana algebra.
//
// Register qubits, most significant first:
//   [message, ancilla, chain_0 ... chain_{N-1}]
// The Jordan-Wigner chain has N qubits and hosts 2N Majoranas: the N left
// Majoranas on chain qubits 0..N/2-1 and the N right Majoranas on chain
// qubits N/2..N-1. Because both boundaries share one chain, left and right
// Majoranas anticommute without extra Klein factors. The basis index is
//   ((m * 2 + a) * d + l) * d + r,   d = 2^(N/2).

#include <complex>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace sykgw {

using cplx = std::complex<double>;
using SparseMatrix = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;

enum class Side { Left, Right };

const char* to_string(Side side);

struct RegisterLayout {
    int n_majorana = 0;  // N, Majoranas per boundary

    int chain_qubits() const { return n_majorana; }
    int boundary_qubits() const { return n_majorana / 2; }
    int total_qubits() const { return n_majorana + 2; }
    std::int64_t boundary_dim() const { return std::int64_t{1} << boundary_qubits(); }
    std::int64_t total_dim() const { return std::int64_t{4} * boundary_dim() * boundary_dim(); }

    /// Position of a boundary Majorana on the 2N-long chain.
    int chain_position(Side side, int index) const;
    /// Inverse of chain_position.
    std::pair<Side, int> owner(int chain_position) const;

    /// Register qubit index (0 = message, 1 = ancilla) of a chain qubit.
    static int register_qubit_of_chain(int chain_qubit) { return chain_qubit + 2; }

    bool operator==(const RegisterLayout&) const = default;
};

/// Validates N and returns the layout. Throws InvalidArgument for odd N,
/// N < 4 or N > max_n.
RegisterLayout build_layout(int n_majorana, int max_n = 16);

/// A Pauli string i^phase * X^x * Z^z on up to 32 qubits. Masks are in basis
/// index bit space: qubit q of an n-qubit register is bit n-1-q.
struct PauliString {
    std::uint32_t x = 0;
    std::uint32_t z = 0;
    int phase = 0;  // exponent of i, mod 4

    static PauliString identity() { return {}; }
    /// Single-qubit Pauli ('I', 'X', 'Y', 'Z') on qubit q of an n-qubit register.
    static PauliString single(char pauli, int qubit, int n_qubits);

    cplx coefficient() const;
    bool is_hermitian() const;
    PauliString adjoint() const;
    PauliString scaled_by_i(int power) const;

    /// Amplitude and target of P|b>: P|b> = amplitude * |target>.
    std::pair<cplx, std::uint64_t> act(std::uint64_t basis) const;

    bool commutes_with(const PauliString& other) const;
    bool operator==(const PauliString&) const = default;
};

PauliString operator*(const PauliString& a, const PauliString& b);

/// out = P * in for a vector over 2^n basis states.
void apply_pauli(const PauliString& p, std::span<const cplx> in, std::span<cplx> out);
/// Expectation <psi|P|psi>.
cplx expectation(const PauliString& p, std::span<const cplx> psi);

/// Dense matrix of a Pauli string on n qubits.
Eigen::MatrixXcd dense_matrix(const PauliString& p, int n_qubits);

/// Sparse operator on the full register; the carrier for Majoranas, coupling
/// unitaries and embedded boundary operators.
struct OperatorMatrix {
    SparseMatrix matrix;
    bool hermitian = false;
    bool unitary = false;

    std::int64_t dimension() const { return matrix.rows(); }
    Eigen::VectorXcd apply(const Eigen::VectorXcd& v) const { return matrix * v; }
    double hermiticity_error() const;
};

OperatorMatrix to_operator(const PauliString& p, int n_qubits);

/// Pauli strings of all 2N Majoranas, built once per layout. Index order is
/// the chain order: left 0..N-1, then right 0..N-1.
class MajoranaSet {
public:
    explicit MajoranaSet(const RegisterLayout& layout);

    const RegisterLayout& layout() const { return layout_; }
    /// Majorana as a Pauli string on the full register.
    const PauliString& full(Side side, int index) const;
    /// Same Majorana as a Pauli string on one boundary block (N/2 qubits),
    /// without the left-parity string carried by right Majoranas. Even
    /// products of right Majoranas equal products of these local strings.
    const PauliString& local(int index) const;
    /// Left-boundary fermion parity as a string on the full register.
    const PauliString& left_parity() const { return left_parity_; }

private:
    RegisterLayout layout_;
    std::vector<PauliString> full_;
    std::vector<PauliString> local_;
    PauliString left_parity_;
};

/// Sparse full-register matrix of gamma^side_index.
OperatorMatrix build_majorana(const MajoranaSet& majoranas, Side side, int index);

/// Nonlocal fermion number n_i = c_i^dag c_i = (1 + i gamma_i^L gamma_i^R) / 2,
/// returned as the Hermitian string K_i = i gamma_i^L gamma_i^R.
PauliString nonlocal_parity_string(const MajoranaSet& majoranas, int index);

}  // namespace sykgw
