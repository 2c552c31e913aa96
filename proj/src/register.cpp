#include "sykgw/register.hpp"

#include <bit>
#include <cassert>
#include <string>

#include "sykgw/errors.hpp"

namespace sykgw {

namespace {

constexpr cplx kPhases[4] = {{1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}};

int parity(std::uint32_t bits) { return std::popcount(bits) & 1; }

std::uint32_t bit_of(int qubit, int n_qubits) { return std::uint32_t{1} << (n_qubits - 1 - qubit); }

// Jordan-Wigner Majorana number p on an n-qubit chain whose first chain qubit
// sits at register qubit `offset`: X or Y on qubit p/2, Z on every earlier
// chain qubit.
PauliString jw_majorana(int p, int offset, int n_qubits) {
    const int k = p / 2;
    PauliString s = PauliString::single(p % 2 == 0 ? 'X' : 'Y', offset + k, n_qubits);
    for (int q = 0; q < k; ++q) s = PauliString::single('Z', offset + q, n_qubits) * s;
    return s;
}

}  // namespace

const char* to_string(Side side) { return side == Side::Left ? "L" : "R"; }

int RegisterLayout::chain_position(Side side, int index) const {
    if (index < 0 || index >= n_majorana)
        throw InvalidArgument("Majorana index " + std::to_string(index) + " out of range for N=" +
                              std::to_string(n_majorana));
    return side == Side::Left ? index : n_majorana + index;
}

std::pair<Side, int> RegisterLayout::owner(int position) const {
    if (position < 0 || position >= 2 * n_majorana)
        throw InvalidArgument("chain position out of range");
    return position < n_majorana ? std::pair{Side::Left, position}
                                 : std::pair{Side::Right, position - n_majorana};
}

RegisterLayout build_layout(int n_majorana, int max_n) {
    if (n_majorana % 2 != 0) throw InvalidArgument("N must be even, got " + std::to_string(n_majorana));
    if (n_majorana < 4) throw InvalidArgument("N must be at least 4, got " + std::to_string(n_majorana));
    if (n_majorana > max_n)
        throw InvalidArgument("N=" + std::to_string(n_majorana) + " exceeds the configured maximum " +
                              std::to_string(max_n));
    if (n_majorana + 2 > 30) throw InvalidArgument("register too large for 32-bit Pauli masks");
    return RegisterLayout{n_majorana};
}

// --- PauliString -----------------------------------------------------------

PauliString PauliString::single(char pauli, int qubit, int n_qubits) {
    if (qubit < 0 || qubit >= n_qubits) throw InvalidArgument("qubit index out of range");
    const std::uint32_t b = bit_of(qubit, n_qubits);
    switch (pauli) {
        case 'I': return {};
        case 'X': return {b, 0, 0};
        case 'Z': return {0, b, 0};
        case 'Y': return {b, b, 1};  // Y = i X Z
        default: throw InvalidArgument(std::string("unknown Pauli '") + pauli + "'");
    }
}

cplx PauliString::coefficient() const { return kPhases[phase & 3]; }

bool PauliString::is_hermitian() const { return (phase & 1) == parity(x & z); }

PauliString PauliString::adjoint() const {
    // (X^x Z^z)^dag = Z^z X^x = (-1)^{|x&z|} X^x Z^z
    return {x, z, ((-phase + 2 * parity(x & z)) % 4 + 4) % 4};
}

PauliString PauliString::scaled_by_i(int power) const { return {x, z, ((phase + power) % 4 + 4) % 4}; }

std::pair<cplx, std::uint64_t> PauliString::act(std::uint64_t basis) const {
    const int sign = parity(static_cast<std::uint32_t>(basis) & z);
    return {kPhases[(phase + 2 * sign) & 3], basis ^ x};
}

bool PauliString::commutes_with(const PauliString& o) const {
    return parity(x & o.z) == parity(z & o.x);
}

PauliString operator*(const PauliString& a, const PauliString& b) {
    // Z^z1 X^x2 = (-1)^{|z1&x2|} X^x2 Z^z1
    const int ph = a.phase + b.phase + 2 * parity(a.z & b.x);
    return {a.x ^ b.x, a.z ^ b.z, ph & 3};
}

void apply_pauli(const PauliString& p, std::span<const cplx> in, std::span<cplx> out) {
    assert(in.size() == out.size());
    const std::size_t n = in.size();
    for (std::size_t b = 0; b < n; ++b) {
        const int sign = parity(static_cast<std::uint32_t>(b) & p.z);
        out[b ^ p.x] = kPhases[(p.phase + 2 * sign) & 3] * in[b];
    }
}

cplx expectation(const PauliString& p, std::span<const cplx> psi) {
    cplx acc{0.0, 0.0};
    const std::size_t n = psi.size();
    for (std::size_t b = 0; b < n; ++b) {
        const int sign = parity(static_cast<std::uint32_t>(b) & p.z);
        acc += std::conj(psi[b ^ p.x]) * kPhases[(p.phase + 2 * sign) & 3] * psi[b];
    }
    return acc;
}

Eigen::MatrixXcd dense_matrix(const PauliString& p, int n_qubits) {
    const std::int64_t dim = std::int64_t{1} << n_qubits;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    for (std::int64_t b = 0; b < dim; ++b) {
        auto [amp, target] = p.act(static_cast<std::uint64_t>(b));
        m(static_cast<Eigen::Index>(target), b) = amp;
    }
    return m;
}

// --- OperatorMatrix --------------------------------------------------------

double OperatorMatrix::hermiticity_error() const {
    SparseMatrix diff = matrix - SparseMatrix(matrix.adjoint());
    double worst = 0.0;
    for (int k = 0; k < diff.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(diff, k); it; ++it) worst = std::max(worst, std::abs(it.value()));
    return worst;
}

OperatorMatrix to_operator(const PauliString& p, int n_qubits) {
    const std::int64_t dim = std::int64_t{1} << n_qubits;
    std::vector<Eigen::Triplet<cplx>> triplets;
    triplets.reserve(static_cast<std::size_t>(dim));
    for (std::int64_t b = 0; b < dim; ++b) {
        auto [amp, target] = p.act(static_cast<std::uint64_t>(b));
        triplets.emplace_back(static_cast<Eigen::Index>(target), static_cast<Eigen::Index>(b), amp);
    }
    OperatorMatrix op;
    op.matrix.resize(dim, dim);
    op.matrix.setFromTriplets(triplets.begin(), triplets.end());
    op.hermitian = p.is_hermitian();
    op.unitary = true;
    return op;
}

// --- MajoranaSet -----------------------------------------------------------

MajoranaSet::MajoranaSet(const RegisterLayout& layout) : layout_(layout) {
    const int n = layout.n_majorana;
    const int nq = layout.total_qubits();
    full_.reserve(2 * n);
    for (int p = 0; p < 2 * n; ++p) full_.push_back(jw_majorana(p, 2, nq));
    const int nb = layout.boundary_qubits();
    local_.reserve(n);
    for (int i = 0; i < n; ++i) local_.push_back(jw_majorana(i, 0, nb));
    for (int q = 0; q < nb; ++q)
        left_parity_ = left_parity_ * PauliString::single('Z', 2 + q, nq);
}

const PauliString& MajoranaSet::full(Side side, int index) const {
    return full_[static_cast<std::size_t>(layout_.chain_position(side, index))];
}

const PauliString& MajoranaSet::local(int index) const {
    if (index < 0 || index >= layout_.n_majorana) throw InvalidArgument("Majorana index out of range");
    return local_[static_cast<std::size_t>(index)];
}

OperatorMatrix build_majorana(const MajoranaSet& majoranas, Side side, int index) {
    OperatorMatrix op = to_operator(majoranas.full(side, index), majoranas.layout().total_qubits());
    op.hermitian = true;
    return op;
}

PauliString nonlocal_parity_string(const MajoranaSet& majoranas, int index) {
    return (majoranas.full(Side::Left, index) * majoranas.full(Side::Right, index)).scaled_by_i(1);
}

}  // namespace sykgw
