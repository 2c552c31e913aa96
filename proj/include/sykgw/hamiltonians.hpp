#pragma once

// Disorder couplings, SYK_4 boundary Hamiltonians and the bilinear strain
// operator.
//
// Every boundary operator here is even in the Majoranas, so it acts on the
// register as identity (x) block (x) identity with a dense d x d block,
// d = 2^(N/2). Blocks are stored densely; `to_operator` embeds one into the
// full register when a sparse full-size matrix is needed.
//
// Hamiltonian convention:
//   H_side = -c * sum_{i<j<k<l} J_ijkl g_i g_j g_k g_l,   J_ijkl ~ N(0, 6 J^2 / N^3)
// with g^2 = 1. The default c = 1/4 is the usual normalization for unit-square
// Majoranas (it equals the chi^2 = 1/2 form with prefactor 1). c is a
// parameter so other conventions, e.g. c = 1/24, can be reproduced.

#include <cstdint>
#include <random>
#include <vector>

#include "sykgw/register.hpp"

namespace sykgw {

inline constexpr double kDefaultSykPrefactor = 0.25;
inline constexpr double kDefaultStrainNorm = 5.0;

/// Portable seeded generator. mt19937_64 output is fixed by the standard;
/// Gaussians come from our own Box-Muller so ensembles are identical across
/// standard libraries. Realization r of an ensemble uses seed base_seed + r.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    /// Uniform on (0, 1], 53-bit resolution.
    double uniform();
    double normal();

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// J_ijkl for i<j<k<l in lexicographic order.
struct CouplingTensor {
    int n = 0;
    double j = 1.0;
    std::uint64_t seed = 0;
    std::vector<double> values;

    /// Value for any four distinct indices; the order of arguments is
    /// irrelevant (the tensor is read at the sorted key).
    double at(int a, int b, int c, int d) const;
    static std::size_t rank(int i, int j, int k, int l, int n);
    CouplingTensor negated() const;
};

/// J~_ij for i<j in lexicographic order.
struct StrainCouplings {
    int n = 0;
    std::vector<double> values;

    double at(int i, int j) const;
    static std::size_t rank(int i, int j, int n);
};

/// Dense d x d block of an even operator living on one boundary.
struct BoundaryOperator {
    Side side = Side::Left;
    Eigen::MatrixXcd block;

    std::int64_t dim() const { return block.rows(); }
    double hermiticity_error() const;
    /// Full-register sparse embedding: identity on message/ancilla and on the
    /// other boundary.
    OperatorMatrix to_operator(const RegisterLayout& layout) const;
};

struct HamiltonianSet {
    BoundaryOperator h_left;
    BoundaryOperator h_right;
    BoundaryOperator strain_left;
    BoundaryOperator strain_right;
    double strain_norm_target = kDefaultStrainNorm;
};

std::uint64_t binomial(int n, int k);

CouplingTensor sample_couplings(int n, double j, std::uint64_t seed);

BoundaryOperator build_syk(const CouplingTensor& c, Side side, const MajoranaSet& majoranas,
                           double prefactor = kDefaultSykPrefactor);

/// J~_ij = sum_{k<l, k,l not in {i,j}} J_ijkl / C(N-2, 2). Requires N >= 6.
StrainCouplings contract_strain(const CouplingTensor& c);

/// sum_{i<j} J~_ij (i g_i g_j) before normalization.
BoundaryOperator build_strain_raw(const StrainCouplings& s, Side side, const MajoranaSet& majoranas);

/// The raw strain operator rescaled to spectral norm `norm_target`. Throws
/// DegenerateInput when the raw operator vanishes.
BoundaryOperator build_strain(const StrainCouplings& s, Side side, const MajoranaSet& majoranas,
                              double norm_target = kDefaultStrainNorm);

/// Largest |eigenvalue| of a Hermitian block (dense diagonalization).
double spectral_norm(const Eigen::MatrixXcd& hermitian);

struct HamiltonianOptions {
    double syk_prefactor = kDefaultSykPrefactor;
    double strain_norm = kDefaultStrainNorm;
};

HamiltonianSet build_hamiltonians(const CouplingTensor& c, const MajoranaSet& majoranas,
                                  const HamiltonianOptions& options = {});

/// Plain-text dump: one line per entry, indices then value with 17
/// significant digits. Lines starting with '#' are comments.
void write_couplings(std::ostream& out, const CouplingTensor& c);
void write_strain_couplings(std::ostream& out, const StrainCouplings& s);

}  // namespace sykgw
