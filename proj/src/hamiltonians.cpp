#include "sykgw/hamiltonians.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>

#include "sykgw/errors.hpp"

namespace sykgw {

// --- Rng -------------------------------------------------------------------

double Rng::uniform() {
    // (k + 1) / 2^53 with k uniform on [0, 2^53): never 0, so log() is safe.
    return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
}

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double theta = 2.0 * std::numbers::pi * uniform();
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
}

// --- index helpers ---------------------------------------------------------

std::uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    return r;
}

namespace {

// Lexicographic rank of a strictly increasing combination.
template <std::size_t K>
std::size_t combination_rank(const std::array<int, K>& c, int n) {
    std::size_t rank = 0;
    int prev = -1;
    for (std::size_t pos = 0; pos < K; ++pos) {
        for (int v = prev + 1; v < c[pos]; ++v)
            rank += binomial(n - 1 - v, static_cast<int>(K - 1 - pos));
        prev = c[pos];
    }
    return rank;
}

}  // namespace

std::size_t CouplingTensor::rank(int i, int j, int k, int l, int n) {
    return combination_rank<4>({i, j, k, l}, n);
}

double CouplingTensor::at(int a, int b, int c, int d) const {
    std::array<int, 4> idx{a, b, c, d};
    std::sort(idx.begin(), idx.end());
    if (idx[0] < 0 || idx[3] >= n || std::adjacent_find(idx.begin(), idx.end()) != idx.end())
        throw InvalidArgument("coupling indices must be distinct and in range");
    return values[combination_rank<4>(idx, n)];
}

CouplingTensor CouplingTensor::negated() const {
    CouplingTensor out = *this;
    for (double& v : out.values) v = -v;
    return out;
}

std::size_t StrainCouplings::rank(int i, int j, int n) { return combination_rank<2>({i, j}, n); }

double StrainCouplings::at(int i, int j) const {
    if (i > j) std::swap(i, j);
    if (i < 0 || j >= n || i == j) throw InvalidArgument("strain indices must be distinct and in range");
    return values[rank(i, j, n)];
}

// --- BoundaryOperator ------------------------------------------------------

double BoundaryOperator::hermiticity_error() const {
    return (block - block.adjoint()).cwiseAbs().maxCoeff();
}

OperatorMatrix BoundaryOperator::to_operator(const RegisterLayout& layout) const {
    const std::int64_t d = layout.boundary_dim();
    if (block.rows() != d || block.cols() != d) throw InvalidArgument("block size does not match layout");
    std::vector<Eigen::Triplet<cplx>> triplets;
    for (Eigen::Index r = 0; r < d; ++r)
        for (Eigen::Index c = 0; c < d; ++c) {
            const cplx v = block(r, c);
            if (v == cplx{}) continue;
            for (std::int64_t ma = 0; ma < 4; ++ma)
                for (std::int64_t o = 0; o < d; ++o) {
                    const std::int64_t row = side == Side::Left ? (ma * d + r) * d + o : (ma * d + o) * d + r;
                    const std::int64_t col = side == Side::Left ? (ma * d + c) * d + o : (ma * d + o) * d + c;
                    triplets.emplace_back(row, col, v);
                }
        }
    OperatorMatrix op;
    op.matrix.resize(layout.total_dim(), layout.total_dim());
    op.matrix.setFromTriplets(triplets.begin(), triplets.end());
    op.hermitian = hermiticity_error() < 1e-12;
    return op;
}

// --- builders --------------------------------------------------------------

CouplingTensor sample_couplings(int n, double j, std::uint64_t seed) {
    if (n < 4) throw InvalidArgument("sample_couplings needs N >= 4");
    if (!(j > 0.0)) throw InvalidArgument("coupling scale J must be positive");
    CouplingTensor c{n, j, seed, {}};
    const double sigma = std::sqrt(6.0 * j * j / (static_cast<double>(n) * n * n));
    Rng rng(seed);
    c.values.resize(binomial(n, 4));
    for (double& v : c.values) v = sigma * rng.normal();
    return c;
}

namespace {

void check_layout(const MajoranaSet& majoranas, int n) {
    if (majoranas.layout().n_majorana != n)
        throw InvalidArgument("coupling N=" + std::to_string(n) + " does not match layout N=" +
                              std::to_string(majoranas.layout().n_majorana));
}

void accumulate(Eigen::MatrixXcd& m, const PauliString& p, cplx weight) {
    const std::int64_t dim = m.rows();
    for (std::int64_t b = 0; b < dim; ++b) {
        auto [amp, target] = p.act(static_cast<std::uint64_t>(b));
        m(static_cast<Eigen::Index>(target), b) += weight * amp;
    }
}

}  // namespace

BoundaryOperator build_syk(const CouplingTensor& c, Side side, const MajoranaSet& majoranas, double prefactor) {
    check_layout(majoranas, c.n);
    const int n = c.n;
    const std::int64_t d = majoranas.layout().boundary_dim();
    // Right side: gamma^R -> -i gamma^R leaves a product of four unchanged,
    // and even products of right Majoranas reduce to the local strings.
    BoundaryOperator h{side, Eigen::MatrixXcd::Zero(d, d)};
    std::size_t r = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = j + 1; k < n; ++k)
                for (int l = k + 1; l < n; ++l, ++r) {
                    const PauliString p =
                        majoranas.local(i) * majoranas.local(j) * majoranas.local(k) * majoranas.local(l);
                    accumulate(h.block, p, cplx{-prefactor * c.values[r], 0.0});
                }
    return h;
}

StrainCouplings contract_strain(const CouplingTensor& c) {
    if (c.n < 6) throw InvalidArgument("contract_strain needs N >= 6 so that spectator pairs exist");
    const int n = c.n;
    const double divisor = static_cast<double>(binomial(n - 2, 2));
    StrainCouplings s{n, std::vector<double>(binomial(n, 2), 0.0)};
    // Each sorted quadruple contributes to its six pairs.
    std::size_t r = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = j + 1; k < n; ++k)
                for (int l = k + 1; l < n; ++l, ++r) {
                    const double v = c.values[r];
                    s.values[StrainCouplings::rank(i, j, n)] += v;
                    s.values[StrainCouplings::rank(i, k, n)] += v;
                    s.values[StrainCouplings::rank(i, l, n)] += v;
                    s.values[StrainCouplings::rank(j, k, n)] += v;
                    s.values[StrainCouplings::rank(j, l, n)] += v;
                    s.values[StrainCouplings::rank(k, l, n)] += v;
                }
    for (double& v : s.values) v /= divisor;
    return s;
}

BoundaryOperator build_strain_raw(const StrainCouplings& s, Side side, const MajoranaSet& majoranas) {
    check_layout(majoranas, s.n);
    const std::int64_t d = majoranas.layout().boundary_dim();
    BoundaryOperator h{side, Eigen::MatrixXcd::Zero(d, d)};
    for (int i = 0; i < s.n; ++i)
        for (int j = i + 1; j < s.n; ++j) {
            const PauliString p = (majoranas.local(i) * majoranas.local(j)).scaled_by_i(1);
            accumulate(h.block, p, cplx{s.values[StrainCouplings::rank(i, j, s.n)], 0.0});
        }
    return h;
}

double spectral_norm(const Eigen::MatrixXcd& hermitian) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hermitian, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

BoundaryOperator build_strain(const StrainCouplings& s, Side side, const MajoranaSet& majoranas,
                              double norm_target) {
    if (!(norm_target > 0.0)) throw InvalidArgument("strain norm target must be positive");
    BoundaryOperator h = build_strain_raw(s, side, majoranas);
    const double norm = spectral_norm(h.block);
    if (!(norm > 1e-300)) throw DegenerateInput("raw strain operator vanishes; cannot normalize");
    h.block *= norm_target / norm;
    return h;
}

HamiltonianSet build_hamiltonians(const CouplingTensor& c, const MajoranaSet& majoranas,
                                  const HamiltonianOptions& options) {
    const StrainCouplings s = contract_strain(c);
    HamiltonianSet set;
    set.h_left = build_syk(c, Side::Left, majoranas, options.syk_prefactor);
    set.h_right = build_syk(c, Side::Right, majoranas, options.syk_prefactor);
    set.strain_left = build_strain(s, Side::Left, majoranas, options.strain_norm);
    set.strain_right = build_strain(s, Side::Right, majoranas, options.strain_norm);
    set.strain_norm_target = options.strain_norm;
    return set;
}

void write_couplings(std::ostream& out, const CouplingTensor& c) {
    out << "# i j k l J_ijkl  (N=" << c.n << " J=" << c.j << " seed=" << c.seed << ")\n";
    out << std::setprecision(17);
    std::size_t r = 0;
    for (int i = 0; i < c.n; ++i)
        for (int j = i + 1; j < c.n; ++j)
            for (int k = j + 1; k < c.n; ++k)
                for (int l = k + 1; l < c.n; ++l, ++r)
                    out << i << ' ' << j << ' ' << k << ' ' << l << ' ' << c.values[r] << '\n';
}

void write_strain_couplings(std::ostream& out, const StrainCouplings& s) {
    out << "# i j Jtilde_ij  (N=" << s.n << ")\n";
    out << std::setprecision(17);
    for (int i = 0; i < s.n; ++i)
        for (int j = i + 1; j < s.n; ++j) out << i << ' ' << j << ' ' << s.values[StrainCouplings::rank(i, j, s.n)] << '\n';
}

}  // namespace sykgw
