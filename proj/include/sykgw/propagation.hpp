#pragma once

// Time evolution under H(t) = H + eps h(t) S on one boundary.
//
// Boundary operators are d x d, so each piecewise-constant step is an exact
// dense exponential exp(-i dt (H + eps h S)) from a Hermitian
// eigendecomposition. The schemes differ only in where h is sampled: step
// start (Lie-Trotter) or step midpoint (Strang). Steps are accumulated into a
// d x d propagator and applied to the register once, which is cheaper than
// stepping a 4 d^2 state.
//
// expm_action is the generic Krylov route for operators without that block
// structure (and an independent check on the dense one).

#include <functional>

#include "sykgw/drive.hpp"
#include "sykgw/hamiltonians.hpp"
#include "sykgw/states.hpp"

namespace sykgw {

enum class Scheme { LieTrotter, StrangMidpoint };

const char* to_string(Scheme s);
/// Accepts "lt", "lie_trotter", "strang", "strang_midpoint".
Scheme parse_scheme(const std::string& name);

struct PropagatorConfig {
    double dt_base = 0.05;
    Scheme scheme = Scheme::LieTrotter;
    bool adaptive = true;
    double expm_tolerance = 1e-10;
    int krylov_dim = 64;

    void validate() const;
};

/// out = A in for a Hermitian A.
using MatVec = std::function<void(const Eigen::VectorXcd& in, Eigen::VectorXcd& out)>;

/// exp(scale A) v by Lanczos with substep halving. The 2-norm error is below
/// tol * |v| by the standard a-posteriori estimate. Throws NumericalFailure if
/// substeps shrink below resolution.
Eigen::VectorXcd expm_action(const MatVec& a, cplx scale, const Eigen::VectorXcd& v, double tol,
                             int krylov_dim = 64);
/// Sparse-operator form; throws InvalidArgument if A is not Hermitian.
Eigen::VectorXcd expm_action(const OperatorMatrix& a, cplx scale, const Eigen::VectorXcd& v, double tol,
                             int krylov_dim = 64);
StateVector expm_action(const OperatorMatrix& a, cplx scale, const StateVector& psi, double tol);

/// Step for amplitude eps: dt_base, or max(0.4 dt_base, dt_base / (1 + eps/2))
/// when adaptive and eps > 1. With the default base this is
/// max(0.02, 0.05 / (1 + eps/2)).
double adaptive_dt(double eps, const PropagatorConfig& cfg);

/// ceil(|t1 - t0| / dt) equal steps, at least one.
long step_count(double t0, double t1, double dt);

/// Evolution generator for one boundary; caches the eigendecomposition of H.
class BoundaryEvolution {
public:
    BoundaryEvolution(const BoundaryOperator& h, const BoundaryOperator& strain);

    Side side() const { return side_; }
    std::int64_t dim() const { return h_.rows(); }
    const Eigen::MatrixXcd& hamiltonian() const { return h_; }
    const Eigen::MatrixXcd& strain() const { return s_; }

    /// exp(-i dt (H + a S)) for signed dt.
    Eigen::MatrixXcd step(double dt, double a) const;
    /// exp(-i dt H), exact.
    Eigen::MatrixXcd static_propagator(double dt) const;
    /// U(t1 <- t0) for amplitude eps and waveform w with step dt. Without a
    /// drive this is the single exact exponential.
    Eigen::MatrixXcd propagator(double eps, const Waveform& w, double t0, double t1, double dt,
                                Scheme scheme) const;

private:
    Side side_;
    Eigen::MatrixXcd h_;
    Eigen::MatrixXcd s_;
    Eigen::VectorXd energies_;
    Eigen::MatrixXcd modes_;
};

/// Propagator for protocol step `step`: the drive enters only if it acts on
/// (evolution side, step); the step size follows adaptive_dt.
Eigen::MatrixXcd step_propagator(const BoundaryEvolution& ev, const DriveSpec& drive, ProtocolStep step,
                                 double t0, double t1, const PropagatorConfig& cfg);

/// psi evolved from t0 to t1 on the side of `h` (t1 < t0 is backward).
StateVector evolve(const StateVector& psi, const BoundaryOperator& h, const BoundaryOperator& strain,
                   const DriveSpec& drive, ProtocolStep step, double t0, double t1, const PropagatorConfig& cfg);

}  // namespace sykgw
