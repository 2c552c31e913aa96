#pragma once

// Wormhole teleportation protocol.
//
//   1. left boundary evolved backward 0 -> -t*
//   2. message swapped into left qubit `insertion_qubit`
//   3. left boundary evolved forward -t* -> 0
//   4. U_g = exp(i g sum_{i=2}^{N-1} n_i)
//   5. right boundary evolved 0 -> t_R
//   6. F = (1 + <XX> - <YY> + <ZZ>) / 4 between the decoded right qubit and
//      the ancilla.
//
// The right-side readout operators are the fermionic ones of the decoded
// qubit: sigma_x = gamma_{2q}^R, sigma_y = gamma_{2q+1}^R and
// sigma_z = -i gamma_{2q}^R gamma_{2q+1}^R, each including its Jordan-Wigner
// string.

#include <array>
#include <vector>

#include "sykgw/drive.hpp"
#include "sykgw/hamiltonians.hpp"
#include "sykgw/propagation.hpp"
#include "sykgw/states.hpp"

namespace sykgw {

struct ProtocolParams {
    double g = 12.0;
    double t_star = 7.0;
    double t_r = 7.0;
    double beta = 2.0;

    void validate() const;
};

/// Swap: the message enters through (1/2) sum_mu sigma_mu x sigma_mu, which is
/// the SWAP gate. PauliTwirl: the four branches are mixed incoherently.
enum class InsertionMode { Swap, PauliTwirl };

struct ProtocolOptions {
    int insertion_qubit = 0;  // left boundary qubit
    int readout_qubit = 0;    // right boundary qubit
    InsertionMode insertion = InsertionMode::Swap;
};

// --- building blocks -------------------------------------------------------

/// Sparse U_g on the full register. Intended for checks at small N (<= 10);
/// use apply_coupling otherwise.
OperatorMatrix coupling_unitary(double g, const RegisterLayout& layout, const MajoranaSet& majoranas);
/// psi <- U_g psi, one factor 1 + (e^{ig} - 1) n_i per mode.
void apply_coupling(StateVector& psi, double g, const MajoranaSet& majoranas);
/// Projections of psi onto k = 0 .. N-2 occupied coupled modes, so that
/// U_g psi = sum_k e^{igk} sectors[k].
std::vector<StateVector> coupling_sectors(const StateVector& psi, const MajoranaSet& majoranas);

/// sigma_mu on the message times sigma_mu on left boundary qubit q;
/// mu = 0 is the identity.
PauliString insertion_string(const RegisterLayout& layout, int mu, int qubit);
/// (sigma_mu x sigma_mu) psi for mu = 0, x, y, z.
std::array<StateVector, 4> insert_message_branches(const StateVector& psi, int insertion_qubit = 0);
StateVector insert_message_swap(const StateVector& psi, int insertion_qubit = 0);

struct Decoder {
    std::array<PauliString, 3> observables;  // XX, YY, ZZ (right qubit x ancilla)
    std::array<double, 3> signs{1.0, -1.0, 1.0};
};

Decoder build_decoder(const MajoranaSet& majoranas, int readout_qubit = 0);
double decoded_fidelity(const StateVector& psi, const Decoder& decoder);
/// Uniform average over incoherent branches.
double decoded_fidelity(const std::vector<StateVector>& branches, const Decoder& decoder);

// --- one disorder realization ----------------------------------------------

/// Everything about one coupling realization that the protocol reuses: the
/// Hamiltonians, their cached eigendecompositions and the initial state.
struct Realization {
    Realization(int n, double j, std::uint64_t seed, double beta, const HamiltonianOptions& ham = {},
                const ProtocolOptions& options = {});

    RegisterLayout layout;
    MajoranaSet majoranas;
    CouplingTensor couplings;
    HamiltonianSet hamiltonians;
    BoundaryEvolution left;
    BoundaryEvolution right;
    StateVector tfd;
    StateVector initial;
    double beta;
    ProtocolOptions options;
    Decoder decoder;
};

/// Steps 1-3. One state for Swap insertion, four for PauliTwirl.
std::vector<StateVector> prepare_inserted(const Realization& r, double t_star, const DriveSpec& drive,
                                          const PropagatorConfig& cfg);

/// Steps 1-5: the branch states handed to the decoder.
std::vector<StateVector> decoder_input(const ProtocolParams& params, const Realization& r, const DriveSpec& drive,
                                       const PropagatorConfig& cfg);

double run_teleportation(const ProtocolParams& params, const Realization& r, const DriveSpec& drive,
                         const PropagatorConfig& cfg);

/// F(t_R) over an increasing grid. Steps 1-4 are shared by all grid points and
/// readout evolution proceeds segment by segment.
std::vector<double> fidelity_profile(const Realization& r, double g, double t_star, const std::vector<double>& t_grid,
                                     const DriveSpec& drive, const PropagatorConfig& cfg);

/// F over (g, t) with insertion time and readout time both equal to t.
struct FidelityMap {
    std::vector<double> g;
    std::vector<double> t;
    Eigen::MatrixXd f;  // f(ig, it)
};

FidelityMap fidelity_map(const Realization& r, const std::vector<double>& g_grid, const std::vector<double>& t_grid,
                         const DriveSpec& drive, const PropagatorConfig& cfg);

struct OptResult {
    double g_opt = 0.0;
    double t_opt = 0.0;
    double f_opt = 0.0;
    FidelityMap mean;                  // seed-averaged map
    std::vector<FidelityMap> per_seed;
};

/// Argmax of the seed-averaged map; ties go to the smallest g, then t.
OptResult optimum_of(std::vector<FidelityMap> per_seed);
OptResult optimize(const std::vector<const Realization*>& realizations, const DriveSpec& drive,
                   const std::vector<double>& g_grid, const std::vector<double>& t_grid,
                   const PropagatorConfig& cfg, int threads = 1);

struct ReoptResult {
    double f_fixed = 0.0;
    double f_reopt = 0.0;
    double ratio = 0.0;
    double g_reopt = 0.0;
    double t_reopt = 0.0;
    std::vector<double> f_fixed_per_seed;
    std::vector<double> f_reopt_per_seed;  // per-seed value at the joint optimum
};

/// F at the fixed operating point versus the best point of the grid, both
/// under `drive` and averaged over realizations.
ReoptResult reopt_ratio(const std::vector<const Realization*>& realizations, const DriveSpec& drive, double g_fixed,
                        double t_fixed, const std::vector<double>& g_grid, const std::vector<double>& t_grid,
                        const PropagatorConfig& cfg, int threads = 1);

/// start, start + step, ... up to stop (inclusive within step/1000).
std::vector<double> linear_grid(double start, double stop, double step);

}  // namespace sykgw
