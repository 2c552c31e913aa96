#pragma once

// Scrambling diagnostics on the thermofield double and the boundary strain
// response during readout.
//
//   F(t) = Re <TFD| W(t) V W(t) V |TFD>,  W(t) = U_L(t)^dag gamma_i U_L(t),
//   V = gamma_j,  C(t) = (F(t) + 1) / 2.

#include <vector>

#include "sykgw/protocol.hpp"

namespace sykgw {

struct OTOCCurve {
    int i = 0;
    int j = 0;
    std::vector<double> t;
    std::vector<double> c;
    double plateau = 0.0;  // mean of C over the plateau window
};

/// Left-boundary OTOC for Majoranas i != j. The drive enters U_L when it acts
/// on the left boundary. U_L is carried across the grid incrementally.
OTOCCurve compute_otoc(int i, int j, const BoundaryEvolution& left, const MajoranaSet& majoranas,
                       const StateVector& tfd, const DriveSpec& drive, const std::vector<double>& t_grid,
                       const PropagatorConfig& cfg, double plateau_fraction = 0.25);

/// Several pairs sharing one propagator sweep.
std::vector<OTOCCurve> compute_otoc_pairs(const std::vector<std::pair<int, int>>& pairs,
                                          const BoundaryEvolution& left, const MajoranaSet& majoranas,
                                          const StateVector& tfd, const DriveSpec& drive,
                                          const std::vector<double>& t_grid, const PropagatorConfig& cfg,
                                          double plateau_fraction = 0.25);

struct ScramblingResult {
    double t_scr = 0.0;
    double threshold = 0.0;
    double plateau = 0.0;
    double t_lo = 0.0;  // bracket with C(t_lo) < threshold <= C(t_hi)
    double t_hi = 0.0;
};

/// Mean of the last `plateau_fraction` of the grid.
double plateau_estimate(const std::vector<double>& c, double plateau_fraction = 0.25);

/// Half-plateau crossing by linear interpolation. Throws NoCrossing when C
/// never rises through the threshold.
ScramblingResult extract_t_scr(const std::vector<double>& t, const std::vector<double>& c,
                               double plateau_fraction = 0.25);
ScramblingResult extract_t_scr(const OTOCCurve& curve, double plateau_fraction = 0.25);

/// Pointwise mean of curves on a common grid.
std::vector<double> mean_curve(const std::vector<std::vector<double>>& curves);

struct DelayPoint {
    double epsilon = 0.0;
    std::vector<double> t_scr;  // per realization, from its pair-averaged curve
    std::vector<double> delay;  // t_scr(eps) - t_scr(0), per realization
    std::vector<double> mean_c; // pair- and disorder-averaged C(t)
    std::vector<std::vector<OTOCCurve>> curves;  // [realization][pair]
};

/// Scrambling time versus drive amplitude with a bilateral monochromatic drive
/// at omega. eps_list must be ascending and start with 0.
std::vector<DelayPoint> scrambling_delay_scan(const std::vector<double>& eps_list, double omega,
                                              const std::vector<const Realization*>& realizations,
                                              const std::vector<std::pair<int, int>>& pairs,
                                              const std::vector<double>& t_grid, const PropagatorConfig& cfg,
                                              double plateau_fraction = 0.25, int threads = 1);

struct StrainResponse {
    std::vector<double> t;
    std::vector<double> s;  // <H_strain^R>(t), normalized strain operator
    std::vector<double> h;  // injected waveform samples
};

/// <H_strain^R> along the readout evolution after steps 1-4 at (g, t*).
StrainResponse strain_response(const Realization& r, double g, double t_star, const DriveSpec& drive,
                               const std::vector<double>& t_grid, const PropagatorConfig& cfg);

struct Susceptibility {
    double s_peak = 0.0;  // S_R at the largest |S_R|
    double t_peak = 0.0;
    double h_peak = 0.0;
    double chi = 0.0;     // s_peak / (eps0 * strain_norm * h_peak)
};

Susceptibility strain_susceptibility(const StrainResponse& resp, double eps0, double strain_norm);

}  // namespace sykgw
