#pragma once

// Gravitational-wave waveforms and the policy deciding where a drive acts.
// Times and frequencies are in units of 1/J and J.

#include "sykgw/register.hpp"

namespace sykgw {

enum class WaveformKind { None, Monochromatic, Chirp };

struct Waveform {
    WaveformKind kind = WaveformKind::None;
    double omega = 0.0;    // monochromatic frequency
    double omega_t = 0.0;  // chirp start frequency
    double omega_l = 0.0;  // chirp end frequency
    double t_star = 0.0;   // chirp sweep duration

    static Waveform none() { return {}; }
    static Waveform monochromatic(double omega);
    /// Throws InvalidArgument unless omega_l > omega_t > 0 and t_star > 0.
    static Waveform chirp(double omega_t, double omega_l, double t_star);

    /// Chirp envelope support ends here; h is clamped to zero afterwards.
    double chirp_end() const { return t_star + 0.1; }
    double instantaneous_frequency(double t) const;
};

/// h(t). Monochromatic: cos(omega t) for every t. Chirp:
/// sin(pi t / (t* + 0.1)) cos(omega_T t + (omega_L - omega_T) t^2 / (2 t*))
/// on [0, t* + 0.1] and zero outside.
double eval_waveform(const Waveform& w, double t);

/// sqrt(<h^2>) over [t0, t1], midpoint rule with at most `dt` spacing.
double rms_amplitude(const Waveform& w, double t0, double t1, double dt = 0.05);

enum class ProtocolStep { PrepBackward, PrepForward, Readout };

const char* to_string(ProtocolStep step);

struct DriveSpec {
    double epsilon = 0.0;
    Waveform waveform;
    bool left = false;
    bool right = false;
    bool prep_backward = false;
    bool prep_forward = false;
    bool readout = false;

    static DriveSpec none() { return {}; }
    /// Both boundaries, every protocol step.
    static DriveSpec bilateral(double epsilon, const Waveform& w);
    /// Right boundary during readout only.
    static DriveSpec right_readout(double epsilon, const Waveform& w);

    bool acts_on(Side side, ProtocolStep step) const;
    /// epsilon if the drive acts on (side, step), else 0.
    double amplitude(Side side, ProtocolStep step) const { return acts_on(side, step) ? epsilon : 0.0; }
    void validate() const;
};

}  // namespace sykgw
