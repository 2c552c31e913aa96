#include "sykgw/drive.hpp"

#include <cmath>
#include <numbers>

#include "sykgw/errors.hpp"

namespace sykgw {

Waveform Waveform::monochromatic(double omega) {
    if (!std::isfinite(omega) || omega < 0.0) throw InvalidArgument("monochromatic frequency must be >= 0");
    Waveform w;
    w.kind = WaveformKind::Monochromatic;
    w.omega = omega;
    return w;
}

Waveform Waveform::chirp(double omega_t, double omega_l, double t_star) {
    if (!(omega_t > 0.0 && omega_l > omega_t)) throw InvalidArgument("chirp needs omega_L > omega_T > 0");
    if (!(t_star > 0.0)) throw InvalidArgument("chirp needs t_star > 0");
    Waveform w;
    w.kind = WaveformKind::Chirp;
    w.omega_t = omega_t;
    w.omega_l = omega_l;
    w.t_star = t_star;
    return w;
}

double Waveform::instantaneous_frequency(double t) const {
    switch (kind) {
        case WaveformKind::None: return 0.0;
        case WaveformKind::Monochromatic: return omega;
        case WaveformKind::Chirp: return omega_t + (omega_l - omega_t) * t / t_star;
    }
    return 0.0;
}

double eval_waveform(const Waveform& w, double t) {
    switch (w.kind) {
        case WaveformKind::None: return 0.0;
        case WaveformKind::Monochromatic: return std::cos(w.omega * t);
        case WaveformKind::Chirp: {
            if (t < 0.0 || t > w.chirp_end()) return 0.0;
            const double envelope = std::sin(std::numbers::pi * t / w.chirp_end());
            const double phase = w.omega_t * t + (w.omega_l - w.omega_t) * t * t / (2.0 * w.t_star);
            return envelope * std::cos(phase);
        }
    }
    return 0.0;
}

double rms_amplitude(const Waveform& w, double t0, double t1, double dt) {
    if (!(t1 > t0)) throw InvalidArgument("rms window needs t1 > t0");
    if (!(dt > 0.0)) throw InvalidArgument("rms quadrature step must be positive");
    const auto n = static_cast<long>(std::ceil((t1 - t0) / dt - 1e-9));
    const double h = (t1 - t0) / static_cast<double>(n);
    double acc = 0.0;
    for (long k = 0; k < n; ++k) {
        const double v = eval_waveform(w, t0 + (static_cast<double>(k) + 0.5) * h);
        acc += v * v;
    }
    return std::sqrt(acc / static_cast<double>(n));
}

const char* to_string(ProtocolStep step) {
    switch (step) {
        case ProtocolStep::PrepBackward: return "prep_backward";
        case ProtocolStep::PrepForward: return "prep_forward";
        case ProtocolStep::Readout: return "readout";
    }
    return "?";
}

DriveSpec DriveSpec::bilateral(double epsilon, const Waveform& w) {
    DriveSpec d{epsilon, w, true, true, true, true, true};
    d.validate();
    return d;
}

DriveSpec DriveSpec::right_readout(double epsilon, const Waveform& w) {
    DriveSpec d{epsilon, w, false, true, false, false, true};
    d.validate();
    return d;
}

bool DriveSpec::acts_on(Side side, ProtocolStep step) const {
    if (epsilon == 0.0 || waveform.kind == WaveformKind::None) return false;
    if (!(side == Side::Left ? left : right)) return false;
    switch (step) {
        case ProtocolStep::PrepBackward: return prep_backward;
        case ProtocolStep::PrepForward: return prep_forward;
        case ProtocolStep::Readout: return readout;
    }
    return false;
}

void DriveSpec::validate() const {
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) throw InvalidArgument("strain amplitude must be finite and >= 0");
}

}  // namespace sykgw
