#include <cmath>
#include <numbers>

#include "doctest.h"
#include "sykgw/drive.hpp"
#include "sykgw/errors.hpp"
#include "sykgw/propagation.hpp"

using namespace sykgw;

TEST_CASE("monochromatic waveform") {
    const auto w = Waveform::monochromatic(1.5);
    CHECK(eval_waveform(w, 0.0) == 1.0);
    for (double t : {-3.0, -0.2, 0.7, 4.1}) CHECK(eval_waveform(w, t) == doctest::Approx(std::cos(1.5 * t)).epsilon(1e-15));
    CHECK(rms_amplitude(w, 0.0, 200.0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(0.01));
    CHECK(eval_waveform(Waveform::none(), 1.0) == 0.0);
    CHECK(rms_amplitude(Waveform::none(), 0.0, 5.0) == 0.0);
    CHECK_THROWS_AS(rms_amplitude(w, 1.0, 1.0), InvalidArgument);
}

TEST_CASE("chirp waveform") {
    const double wt = 0.5, wl = 3.14, ts = 7.0;
    const auto w = Waveform::chirp(wt, wl, ts);
    CHECK(eval_waveform(w, 0.0) == 0.0);
    CHECK(eval_waveform(w, -1.0) == 0.0);
    CHECK(eval_waveform(w, ts + 0.2) == 0.0);
    for (double t : {0.3, 2.0, 5.5, 7.05}) {
        const double want = std::sin(std::numbers::pi * t / (ts + 0.1)) * std::cos(wt * t + (wl - wt) * t * t / (2 * ts));
        CHECK(eval_waveform(w, t) == doctest::Approx(want).epsilon(1e-14));
    }
    CHECK(w.instantaneous_frequency(ts) == doctest::Approx(wl));
    CHECK(w.instantaneous_frequency(0.0) == doctest::Approx(wt));
    // |h| <= 1 everywhere.
    for (double t = -1.0; t < 9.0; t += 0.001) CHECK(std::abs(eval_waveform(w, t)) <= 1.0);
    const double rms = rms_amplitude(w, 0.0, ts);
    CHECK(rms > 0.4);
    CHECK(rms < 0.6);

    CHECK_THROWS_AS(Waveform::chirp(3.0, 0.5, 7.0), InvalidArgument);
    CHECK_THROWS_AS(Waveform::chirp(0.0, 3.0, 7.0), InvalidArgument);
    CHECK_THROWS_AS(Waveform::chirp(0.5, 3.0, 0.0), InvalidArgument);
}

TEST_CASE("drive policies") {
    const auto w = Waveform::monochromatic(1.0);
    const auto bi = DriveSpec::bilateral(0.3, w);
    for (Side s : {Side::Left, Side::Right})
        for (ProtocolStep st : {ProtocolStep::PrepBackward, ProtocolStep::PrepForward, ProtocolStep::Readout})
            CHECK(bi.amplitude(s, st) == 0.3);
    const auto ro = DriveSpec::right_readout(0.5, Waveform::chirp(0.5, 3.14, 7.0));
    CHECK(ro.amplitude(Side::Right, ProtocolStep::Readout) == 0.5);
    CHECK(ro.amplitude(Side::Left, ProtocolStep::PrepBackward) == 0.0);
    CHECK(ro.amplitude(Side::Left, ProtocolStep::Readout) == 0.0);
    CHECK(ro.amplitude(Side::Right, ProtocolStep::PrepForward) == 0.0);
    CHECK_FALSE(DriveSpec::bilateral(0.0, w).acts_on(Side::Left, ProtocolStep::Readout));
    CHECK_FALSE(DriveSpec::none().acts_on(Side::Right, ProtocolStep::Readout));
    CHECK_THROWS_AS(DriveSpec::bilateral(-0.1, w), InvalidArgument);
}

TEST_CASE("adaptive step rule") {
    PropagatorConfig cfg;
    CHECK(adaptive_dt(0.0, cfg) == 0.05);
    CHECK(adaptive_dt(1.0, cfg) == 0.05);
    CHECK(adaptive_dt(2.0, cfg) == doctest::Approx(0.025));
    CHECK(adaptive_dt(2.5, cfg) == doctest::Approx(0.05 / 2.25));
    CHECK(adaptive_dt(10.0, cfg) == doctest::Approx(0.02));
    cfg.adaptive = false;
    CHECK(adaptive_dt(2.5, cfg) == 0.05);
    CHECK(step_count(0.0, 7.0, 0.05) == 140);
    CHECK(step_count(0.0, -7.0, 0.05) == 140);
    CHECK(step_count(0.0, 7.01, 0.05) == 141);
    CHECK(parse_scheme("strang") == Scheme::StrangMidpoint);
    CHECK(parse_scheme("lt") == Scheme::LieTrotter);
    CHECK_THROWS_AS(parse_scheme("rk4"), InvalidArgument);
}
