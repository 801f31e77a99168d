#include "core/oscillator.hpp"

#include <cmath>

#include "core/errors.hpp"
#include "core/vibration.hpp"

namespace gdo {

namespace {

double retrace_y(const HoldoverRetrace& r, double dt_since) {
    if (dt_since < 0.0) return 0.0;
    return (r.y_step + r.drift_rate * dt_since) * std::exp(-dt_since / r.tau);
}

} // namespace

double deterministic_y(const OscillatorParams& params, const OscillatorState& state, double t) {
    double y = params.warmup.y_cold + warmup_y(params.warmup, t) + aging_y(params.aging, t);
    if (state.retrace_start && params.retrace.enabled())
        y += retrace_y(params.retrace, t - *state.retrace_start);
    if (state.settling_start && params.post_exposure_settling.amplitude != 0.0) {
        double s = t - *state.settling_start;
        if (s >= 0.0) y += warmup_y(params.post_exposure_settling, s);
    }
    return y;
}

void step(OscillatorState& state, const OscillatorParams& params, double dt,
          double y_noise, double accel, double y_cmd, double emi_rate, Rng& rng) {
    if (!(dt > 0.0) || dt > 1.0)
        throw SimulationFault("oscillator step: dt must be in (0, 1] s");
    if (std::fabs(accel) > kShakerMaxG)
        throw SimulationFault("oscillator step: acceleration beyond shaker ceiling");

    double y = y_noise + deterministic_y(params, state, state.t) +
               params.gamma * accel + y_cmd;
    if (!std::isfinite(y) || std::fabs(y) >= kFracFreqSanityBound)
        throw SimulationFault("oscillator step: fractional frequency out of bounds");

    state.x += y * dt;
    if (emi_rate > 0.0 && rng.bernoulli(emi_rate * dt)) {
        state.x += rng.laplace(params.emi_outlier_scale);
        ++state.emi_events;
    }
    state.t += dt;

    if (!std::isfinite(state.x))
        throw SimulationFault("oscillator step: time error diverged");
}

void trigger_retrace(OscillatorState& state) {
    state.retrace_start = state.t;
}

void trigger_post_exposure_settling(OscillatorState& state) {
    state.settling_start = state.t;
}

} // namespace gdo
