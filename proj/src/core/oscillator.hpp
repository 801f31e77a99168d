#ifndef GDO_CORE_OSCILLATOR_HPP
#define GDO_CORE_OSCILLATOR_HPP

#include <cstdint>
#include <optional>

#include "core/noise.hpp"
#include "core/random.hpp"

namespace gdo {

// Bound on any instantaneous fractional frequency; a step beyond this is
// a simulation fault, not physics.
constexpr double kFracFreqSanityBound = 1e-3;

// Decaying frequency transient applied while the steering input is
// frozen (holdover). Models the device-specific drift left after the
// control loop lets go: y(dt) = (y_step + drift_rate * dt) * exp(-dt/tau).
struct HoldoverRetrace {
    double y_step = 0.0;     // fractional frequency at holdover entry
    double drift_rate = 0.0; // fractional frequency per second
    double tau = 1.0;        // decay constant, s

    bool enabled() const { return y_step != 0.0 || drift_rate != 0.0; }
};

struct OscillatorParams {
    double f0 = 10e6; // Hz
    NoiseModel noise;
    WarmupModel warmup;
    AgingModel aging;
    HoldoverRetrace retrace;
    double gamma = 0.0;             // g-sensitivity, fractional frequency per g
    double emi_outlier_rate0 = 0.0; // events/s at unit coupling gain
    double emi_outlier_scale = 0.0; // Laplace scale of injected phase jumps, s
    // Settling transient re-triggered when a disturbance ends
    // (amplitude 0 disables it).
    WarmupModel post_exposure_settling;
    // White jitter of the output stages as seen by the measurement chain;
    // not visible to the device's own control loop.
    double pps_jitter_sigma = 0.0;    // s
    double tenmhz_jitter_sigma = 0.0; // s
};

struct OscillatorState {
    double t = 0.0;          // oscillator age (time since power-on), s
    double x = 0.0;          // accumulated time error of the 10 MHz phase, s
    double pps_offset = 0.0; // PPS divider alignment relative to the 10 MHz phase, s
    std::uint64_t emi_events = 0;

    std::optional<double> retrace_start;
    std::optional<double> settling_start;

    double pps_error() const { return x + pps_offset; }
    double tenmhz_error() const { return x; }
};

// Deterministic frequency components at oscillator age t (everything
// except noise, environment and the steering command).
double deterministic_y(const OscillatorParams& params, const OscillatorState& state, double t);

// Advances the phase integrator by dt (forward Euler on y):
//   y = y_noise + deterministic_y + gamma * accel + y_cmd
// and injects an EMI phase jump with probability emi_rate * dt. Requires
// 0 < dt <= 1. Throws SimulationFault when a sanity bound trips.
void step(OscillatorState& state, const OscillatorParams& params, double dt,
          double y_noise, double accel, double y_cmd, double emi_rate, Rng& rng);

// Event hooks driven by the scenario engine.
void trigger_retrace(OscillatorState& state);
void trigger_post_exposure_settling(OscillatorState& state);

} // namespace gdo

#endif
