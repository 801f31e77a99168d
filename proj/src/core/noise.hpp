#ifndef GDO_CORE_NOISE_HPP
#define GDO_CORE_NOISE_HPP

#include <cstddef>
#include <vector>

#include "core/random.hpp"

namespace gdo {

// Power-law noise intensities for the one-sided PSD convention
//   S_y(f) = h2 f^2 + h1 f + h0 + hm1 / f + hm2 / f^2
// (white PM, flicker PM, white FM, flicker FM, random-walk FM).
struct NoiseModel {
    double h2 = 0.0;
    double h1 = 0.0;
    double h0 = 0.0;
    double hm1 = 0.0;
    double hm2 = 0.0;

    bool all_zero() const { return h2 == 0 && h1 == 0 && h0 == 0 && hm1 == 0 && hm2 == 0; }
};

// Exponential frequency settling after power-on: y_w(t) = amplitude *
// exp(-t / tau). y_cold is the oscillator's uncorrected frequency offset,
// applied separately as a constant until the control loop removes it.
struct WarmupModel {
    double amplitude = 0.0; // fractional frequency at t = 0
    double tau = 1.0;       // settling time constant, s
    double y_cold = 0.0;    // constant start offset, fractional frequency
};

// Linear frequency aging dy/dt = rate.
struct AgingModel {
    double rate = 0.0; // fractional frequency per second
};

double warmup_y(const WarmupModel& model, double t);
double aging_y(const AgingModel& model, double t);

// Generates n fractional-frequency samples at spacing tau0 whose PSD
// approximates the model over [1/(n tau0), 1/(2 tau0)]. Each component is
// white noise shaped by the fractional-difference filter
//   a[0] = 1,  a[k] = a[k-1] (k - 1 + d) / k,   d = -alpha / 2,
// truncated at min(n, 2^20) taps; the truncation flattens flicker and
// random-walk spectra below roughly 1 / (2^20 tau0). Components draw from
// independent child streams of `stream`, so the output is a deterministic
// function of (model, n, tau0, stream).
std::vector<double> gen_powerlaw_y(const NoiseModel& model, std::size_t n,
                                   double tau0, const RandomStream& stream);

// Single component: alpha in {+2, +1, 0, -1, -2}, intensity h_alpha.
std::vector<double> gen_powerlaw_component(int alpha, double h, std::size_t n,
                                           double tau0, const RandomStream& stream);

// Expected white-FM Allan deviation sqrt(h0 / (2 tau)); used by tests and
// calibration as the analytic anchor.
double wfm_adev(double h0, double tau);

} // namespace gdo

#endif
