#ifndef GDO_CORE_SDR_CHAIN_HPP
#define GDO_CORE_SDR_CHAIN_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "core/random.hpp"

namespace gdo {

// Sample-level capture settings. The waveform path is used by the chain
// validation command; long scenario runs stay at phase level and only
// inherit noise_floor_sigma as white PM on the assembled series.
struct CaptureConfig {
    double fs = 100e6;          // sample rate, Hz
    std::size_t block_len = 100000; // samples per phase estimate (1 ms)
    double snr_db = 40.0;       // additive white noise vs full-scale sine
    bool noiseless = false;     // disables the noise term entirely
    double pps_threshold = 0.5; // normalized rising-edge crossing level
    double pps_rise_time = 1e-6; // raised-cosine rise, s
    double noise_floor_sigma = 1e-10; // phase-level equivalent noise, s

    void validate(double f0, const char* path_prefix) const;
};

// s[n] = sin(2 pi f0 (n / fs - x_te)) + noise. Writes block_len samples.
void synth_sine_block(double x_te, double f0, const CaptureConfig& cfg,
                      Rng& rng, std::span<double> out);

// Same carrier with the time error sliding linearly from x_te_start to
// x_te_end across the block (incremental phase rotation, no per-sample
// trig beyond the carrier table).
void synth_sine_block_ramp(double x_te_start, double x_te_end, double f0,
                           const CaptureConfig& cfg, Rng& rng, std::span<double> out);

struct PhaseEstimate {
    double te = 0.0; // unwrapped time error, s
    std::int64_t unwrap = 0;
    bool valid = true; // false when the block is below the noise floor
};

// Quadrature correlation against the nominal f0. The raw estimate lives
// in one 1/f0 period; continuity against prev_te picks the unwrap count.
PhaseEstimate estimate_te_10mhz(std::span<const double> block, double f0,
                                const CaptureConfig& cfg, double prev_te);

// Rising-edge timestamp by linear interpolation between the straddling
// samples. Requires exactly one rising crossing; throws InvalidArgument
// with the observed count otherwise.
double pps_edge_time(std::span<const double> samples, const CaptureConfig& cfg,
                     double block_start_time);

// Raised-cosine 0->1 edge crossing the threshold exactly at edge_time.
void synth_pps_edge(double edge_time, const CaptureConfig& cfg, Rng& rng,
                    double block_start_time, std::span<double> out);

// Centered moving average; the edge detector's band limiter under noise.
std::vector<double> boxcar_filter(std::span<const double> samples, std::size_t width);

struct ChainFidelityReport {
    double rms_error = 0.0;      // injected vs recovered, s
    double max_error = 0.0;      // s
    std::size_t unwrap_events = 0;
    std::size_t blocks = 0;
    double ramp_slope_rel_error = 0.0; // recovered/injected - 1 on a te ramp
    double pps_rms_error = 0.0;  // edge recovery accuracy (noiseless), s
    double pps_max_error = 0.0;  // s
    std::size_t pps_edge_failures = 0; // detection failures at the configured SNR
    double snr_db = 0.0;
    bool noiseless = false;
};

// Round-trip fidelity of the measurement chain over `duration` seconds of
// signal: a smooth multi-tone time error (<= 10 Hz, <= 40 ns peak) is fed
// through synthesis and re-estimated block by block, plus a slope-recovery
// ramp and PPS edge sweeps (accuracy noiseless, detection robustness at
// the configured SNR).
ChainFidelityReport run_chain_validation(const CaptureConfig& cfg, double f0,
                                         double duration, const RandomStream& stream);

} // namespace gdo

#endif
