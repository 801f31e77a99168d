#ifndef GDO_CORE_SERIES_HPP
#define GDO_CORE_SERIES_HPP

#include <string>
#include <vector>

namespace gdo {

enum class SignalKind { PPS, TENMHZ };

const char* to_string(SignalKind kind);
SignalKind signal_kind_from_string(const std::string& s);

// Uniformly sampled time error x(t) in seconds; sample i is the value at
// exactly t0 + i * tau0. The shared currency between simulation,
// measurement and metric code. Values must be finite; a NaN marks an
// explicitly missing sample and is only legal on ingested logs.
struct TimeErrorSeries {
    double t0 = 0.0;
    double tau0 = 1.0;
    std::vector<double> samples;
    std::string label;

    std::size_t size() const { return samples.size(); }
    double time_at(std::size_t i) const { return t0 + static_cast<double>(i) * tau0; }

    // Throws InvalidArgument unless tau0 > 0, samples are non-empty and
    // every sample is finite. Called by every metric entry point.
    void require_metric_ready() const;

    bool has_missing() const;
};

// Decimation by block averaging. new_tau0 must be a positive integer
// multiple of tau0; trailing samples that do not fill a block are
// dropped. new_tau0 == tau0 returns a copy.
TimeErrorSeries resample_to(const TimeErrorSeries& series, double new_tau0);

// Elementwise difference a - b of two aligned series (same tau0, same t0,
// same length). Label records both operands.
TimeErrorSeries pair_time_error(const TimeErrorSeries& a, const TimeErrorSeries& b);

} // namespace gdo

#endif
