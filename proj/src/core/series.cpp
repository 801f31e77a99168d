#include "core/series.hpp"

#include <cmath>
#include <cstdio>

#include "core/errors.hpp"

namespace gdo {

const char* to_string(SignalKind kind) {
    return kind == SignalKind::PPS ? "pps" : "10mhz";
}

SignalKind signal_kind_from_string(const std::string& s) {
    if (s == "pps") return SignalKind::PPS;
    if (s == "10mhz") return SignalKind::TENMHZ;
    throw InvalidArgument("unknown signal kind '" + s + "' (expected pps or 10mhz)");
}

void TimeErrorSeries::require_metric_ready() const {
    if (!(tau0 > 0.0))
        throw InvalidArgument("series '" + label + "': tau0 must be > 0");
    if (samples.empty())
        throw InvalidArgument("series '" + label + "': empty series passed to a metric");
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (!std::isfinite(samples[i])) {
            char buf[160];
            std::snprintf(buf, sizeof(buf),
                          "series '%s': non-finite sample at index %zu",
                          label.c_str(), i);
            throw InvalidArgument(buf);
        }
    }
}

bool TimeErrorSeries::has_missing() const {
    for (double v : samples)
        if (std::isnan(v)) return true;
    return false;
}

TimeErrorSeries resample_to(const TimeErrorSeries& series, double new_tau0) {
    if (!(series.tau0 > 0.0))
        throw InvalidArgument("resample_to: source tau0 must be > 0");
    if (new_tau0 < series.tau0)
        throw InvalidArgument("resample_to: new_tau0 must be >= tau0");
    double ratio = new_tau0 / series.tau0;
    auto m = static_cast<std::size_t>(std::llround(ratio));
    if (m < 1 || std::fabs(ratio - static_cast<double>(m)) > 1e-9 * ratio)
        throw InvalidArgument("resample_to: new_tau0 must be an integer multiple of tau0");

    TimeErrorSeries out;
    out.t0 = series.t0;
    out.tau0 = series.tau0 * static_cast<double>(m);
    out.label = series.label;
    std::size_t blocks = series.size() / m;
    out.samples.reserve(blocks);
    for (std::size_t b = 0; b < blocks; ++b) {
        double acc = 0.0;
        for (std::size_t j = 0; j < m; ++j) acc += series.samples[b * m + j];
        out.samples.push_back(acc / static_cast<double>(m));
    }
    return out;
}

TimeErrorSeries pair_time_error(const TimeErrorSeries& a, const TimeErrorSeries& b) {
    if (a.tau0 != b.tau0)
        throw InvalidArgument("pair_time_error: tau0 mismatch");
    if (a.t0 != b.t0)
        throw InvalidArgument("pair_time_error: t0 mismatch");
    if (a.size() != b.size())
        throw InvalidArgument("pair_time_error: length mismatch");

    TimeErrorSeries out;
    out.t0 = a.t0;
    out.tau0 = a.tau0;
    out.label = a.label + "-" + b.label;
    out.samples.resize(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        out.samples[i] = a.samples[i] - b.samples[i];
    return out;
}

} // namespace gdo
