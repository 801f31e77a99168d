#ifndef GDO_CORE_METRICS_HPP
#define GDO_CORE_METRICS_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "core/series.hpp"

namespace gdo {

// Observation intervals tau = m * tau0, strictly increasing.
struct TauGrid {
    std::vector<std::size_t> ms;

    // Octave-spaced grid: m = 1, 2, 4, ... while m <= m_max.
    static TauGrid octave(std::size_t m_max);
    // 1-2-5 per decade: m = 1, 2, 5, 10, 20, 50, ...
    static TauGrid decade(std::size_t m_max);
};

enum class MetricKind { ADEV, TIERMS, MTIE };

struct CurvePoint {
    double tau = 0.0;
    double value = 0.0;
    // Set when fewer than 4 second differences were available (ADEV only).
    bool low_confidence = false;
};

struct StabilityCurve {
    MetricKind kind = MetricKind::ADEV;
    std::vector<CurvePoint> points;
};

struct SummaryStats {
    double mean = 0.0;
    double sigma = 0.0;
    double max_abs = 0.0;
    std::size_t outlier_count = 0;
    double outlier_threshold = 0.0;
};

// Overlapping Allan deviation at tau = m * tau0:
//   sigma_y^2 = sum_i (x[i+2m] - 2 x[i+m] + x[i])^2 / (2 (N-2m) (m tau0)^2)
// Requires N >= 2m + 1.
double overlapping_adev(const TimeErrorSeries& series, std::size_t m);

// RMS of the time interval error x[i+m] - x[i]. Requires N >= m + 1.
double tie_rms(const TimeErrorSeries& series, std::size_t m);

// Maximum peak-to-peak time error over every window of m+1 consecutive
// samples (window spans the observation interval m * tau0). O(N) via
// monotonic sliding-window extrema. Requires N >= m + 1.
double mtie(const TimeErrorSeries& series, std::size_t m);

// Reference implementation of mtie: plain nested window scan, O(N*m).
// Kept deliberately independent of the deque version.
double mtie_bruteforce(const TimeErrorSeries& series, std::size_t m);

// mtie_bruteforce for every m in 1..N-1 in one O(N^2) pass (windows grown
// by extension from each start index). Exact same comparisons as the
// per-m scan, so results are bit-identical.
std::vector<double> mtie_bruteforce_all(const TimeErrorSeries& series);

// Mean / standard deviation / max |x| plus a robust outlier count:
// samples farther than k_mad normalized MADs from the median. Requires
// N >= 2. With MAD == 0 any deviation from the median counts.
SummaryStats summarize(const TimeErrorSeries& series, double k_mad);

struct StabilityCurves {
    StabilityCurve adev;
    StabilityCurve tie_rms;
    StabilityCurve mtie;
};

// Evaluates the three metrics over the grid, silently skipping tau points
// whose length precondition fails. Throws if nothing remains.
StabilityCurves stability_curves(const TimeErrorSeries& series, const TauGrid& grid);

// MTIE of each window of w+1 samples starting at index i, for all i.
std::vector<double> sliding_window_mtie(const TimeErrorSeries& series, std::size_t w);

// Smallest time (seconds, relative to first_fix_time) such that every
// window of `window` seconds starting at or after it keeps MTIE within
// mtie_budget. nullopt when no suffix qualifies.
std::optional<double> usability_time(const TimeErrorSeries& series,
                                     double first_fix_time,
                                     double window,
                                     double mtie_budget);

} // namespace gdo

#endif
