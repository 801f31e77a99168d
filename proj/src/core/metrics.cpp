#include "core/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "core/errors.hpp"

namespace gdo {

namespace {

void require_length(const TimeErrorSeries& s, std::size_t needed, const char* what) {
    if (s.size() < needed)
        throw InvalidArgument(std::string(what) + ": series '" + s.label + "' too short (" +
                              std::to_string(s.size()) + " samples, need >= " +
                              std::to_string(needed) + ")");
}

double median_of(std::vector<double> v) {
    std::size_t n = v.size();
    auto mid = v.begin() + static_cast<std::ptrdiff_t>(n / 2);
    std::nth_element(v.begin(), mid, v.end());
    double hi = *mid;
    if (n % 2 == 1) return hi;
    double lo = *std::max_element(v.begin(), mid);
    return 0.5 * (lo + hi);
}

} // namespace

TauGrid TauGrid::octave(std::size_t m_max) {
    TauGrid g;
    for (std::size_t m = 1; m <= m_max && m > 0; m *= 2) g.ms.push_back(m);
    return g;
}

TauGrid TauGrid::decade(std::size_t m_max) {
    TauGrid g;
    static const std::size_t steps[3] = {1, 2, 5};
    for (std::size_t base = 1;; base *= 10) {
        for (std::size_t k = 0; k < 3; ++k) {
            std::size_t m = steps[k] * base;
            if (m < base) return g; // overflow
            if (m > m_max) return g;
            g.ms.push_back(m);
        }
    }
}

double overlapping_adev(const TimeErrorSeries& series, std::size_t m) {
    series.require_metric_ready();
    if (m < 1) throw InvalidArgument("overlapping_adev: m must be >= 1");
    require_length(series, 2 * m + 1, "overlapping_adev");

    const auto& x = series.samples;
    const std::size_t n = x.size();
    const std::size_t terms = n - 2 * m;
    double sum = 0.0;
    for (std::size_t i = 0; i < terms; ++i) {
        double d = x[i + 2 * m] - 2.0 * x[i + m] + x[i];
        sum += d * d;
    }
    double tau = static_cast<double>(m) * series.tau0;
    return std::sqrt(sum / (2.0 * static_cast<double>(terms) * tau * tau));
}

double tie_rms(const TimeErrorSeries& series, std::size_t m) {
    series.require_metric_ready();
    if (m < 1) throw InvalidArgument("tie_rms: m must be >= 1");
    require_length(series, m + 1, "tie_rms");

    const auto& x = series.samples;
    const std::size_t terms = x.size() - m;
    double sum = 0.0;
    for (std::size_t i = 0; i < terms; ++i) {
        double d = x[i + m] - x[i];
        sum += d * d;
    }
    return std::sqrt(sum / static_cast<double>(terms));
}

double mtie(const TimeErrorSeries& series, std::size_t m) {
    series.require_metric_ready();
    if (m < 1) throw InvalidArgument("mtie: m must be >= 1");
    require_length(series, m + 1, "mtie");

    const auto& x = series.samples;
    const std::size_t n = x.size();
    const std::size_t w = m + 1;

    // Indices of candidate maxima (decreasing values) / minima (increasing).
    std::deque<std::size_t> maxq, minq;
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        while (!maxq.empty() && x[maxq.back()] <= x[i]) maxq.pop_back();
        maxq.push_back(i);
        while (!minq.empty() && x[minq.back()] >= x[i]) minq.pop_back();
        minq.push_back(i);
        if (i + 1 >= w) {
            std::size_t lo = i + 1 - w;
            while (maxq.front() < lo) maxq.pop_front();
            while (minq.front() < lo) minq.pop_front();
            worst = std::max(worst, x[maxq.front()] - x[minq.front()]);
        }
    }
    return worst;
}

double mtie_bruteforce(const TimeErrorSeries& series, std::size_t m) {
    series.require_metric_ready();
    if (m < 1) throw InvalidArgument("mtie_bruteforce: m must be >= 1");
    require_length(series, m + 1, "mtie_bruteforce");

    const auto& x = series.samples;
    const std::size_t n = x.size();
    double worst = 0.0;
    for (std::size_t i = 0; i + m < n; ++i) {
        double hi = x[i], lo = x[i];
        for (std::size_t j = i + 1; j <= i + m; ++j) {
            hi = std::max(hi, x[j]);
            lo = std::min(lo, x[j]);
        }
        worst = std::max(worst, hi - lo);
    }
    return worst;
}

std::vector<double> mtie_bruteforce_all(const TimeErrorSeries& series) {
    series.require_metric_ready();
    require_length(series, 2, "mtie_bruteforce_all");

    const auto& x = series.samples;
    const std::size_t n = x.size();
    std::vector<double> out(n - 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double hi = x[i], lo = x[i];
        for (std::size_t j = i + 1; j < n; ++j) {
            hi = std::max(hi, x[j]);
            lo = std::min(lo, x[j]);
            out[j - i - 1] = std::max(out[j - i - 1], hi - lo);
        }
    }
    return out;
}

SummaryStats summarize(const TimeErrorSeries& series, double k_mad) {
    series.require_metric_ready();
    require_length(series, 2, "summarize");

    const auto& x = series.samples;
    const double n = static_cast<double>(x.size());

    SummaryStats st;
    double sum = 0.0;
    for (double v : x) {
        sum += v;
        st.max_abs = std::max(st.max_abs, std::fabs(v));
    }
    st.mean = sum / n;
    double ss = 0.0;
    for (double v : x) {
        double d = v - st.mean;
        ss += d * d;
    }
    st.sigma = std::sqrt(ss / (n - 1.0));

    double med = median_of(x);
    std::vector<double> dev(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) dev[i] = std::fabs(x[i] - med);
    double mad = median_of(dev);
    st.outlier_threshold = k_mad * 1.4826 * mad;
    for (double d : dev)
        if (d > st.outlier_threshold) ++st.outlier_count;
    return st;
}

StabilityCurves stability_curves(const TimeErrorSeries& series, const TauGrid& grid) {
    series.require_metric_ready();
    StabilityCurves out;
    out.adev.kind = MetricKind::ADEV;
    out.tie_rms.kind = MetricKind::TIERMS;
    out.mtie.kind = MetricKind::MTIE;

    const std::size_t n = series.size();
    for (std::size_t m : grid.ms) {
        double tau = static_cast<double>(m) * series.tau0;
        if (n >= 2 * m + 1) {
            CurvePoint p{tau, overlapping_adev(series, m), n - 2 * m < 4};
            out.adev.points.push_back(p);
        }
        if (n >= m + 1) {
            out.tie_rms.points.push_back({tau, tie_rms(series, m), false});
            out.mtie.points.push_back({tau, mtie(series, m), false});
        }
    }
    if (out.adev.points.empty() && out.tie_rms.points.empty())
        throw InvalidArgument("stability_curves: no tau point fits series of length " +
                              std::to_string(n));
    return out;
}

std::vector<double> sliding_window_mtie(const TimeErrorSeries& series, std::size_t w) {
    series.require_metric_ready();
    if (w < 1) throw InvalidArgument("sliding_window_mtie: window must be >= 1");
    require_length(series, w + 1, "sliding_window_mtie");

    const auto& x = series.samples;
    const std::size_t n = x.size();
    const std::size_t span = w + 1;
    std::vector<double> out(n - w);
    std::deque<std::size_t> maxq, minq;
    for (std::size_t i = 0; i < n; ++i) {
        while (!maxq.empty() && x[maxq.back()] <= x[i]) maxq.pop_back();
        maxq.push_back(i);
        while (!minq.empty() && x[minq.back()] >= x[i]) minq.pop_back();
        minq.push_back(i);
        if (i + 1 >= span) {
            std::size_t lo = i + 1 - span;
            while (maxq.front() < lo) maxq.pop_front();
            while (minq.front() < lo) minq.pop_front();
            out[lo] = x[maxq.front()] - x[minq.front()];
        }
    }
    return out;
}

std::optional<double> usability_time(const TimeErrorSeries& series,
                                     double first_fix_time,
                                     double window,
                                     double mtie_budget) {
    auto w = static_cast<std::size_t>(std::llround(window / series.tau0));
    if (w < 1 || series.size() < w + 1)
        throw InvalidArgument("usability_time: window longer than series");

    std::vector<double> wm = sliding_window_mtie(series, w);
    // Suffix scan: the earliest start index after which no window exceeds
    // the budget.
    std::size_t bad_after = wm.size(); // index of last violating window + 1
    for (std::size_t i = wm.size(); i-- > 0;) {
        if (wm[i] > mtie_budget) {
            bad_after = i + 1;
            break;
        }
        if (i == 0) bad_after = 0;
    }
    if (bad_after == wm.size()) return std::nullopt;
    double t = series.time_at(bad_after) - first_fix_time;
    return std::max(0.0, t);
}

} // namespace gdo
