#include "core/gnss.hpp"

#include <string>

#include "core/errors.hpp"

namespace gdo {

void GnssTimeline::validate(const char* path_prefix) const {
    std::vector<std::string> issues;
    std::string p(path_prefix);
    if (fix_acquire_delay < 0.0)
        issues.push_back(p + ".fix_acquire_delay_s: must be >= 0");
    if (rx_jitter_sigma < 0.0)
        issues.push_back(p + ".rx_jitter_sigma_s: must be >= 0");
    double prev_end = -1.0;
    for (std::size_t i = 0; i < outages.size(); ++i) {
        const auto& [start, dur] = outages[i];
        std::string pi = p + ".outages[" + std::to_string(i) + "]";
        if (start < 0.0 || dur <= 0.0)
            issues.push_back(pi + ": start must be >= 0 and duration > 0");
        if (start < prev_end)
            issues.push_back(pi + ": outages must be sorted and non-overlapping");
        prev_end = start + dur;
    }
    if (!issues.empty()) throw SpecError(std::move(issues));
}

bool fix_available(const GnssTimeline& timeline, double t) {
    if (t < timeline.fix_acquire_delay) return false;
    for (const auto& [start, dur] : timeline.outages) {
        if (t >= start && t < start + dur) return false;
        if (t < start) break;
    }
    return true;
}

int quality_at(const GnssTimeline& timeline, double t) {
    return fix_available(timeline, t) ? timeline.satellites_in_view : 0;
}

std::optional<double> reference_pps(const GnssTimeline& timeline,
                                    std::uint64_t second_index, Rng& rng) {
    double t = static_cast<double>(second_index);
    if (!fix_available(timeline, t)) return std::nullopt;
    double jitter = timeline.rx_jitter_sigma > 0.0
                        ? timeline.rx_jitter_sigma * rng.normal()
                        : 0.0;
    return t + jitter;
}

} // namespace gdo
