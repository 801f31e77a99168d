#ifndef GDO_CORE_GNSS_HPP
#define GDO_CORE_GNSS_HPP

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "core/random.hpp"

namespace gdo {

// Reception scenario shared by all devices on the bench: time to first
// fix, white receiver jitter on the reference pulse, declared outages and
// a satellites-in-view count exported for plotting only.
struct GnssTimeline {
    std::vector<std::pair<double, double>> outages; // (start s, duration s), sorted
    double fix_acquire_delay = 45.0;                // s from cold start to first fix
    double rx_jitter_sigma = 8e-9;                  // s
    int satellites_in_view = 9;

    // Sorted, non-overlapping, non-negative. Throws SpecError otherwise.
    void validate(const char* path_prefix) const;
};

// False before the first fix and inside any outage. Availability is a
// pure function of the timeline; no randomness.
bool fix_available(const GnssTimeline& timeline, double t);

int quality_at(const GnssTimeline& timeline, double t);

// Receiver 1 PPS timestamp for the given second: absent without a fix,
// otherwise second_index + Normal(0, rx_jitter_sigma). Callers pass a
// per-device rng so receivers draw independent jitter.
std::optional<double> reference_pps(const GnssTimeline& timeline,
                                    std::uint64_t second_index, Rng& rng);

} // namespace gdo

#endif
