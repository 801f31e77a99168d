#ifndef GDO_CORE_VIBRATION_HPP
#define GDO_CORE_VIBRATION_HPP

#include <vector>

namespace gdo {

// Single-axis acceleration in g. The simulated shaker tops out at 98 g;
// profiles beyond that are rejected at scenario validation.
constexpr double kShakerMaxG = 98.0;

enum class VibrationKind { SineSweep, ShockHalfSine };

// One profile element. A sine sweep runs a logarithmic frequency sweep
// f_lo -> f_hi over its duration (f_lo == f_hi gives a fixed tone); phase
// accumulates from the segment start so the waveform is continuous. A
// shock is a half-sine pulse of the given duration.
struct VibrationSegment {
    VibrationKind kind = VibrationKind::SineSweep;
    double t_start = 0.0;   // s
    double duration = 0.0;  // s
    double amplitude = 0.0; // g
    double f_lo = 0.0;      // Hz (sweep only)
    double f_hi = 0.0;      // Hz (sweep only)
};

struct VibrationProfile {
    std::vector<VibrationSegment> segments;

    bool empty() const { return segments.empty(); }
    // Highest sweep frequency active anywhere in [t, t+1); 0 when no
    // segment overlaps. Drives the sub-step size of the integrator.
    double max_frequency_in(double t, double t_end) const;
    bool active_in(double t, double t_end) const;
    // End time of the last segment, or 0 for an empty profile.
    double last_end() const;
};

// Instantaneous acceleration at time t: the sum of all active segments,
// zero outside them. Pure function of (profile, t).
double env_acceleration(const VibrationProfile& profile, double t);

} // namespace gdo

#endif
