#include "core/vibration.hpp"

#include <algorithm>
#include <cmath>

namespace gdo {

namespace {

constexpr double kPi = 3.14159265358979323846;

double segment_accel(const VibrationSegment& seg, double t) {
    double s = t - seg.t_start;
    if (s < 0.0 || s > seg.duration) return 0.0;

    if (seg.kind == VibrationKind::ShockHalfSine)
        return seg.amplitude * std::sin(kPi * s / seg.duration);

    // Sweep phase from the closed-form integral of the instantaneous
    // frequency f(u) = f_lo (f_hi/f_lo)^(u/T).
    double phase_cycles;
    if (seg.f_hi == seg.f_lo) {
        phase_cycles = seg.f_lo * s;
    } else {
        double lr = std::log(seg.f_hi / seg.f_lo);
        phase_cycles = seg.f_lo * seg.duration / lr * (std::exp(lr * s / seg.duration) - 1.0);
    }
    return seg.amplitude * std::sin(2.0 * kPi * phase_cycles);
}

} // namespace

double VibrationProfile::max_frequency_in(double t, double t_end) const {
    double fmax = 0.0;
    for (const auto& seg : segments) {
        if (seg.t_start >= t_end || seg.t_start + seg.duration <= t) continue;
        if (seg.kind == VibrationKind::ShockHalfSine) {
            // Treat the pulse as a tone at its dominant frequency.
            fmax = std::max(fmax, 0.5 / seg.duration);
        } else {
            fmax = std::max(fmax, std::max(seg.f_lo, seg.f_hi));
        }
    }
    return fmax;
}

bool VibrationProfile::active_in(double t, double t_end) const {
    for (const auto& seg : segments)
        if (seg.t_start < t_end && seg.t_start + seg.duration > t) return true;
    return false;
}

double VibrationProfile::last_end() const {
    double end = 0.0;
    for (const auto& seg : segments) end = std::max(end, seg.t_start + seg.duration);
    return end;
}

double env_acceleration(const VibrationProfile& profile, double t) {
    double a = 0.0;
    for (const auto& seg : profile.segments) a += segment_accel(seg, t);
    return a;
}

} // namespace gdo
