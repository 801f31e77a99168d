#ifndef GDO_CORE_DISCIPLINE_HPP
#define GDO_CORE_DISCIPLINE_HPP

#include <array>
#include <cstdint>
#include <optional>

namespace gdo {

enum class Mode { WARMUP, ACQUIRING, LOCKED, HOLDOVER, RECOVERY };

const char* to_string(Mode mode);

// Number of trailing locked epochs averaged into the holdover frequency
// estimate.
constexpr std::size_t kHoldoverWindow = 128;

struct DisciplineParams {
    double kp = 2e-4;                // fractional frequency per s of error
    double ki = 2e-6;                // per s^2
    double slew_max = 1e-6;          // |y_cmd| ceiling
    double lock_threshold = 100e-9;  // s
    int lock_count = 30;             // consecutive epochs below threshold
    double pps_step_threshold = 5e-7; // s; infinity disables divider steps

    void validate(const char* path_prefix) const;
};

// Controller memory. The y_cmd ring holds steering applied during LOCKED
// epochs; its mean becomes the frozen holdover estimate.
struct DisciplineState {
    Mode mode = Mode::WARMUP;
    double integrator = 0.0;
    std::optional<double> y_hold;
    int consecutive_good = 0;
    double last_y_cmd = 0.0;
    std::int64_t last_epoch = -1;

    std::array<double, kHoldoverWindow> ring{};
    std::size_t ring_count = 0;
    std::size_t ring_pos = 0;

    void push_locked_y(double y);
    double ring_mean() const;

    // Steady-state start: locked, integrator preloaded so the steering
    // cancels y_free immediately (used by scenarios that begin long after
    // power-on).
    static DisciplineState locked(const DisciplineParams& params, double y_free);
};

struct ControlOutput {
    double y_cmd = 0.0;   // fractional frequency to apply this second
    double pps_step = 0.0; // PPS divider re-alignment, s (usually 0)
};

// One controller epoch. `epoch` must strictly increase call to call.
// pps_error is the measured error of this device's PPS against the GNSS
// reference pulse, or nullopt when no reference pulse exists.
ControlOutput control_epoch(DisciplineState& state, const DisciplineParams& params,
                            std::optional<double> pps_error, std::int64_t epoch);

} // namespace gdo

#endif
