#include "core/discipline.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "core/errors.hpp"

namespace gdo {

const char* to_string(Mode mode) {
    switch (mode) {
    case Mode::WARMUP: return "warmup";
    case Mode::ACQUIRING: return "acquiring";
    case Mode::LOCKED: return "locked";
    case Mode::HOLDOVER: return "holdover";
    case Mode::RECOVERY: return "recovery";
    }
    return "?";
}

void DisciplineParams::validate(const char* path_prefix) const {
    std::vector<std::string> issues;
    std::string p(path_prefix);
    if (!(kp > 0.0)) issues.push_back(p + ".kp: must be > 0");
    if (!(ki > 0.0)) issues.push_back(p + ".ki: must be > 0");
    if (!(lock_threshold > 0.0)) issues.push_back(p + ".lock_threshold_s: must be > 0");
    if (lock_count < 1) issues.push_back(p + ".lock_count: must be >= 1");
    if (!(pps_step_threshold > 0.0))
        issues.push_back(p + ".pps_step_threshold_s: must be > 0");
    // The controller must be able to act on microsecond errors.
    if (slew_max < kp * 1e-6)
        issues.push_back(p + ".slew_max: must be >= kp * 1e-6");
    if (!issues.empty()) throw SpecError(std::move(issues));
}

void DisciplineState::push_locked_y(double y) {
    ring[ring_pos] = y;
    ring_pos = (ring_pos + 1) % kHoldoverWindow;
    ring_count = std::min(ring_count + 1, kHoldoverWindow);
}

double DisciplineState::ring_mean() const {
    if (ring_count == 0) return 0.0;
    double sum = 0.0;
    for (std::size_t i = 0; i < ring_count; ++i) sum += ring[i];
    return sum / static_cast<double>(ring_count);
}

DisciplineState DisciplineState::locked(const DisciplineParams& params, double y_free) {
    DisciplineState st;
    st.mode = Mode::LOCKED;
    st.integrator = y_free / params.ki;
    st.last_y_cmd = -y_free;
    st.consecutive_good = params.lock_count;
    st.ring.fill(-y_free);
    st.ring_count = kHoldoverWindow;
    return st;
}

ControlOutput control_epoch(DisciplineState& state, const DisciplineParams& params,
                            std::optional<double> pps_error, std::int64_t epoch) {
    if (epoch <= state.last_epoch)
        throw SimulationFault("control_epoch: non-monotonic epoch");
    state.last_epoch = epoch;

    ControlOutput out;

    if (!pps_error) {
        switch (state.mode) {
        case Mode::LOCKED:
        case Mode::RECOVERY:
            if (state.mode == Mode::LOCKED) state.y_hold = state.ring_mean();
            state.mode = Mode::HOLDOVER;
            state.consecutive_good = 0;
            [[fallthrough]];
        case Mode::HOLDOVER:
            out.y_cmd = state.y_hold.value_or(0.0);
            break;
        case Mode::WARMUP:
            out.y_cmd = 0.0;
            break;
        case Mode::ACQUIRING:
            // Reference lost before ever locking: hold the last command.
            out.y_cmd = state.last_y_cmd;
            break;
        }
        state.last_y_cmd = out.y_cmd;
        return out;
    }

    double e = *pps_error;

    if (state.mode == Mode::WARMUP) {
        state.mode = Mode::ACQUIRING;
    } else if (state.mode == Mode::HOLDOVER) {
        // First reference pulse after an outage. Large errors re-align
        // the PPS divider; the 10 MHz phase is left untouched.
        state.mode = Mode::RECOVERY;
        if (std::fabs(e) > params.pps_step_threshold) {
            out.pps_step = -e;
            e = 0.0;
        }
    }

    state.integrator += e;
    double y = -(params.kp * e + params.ki * state.integrator);
    out.y_cmd = std::clamp(y, -params.slew_max, params.slew_max);

    if (std::fabs(e) < params.lock_threshold) {
        ++state.consecutive_good;
    } else {
        state.consecutive_good = 0;
    }
    if ((state.mode == Mode::ACQUIRING || state.mode == Mode::RECOVERY) &&
        state.consecutive_good >= params.lock_count) {
        state.mode = Mode::LOCKED;
        state.y_hold.reset();
    }
    if (state.mode == Mode::LOCKED) state.push_locked_y(out.y_cmd);

    state.last_y_cmd = out.y_cmd;
    return out;
}

} // namespace gdo
