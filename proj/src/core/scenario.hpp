#ifndef GDO_CORE_SCENARIO_HPP
#define GDO_CORE_SCENARIO_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "core/archetype.hpp"
#include "core/gnss.hpp"
#include "core/sdr_chain.hpp"
#include "core/series.hpp"
#include "core/vibration.hpp"

namespace gdo {

struct DutSpec {
    std::string archetype;
    double placement_gain = 0.0; // EMI coupling multiplier (0 = unaffected)
    bool outage_affected = false; // sees the declared GNSS outages
    bool on_shaker = false;       // sees the vibration profile
};

// Rotor thrust program: pulse width alternates between pw_low and pw_high
// every `period` seconds while active. EMI activity is 1 during the
// active window and spikes to transition_kappa for one second at every
// pulse-width change.
struct ThrustSequence {
    double period = 20.0;    // s
    double pw_low = 1500.0;  // us
    double pw_high = 1600.0; // us
    double active_start = 0.0;
    double active_duration = 0.0;

    bool enabled() const { return active_duration > 0.0; }
    double pulse_width_at(double t) const; // us; 0 when inactive
    double activity_at(double t, double transition_kappa) const;
};

struct ScenarioSpec {
    int schema_version = 1;
    std::string name = "custom";
    double duration = 0.0; // s
    std::uint64_t seed = 1;
    double preroll = 0.0;     // oscillator age at scenario start, s
    bool start_locked = false; // controllers begin settled in LOCKED
    std::vector<DutSpec> duts;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    GnssTimeline gnss;
    VibrationProfile vibration;
    ThrustSequence thrust;
    CaptureConfig capture;
    bool phase_level = true; // long-run shortcut past the waveform layer
    double emi_transition_kappa = 3.0;

    // Throws SpecError listing every invalid field by path.
    void validate() const;
};

std::string spec_to_json(const ScenarioSpec& spec);
ScenarioSpec spec_from_json(const std::string& text);
ScenarioSpec load_spec_file(const std::string& path);
void save_spec_file(const ScenarioSpec& spec, const std::string& path);

// FNV-1a64 over the canonical JSON form, hex encoded.
std::string spec_hash(const ScenarioSpec& spec);

// Applies "dotted.path=value" to the JSON form of a spec. Numeric path
// tokens index arrays; the value is parsed as JSON when possible, else
// taken as a string.
ScenarioSpec apply_override(const ScenarioSpec& spec, const std::string& dotted_key,
                            const std::string& value);

const std::vector<std::string>& template_names();
ScenarioSpec make_template(const std::string& name);

struct DutResult {
    std::string archetype;
    TimeErrorSeries pps;          // measured output error vs true time
    TimeErrorSeries tenmhz;       // measured output error vs true time
    TimeErrorSeries pps_truth;    // before measurement/output jitter
    TimeErrorSeries tenmhz_truth; // before measurement/output jitter
    std::vector<Mode> modes;      // controller mode per second
    std::uint64_t emi_events = 0;
    double first_fix_time = -1.0; // s, -1 when no fix during the run
};

struct RunResult {
    ScenarioSpec spec;
    std::string hash;
    std::vector<DutResult> duts;
    std::vector<TimeErrorSeries> pair_pps;
    std::vector<TimeErrorSeries> pair_tenmhz;
    std::vector<double> accel_g;   // shaker drive at each second
    std::vector<double> thrust_pw; // us
    std::vector<int> fix_status;   // declared-timeline availability
    std::vector<int> satellites;
};

// Executes the scenario: per-second control epochs, sub-stepped phase
// integration during vibration, deterministic per-device random streams.
// Device workers run in parallel, capped by GNSSDOBENCH_THREADS.
RunResult run(const ScenarioSpec& spec);

// Time from first fix until every trailing window of `window` seconds of
// the device's measured 10 MHz error keeps MTIE within budget.
std::optional<double> usability_time(const RunResult& result, std::size_t dut,
                                     double window, double mtie_budget);

} // namespace gdo

#endif
