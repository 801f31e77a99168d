#include "core/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "core/discipline.hpp"
#include "core/errors.hpp"
#include "core/metrics.hpp"
#include "core/noise.hpp"
#include "core/oscillator.hpp"

namespace gdo {

using nlohmann::json;

double ThrustSequence::pulse_width_at(double t) const {
    if (!enabled() || t < active_start || t >= active_start + active_duration) return 0.0;
    auto idx = static_cast<long long>((t - active_start) / period);
    return idx % 2 == 0 ? pw_low : pw_high;
}

double ThrustSequence::activity_at(double t, double transition_kappa) const {
    if (!enabled() || t < active_start || t >= active_start + active_duration) return 0.0;
    double since = std::fmod(t - active_start, period);
    return since < 1.0 ? transition_kappa : 1.0;
}

void ScenarioSpec::validate() const {
    std::vector<std::string> issues;
    auto absorb = [&issues](const char* fallback, auto&& fn) {
        try {
            fn();
        } catch (const SpecError& e) {
            for (const auto& s : e.issues()) issues.push_back(s);
        } catch (const std::exception& e) {
            issues.push_back(std::string(fallback) + ": " + e.what());
        }
    };

    if (schema_version != 1)
        issues.push_back("schema_version: unsupported (expected 1)");
    if (duration < 60.0)
        issues.push_back("duration_s: must be >= 60");
    if (preroll < 0.0)
        issues.push_back("preroll_s: must be >= 0");
    if (emi_transition_kappa < 0.0)
        issues.push_back("emi_transition_kappa: must be >= 0");

    if (duts.empty()) issues.push_back("duts: at least one device required");
    for (std::size_t i = 0; i < duts.size(); ++i) {
        std::string p = "duts[" + std::to_string(i) + "]";
        if (duts[i].placement_gain < 0.0)
            issues.push_back(p + ".placement_gain: must be >= 0");
        absorb(p.c_str(), [&] { resolve_archetype(duts[i].archetype); });
    }

    if (!pairs.empty() && duts.size() < 2)
        issues.push_back("pairs: need at least two devices to form pairs");
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        std::string p = "pairs[" + std::to_string(i) + "]";
        auto [a, b] = pairs[i];
        if (a >= duts.size() || b >= duts.size())
            issues.push_back(p + ": device index out of range");
        else if (a == b)
            issues.push_back(p + ": a pair needs two distinct devices");
    }

    absorb("gnss", [&] { gnss.validate("gnss"); });

    for (std::size_t i = 0; i < vibration.segments.size(); ++i) {
        const auto& seg = vibration.segments[i];
        std::string p = "vibration[" + std::to_string(i) + "]";
        if (seg.t_start < 0.0) issues.push_back(p + ".t_start_s: must be >= 0");
        if (!(seg.duration > 0.0)) issues.push_back(p + ".duration_s: must be > 0");
        if (seg.amplitude < 0.0 || seg.amplitude > kShakerMaxG)
            issues.push_back(p + ".amplitude_g: must be within [0, 98]");
        if (seg.kind == VibrationKind::SineSweep) {
            if (!(seg.f_lo > 0.0) || seg.f_hi < seg.f_lo)
                issues.push_back(p + ": sweep needs 0 < f_lo_hz <= f_hi_hz");
        }
    }

    if (thrust.enabled()) {
        if (!(thrust.period > 0.0)) issues.push_back("thrust.period_s: must be > 0");
        if (thrust.pw_low < 1100.0 || thrust.pw_low > 2000.0 ||
            thrust.pw_high < 1100.0 || thrust.pw_high > 2000.0)
            issues.push_back("thrust: pulse widths must be within [1100, 2000] us");
        if (thrust.active_start < 0.0)
            issues.push_back("thrust.active_start_s: must be >= 0");
    }

    absorb("capture", [&] { capture.validate(10e6, "capture"); });

    if (!issues.empty()) throw SpecError(std::move(issues));
}

namespace {

json vib_to_json(const VibrationProfile& v) {
    json arr = json::array();
    for (const auto& s : v.segments) {
        json j;
        j["kind"] = s.kind == VibrationKind::SineSweep ? "sine_sweep" : "shock_half_sine";
        j["t_start_s"] = s.t_start;
        j["duration_s"] = s.duration;
        j["amplitude_g"] = s.amplitude;
        if (s.kind == VibrationKind::SineSweep) {
            j["f_lo_hz"] = s.f_lo;
            j["f_hi_hz"] = s.f_hi;
        }
        arr.push_back(j);
    }
    return arr;
}

VibrationProfile vib_from_json(const json& arr) {
    VibrationProfile v;
    for (const auto& j : arr) {
        VibrationSegment s;
        std::string kind = j.value("kind", "sine_sweep");
        if (kind == "sine_sweep") {
            s.kind = VibrationKind::SineSweep;
        } else if (kind == "shock_half_sine") {
            s.kind = VibrationKind::ShockHalfSine;
        } else {
            throw InvalidArgument("vibration.kind: unknown '" + kind + "'");
        }
        s.t_start = j.value("t_start_s", 0.0);
        s.duration = j.value("duration_s", 0.0);
        s.amplitude = j.value("amplitude_g", 0.0);
        s.f_lo = j.value("f_lo_hz", 0.0);
        s.f_hi = j.value("f_hi_hz", s.f_lo);
        v.segments.push_back(s);
    }
    return v;
}

} // namespace

std::string spec_to_json(const ScenarioSpec& spec) {
    json j;
    j["schema_version"] = spec.schema_version;
    j["name"] = spec.name;
    j["duration_s"] = spec.duration;
    j["seed"] = spec.seed;
    j["preroll_s"] = spec.preroll;
    j["start_locked"] = spec.start_locked;
    json duts = json::array();
    for (const auto& d : spec.duts)
        duts.push_back({{"archetype", d.archetype},
                        {"placement_gain", d.placement_gain},
                        {"outage_affected", d.outage_affected},
                        {"on_shaker", d.on_shaker}});
    j["duts"] = duts;
    json pairs = json::array();
    for (auto [a, b] : spec.pairs) pairs.push_back(json::array({a, b}));
    j["pairs"] = pairs;
    json outages = json::array();
    for (auto [s, d] : spec.gnss.outages) outages.push_back(json::array({s, d}));
    j["gnss"] = {{"fix_acquire_delay_s", spec.gnss.fix_acquire_delay},
                 {"rx_jitter_sigma_s", spec.gnss.rx_jitter_sigma},
                 {"outages", outages},
                 {"satellites_in_view", spec.gnss.satellites_in_view}};
    j["vibration"] = vib_to_json(spec.vibration);
    j["thrust"] = {{"period_s", spec.thrust.period},
                   {"pw_low_us", spec.thrust.pw_low},
                   {"pw_high_us", spec.thrust.pw_high},
                   {"active_start_s", spec.thrust.active_start},
                   {"active_duration_s", spec.thrust.active_duration}};
    j["capture"] = {{"fs_hz", spec.capture.fs},
                    {"block_len", spec.capture.block_len},
                    {"snr_db", spec.capture.snr_db},
                    {"noiseless", spec.capture.noiseless},
                    {"pps_threshold", spec.capture.pps_threshold},
                    {"pps_rise_time_s", spec.capture.pps_rise_time},
                    {"noise_floor_s", spec.capture.noise_floor_sigma}};
    j["phase_level"] = spec.phase_level;
    j["emi_transition_kappa"] = spec.emi_transition_kappa;
    return j.dump(2) + "\n";
}

ScenarioSpec spec_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("scenario config: ") + e.what());
    }
    try {
        ScenarioSpec s;
        s.schema_version = j.value("schema_version", 1);
        s.name = j.value("name", "custom");
        s.duration = j.value("duration_s", 0.0);
        s.seed = j.value("seed", std::uint64_t{1});
        s.preroll = j.value("preroll_s", 0.0);
        s.start_locked = j.value("start_locked", false);
        if (j.contains("duts")) {
            for (const auto& dj : j.at("duts")) {
                DutSpec d;
                d.archetype = dj.value("archetype", "");
                d.placement_gain = dj.value("placement_gain", 0.0);
                d.outage_affected = dj.value("outage_affected", false);
                d.on_shaker = dj.value("on_shaker", false);
                s.duts.push_back(d);
            }
        }
        if (j.contains("pairs")) {
            for (const auto& pj : j.at("pairs"))
                s.pairs.emplace_back(pj.at(0).get<std::size_t>(), pj.at(1).get<std::size_t>());
        }
        if (j.contains("gnss")) {
            const json& g = j.at("gnss");
            s.gnss.fix_acquire_delay = g.value("fix_acquire_delay_s", 45.0);
            s.gnss.rx_jitter_sigma = g.value("rx_jitter_sigma_s", 8e-9);
            s.gnss.satellites_in_view = g.value("satellites_in_view", 9);
            if (g.contains("outages"))
                for (const auto& oj : g.at("outages"))
                    s.gnss.outages.emplace_back(oj.at(0).get<double>(), oj.at(1).get<double>());
        }
        if (j.contains("vibration")) s.vibration = vib_from_json(j.at("vibration"));
        if (j.contains("thrust")) {
            const json& t = j.at("thrust");
            s.thrust.period = t.value("period_s", 20.0);
            s.thrust.pw_low = t.value("pw_low_us", 1500.0);
            s.thrust.pw_high = t.value("pw_high_us", 1600.0);
            s.thrust.active_start = t.value("active_start_s", 0.0);
            s.thrust.active_duration = t.value("active_duration_s", 0.0);
        }
        if (j.contains("capture")) {
            const json& c = j.at("capture");
            s.capture.fs = c.value("fs_hz", 100e6);
            s.capture.block_len = c.value("block_len", std::size_t{100000});
            s.capture.snr_db = c.value("snr_db", 40.0);
            s.capture.noiseless = c.value("noiseless", false);
            s.capture.pps_threshold = c.value("pps_threshold", 0.5);
            s.capture.pps_rise_time = c.value("pps_rise_time_s", 1e-6);
            s.capture.noise_floor_sigma = c.value("noise_floor_s", 1e-10);
        }
        s.phase_level = j.value("phase_level", true);
        s.emi_transition_kappa = j.value("emi_transition_kappa", 3.0);
        return s;
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("scenario config: ") + e.what());
    }
}

ScenarioSpec load_spec_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open scenario file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return spec_from_json(ss.str());
}

void save_spec_file(const ScenarioSpec& spec, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write scenario file '" + path + "'");
    out << spec_to_json(spec);
    if (!out) throw IoError("write failed for '" + path + "'");
}

std::string spec_hash(const ScenarioSpec& spec) {
    std::string text = spec_to_json(spec);
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

ScenarioSpec apply_override(const ScenarioSpec& spec, const std::string& dotted_key,
                            const std::string& value) {
    json root = json::parse(spec_to_json(spec));

    std::vector<std::string> tokens;
    std::stringstream ss(dotted_key);
    std::string tok;
    while (std::getline(ss, tok, '.')) tokens.push_back(tok);
    if (tokens.empty()) throw InvalidArgument("--set: empty key");

    json* node = &root;
    for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
        const std::string& t = tokens[i];
        if (!t.empty() && t.find_first_not_of("0123456789") == std::string::npos) {
            auto idx = static_cast<std::size_t>(std::stoull(t));
            if (!node->is_array() || idx >= node->size())
                throw InvalidArgument("--set '" + dotted_key + "': index " + t + " out of range");
            node = &(*node)[idx];
        } else {
            if (!node->is_object() || !node->contains(t))
                throw InvalidArgument("--set '" + dotted_key + "': unknown key '" + t + "'");
            node = &node->at(t);
        }
    }
    const std::string& leaf = tokens.back();
    json parsed;
    try {
        parsed = json::parse(value);
    } catch (const json::exception&) {
        parsed = value; // plain string
    }
    if (!leaf.empty() && leaf.find_first_not_of("0123456789") == std::string::npos) {
        auto idx = static_cast<std::size_t>(std::stoull(leaf));
        if (!node->is_array() || idx >= node->size())
            throw InvalidArgument("--set '" + dotted_key + "': index " + leaf + " out of range");
        (*node)[idx] = parsed;
    } else {
        if (!node->is_object() || !node->contains(leaf))
            throw InvalidArgument("--set '" + dotted_key + "': unknown key '" + leaf + "'");
        (*node)[leaf] = parsed;
    }
    return spec_from_json(root.dump());
}

const std::vector<std::string>& template_names() {
    static const std::vector<std::string> names = {
        "steady_state", "cold_start", "holdover_24h", "shaker_4x10min", "mockup_30min"};
    return names;
}

namespace {

ScenarioSpec base_bench(const std::string& name) {
    ScenarioSpec s;
    s.name = name;
    s.seed = 1;
    s.duts = {{"model-L", 0.0, false, false},
              {"model-L", 0.0, false, false},
              {"model-F", 0.0, false, false},
              {"model-F", 0.0, false, false}};
    s.pairs = {{0, 1}, {2, 3}};
    s.gnss.fix_acquire_delay = 0.0;
    s.gnss.rx_jitter_sigma = 8e-9;
    // Devices have held a fix for three days before the scenario starts.
    s.preroll = 259200.0;
    s.start_locked = true;
    return s;
}

} // namespace

ScenarioSpec make_template(const std::string& name) {
    if (name == "steady_state") {
        ScenarioSpec s = base_bench(name);
        s.duration = 7200.0;
        return s;
    }
    if (name == "cold_start") {
        ScenarioSpec s = base_bench(name);
        s.duration = 7200.0;
        s.preroll = 0.0;
        s.start_locked = false;
        s.gnss.fix_acquire_delay = 45.0;
        return s;
    }
    if (name == "holdover_24h") {
        ScenarioSpec s = base_bench(name);
        s.duration = 95400.0; // steady lead-in + 24 h outage + recovery tail
        s.gnss.outages = {{1800.0, 86400.0}};
        s.duts[0].outage_affected = true;
        s.duts[2].outage_affected = true;
        return s;
    }
    if (name == "shaker_4x10min") {
        ScenarioSpec s = base_bench(name);
        s.duration = 3600.0;
        s.duts[0].on_shaker = true;
        s.duts[2].on_shaker = true;
        // Four sweep+shock repetitions spread over ten minutes.
        for (int rep = 0; rep < 4; ++rep) {
            double t0 = 600.0 + 150.0 * rep;
            s.vibration.segments.push_back(
                {VibrationKind::SineSweep, t0, 100.0, 2.0, 10.0, 500.0});
            s.vibration.segments.push_back(
                {VibrationKind::ShockHalfSine, t0 + 110.0, 0.011, 30.0, 0.0, 0.0});
        }
        return s;
    }
    if (name == "mockup_30min") {
        ScenarioSpec s = base_bench(name);
        s.duration = 3600.0;
        s.duts[0].placement_gain = 1.0;
        s.duts[2].placement_gain = 1.0;
        s.thrust.active_start = 600.0;
        s.thrust.active_duration = 1800.0;
        return s;
    }
    throw InvalidArgument("unknown template '" + name + "'");
}

namespace {

unsigned worker_count(std::size_t n_duts) {
    unsigned n = std::thread::hardware_concurrency();
    if (n == 0) n = 1;
    if (const char* env = std::getenv("GNSSDOBENCH_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1) n = static_cast<unsigned>(v);
    }
    return std::min<unsigned>(n, static_cast<unsigned>(n_duts));
}

struct DutWorkerContext {
    const ScenarioSpec* spec;
    const Archetype* archetype;
    const DutSpec* dut;
    RandomStream base;
    std::size_t n_ticks;
    DutResult* out;
};

void simulate_dut(const DutWorkerContext& ctx) {
    const ScenarioSpec& spec = *ctx.spec;
    const Archetype& arch = *ctx.archetype;
    const DutSpec& ds = *ctx.dut;
    const std::size_t n = ctx.n_ticks;

    GnssTimeline timeline = spec.gnss;
    if (!ds.outage_affected) timeline.outages.clear();
    VibrationProfile vib;
    if (ds.on_shaker) vib = spec.vibration;

    std::vector<double> y_noise = gen_powerlaw_y(arch.osc.noise, n, 1.0, ctx.base.split(0));
    Rng rx_rng(ctx.base.split(1));
    Rng emi_rng(ctx.base.split(2));
    Rng out_pps_rng(ctx.base.split(3));
    Rng out_ten_rng(ctx.base.split(4));
    Rng floor_pps_rng(ctx.base.split(5));
    Rng floor_ten_rng(ctx.base.split(6));

    OscillatorState osc;
    osc.t = spec.preroll;
    DisciplineState dis;
    if (spec.start_locked)
        dis = DisciplineState::locked(arch.discipline, deterministic_y(arch.osc, osc, osc.t));

    DutResult& res = *ctx.out;
    res.archetype = arch.id;
    res.pps_truth.tau0 = res.tenmhz_truth.tau0 = 1.0;
    res.pps_truth.samples.resize(n);
    res.tenmhz_truth.samples.resize(n);
    res.modes.resize(n);

    const bool emi_possible = arch.osc.emi_outlier_rate0 > 0.0 && ds.placement_gain > 0.0;
    bool prev_disturbed = false;

    for (std::size_t k = 0; k < n; ++k) {
        const double ts = static_cast<double>(k);

        auto ref = reference_pps(timeline, k, rx_rng);
        if (ref && res.first_fix_time < 0.0) res.first_fix_time = ts;
        std::optional<double> pps_error;
        if (ref) pps_error = osc.pps_error() - (*ref - ts);

        Mode prev_mode = dis.mode;
        ControlOutput ctl = control_epoch(dis, arch.discipline, pps_error,
                                          static_cast<std::int64_t>(k));
        if (prev_mode != Mode::HOLDOVER && dis.mode == Mode::HOLDOVER)
            trigger_retrace(osc);

        // Record the outputs as they stood for this second's edge; divider
        // steps land on the following edges.
        res.pps_truth.samples[k] = osc.pps_error();
        res.tenmhz_truth.samples[k] = osc.tenmhz_error();
        res.modes[k] = dis.mode;
        osc.pps_offset += ctl.pps_step;

        bool thrust_on = ds.placement_gain > 0.0 &&
                         spec.thrust.activity_at(ts, spec.emi_transition_kappa) > 0.0;
        bool disturbed = thrust_on || vib.active_in(ts, ts + 1.0);
        if (prev_disturbed && !disturbed) trigger_post_exposure_settling(osc);
        prev_disturbed = disturbed;

        double emi_rate = emi_possible
                              ? arch.osc.emi_outlier_rate0 * ds.placement_gain *
                                    spec.thrust.activity_at(ts, spec.emi_transition_kappa)
                              : 0.0;

        if (vib.active_in(ts, ts + 1.0)) {
            double fmax = vib.max_frequency_in(ts, ts + 1.0);
            auto sub = static_cast<std::size_t>(std::ceil(std::max(1.0, 100.0 * fmax)));
            double dt = 1.0 / static_cast<double>(sub);
            for (std::size_t i = 0; i < sub; ++i) {
                double accel = env_acceleration(vib, ts + static_cast<double>(i) * dt);
                step(osc, arch.osc, dt, y_noise[k], accel, ctl.y_cmd, emi_rate, emi_rng);
            }
        } else {
            step(osc, arch.osc, 1.0, y_noise[k], 0.0, ctl.y_cmd, emi_rate, emi_rng);
        }
    }
    res.emi_events = osc.emi_events;

    // Measured series: truth plus output-stage jitter plus the measurement
    // chain's validated noise floor.
    res.pps = res.pps_truth;
    res.tenmhz = res.tenmhz_truth;
    const double floor = spec.capture.noise_floor_sigma;
    for (std::size_t k = 0; k < n; ++k) {
        if (arch.osc.pps_jitter_sigma > 0.0)
            res.pps.samples[k] += arch.osc.pps_jitter_sigma * out_pps_rng.normal();
        if (arch.osc.tenmhz_jitter_sigma > 0.0)
            res.tenmhz.samples[k] += arch.osc.tenmhz_jitter_sigma * out_ten_rng.normal();
        if (floor > 0.0) {
            res.pps.samples[k] += floor * floor_pps_rng.normal();
            res.tenmhz.samples[k] += floor * floor_ten_rng.normal();
        }
    }
}

} // namespace

RunResult run(const ScenarioSpec& spec) {
    spec.validate();

    const auto n = static_cast<std::size_t>(std::llround(spec.duration));
    const std::size_t n_duts = spec.duts.size();

    std::vector<Archetype> archetypes;
    archetypes.reserve(n_duts);
    for (const auto& d : spec.duts) archetypes.push_back(resolve_archetype(d.archetype));

    RunResult rr;
    rr.spec = spec;
    rr.hash = spec_hash(spec);
    rr.duts.resize(n_duts);

    RandomStream root{spec.seed, 0};
    std::vector<DutWorkerContext> contexts(n_duts);
    for (std::size_t d = 0; d < n_duts; ++d) {
        contexts[d] = DutWorkerContext{&spec, &archetypes[d], &spec.duts[d],
                                       root.split(d), n, &rr.duts[d]};
        char label[32];
        std::snprintf(label, sizeof(label), "dut%02zu", d);
        rr.duts[d].pps_truth.label = std::string(label) + "_pps";
        rr.duts[d].tenmhz_truth.label = std::string(label) + "_10mhz";
    }

    unsigned n_workers = worker_count(n_duts);
    if (n_workers <= 1) {
        for (auto& ctx : contexts) simulate_dut(ctx);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::exception_ptr> errors(n_workers);
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < n_workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t d = next.fetch_add(1); d < contexts.size();
                         d = next.fetch_add(1))
                        simulate_dut(contexts[d]);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
        for (auto& t : pool) t.join();
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    }

    for (auto& d : rr.duts) {
        d.pps.label = d.pps_truth.label;
        d.tenmhz.label = d.tenmhz_truth.label;
    }

    for (auto [a, b] : spec.pairs) {
        char label[48];
        std::snprintf(label, sizeof(label), "dut%02zu-dut%02zu", a, b);
        TimeErrorSeries pp = pair_time_error(rr.duts[a].pps, rr.duts[b].pps);
        pp.label = std::string(label) + "_pps";
        rr.pair_pps.push_back(std::move(pp));
        TimeErrorSeries pt = pair_time_error(rr.duts[a].tenmhz, rr.duts[b].tenmhz);
        pt.label = std::string(label) + "_10mhz";
        rr.pair_tenmhz.push_back(std::move(pt));
    }

    rr.accel_g.resize(n);
    rr.thrust_pw.resize(n);
    rr.fix_status.resize(n);
    rr.satellites.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        double ts = static_cast<double>(k);
        rr.accel_g[k] = env_acceleration(spec.vibration, ts);
        rr.thrust_pw[k] = spec.thrust.pulse_width_at(ts);
        rr.fix_status[k] = fix_available(spec.gnss, ts) ? 1 : 0;
        rr.satellites[k] = quality_at(spec.gnss, ts);
    }
    return rr;
}

std::optional<double> usability_time(const RunResult& result, std::size_t dut,
                                     double window, double mtie_budget) {
    if (dut >= result.duts.size())
        throw InvalidArgument("usability_time: device index out of range");
    const DutResult& d = result.duts[dut];
    if (d.first_fix_time < 0.0) return std::nullopt;
    return usability_time(d.tenmhz, d.first_fix_time, window, mtie_budget);
}

} // namespace gdo
