#include "core/archetype.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "core/errors.hpp"

namespace gdo {

using nlohmann::json;

namespace {

Archetype make_model_f() {
    Archetype a;
    a.id = "model-F";
    a.osc.f0 = 10e6;
    a.osc.noise = NoiseModel{0.0, 0.0, 3.0e-21, 3.0e-24, 1.0e-27};
    a.osc.warmup = WarmupModel{1.2e-9, 130.0, 6.0e-10};
    a.osc.aging = AgingModel{1.0e-15};
    a.osc.retrace = HoldoverRetrace{6.0e-11, 2.1e-14, 43000.0};
    a.osc.gamma = 1.0e-9;
    a.osc.emi_outlier_rate0 = 0.0;
    a.osc.emi_outlier_scale = 0.0;
    a.osc.post_exposure_settling = WarmupModel{0.0, 200.0, 0.0};
    a.osc.pps_jitter_sigma = 0.7e-9;
    a.osc.tenmhz_jitter_sigma = 1.8e-9;
    a.discipline.kp = 5.0e-3;
    a.discipline.ki = 6.25e-6;
    a.discipline.slew_max = 1.0e-6;
    a.discipline.lock_threshold = 100e-9;
    a.discipline.lock_count = 30;
    a.discipline.pps_step_threshold = 5.0e-7;
    return a;
}

Archetype make_model_l() {
    Archetype a;
    a.id = "model-L";
    a.osc.f0 = 10e6;
    a.osc.noise = NoiseModel{0.0, 0.0, 4.0e-21, 1.0e-23, 2.0e-27};
    a.osc.warmup = WarmupModel{6.0e-9, 340.0, 1.5e-9};
    a.osc.aging = AgingModel{2.0e-15};
    a.osc.retrace = HoldoverRetrace{1.1e-10, 2.3e-13, 14000.0};
    a.osc.gamma = 2.0e-9;
    a.osc.emi_outlier_rate0 = 0.02;
    a.osc.emi_outlier_scale = 60e-9;
    a.osc.post_exposure_settling = WarmupModel{1.5e-9, 200.0, 0.0};
    a.osc.pps_jitter_sigma = 19e-9;
    a.osc.tenmhz_jitter_sigma = 1.0e-9;
    a.discipline.kp = 5.0e-3;
    a.discipline.ki = 6.25e-6;
    a.discipline.slew_max = 1.0e-6;
    a.discipline.lock_threshold = 200e-9;
    a.discipline.lock_count = 30;
    a.discipline.pps_step_threshold = 5.0e-7;
    return a;
}

json warmup_to_json(const WarmupModel& w) {
    return json{{"amplitude", w.amplitude}, {"tau_s", w.tau}, {"y_cold", w.y_cold}};
}

WarmupModel warmup_from_json(const json& j) {
    WarmupModel w;
    w.amplitude = j.at("amplitude").get<double>();
    w.tau = j.at("tau_s").get<double>();
    w.y_cold = j.value("y_cold", 0.0);
    return w;
}

} // namespace

const std::vector<Archetype>& builtin_archetypes() {
    static const std::vector<Archetype> models = {make_model_f(), make_model_l()};
    return models;
}

Archetype resolve_archetype(const std::string& id) {
    for (const auto& a : builtin_archetypes())
        if (a.id == id) return a;
    if (id.find('.') != std::string::npos || id.find('/') != std::string::npos)
        return load_archetype_file(id);
    throw InvalidArgument("unknown archetype '" + id + "' (built-in: model-F, model-L)");
}

std::string archetype_to_json(const Archetype& a) {
    json j;
    j["schema_version"] = 1;
    j["id"] = a.id;
    json osc;
    osc["f0_hz"] = a.osc.f0;
    osc["noise"] = {{"h2", a.osc.noise.h2},
                    {"h1", a.osc.noise.h1},
                    {"h0", a.osc.noise.h0},
                    {"hm1", a.osc.noise.hm1},
                    {"hm2", a.osc.noise.hm2}};
    osc["warmup"] = warmup_to_json(a.osc.warmup);
    osc["aging_rate"] = a.osc.aging.rate;
    osc["retrace"] = {{"y_step", a.osc.retrace.y_step},
                      {"drift_rate", a.osc.retrace.drift_rate},
                      {"tau_s", a.osc.retrace.tau}};
    osc["gamma_per_g"] = a.osc.gamma;
    osc["emi"] = {{"rate0_hz", a.osc.emi_outlier_rate0}, {"scale_s", a.osc.emi_outlier_scale}};
    osc["post_exposure_settling"] = warmup_to_json(a.osc.post_exposure_settling);
    osc["pps_jitter_s"] = a.osc.pps_jitter_sigma;
    osc["tenmhz_jitter_s"] = a.osc.tenmhz_jitter_sigma;
    j["oscillator"] = osc;
    j["discipline"] = {{"kp", a.discipline.kp},
                       {"ki", a.discipline.ki},
                       {"slew_max", a.discipline.slew_max},
                       {"lock_threshold_s", a.discipline.lock_threshold},
                       {"lock_count", a.discipline.lock_count},
                       {"pps_step_threshold_s", a.discipline.pps_step_threshold}};
    return j.dump(2) + "\n";
}

Archetype archetype_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("archetype config: ") + e.what());
    }
    try {
        Archetype a;
        a.id = j.at("id").get<std::string>();
        const json& osc = j.at("oscillator");
        a.osc.f0 = osc.value("f0_hz", 10e6);
        const json& n = osc.at("noise");
        a.osc.noise = NoiseModel{n.value("h2", 0.0), n.value("h1", 0.0), n.value("h0", 0.0),
                                 n.value("hm1", 0.0), n.value("hm2", 0.0)};
        a.osc.warmup = warmup_from_json(osc.at("warmup"));
        a.osc.aging.rate = osc.value("aging_rate", 0.0);
        if (osc.contains("retrace")) {
            const json& r = osc.at("retrace");
            a.osc.retrace = HoldoverRetrace{r.value("y_step", 0.0), r.value("drift_rate", 0.0),
                                            r.value("tau_s", 1.0)};
        }
        a.osc.gamma = osc.value("gamma_per_g", 0.0);
        if (osc.contains("emi")) {
            a.osc.emi_outlier_rate0 = osc.at("emi").value("rate0_hz", 0.0);
            a.osc.emi_outlier_scale = osc.at("emi").value("scale_s", 0.0);
        }
        if (osc.contains("post_exposure_settling"))
            a.osc.post_exposure_settling = warmup_from_json(osc.at("post_exposure_settling"));
        a.osc.pps_jitter_sigma = osc.value("pps_jitter_s", 0.0);
        a.osc.tenmhz_jitter_sigma = osc.value("tenmhz_jitter_s", 0.0);
        const json& d = j.at("discipline");
        a.discipline.kp = d.at("kp").get<double>();
        a.discipline.ki = d.at("ki").get<double>();
        a.discipline.slew_max = d.value("slew_max", 1e-6);
        a.discipline.lock_threshold = d.value("lock_threshold_s", 100e-9);
        a.discipline.lock_count = d.value("lock_count", 30);
        a.discipline.pps_step_threshold = d.value("pps_step_threshold_s", 5e-7);
        return a;
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("archetype config: ") + e.what());
    }
}

Archetype load_archetype_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open archetype file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return archetype_from_json(ss.str());
}

void save_archetype_file(const Archetype& a, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write archetype file '" + path + "'");
    out << archetype_to_json(a);
    if (!out) throw IoError("write failed for '" + path + "'");
}

const ModelTargets* targets_for(const std::string& archetype_id) {
    static const ModelTargets model_f{1e-9,
                                      10e-9,
                                      25e-9,
                                      {0.1, 0.2, 0.2, 1.1, 10.4, 21.9},
                                      5.0,
                                      30.0};
    static const ModelTargets model_l{28e-9,
                                      100e-9,
                                      100e-9,
                                      {0.2, 0.3, 2.9, 13.4, 40.9, 41.3},
                                      20.0,
                                      60.0};
    if (archetype_id == "model-F") return &model_f;
    if (archetype_id == "model-L") return &model_l;
    return nullptr;
}

} // namespace gdo
