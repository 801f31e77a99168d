#include "core/calibrate.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "core/errors.hpp"
#include "core/metrics.hpp"
#include "core/report.hpp"
#include "core/scenario.hpp"

namespace gdo {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Closed-form holdover drift of the retrace transient:
//   x(t) = y_step tau (1 - e^-u) + drift tau^2 (1 - e^-u (1 + u)),  u = t/tau.
double retrace_drift(const HoldoverRetrace& r, double t) {
    double u = t / r.tau;
    double e = std::exp(-u);
    return r.y_step * r.tau * (1.0 - e) + r.drift_rate * r.tau * r.tau * (1.0 - e * (1.0 + u));
}

double retrace_loss(const HoldoverRetrace& r, const ModelTargets& tg) {
    double loss = 0.0;
    for (std::size_t c = 0; c < kHoldoverCheckpointS.size(); ++c) {
        double x = retrace_drift(r, kHoldoverCheckpointS[c]);
        double target = tg.holdover_max_te_us[c] * 1e-6;
        double d = std::log(std::max(x, 1e-12)) - std::log(target);
        loss += d * d;
    }
    return loss;
}

HoldoverRetrace fit_retrace(const ModelTargets& tg, const HoldoverRetrace& start) {
    HoldoverRetrace best = start;
    double best_loss = retrace_loss(best, tg);

    auto logspace = [](double lo, double hi, int n, int i) {
        return lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
    };

    // Coarse pass over wide ranges, then a refinement pass around the
    // winner.
    for (int pass = 0; pass < 2; ++pass) {
        double tau_lo = pass == 0 ? 5e3 : best.tau / 1.6;
        double tau_hi = pass == 0 ? 8e4 : best.tau * 1.6;
        double ys_lo = pass == 0 ? 5e-12 : std::max(1e-13, best.y_step / 2.0);
        double ys_hi = pass == 0 ? 1e-9 : best.y_step * 2.0;
        double dr_lo = pass == 0 ? 1e-15 : std::max(1e-16, best.drift_rate / 2.0);
        double dr_hi = pass == 0 ? 1e-12 : best.drift_rate * 2.0;
        const int n = pass == 0 ? 14 : 9;
        for (int it = 0; it < n; ++it)
            for (int iy = 0; iy < n; ++iy)
                for (int id = 0; id < n; ++id) {
                    HoldoverRetrace cand{logspace(ys_lo, ys_hi, n, iy),
                                         logspace(dr_lo, dr_hi, n, id),
                                         logspace(tau_lo, tau_hi, n, it)};
                    double loss = retrace_loss(cand, tg);
                    if (loss < best_loss) {
                        best_loss = loss;
                        best = cand;
                    }
                }
    }
    return best;
}

ScenarioSpec single_model_spec(const std::string& id, double duration, bool cold) {
    ScenarioSpec s;
    s.name = "calibration";
    s.duration = duration;
    s.seed = 9001;
    s.duts = {{id, 0.0, false, false}, {id, 0.0, false, false}};
    s.pairs = {{0, 1}};
    if (cold) {
        s.preroll = 0.0;
        s.start_locked = false;
        s.gnss.fix_acquire_delay = 45.0;
    } else {
        s.preroll = 259200.0;
        s.start_locked = true;
        s.gnss.fix_acquire_delay = 0.0;
    }
    return s;
}

struct SteadyMeasurement {
    double pps_sigma = 0.0;
    double pps_mtie = 0.0;
    double tenmhz_mtie = 0.0;
    double tenmhz_single_mtie = 0.0; // one device vs truth, drives usability headroom
};

SteadyMeasurement measure_steady(const Archetype& a, std::uint64_t seed) {
    ScenarioSpec spec = single_model_spec(a.id, 5400.0, false);
    spec.seed = seed;
    // Candidate parameters are injected through an archetype file so the
    // run uses them instead of the built-ins.
    fs::path tmp = fs::temp_directory_path() /
                   ("gdo_cal_" + a.id + "_" + std::to_string(seed) + ".cfg");
    Archetype cand = a;
    cand.id = a.id; // keep targets lookup intact in reports
    save_archetype_file(cand, tmp.string());
    for (auto& d : spec.duts) d.archetype = tmp.string();
    RunResult rr = run(spec);
    fs::remove(tmp);

    SteadyMeasurement m;
    auto m30 = static_cast<std::size_t>(1800);
    m.pps_sigma = summarize(rr.pair_pps[0], 5.0).sigma;
    m.pps_mtie = mtie(rr.pair_pps[0], m30);
    m.tenmhz_mtie = mtie(rr.pair_tenmhz[0], m30);
    m.tenmhz_single_mtie = mtie(rr.duts[0].tenmhz, m30);
    return m;
}

double measure_usability(const Archetype& a, std::uint64_t seed) {
    ScenarioSpec spec = single_model_spec(a.id, 7200.0, true);
    spec.seed = seed;
    fs::path tmp = fs::temp_directory_path() /
                   ("gdo_calw_" + a.id + "_" + std::to_string(seed) + ".cfg");
    save_archetype_file(a, tmp.string());
    for (auto& d : spec.duts) d.archetype = tmp.string();
    RunResult rr = run(spec);
    fs::remove(tmp);
    auto u = usability_time(rr, 0, 1800.0, 25e-9);
    return u ? *u : 1e9;
}

json fit_model(Archetype a) {
    const ModelTargets* tg = targets_for(a.id);
    if (!tg) throw InvalidArgument("calibrate: no targets for archetype '" + a.id + "'");

    json rep;
    rep["id"] = a.id;

    // Holdover retrace from the checkpoint table.
    a.osc.retrace = fit_retrace(*tg, a.osc.retrace);
    rep["retrace"] = {{"y_step", a.osc.retrace.y_step},
                      {"drift_rate", a.osc.retrace.drift_rate},
                      {"tau_s", a.osc.retrace.tau}};
    {
        json cps = json::array();
        for (std::size_t c = 0; c < kHoldoverCheckpointS.size(); ++c)
            cps.push_back({{"at_s", kHoldoverCheckpointS[c]},
                           {"target_s", tg->holdover_max_te_us[c] * 1e-6},
                           {"model_s", retrace_drift(a.osc.retrace, kHoldoverCheckpointS[c])}});
        rep["retrace_fit"] = cps;
    }

    // Output jitters against the steady-state sigma / MTIE targets. The
    // wander floor is measured with jitters off, then the white terms are
    // solved for and verified by simulation.
    {
        Archetype probe = a;
        probe.osc.pps_jitter_sigma = 0.0;
        probe.osc.tenmhz_jitter_sigma = 0.0;
        SteadyMeasurement base = measure_steady(probe, 9001);

        double sigma_target = a.id == "model-L" ? tg->pps_pair_sigma : 0.8 * tg->pps_pair_sigma;
        double var_needed = sigma_target * sigma_target - base.pps_sigma * base.pps_sigma;
        a.osc.pps_jitter_sigma = var_needed > 0.0 ? std::sqrt(var_needed / 2.0) : 0.0;

        // White jitter of N samples spans roughly 7 sigma peak to peak;
        // grid-refine around that first guess.
        double mtie_target = tg->tenmhz_pair_mtie_30min;
        double guess = a.id == "model-L" ? 1.2e-9 : mtie_target / 7.0 / std::sqrt(2.0);
        double best = guess, best_err = 1e300;
        for (double f = 0.5; f <= 2.01; f *= 1.19) {
            Archetype cand = a;
            cand.osc.tenmhz_jitter_sigma = guess * f;
            SteadyMeasurement m = measure_steady(cand, 9001);
            double err;
            if (a.id == "model-L") {
                // Bounded by the usability budget rather than a pair target.
                err = std::fabs(std::log(std::max(m.tenmhz_single_mtie, 1e-12) / 12e-9));
            } else {
                err = std::fabs(std::log(std::max(m.tenmhz_mtie, 1e-12) / mtie_target));
            }
            if (err < best_err) {
                best_err = err;
                best = guess * f;
            }
        }
        a.osc.tenmhz_jitter_sigma = best;

        SteadyMeasurement fin = measure_steady(a, 9001);
        rep["steady"] = {{"pps_jitter_s", a.osc.pps_jitter_sigma},
                         {"tenmhz_jitter_s", a.osc.tenmhz_jitter_sigma},
                         {"pps_pair_sigma_s", fin.pps_sigma},
                         {"pps_pair_mtie_30min_s", fin.pps_mtie},
                         {"tenmhz_pair_mtie_30min_s", fin.tenmhz_mtie},
                         {"tenmhz_single_mtie_30min_s", fin.tenmhz_single_mtie}};
    }

    // Warm-up settling against the usability band.
    {
        double target = std::sqrt(tg->usability_lo_min * tg->usability_hi_min) * 60.0;
        double best_err = 1e300;
        WarmupModel best = a.osc.warmup;
        for (double amp_f = 0.5; amp_f <= 2.01; amp_f *= 1.41)
            for (double tau_f = 0.6; tau_f <= 1.7; tau_f *= 1.3) {
                Archetype cand = a;
                cand.osc.warmup.amplitude = a.osc.warmup.amplitude * amp_f;
                cand.osc.warmup.tau = a.osc.warmup.tau * tau_f;
                double u = measure_usability(cand, 9001);
                double err = std::fabs(std::log(std::max(u, 1.0) / target));
                if (err < best_err) {
                    best_err = err;
                    best = cand.osc.warmup;
                }
            }
        a.osc.warmup = best;
        double u = measure_usability(a, 9001);
        rep["warmup"] = {{"amplitude", a.osc.warmup.amplitude},
                         {"tau_s", a.osc.warmup.tau},
                         {"usability_time_s", u},
                         {"target_band_min", {tg->usability_lo_min, tg->usability_hi_min}}};
    }

    rep["archetype"] = json::parse(archetype_to_json(a));
    return rep;
}

} // namespace

std::string calibrate(const std::string& model, const std::string& out_dir) {
    std::vector<std::string> ids;
    if (model == "all") {
        ids = {"model-F", "model-L"};
    } else if (model == "model-F" || model == "model-L") {
        ids = {model};
    } else {
        throw InvalidArgument("calibrate: model must be model-F, model-L or all");
    }

    fs::path dir(out_dir);
    std::error_code ec;
    fs::path parent = dir.parent_path();
    if (!parent.empty() && !fs::exists(parent))
        throw IoError("parent directory '" + parent.string() + "' does not exist");
    fs::create_directory(dir, ec);
    if (ec || !fs::is_directory(dir))
        throw IoError("cannot create output directory '" + out_dir + "'");

    json rep;
    rep["schema_version"] = 1;
    rep["version"] = kVersionString;
    json fits = json::array();
    for (const auto& id : ids) {
        json f = fit_model(resolve_archetype(id));
        Archetype fitted = archetype_from_json(f["archetype"].dump());
        save_archetype_file(fitted, (dir / (id + ".cfg")).string());
        fits.push_back(f);
    }
    rep["models"] = fits;
    std::string payload = rep.dump(2) + "\n";
    std::ofstream out(dir / "calibration_report.json");
    if (!out) throw IoError("cannot write calibration_report.json");
    out << payload;
    return payload;
}

} // namespace gdo
