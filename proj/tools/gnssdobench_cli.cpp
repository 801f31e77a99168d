// gnssdobench command line front end. All domain work happens behind the
// C API in libgnssdobench; this file only parses arguments, moves JSON
// around and prints tables.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gnssdobench.h"

namespace {

using nlohmann::json;

int report_error(gnb_status status, const char* what) {
    std::cerr << "gnssdobench: " << what << ": " << gnb_last_error() << "\n";
    return static_cast<int>(status);
}

std::string take_string(char* s) {
    std::string out = s ? s : "";
    gnb_string_free(s);
    return out;
}

struct SpecHandle {
    gnb_spec* spec = nullptr;
    ~SpecHandle() { gnb_spec_free(spec); }
};

struct RunHandle {
    gnb_run* run = nullptr;
    ~RunHandle() { gnb_run_free(run); }
};

void print_target_comparison(const json& report) {
    if (!report.contains("target_comparison")) return;
    const json& rows = report["target_comparison"];
    if (rows.empty()) return;
    std::printf("%-28s %-10s %12s %12s  %s\n", "check", "archetype", "target", "measured",
                "result");
    for (const auto& r : rows) {
        std::printf("%-28s %-10s %12.3e %12.3e  %s\n",
                    r.value("name", "").c_str(), r.value("archetype", "").c_str(),
                    r.value("target", 0.0), r.value("measured", 0.0),
                    r.value("pass", false) ? "pass" : "FAIL");
    }
}

void print_run_summary(const json& report) {
    std::printf("template: %s  seed: %llu  spec-hash: %s\n",
                report.value("template", "?").c_str(),
                static_cast<unsigned long long>(report.value("seed", 0ULL)),
                report.value("spec_hash", "?").c_str());
    if (report.contains("pairs")) {
        for (const auto& p : report["pairs"]) {
            const json& pps = p["pps_summary"];
            const json& ten = p["tenmhz_summary"];
            std::printf("pair %-18s pps sigma %.3e s (outliers %llu)   10mhz sigma %.3e s\n",
                        p.value("label", "?").c_str(), pps.value("sigma_s", 0.0),
                        static_cast<unsigned long long>(pps.value("outlier_count", 0ULL)),
                        ten.value("sigma_s", 0.0));
        }
    }
    if (report.contains("holdover")) {
        for (const auto& h : report["holdover"]) {
            std::printf("holdover dut%02llu (%s): max |10 MHz te|",
                        static_cast<unsigned long long>(h.value("dut", 0ULL)),
                        h.value("archetype", "?").c_str());
            for (const auto& c : h["checkpoints"])
                std::printf("  %.0fs: %.2e", c.value("at_s", 0.0), c.value("max_te_s", 0.0));
            std::printf("\n");
        }
    }
    print_target_comparison(report);
}

int cmd_simulate(const std::string& template_name, const std::string& spec_file,
                 std::uint64_t seed, bool seed_given,
                 const std::vector<std::string>& overrides, const std::string& out_dir) {
    SpecHandle h;
    gnb_status st;
    if (!template_name.empty()) {
        st = gnb_spec_template(template_name.c_str(), &h.spec);
    } else {
        st = gnb_spec_load(spec_file.c_str(), &h.spec);
    }
    if (st != GNB_OK) return report_error(st, "loading scenario");

    if (seed_given) gnb_spec_set_seed(h.spec, seed);
    for (const auto& ov : overrides) {
        auto eq = ov.find('=');
        if (eq == std::string::npos) {
            std::cerr << "gnssdobench: --set expects key=value, got '" << ov << "'\n";
            return 2;
        }
        st = gnb_spec_set(h.spec, ov.substr(0, eq).c_str(), ov.substr(eq + 1).c_str());
        if (st != GNB_OK) return report_error(st, "applying --set");
    }

    if ((st = gnb_spec_validate(h.spec)) != GNB_OK)
        return report_error(st, "invalid scenario");

    RunHandle r;
    if ((st = gnb_run_scenario(h.spec, &r.run)) != GNB_OK)
        return report_error(st, "running scenario");
    if ((st = gnb_run_write_archive(r.run, out_dir.c_str())) != GNB_OK)
        return report_error(st, "writing archive");

    char* rep_text = nullptr;
    if ((st = gnb_run_report(r.run, &rep_text)) != GNB_OK)
        return report_error(st, "building report");
    json report = json::parse(take_string(rep_text));
    print_run_summary(report);
    std::printf("archive: %s\n", out_dir.c_str());
    return 0;
}

int cmd_analyze(const std::vector<std::string>& inputs, const std::string& tau_grid,
                bool coldstart, const std::string& out_dir) {
    std::vector<const char*> paths;
    paths.reserve(inputs.size());
    for (const auto& s : inputs) paths.push_back(s.c_str());

    char* rep_text = nullptr;
    gnb_status st = gnb_analyze_files(paths.data(), paths.size(), tau_grid.c_str(),
                                      coldstart ? 1 : 0, out_dir.c_str(), &rep_text);
    if (st != GNB_OK) return report_error(st, "analyze");

    json report = json::parse(take_string(rep_text));
    for (const auto& in : report["inputs"]) {
        const json& s = in["summary"];
        std::printf("%-40s n=%-8llu sigma %.3e s  max %.3e s  outliers %llu\n",
                    in.value("label", "?").c_str(),
                    static_cast<unsigned long long>(in.value("n", 0ULL)),
                    s.value("sigma_s", 0.0), s.value("max_abs_s", 0.0),
                    static_cast<unsigned long long>(s.value("outlier_count", 0ULL)));
        if (coldstart) {
            if (in.contains("usability_time_s") && !in["usability_time_s"].is_null())
                std::printf("  usability: %.0f s after first fix\n",
                            in["usability_time_s"].get<double>());
            else
                std::printf("  usability: not usable within the record\n");
        }
    }
    std::printf("report: %s/report.json\n", out_dir.c_str());
    return 0;
}

int cmd_validate_chain(double snr_db, bool noiseless, double duration,
                       const std::string& out_file) {
    char* rep_text = nullptr;
    double rms = 0.0;
    gnb_status st =
        gnb_validate_chain(snr_db, noiseless ? 1 : 0, duration, &rep_text, &rms);
    std::string rep = take_string(rep_text);

    if (!out_file.empty()) {
        std::ofstream out(out_file);
        if (!out) {
            std::cerr << "gnssdobench: cannot write '" << out_file << "'\n";
            return 3;
        }
        out << rep;
    } else {
        std::cout << rep;
    }

    if (st == GNB_OK) {
        std::printf("PASS: round-trip RMS %.3e s\n", rms);
        return 0;
    }
    if (st == GNB_CRITERION_FAILED) {
        std::printf("FAIL: round-trip RMS %.3e s\n", rms);
        return 1;
    }
    return report_error(st, "validate-chain");
}

int cmd_calibrate(const std::string& model, const std::string& out_dir) {
    char* rep_text = nullptr;
    gnb_status st = gnb_calibrate(model.c_str(), out_dir.c_str(), &rep_text);
    if (st != GNB_OK) return report_error(st, "calibrate");
    json report = json::parse(take_string(rep_text));
    for (const auto& m : report["models"])
        std::printf("calibrated %s -> %s/%s.cfg\n", m.value("id", "?").c_str(),
                    out_dir.c_str(), m.value("id", "?").c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"GNSS-disciplined oscillator bench simulator"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(gnb_version()));

    // simulate
    std::string template_name, spec_file, out_dir;
    std::uint64_t seed = 0;
    std::vector<std::string> overrides;
    auto* sim = app.add_subcommand("simulate", "run a scenario and write a run archive");
    auto* opt_template = sim->add_option("--template", template_name,
                                         "scenario template (steady_state, cold_start, "
                                         "holdover_24h, shaker_4x10min, mockup_30min)");
    auto* opt_spec = sim->add_option("--spec", spec_file, "scenario config file");
    auto* opt_seed = sim->add_option("--seed", seed, "random seed");
    sim->add_option("--set", overrides, "override a spec field: dotted.path=value");
    sim->add_option("-o,--out", out_dir, "output archive directory")->required();
    opt_template->excludes(opt_spec);

    // analyze
    std::vector<std::string> inputs;
    std::string tau_grid = "octave";
    bool coldstart = false;
    std::string analyze_out;
    auto* ana = app.add_subcommand("analyze", "compute stability metrics for series CSVs");
    ana->add_option("inputs", inputs, "series CSV files")->required()->expected(-1);
    ana->add_option("--tau-grid", tau_grid, "octave, decade, or comma list of seconds");
    ana->add_flag("--coldstart", coldstart, "report usability time after first fix");
    ana->add_option("-o,--out", analyze_out, "output directory")->required();

    // validate-chain
    double snr_db = 40.0, duration = 10.0;
    bool noiseless = false;
    std::string chain_out;
    auto* chain = app.add_subcommand("validate-chain",
                                     "measurement-chain round-trip fidelity check");
    chain->add_option("--snr", snr_db, "additive noise level, dB (default 40)");
    chain->add_flag("--noiseless", noiseless, "disable additive noise");
    chain->add_option("--duration", duration, "seconds of signal (default 10)");
    chain->add_option("-o,--out", chain_out, "write the JSON report to a file");

    // calibrate
    std::string model = "all";
    std::string cal_out = "archetypes";
    auto* cal = app.add_subcommand("calibrate", "fit archetype files to the reference targets");
    cal->add_option("--model", model, "model-F, model-L or all (default all)");
    cal->add_option("-o,--out", cal_out, "output directory (default archetypes)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (sim->parsed()) {
        if (template_name.empty() && spec_file.empty()) {
            std::cerr << "gnssdobench: simulate needs --template or --spec\n";
            return 2;
        }
        return cmd_simulate(template_name, spec_file, seed, opt_seed->count() > 0, overrides,
                            out_dir);
    }
    if (ana->parsed()) return cmd_analyze(inputs, tau_grid, coldstart, analyze_out);
    if (chain->parsed()) return cmd_validate_chain(snr_db, noiseless, duration, chain_out);
    if (cal->parsed()) return cmd_calibrate(model, cal_out);
    return 2;
}
