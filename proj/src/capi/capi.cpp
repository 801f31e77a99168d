#include "gnssdobench.h"

#include <cstring>
#include <new>
#include <string>

#include "core/calibrate.hpp"
#include "core/csv.hpp"
#include "core/errors.hpp"
#include "core/metrics.hpp"
#include "core/report.hpp"
#include "core/scenario.hpp"

using namespace gdo;

struct gnb_spec {
    ScenarioSpec spec;
};
struct gnb_run {
    RunResult result;
};
struct gnb_series {
    TimeErrorSeries series;
};

namespace {

thread_local std::string g_last_error;

gnb_status fail(gnb_status code, const std::string& msg) {
    g_last_error = msg;
    return code;
}

// Translates core exceptions into status codes; used by every wrapper.
template <typename Fn>
gnb_status guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const IoError& e) {
        return fail(GNB_IO_ERROR, e.what());
    } catch (const InvalidArgument& e) {
        return fail(GNB_INVALID_ARGUMENT, e.what());
    } catch (const SimulationFault& e) {
        return fail(GNB_INTERNAL_ERROR, e.what());
    } catch (const std::bad_alloc&) {
        return fail(GNB_INTERNAL_ERROR, "out of memory");
    } catch (const std::exception& e) {
        return fail(GNB_INTERNAL_ERROR, e.what());
    }
}

gnb_status require(bool ok, const char* what) {
    return ok ? GNB_OK : fail(GNB_INVALID_ARGUMENT, what);
}

char* dup_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

const TimeErrorSeries* select_series(const DutResult& d, gnb_signal signal) {
    return signal == GNB_SIGNAL_PPS ? &d.pps : &d.tenmhz;
}

} // namespace

extern "C" {

const char* gnb_version(void) { return kVersionString; }

const char* gnb_last_error(void) { return g_last_error.c_str(); }

void gnb_string_free(char* s) { delete[] s; }

/* -- spec ----------------------------------------------------------------- */

gnb_status gnb_spec_template(const char* name, gnb_spec** out) {
    if (auto st = require(name && out, "gnb_spec_template: null argument")) return st;
    return guarded([&] {
        *out = new gnb_spec{make_template(name)};
        return GNB_OK;
    });
}

gnb_status gnb_spec_load(const char* path, gnb_spec** out) {
    if (auto st = require(path && out, "gnb_spec_load: null argument")) return st;
    return guarded([&] {
        *out = new gnb_spec{load_spec_file(path)};
        return GNB_OK;
    });
}

gnb_status gnb_spec_save(const gnb_spec* spec, const char* path) {
    if (auto st = require(spec && path, "gnb_spec_save: null argument")) return st;
    return guarded([&] {
        save_spec_file(spec->spec, path);
        return GNB_OK;
    });
}

gnb_status gnb_spec_set_seed(gnb_spec* spec, uint64_t seed) {
    if (auto st = require(spec != nullptr, "gnb_spec_set_seed: null spec")) return st;
    spec->spec.seed = seed;
    return GNB_OK;
}

gnb_status gnb_spec_set(gnb_spec* spec, const char* dotted_key, const char* value) {
    if (auto st = require(spec && dotted_key && value, "gnb_spec_set: null argument"))
        return st;
    return guarded([&] {
        spec->spec = apply_override(spec->spec, dotted_key, value);
        return GNB_OK;
    });
}

gnb_status gnb_spec_json(const gnb_spec* spec, char** json_out) {
    if (auto st = require(spec && json_out, "gnb_spec_json: null argument")) return st;
    return guarded([&] {
        *json_out = dup_string(spec_to_json(spec->spec));
        return GNB_OK;
    });
}

gnb_status gnb_spec_validate(const gnb_spec* spec) {
    if (auto st = require(spec != nullptr, "gnb_spec_validate: null spec")) return st;
    return guarded([&] {
        spec->spec.validate();
        return GNB_OK;
    });
}

void gnb_spec_free(gnb_spec* spec) { delete spec; }

/* -- run ------------------------------------------------------------------ */

gnb_status gnb_run_scenario(const gnb_spec* spec, gnb_run** out) {
    if (auto st = require(spec && out, "gnb_run_scenario: null argument")) return st;
    return guarded([&] {
        *out = new gnb_run{run(spec->spec)};
        return GNB_OK;
    });
}

gnb_status gnb_run_write_archive(const gnb_run* r, const char* out_dir) {
    if (auto st = require(r && out_dir, "gnb_run_write_archive: null argument")) return st;
    return guarded([&] {
        write_archive(r->result, out_dir);
        return GNB_OK;
    });
}

gnb_status gnb_run_report(const gnb_run* r, char** json_out) {
    if (auto st = require(r && json_out, "gnb_run_report: null argument")) return st;
    return guarded([&] {
        *json_out = dup_string(build_report_json(r->result));
        return GNB_OK;
    });
}

gnb_status gnb_run_dut_count(const gnb_run* r, size_t* out) {
    if (auto st = require(r && out, "gnb_run_dut_count: null argument")) return st;
    *out = r->result.duts.size();
    return GNB_OK;
}

gnb_status gnb_run_dut_series(const gnb_run* r, size_t dut, gnb_signal signal,
                              gnb_series** out) {
    if (auto st = require(r && out, "gnb_run_dut_series: null argument")) return st;
    if (dut >= r->result.duts.size())
        return fail(GNB_INVALID_ARGUMENT, "gnb_run_dut_series: device index out of range");
    return guarded([&] {
        *out = new gnb_series{*select_series(r->result.duts[dut], signal)};
        return GNB_OK;
    });
}

gnb_status gnb_run_pair_count(const gnb_run* r, size_t* out) {
    if (auto st = require(r && out, "gnb_run_pair_count: null argument")) return st;
    *out = r->result.pair_pps.size();
    return GNB_OK;
}

gnb_status gnb_run_pair_series(const gnb_run* r, size_t pair, gnb_signal signal,
                               gnb_series** out) {
    if (auto st = require(r && out, "gnb_run_pair_series: null argument")) return st;
    if (pair >= r->result.pair_pps.size())
        return fail(GNB_INVALID_ARGUMENT, "gnb_run_pair_series: pair index out of range");
    return guarded([&] {
        const TimeErrorSeries& s = signal == GNB_SIGNAL_PPS ? r->result.pair_pps[pair]
                                                            : r->result.pair_tenmhz[pair];
        *out = new gnb_series{s};
        return GNB_OK;
    });
}

void gnb_run_free(gnb_run* r) { delete r; }

/* -- series / metrics ------------------------------------------------------ */

gnb_status gnb_series_load_csv(const char* path, gnb_series** out) {
    if (auto st = require(path && out, "gnb_series_load_csv: null argument")) return st;
    return guarded([&] {
        *out = new gnb_series{read_series_csv(path)};
        return GNB_OK;
    });
}

gnb_status gnb_series_save_csv(const gnb_series* series, const char* path) {
    if (auto st = require(series && path, "gnb_series_save_csv: null argument")) return st;
    return guarded([&] {
        write_series_csv(series->series, path);
        return GNB_OK;
    });
}

gnb_status gnb_series_length(const gnb_series* series, size_t* out) {
    if (auto st = require(series && out, "gnb_series_length: null argument")) return st;
    *out = series->series.size();
    return GNB_OK;
}

gnb_status gnb_series_tau0(const gnb_series* series, double* out) {
    if (auto st = require(series && out, "gnb_series_tau0: null argument")) return st;
    *out = series->series.tau0;
    return GNB_OK;
}

gnb_status gnb_series_label(const gnb_series* series, char** out) {
    if (auto st = require(series && out, "gnb_series_label: null argument")) return st;
    *out = dup_string(series->series.label);
    return GNB_OK;
}

gnb_status gnb_series_values(const gnb_series* series, double* buf, size_t buflen) {
    if (auto st = require(series && buf, "gnb_series_values: null argument")) return st;
    size_t n = std::min(buflen, series->series.size());
    std::memcpy(buf, series->series.samples.data(), n * sizeof(double));
    return GNB_OK;
}

void gnb_series_free(gnb_series* series) { delete series; }

gnb_status gnb_metric_adev(const gnb_series* series, size_t m, double* out) {
    if (auto st = require(series && out, "gnb_metric_adev: null argument")) return st;
    return guarded([&] {
        *out = overlapping_adev(series->series, m);
        return GNB_OK;
    });
}

gnb_status gnb_metric_tie_rms(const gnb_series* series, size_t m, double* out) {
    if (auto st = require(series && out, "gnb_metric_tie_rms: null argument")) return st;
    return guarded([&] {
        *out = tie_rms(series->series, m);
        return GNB_OK;
    });
}

gnb_status gnb_metric_mtie(const gnb_series* series, size_t m, double* out) {
    if (auto st = require(series && out, "gnb_metric_mtie: null argument")) return st;
    return guarded([&] {
        *out = mtie(series->series, m);
        return GNB_OK;
    });
}

gnb_status gnb_summary(const gnb_series* series, double k_mad, double* mean, double* sigma,
                       double* max_abs, size_t* outlier_count, double* threshold) {
    if (auto st = require(series != nullptr, "gnb_summary: null series")) return st;
    return guarded([&] {
        SummaryStats st = summarize(series->series, k_mad);
        if (mean) *mean = st.mean;
        if (sigma) *sigma = st.sigma;
        if (max_abs) *max_abs = st.max_abs;
        if (outlier_count) *outlier_count = st.outlier_count;
        if (threshold) *threshold = st.outlier_threshold;
        return GNB_OK;
    });
}

/* -- high level ------------------------------------------------------------ */

gnb_status gnb_analyze_files(const char* const* csv_paths, size_t n_paths,
                             const char* tau_grid, int coldstart, const char* out_dir,
                             char** report_json_out) {
    if (auto st = require(csv_paths && out_dir, "gnb_analyze_files: null argument"))
        return st;
    return guarded([&] {
        std::vector<std::string> paths(csv_paths, csv_paths + n_paths);
        AnalyzeOptions opts;
        if (tau_grid) opts.tau_grid = tau_grid;
        opts.coldstart = coldstart != 0;
        std::string rep = analyze_files(paths, opts, out_dir);
        if (report_json_out) *report_json_out = dup_string(rep);
        return GNB_OK;
    });
}

gnb_status gnb_validate_chain(double snr_db, int noiseless, double duration_s,
                              char** report_json_out, double* rms_out) {
    return guarded([&]() -> gnb_status {
        CaptureConfig cfg;
        cfg.snr_db = snr_db;
        cfg.noiseless = noiseless != 0;
        bool passed = false;
        double rms = 0.0;
        std::string rep = validate_chain_report(cfg, duration_s, 1, &passed, &rms);
        if (report_json_out) *report_json_out = dup_string(rep);
        if (rms_out) *rms_out = rms;
        if (!passed)
            return fail(GNB_CRITERION_FAILED,
                        "measurement-chain round-trip RMS " + format_double(rms) +
                            " s exceeds the criterion");
        return GNB_OK;
    });
}

gnb_status gnb_calibrate(const char* model, const char* out_dir, char** report_json_out) {
    if (auto st = require(model && out_dir, "gnb_calibrate: null argument")) return st;
    return guarded([&] {
        std::string rep = calibrate(model, out_dir);
        if (report_json_out) *report_json_out = dup_string(rep);
        return GNB_OK;
    });
}

} // extern "C"
