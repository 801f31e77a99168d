/*
 * gnssdobench — C API of the GNSS-disciplined-oscillator bench simulator.
 *
 * All entry points return a gnb_status; any non-OK status leaves a
 * human-readable detail string in gnb_last_error() (thread-local).
 * Objects returned through out-parameters are owned by the caller and
 * released with the matching *_free function. Strings returned through
 * char** out-parameters are released with gnb_string_free.
 */
#ifndef GNSSDOBENCH_H
#define GNSSDOBENCH_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define GNB_API __declspec(dllexport)
#else
#define GNB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes double as CLI exit codes. */
typedef enum gnb_status {
    GNB_OK = 0,
    GNB_CRITERION_FAILED = 1, /* a validation criterion did not pass */
    GNB_INVALID_ARGUMENT = 2, /* malformed input, bad config, bad value */
    GNB_IO_ERROR = 3,         /* filesystem / environment failure */
    GNB_INTERNAL_ERROR = 4
} gnb_status;

typedef enum gnb_signal {
    GNB_SIGNAL_PPS = 0,
    GNB_SIGNAL_TENMHZ = 1
} gnb_signal;

typedef struct gnb_spec gnb_spec;     /* scenario specification */
typedef struct gnb_run gnb_run;       /* completed simulation run */
typedef struct gnb_series gnb_series; /* time-error series */

GNB_API const char* gnb_version(void);
GNB_API const char* gnb_last_error(void);
GNB_API void gnb_string_free(char* s);

/* -- scenario specs ----------------------------------------------------- */

GNB_API gnb_status gnb_spec_template(const char* name, gnb_spec** out);
GNB_API gnb_status gnb_spec_load(const char* path, gnb_spec** out);
GNB_API gnb_status gnb_spec_save(const gnb_spec* spec, const char* path);
GNB_API gnb_status gnb_spec_set_seed(gnb_spec* spec, uint64_t seed);
/* Dotted-path override into the JSON form, e.g. "duts.0.placement_gain". */
GNB_API gnb_status gnb_spec_set(gnb_spec* spec, const char* dotted_key, const char* value);
GNB_API gnb_status gnb_spec_json(const gnb_spec* spec, char** json_out);
GNB_API gnb_status gnb_spec_validate(const gnb_spec* spec);
GNB_API void gnb_spec_free(gnb_spec* spec);

/* -- runs ---------------------------------------------------------------- */

GNB_API gnb_status gnb_run_scenario(const gnb_spec* spec, gnb_run** out);
GNB_API gnb_status gnb_run_write_archive(const gnb_run* run, const char* out_dir);
GNB_API gnb_status gnb_run_report(const gnb_run* run, char** json_out);
GNB_API gnb_status gnb_run_dut_count(const gnb_run* run, size_t* out);
GNB_API gnb_status gnb_run_dut_series(const gnb_run* run, size_t dut, gnb_signal signal,
                                      gnb_series** out);
GNB_API gnb_status gnb_run_pair_count(const gnb_run* run, size_t* out);
GNB_API gnb_status gnb_run_pair_series(const gnb_run* run, size_t pair, gnb_signal signal,
                                       gnb_series** out);
GNB_API void gnb_run_free(gnb_run* run);

/* -- series and metrics -------------------------------------------------- */

GNB_API gnb_status gnb_series_load_csv(const char* path, gnb_series** out);
GNB_API gnb_status gnb_series_save_csv(const gnb_series* series, const char* path);
GNB_API gnb_status gnb_series_length(const gnb_series* series, size_t* out);
GNB_API gnb_status gnb_series_tau0(const gnb_series* series, double* out);
GNB_API gnb_status gnb_series_label(const gnb_series* series, char** out);
/* Copies min(buflen, length) samples into buf. */
GNB_API gnb_status gnb_series_values(const gnb_series* series, double* buf, size_t buflen);
GNB_API void gnb_series_free(gnb_series* series);

/* Observation interval is m * tau0. */
GNB_API gnb_status gnb_metric_adev(const gnb_series* series, size_t m, double* out);
GNB_API gnb_status gnb_metric_tie_rms(const gnb_series* series, size_t m, double* out);
GNB_API gnb_status gnb_metric_mtie(const gnb_series* series, size_t m, double* out);
GNB_API gnb_status gnb_summary(const gnb_series* series, double k_mad, double* mean,
                               double* sigma, double* max_abs, size_t* outlier_count,
                               double* threshold);

/* -- high level command backends ----------------------------------------- */

/* Writes per-input curve CSVs plus report.json into out_dir. tau_grid is
 * "octave", "decade" or a comma list of intervals in seconds. When
 * coldstart is nonzero the report includes usability times. */
GNB_API gnb_status gnb_analyze_files(const char* const* csv_paths, size_t n_paths,
                                     const char* tau_grid, int coldstart,
                                     const char* out_dir, char** report_json_out);

/* Runs the measurement-chain round trip at the given SNR (snr_db may be
 * NULL-like via noiseless=1). Returns GNB_OK when the sub-nanosecond
 * criterion holds, GNB_CRITERION_FAILED otherwise; the report is produced
 * either way. */
GNB_API gnb_status gnb_validate_chain(double snr_db, int noiseless, double duration_s,
                                      char** report_json_out, double* rms_out);

/* model: "model-F", "model-L" or "all". Writes fitted archetype files and
 * calibration_report.json into out_dir. */
GNB_API gnb_status gnb_calibrate(const char* model, const char* out_dir,
                                 char** report_json_out);

#ifdef __cplusplus
}
#endif

#endif /* GNSSDOBENCH_H */
