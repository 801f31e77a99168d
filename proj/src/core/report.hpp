#ifndef GDO_CORE_REPORT_HPP
#define GDO_CORE_REPORT_HPP

#include <string>
#include <vector>

#include "core/metrics.hpp"
#include "core/scenario.hpp"

namespace gdo {

extern const char* kVersionString;

// Self-describing run archive:
//   <dir>/spec.cfg                    scenario (canonical JSON)
//   <dir>/meta.json                   seed, versions, spec hash
//   <dir>/series/<dut>_<kind>.csv     measured per-device series
//   <dir>/pairs/<a>-<b>_<kind>.csv    differenced pairs
//   <dir>/env.csv                     acceleration/thrust/fix/modes
//   <dir>/report.json                 summaries and target comparison
// The parent of <dir> must already exist.
void write_archive(const RunResult& result, const std::string& out_dir);

// report.json payload (also embedded in the archive).
std::string build_report_json(const RunResult& result);

struct AnalyzeOptions {
    std::string tau_grid = "octave"; // octave | decade | comma list of seconds
    bool coldstart = false;          // also report usability time
    double usability_window = 1800.0; // s
    double usability_budget = 25e-9;  // s
    double first_fix_time = 0.0;      // s, for usability on bare files
    double k_mad = 5.0;
};

// Reads series CSVs, writes <stem>_curves.csv per input into out_dir plus
// report.json, and returns the report payload.
std::string analyze_files(const std::vector<std::string>& csv_paths,
                          const AnalyzeOptions& options, const std::string& out_dir);

// Chain validation entry point shared by the CLI and the C API. Returns
// the JSON fidelity report; `passed` reflects the sub-nanosecond
// round-trip criterion (RMS < 100 ps, plus < 1 ps when noiseless).
std::string validate_chain_report(const CaptureConfig& cfg, double duration,
                                  std::uint64_t seed, bool* passed, double* rms_out);

TauGrid parse_tau_grid(const std::string& text, double tau0, std::size_t n);

} // namespace gdo

#endif
