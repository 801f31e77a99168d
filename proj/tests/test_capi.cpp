#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "gnssdobench.h"

namespace fs = std::filesystem;

namespace {

std::string take(char* s) {
    std::string out = s ? s : "";
    gnb_string_free(s);
    return out;
}

fs::path fresh_dir(const char* tag) {
    fs::path p = fs::temp_directory_path() / (std::string("gnb_capi_") + tag);
    fs::remove_all(p);
    return p;
}

} // namespace

TEST_CASE("version and error strings are always available") {
    CHECK(gnb_version() != nullptr);
    CHECK(std::strlen(gnb_version()) > 0);
    CHECK(gnb_last_error() != nullptr);
}

TEST_CASE("spec lifecycle through the opaque handle") {
    gnb_spec* spec = nullptr;
    REQUIRE(gnb_spec_template("steady_state", &spec) == GNB_OK);
    REQUIRE(spec != nullptr);

    CHECK(gnb_spec_set_seed(spec, 123) == GNB_OK);
    CHECK(gnb_spec_set(spec, "duration_s", "300") == GNB_OK);
    CHECK(gnb_spec_validate(spec) == GNB_OK);

    char* text = nullptr;
    REQUIRE(gnb_spec_json(spec, &text) == GNB_OK);
    std::string json = take(text);
    CHECK(json.find("\"seed\": 123") != std::string::npos);
    CHECK(json.find("\"duration_s\": 300") != std::string::npos);

    SUBCASE("bad override paths are rejected with a message") {
        CHECK(gnb_spec_set(spec, "not.a.key", "1") == GNB_INVALID_ARGUMENT);
        CHECK(std::strlen(gnb_last_error()) > 0);
    }
    SUBCASE("invalid values fail validation") {
        CHECK(gnb_spec_set(spec, "duration_s", "5") == GNB_OK);
        CHECK(gnb_spec_validate(spec) == GNB_INVALID_ARGUMENT);
    }

    gnb_spec_free(spec);
}

TEST_CASE("unknown template is an invalid argument") {
    gnb_spec* spec = nullptr;
    CHECK(gnb_spec_template("nope", &spec) == GNB_INVALID_ARGUMENT);
    CHECK(spec == nullptr);
    CHECK(std::string(gnb_last_error()).find("nope") != std::string::npos);
}

TEST_CASE("null arguments never crash") {
    CHECK(gnb_spec_template(nullptr, nullptr) == GNB_INVALID_ARGUMENT);
    CHECK(gnb_run_scenario(nullptr, nullptr) == GNB_INVALID_ARGUMENT);
    CHECK(gnb_series_load_csv(nullptr, nullptr) == GNB_INVALID_ARGUMENT);
    gnb_spec_free(nullptr);
    gnb_run_free(nullptr);
    gnb_series_free(nullptr);
}

TEST_CASE("run, series access and metrics") {
    gnb_spec* spec = nullptr;
    REQUIRE(gnb_spec_template("steady_state", &spec) == GNB_OK);
    gnb_spec_set(spec, "duration_s", "300");
    gnb_spec_set_seed(spec, 7);

    gnb_run* run = nullptr;
    REQUIRE(gnb_run_scenario(spec, &run) == GNB_OK);

    size_t duts = 0, pairs = 0;
    CHECK(gnb_run_dut_count(run, &duts) == GNB_OK);
    CHECK(duts == 4);
    CHECK(gnb_run_pair_count(run, &pairs) == GNB_OK);
    CHECK(pairs == 2);

    gnb_series* series = nullptr;
    REQUIRE(gnb_run_pair_series(run, 1, GNB_SIGNAL_PPS, &series) == GNB_OK);
    size_t n = 0;
    double tau0 = 0.0;
    CHECK(gnb_series_length(series, &n) == GNB_OK);
    CHECK(n == 300);
    CHECK(gnb_series_tau0(series, &tau0) == GNB_OK);
    CHECK(tau0 == 1.0);
    char* label = nullptr;
    CHECK(gnb_series_label(series, &label) == GNB_OK);
    CHECK(take(label) == "dut02-dut03_pps");

    std::vector<double> values(n);
    CHECK(gnb_series_values(series, values.data(), values.size()) == GNB_OK);

    double adev = 0.0, tie = 0.0, mt = 0.0;
    CHECK(gnb_metric_adev(series, 4, &adev) == GNB_OK);
    CHECK(gnb_metric_tie_rms(series, 4, &tie) == GNB_OK);
    CHECK(gnb_metric_mtie(series, 4, &mt) == GNB_OK);
    CHECK(adev > 0.0);
    CHECK(mt >= 0.0);
    CHECK(gnb_metric_adev(series, 100000, &adev) == GNB_INVALID_ARGUMENT);

    double mean = 0, sigma = 0, max_abs = 0, thr = 0;
    size_t outliers = 0;
    CHECK(gnb_summary(series, 5.0, &mean, &sigma, &max_abs, &outliers, &thr) == GNB_OK);
    CHECK(sigma > 0.0);

    // Round-trip the series through CSV.
    fs::path dir = fresh_dir("series");
    fs::create_directory(dir);
    std::string csv = (dir / "pair.csv").string();
    CHECK(gnb_series_save_csv(series, csv.c_str()) == GNB_OK);
    gnb_series* loaded = nullptr;
    REQUIRE(gnb_series_load_csv(csv.c_str(), &loaded) == GNB_OK);
    size_t n2 = 0;
    gnb_series_length(loaded, &n2);
    CHECK(n2 == n);
    std::vector<double> values2(n2);
    gnb_series_values(loaded, values2.data(), values2.size());
    for (size_t i = 0; i < n; ++i) CHECK(values[i] == doctest::Approx(values2[i]).epsilon(1e-12));

    // Archive + report through the same run handle.
    fs::path arch = dir / "archive";
    CHECK(gnb_run_write_archive(run, arch.string().c_str()) == GNB_OK);
    CHECK(fs::exists(arch / "spec.cfg"));
    CHECK(fs::exists(arch / "report.json"));
    char* rep = nullptr;
    CHECK(gnb_run_report(run, &rep) == GNB_OK);
    CHECK(take(rep).find("target_comparison") != std::string::npos);

    gnb_series_free(loaded);
    gnb_series_free(series);
    gnb_run_free(run);
    gnb_spec_free(spec);
    fs::remove_all(dir);
}

TEST_CASE("out-of-range handles are rejected") {
    gnb_spec* spec = nullptr;
    REQUIRE(gnb_spec_template("steady_state", &spec) == GNB_OK);
    gnb_spec_set(spec, "duration_s", "120");
    gnb_run* run = nullptr;
    REQUIRE(gnb_run_scenario(spec, &run) == GNB_OK);
    gnb_series* series = nullptr;
    CHECK(gnb_run_dut_series(run, 99, GNB_SIGNAL_PPS, &series) == GNB_INVALID_ARGUMENT);
    CHECK(gnb_run_pair_series(run, 99, GNB_SIGNAL_PPS, &series) == GNB_INVALID_ARGUMENT);
    gnb_run_free(run);
    gnb_spec_free(spec);
}

TEST_CASE("analyze files through the C surface") {
    // Build a small archive to get a real series CSV.
    gnb_spec* spec = nullptr;
    REQUIRE(gnb_spec_template("steady_state", &spec) == GNB_OK);
    gnb_spec_set(spec, "duration_s", "240");
    gnb_run* run = nullptr;
    REQUIRE(gnb_run_scenario(spec, &run) == GNB_OK);
    fs::path dir = fresh_dir("analyze");
    fs::create_directory(dir);
    fs::path arch = dir / "run";
    REQUIRE(gnb_run_write_archive(run, arch.string().c_str()) == GNB_OK);
    gnb_run_free(run);
    gnb_spec_free(spec);

    std::string input = (arch / "pairs" / "dut00-dut01_pps.csv").string();
    const char* paths[1] = {input.c_str()};
    char* rep = nullptr;
    fs::path out = dir / "analysis";
    REQUIRE(gnb_analyze_files(paths, 1, "octave", 0, out.string().c_str(), &rep) == GNB_OK);
    std::string report = take(rep);
    CHECK(report.find("dut00-dut01_pps") != std::string::npos);
    CHECK(fs::exists(out / "report.json"));
    CHECK(fs::exists(out / "dut00-dut01_pps_curves.csv"));

    const char* missing[1] = {"/no/such/file.csv"};
    CHECK(gnb_analyze_files(missing, 1, "octave", 0, out.string().c_str(), nullptr) ==
          GNB_IO_ERROR);
    fs::remove_all(dir);
}

TEST_CASE("chain validation statuses") {
    char* rep = nullptr;
    double rms = 0.0;
    CHECK(gnb_validate_chain(40.0, 0, 0.3, &rep, &rms) == GNB_OK);
    std::string report = take(rep);
    CHECK(report.find("\"pass\": true") != std::string::npos);
    CHECK(rms < 100e-12);

    CHECK(gnb_validate_chain(0.0, 0, 0.3, &rep, &rms) == GNB_CRITERION_FAILED);
    take(rep);
}
