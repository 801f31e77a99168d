#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct CliResult {
    int exit_code = -1;
    std::string output; // stdout + stderr
};

CliResult run_cli(const std::string& args) {
    std::string cmd = std::string(GNSSDOBENCH_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    CliResult res;
    std::array<char, 4096> buf{};
    while (std::size_t n = fread(buf.data(), 1, buf.size(), pipe)) res.output.append(buf.data(), n);
    int status = pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

fs::path fresh_dir(const char* tag) {
    fs::path p = fs::temp_directory_path() / (std::string("gnb_cli_") + tag);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("simulate produces a complete, deterministic archive") {
    fs::path dir = fresh_dir("determinism");
    auto a = run_cli("simulate --template steady_state --seed 7 --set duration_s=300 -o " +
                     (dir / "runA").string());
    auto b = run_cli("simulate --template steady_state --seed 7 --set duration_s=300 -o " +
                     (dir / "runB").string());
    REQUIRE(a.exit_code == 0);
    REQUIRE(b.exit_code == 0);

    for (const char* rel :
         {"spec.cfg", "meta.json", "report.json", "env.csv", "series/dut00_pps.csv",
          "series/dut03_10mhz.csv", "pairs/dut00-dut01_pps.csv", "pairs/dut02-dut03_10mhz.csv"}) {
        CAPTURE(rel);
        REQUIRE(fs::exists(dir / "runA" / rel));
        CHECK(slurp(dir / "runA" / rel) == slurp(dir / "runB" / rel));
    }

    auto c = run_cli("simulate --template steady_state --seed 8 --set duration_s=300 -o " +
                     (dir / "runC").string());
    REQUIRE(c.exit_code == 0);
    CHECK(slurp(dir / "runA" / "series/dut00_pps.csv") !=
          slurp(dir / "runC" / "series/dut00_pps.csv"));
    fs::remove_all(dir);
}

TEST_CASE("meta spec hash matches the stored spec") {
    fs::path dir = fresh_dir("hash");
    REQUIRE(run_cli("simulate --template steady_state --set duration_s=120 -o " +
                    (dir / "run").string())
                .exit_code == 0);
    std::string meta = slurp(dir / "run" / "meta.json");
    auto pos = meta.find("\"spec_hash\": \"");
    REQUIRE(pos != std::string::npos);
    std::string hash = meta.substr(pos + 14, 16);

    // Re-simulating from the stored spec.cfg reproduces the same hash.
    auto again = run_cli("simulate --spec " + (dir / "run" / "spec.cfg").string() + " -o " +
                         (dir / "run2").string());
    REQUIRE(again.exit_code == 0);
    CHECK(slurp(dir / "run2" / "meta.json").find(hash) != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("series CSV header format is pinned") {
    fs::path dir = fresh_dir("format");
    REQUIRE(run_cli("simulate --template steady_state --set duration_s=120 -o " +
                    (dir / "run").string())
                .exit_code == 0);
    std::string csv = slurp(dir / "run" / "series" / "dut00_pps.csv");
    CHECK(csv.rfind("# tau0=1 t0=0 label=dut00_pps\nt_s,value_s\n0,", 0) == 0);
    fs::remove_all(dir);
}

TEST_CASE("analyze golden output") {
    fs::path golden_dir(GNSSDOBENCH_GOLDEN_DIR);
    fs::path dir = fresh_dir("golden");
    auto res = run_cli("analyze " + (golden_dir / "input_series.csv").string() +
                       " --tau-grid octave -o " + (dir / "out").string());
    REQUIRE(res.exit_code == 0);
    CHECK(slurp(dir / "out" / "input_series_curves.csv") ==
          slurp(golden_dir / "expected_curves.csv"));
    fs::remove_all(dir);
}

TEST_CASE("exit code contract") {
    fs::path dir = fresh_dir("exitcodes");

    SUBCASE("unknown template is a user error") {
        auto r = run_cli("simulate --template bogus -o " + (dir / "x").string());
        CHECK(r.exit_code == 2);
        CHECK(r.output.find("bogus") != std::string::npos);
    }
    SUBCASE("simulate needs a scenario source") {
        CHECK(run_cli("simulate -o " + (dir / "x").string()).exit_code == 2);
    }
    SUBCASE("bad --set path is a user error") {
        CHECK(run_cli("simulate --template steady_state --set nope.nope=1 -o " +
                      (dir / "x").string())
                  .exit_code == 2);
    }
    SUBCASE("invalid field values are a user error with the field path") {
        auto r = run_cli("simulate --template steady_state --set duration_s=5 -o " +
                         (dir / "x").string());
        CHECK(r.exit_code == 2);
        CHECK(r.output.find("duration_s") != std::string::npos);
    }
    SUBCASE("missing output parent directory is an environment error") {
        CHECK(run_cli("simulate --template steady_state --set duration_s=120 -o " +
                      (dir / "no" / "such" / "parent").string())
                  .exit_code == 3);
    }
    SUBCASE("missing spec file is an environment error") {
        CHECK(run_cli("simulate --spec /no/such/spec.cfg -o " + (dir / "x").string())
                  .exit_code == 3);
    }
    SUBCASE("malformed spec JSON is a user error") {
        fs::path bad = dir / "bad.cfg";
        std::ofstream(bad) << "{ not json";
        CHECK(run_cli("simulate --spec " + bad.string() + " -o " + (dir / "x").string())
                  .exit_code == 2);
    }
    SUBCASE("analyze with a missing input is an environment error") {
        CHECK(run_cli("analyze /no/such.csv -o " + (dir / "x").string()).exit_code == 3);
    }
    SUBCASE("analyze with a malformed CSV reports the line number") {
        fs::path bad = dir / "bad.csv";
        std::ofstream(bad) << "# tau0=1 t0=0 label=x\nt_s,value_s\n0,1e-9\nbroken line\n";
        auto r = run_cli("analyze " + bad.string() + " -o " + (dir / "x").string());
        CHECK(r.exit_code == 2);
        CHECK(r.output.find(":4") != std::string::npos);
    }
    SUBCASE("chain validation below the criterion is a criterion failure") {
        auto r = run_cli("validate-chain --snr 0 --duration 0.3");
        CHECK(r.exit_code == 1);
        CHECK(r.output.find("FAIL") != std::string::npos);
    }
    SUBCASE("unknown flags and subcommands are user errors") {
        CHECK(run_cli("frobnicate").exit_code == 2);
        CHECK(run_cli("simulate --no-such-flag -o x").exit_code == 2);
    }
    SUBCASE("success returns zero") {
        CHECK(run_cli("simulate --template steady_state --set duration_s=120 -o " +
                      (dir / "ok").string())
                  .exit_code == 0);
    }
    fs::remove_all(dir);
}

TEST_CASE("validate-chain passes at the default SNR") {
    fs::path dir = fresh_dir("chain");
    auto r = run_cli("validate-chain --snr 40 --duration 0.5 -o " +
                     (dir / "chain.json").string());
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("PASS") != std::string::npos);
    std::string rep = slurp(dir / "chain.json");
    CHECK(rep.find("\"pass\": true") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("analyze of a cold start reports usability") {
    fs::path dir = fresh_dir("coldstart");
    REQUIRE(run_cli("simulate --template cold_start --seed 3 --set duration_s=4000 -o " +
                    (dir / "run").string())
                .exit_code == 0);
    auto r = run_cli("analyze " + (dir / "run" / "series" / "dut02_10mhz.csv").string() +
                     " --coldstart -o " + (dir / "out").string());
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("usability") != std::string::npos);
    fs::remove_all(dir);
}
