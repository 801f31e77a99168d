#include <doctest.h>

#include <cmath>
#include <vector>

#include "core/errors.hpp"
#include "core/sdr_chain.hpp"

using namespace gdo;

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kF0 = 10e6;

CaptureConfig noiseless_cfg() {
    CaptureConfig cfg;
    cfg.noiseless = true;
    return cfg;
}

} // namespace

TEST_CASE("synthesis produces the nominal carrier at zero time error") {
    CaptureConfig cfg = noiseless_cfg();
    cfg.block_len = 1000;
    std::vector<double> block(cfg.block_len);
    Rng rng(RandomStream{1, 0});
    synth_sine_block(0.0, kF0, cfg, rng, block);
    for (std::size_t n = 0; n < block.size(); ++n) {
        double expect = std::sin(kTwoPi * kF0 * static_cast<double>(n) / cfg.fs);
        CHECK(block[n] == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("25 ns time error shifts the carrier by exactly -pi/2") {
    CaptureConfig cfg = noiseless_cfg();
    cfg.block_len = 1000;
    std::vector<double> block(cfg.block_len);
    Rng rng(RandomStream{1, 1});
    synth_sine_block(25e-9, kF0, cfg, rng, block);
    for (std::size_t n = 0; n < block.size(); ++n) {
        double theta = kTwoPi * kF0 * static_cast<double>(n) / cfg.fs;
        CHECK(block[n] == doctest::Approx(std::sin(theta - 0.5 * 3.14159265358979323846))
                              .epsilon(1e-9));
    }
}

TEST_CASE("additive noise lands at the requested SNR") {
    CaptureConfig cfg;
    cfg.snr_db = 40.0;
    std::vector<double> noisy(cfg.block_len), clean(cfg.block_len);
    Rng rng(RandomStream{2, 0});
    synth_sine_block(3e-9, kF0, cfg, rng, noisy);
    CaptureConfig quiet = cfg;
    quiet.noiseless = true;
    Rng rng2(RandomStream{2, 1});
    synth_sine_block(3e-9, kF0, quiet, rng2, clean);

    double sig = 0.0, noise = 0.0;
    for (std::size_t n = 0; n < noisy.size(); ++n) {
        sig += clean[n] * clean[n];
        double d = noisy[n] - clean[n];
        noise += d * d;
    }
    double snr_db = 10.0 * std::log10(sig / noise);
    CHECK(snr_db == doctest::Approx(40.0).epsilon(0.025)); // +-1 dB
}

TEST_CASE("quadrature estimator recovers known inputs") {
    CaptureConfig cfg = noiseless_cfg();
    std::vector<double> block(cfg.block_len);
    Rng rng(RandomStream{3, 0});

    synth_sine_block(0.0, kF0, cfg, rng, block);
    PhaseEstimate e0 = estimate_te_10mhz(block, kF0, cfg, 0.0);
    CHECK(e0.valid);
    CHECK(std::fabs(e0.te) < 1e-13);

    synth_sine_block(25e-9, kF0, cfg, rng, block);
    PhaseEstimate e1 = estimate_te_10mhz(block, kF0, cfg, 0.0);
    CHECK(e1.te == doctest::Approx(25e-9).epsilon(1e-6));

    // Offsets beyond half a carrier period rely on continuity.
    synth_sine_block(60e-9, kF0, cfg, rng, block);
    PhaseEstimate e2 = estimate_te_10mhz(block, kF0, cfg, 55e-9);
    CHECK(e2.te == doctest::Approx(60e-9).epsilon(1e-6));
    CHECK(e2.unwrap == 1);
}

TEST_CASE("blocks below the noise floor are flagged invalid") {
    CaptureConfig cfg = noiseless_cfg();
    std::vector<double> block(cfg.block_len, 0.0);
    PhaseEstimate est = estimate_te_10mhz(block, kF0, cfg, 0.0);
    CHECK_FALSE(est.valid);
    CHECK_THROWS_AS(estimate_te_10mhz(std::span<const double>(block.data(), 10), kF0, cfg, 0.0),
                    InvalidArgument);
}

TEST_CASE("pps edge interpolation") {
    CaptureConfig cfg = noiseless_cfg();

    SUBCASE("midpoint crossing") {
        std::vector<double> s = {0.0, 0.1, 0.2, 0.8, 0.9, 1.0};
        double t = pps_edge_time(s, cfg, 0.0);
        // Crossing between samples 2 and 3 at the midpoint of the interval.
        CHECK(t == doctest::Approx((2.0 + 0.5) / cfg.fs).epsilon(1e-12));
    }
    SUBCASE("sample exactly on the threshold") {
        std::vector<double> s = {0.0, 0.2, 0.5, 0.9, 1.0};
        double t = pps_edge_time(s, cfg, 0.0);
        CHECK(t == doctest::Approx(2.0 / cfg.fs).epsilon(1e-12));
    }
    SUBCASE("zero or multiple crossings are rejected with the count") {
        std::vector<double> flat = {0.0, 0.1, 0.2, 0.3};
        CHECK_THROWS_WITH_AS(pps_edge_time(flat, cfg, 0.0),
                             doctest::Contains("found 0"), InvalidArgument);
        std::vector<double> twice = {0.0, 0.8, 0.2, 0.9, 1.0};
        CHECK_THROWS_WITH_AS(pps_edge_time(twice, cfg, 0.0),
                             doctest::Contains("found 2"), InvalidArgument);
    }
}

TEST_CASE("synthesized edges are recovered at the injected instant") {
    CaptureConfig cfg = noiseless_cfg();
    Rng rng(RandomStream{4, 0});
    std::vector<double> pulse(static_cast<std::size_t>(3e-6 * cfg.fs));
    for (int k = 0; k < 50; ++k) {
        double truth = 1.2e-6 + rng.uniform01() * 4.0 / cfg.fs;
        synth_pps_edge(truth, cfg, rng, 0.0, pulse);
        CHECK(pps_edge_time(pulse, cfg, 0.0) == doctest::Approx(truth).epsilon(2e-4));
    }
}

TEST_CASE("chain round trip meets the sub-nanosecond bound (short run)") {
    CaptureConfig cfg;
    cfg.snr_db = 40.0;
    ChainFidelityReport rep = run_chain_validation(cfg, kF0, 1.0, RandomStream{9, 0});
    CHECK(rep.blocks == 1000);
    CHECK(rep.rms_error < 100e-12);
    CHECK(std::fabs(rep.ramp_slope_rel_error) < 0.02);
    CHECK(rep.pps_max_error < 200e-12);

    CaptureConfig quiet = noiseless_cfg();
    ChainFidelityReport clean = run_chain_validation(quiet, kF0, 1.0, RandomStream{9, 1});
    CHECK(clean.rms_error < 1e-12);
}

TEST_CASE("unwrap tracks a multi-period ramp without 100 ns jumps") {
    CaptureConfig cfg = noiseless_cfg();
    const double slope = 40e-9; // four carrier periods over 10 s
    std::vector<double> block(cfg.block_len);
    Rng rng(RandomStream{10, 0});
    double prev = 0.0;
    double max_jump = 0.0;
    const double block_dt = static_cast<double>(cfg.block_len) / cfg.fs;
    for (int b = 0; b < 10000; ++b) {
        double t = b * block_dt;
        synth_sine_block(slope * t, kF0, cfg, rng, block);
        PhaseEstimate est = estimate_te_10mhz(block, kF0, cfg, prev);
        if (b > 0) max_jump = std::max(max_jump, std::fabs(est.te - prev));
        prev = est.te;
    }
    CHECK(max_jump <= slope * block_dt * 1.5);
    CHECK(prev == doctest::Approx(slope * 9999 * block_dt).epsilon(1e-4));
}

TEST_CASE("pps and 10 MHz chains agree on the same trajectory") {
    CaptureConfig cfg;
    cfg.snr_db = 80.0;
    Rng rng(RandomStream{11, 0});
    std::vector<double> block(cfg.block_len);
    std::vector<double> pulse(static_cast<std::size_t>(3e-6 * cfg.fs) + 8);
    const double block_dt = static_cast<double>(cfg.block_len) / cfg.fs;
    const int seconds = 2;

    double sqdiff = 0.0;
    double prev = 0.0;
    for (int k = 0; k < seconds; ++k) {
        auto x_te = [&](double t) { return 5e-9 * std::sin(kTwoPi * 0.2 * t) + 2e-9; };

        // Mean of the per-block 10 MHz estimates across this second.
        double acc = 0.0;
        const int blocks = static_cast<int>(1.0 / block_dt);
        for (int b = 0; b < blocks; ++b) {
            double t = k + b * block_dt;
            synth_sine_block(x_te(t), kF0, cfg, rng, block);
            PhaseEstimate est = estimate_te_10mhz(block, kF0, cfg, prev);
            prev = est.te;
            acc += est.te;
        }
        double tenmhz_te = acc / blocks;

        // PPS edge nominally at the second boundary, shifted by x_te.
        double edge_truth = 1.5e-6 + x_te(static_cast<double>(k));
        synth_pps_edge(edge_truth, cfg, rng, 0.0, pulse);
        double pps_te = pps_edge_time(pulse, cfg, 0.0) - 1.5e-6;

        // The decimated 10 MHz path averages the tone over the second;
        // compare against the same average to isolate chain error.
        double avg_truth = 0.0;
        for (int b = 0; b < blocks; ++b) avg_truth += x_te(k + b * block_dt);
        avg_truth /= blocks;
        double d = (tenmhz_te - avg_truth) - (pps_te - x_te(static_cast<double>(k)));
        sqdiff += d * d;
    }
    CHECK(std::sqrt(sqdiff / seconds) < 300e-12);
}
