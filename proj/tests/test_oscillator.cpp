#include <doctest.h>

#include <cmath>
#include <vector>

#include "core/errors.hpp"
#include "core/oscillator.hpp"
#include "core/vibration.hpp"
#include "stats.hpp"

using namespace gdo;

TEST_CASE("acceleration profile evaluation") {
    VibrationProfile p;
    p.segments.push_back({VibrationKind::SineSweep, 10.0, 5.0, 2.0, 100.0, 100.0});
    p.segments.push_back({VibrationKind::ShockHalfSine, 30.0, 0.011, 30.0, 0.0, 0.0});

    SUBCASE("zero outside all segments") {
        CHECK(env_acceleration(p, 0.0) == 0.0);
        CHECK(env_acceleration(p, 9.99) == 0.0);
        CHECK(env_acceleration(p, 20.0) == 0.0);
        CHECK(env_acceleration(p, 31.0) == 0.0);
    }
    SUBCASE("fixed sine quarter cycle") {
        CHECK(env_acceleration(p, 10.0 + 0.0025) == doctest::Approx(2.0).epsilon(1e-9));
    }
    SUBCASE("shock pulse midpoint") {
        CHECK(env_acceleration(p, 30.0 + 0.0055) == doctest::Approx(30.0).epsilon(1e-9));
    }
    SUBCASE("activity and frequency queries") {
        CHECK(p.active_in(12.0, 13.0));
        CHECK_FALSE(p.active_in(16.0, 17.0));
        CHECK(p.max_frequency_in(10.0, 11.0) == 100.0);
        CHECK(p.last_end() == doctest::Approx(30.011));
    }
}

TEST_CASE("log sweep is continuous and respects the band") {
    VibrationProfile p;
    p.segments.push_back({VibrationKind::SineSweep, 0.0, 100.0, 2.0, 10.0, 500.0});
    double prev = env_acceleration(p, 50.0);
    double max_step = 0.0;
    for (double t = 50.0; t < 50.01; t += 1e-6) {
        double v = env_acceleration(p, t);
        max_step = std::max(max_step, std::fabs(v - prev));
        prev = v;
        CHECK(std::fabs(v) <= 2.0 + 1e-12);
    }
    // At <= 500 Hz the waveform cannot jump within a microsecond.
    CHECK(max_step < 2.0 * 2.0 * 3.1416 * 500.0 * 1e-6 * 1.1);
}

TEST_CASE("phase integration") {
    OscillatorParams params;
    OscillatorState st;
    Rng rng(RandomStream{1, 0});

    SUBCASE("all contributions zero leave x unchanged") {
        step(st, params, 1.0, 0.0, 0.0, 0.0, 0.0, rng);
        CHECK(st.x == 0.0);
        CHECK(st.t == 1.0);
    }
    SUBCASE("constant fractional frequency accumulates linearly") {
        for (int i = 0; i < 3600; ++i) step(st, params, 1.0, 0.0, 0.0, 1e-9, 0.0, rng);
        CHECK(st.x == doctest::Approx(3.6e-6).epsilon(1e-9));
    }
    SUBCASE("sanity bound trips a fault") {
        CHECK_THROWS_AS(step(st, params, 1.0, 2e-3, 0.0, 0.0, 0.0, rng), SimulationFault);
        CHECK_THROWS_AS(step(st, params, 0.0, 0.0, 0.0, 0.0, 0.0, rng), SimulationFault);
        CHECK_THROWS_AS(step(st, params, 1.0, 0.0, 99.0, 0.0, 0.0, rng), SimulationFault);
    }
}

TEST_CASE("sinusoidal vibration converts to the closed-form phase deviation") {
    // Peak-to-mean time error of gamma * A * sin(2 pi f t) is
    // gamma * A / (2 pi f).
    const double gamma = 1e-9, amp = 2.0, freq = 100.0;
    OscillatorParams params;
    params.gamma = gamma;
    VibrationProfile p;
    p.segments.push_back({VibrationKind::SineSweep, 0.0, 2.0, amp, freq, freq});

    const double dt = 1.0 / (100.0 * freq);
    OscillatorState st;
    Rng rng(RandomStream{1, 1});
    std::vector<double> xs;
    const auto steps = static_cast<std::size_t>(2.0 / dt);
    for (std::size_t i = 0; i < steps; ++i) {
        double a = env_acceleration(p, static_cast<double>(i) * dt);
        step(st, params, dt, 0.0, a, 0.0, 0.0, rng);
        xs.push_back(st.x);
    }
    double mean = 0.0, peak = -1e300;
    for (double v : xs) {
        mean += v;
        peak = std::max(peak, v);
    }
    mean /= static_cast<double>(xs.size());
    double expected = gamma * amp / (2.0 * 3.14159265358979323846 * freq);
    CHECK(peak - mean == doctest::Approx(expected).epsilon(0.02));
}

TEST_CASE("emi outlier count is Poisson") {
    OscillatorParams params;
    params.emi_outlier_rate0 = 0.02;
    params.emi_outlier_scale = 60e-9;
    const double gain = 1.0, duration = 600.0;

    std::vector<std::size_t> counts;
    RandomStream root{99, 3};
    for (int runix = 0; runix < 100; ++runix) {
        OscillatorState st;
        Rng rng(root.split(runix));
        for (int k = 0; k < static_cast<int>(duration); ++k)
            step(st, params, 1.0, 0.0, 0.0, 0.0, params.emi_outlier_rate0 * gain, rng);
        counts.push_back(st.emi_events);
    }
    double p = gdo::teststat::poisson_chi2_p(counts, params.emi_outlier_rate0 * gain * duration);
    CHECK(p > 0.01);
}

TEST_CASE("retrace and settling transients decay") {
    OscillatorParams params;
    params.retrace = HoldoverRetrace{1e-10, 2e-13, 14000.0};
    params.post_exposure_settling = WarmupModel{2e-9, 200.0, 0.0};
    OscillatorState st;
    st.t = 1000.0;

    CHECK(deterministic_y(params, st, st.t) == doctest::Approx(0.0)); // not triggered

    trigger_retrace(st);
    double y0 = deterministic_y(params, st, st.t);
    CHECK(y0 == doctest::Approx(1e-10).epsilon(1e-6));
    double late = deterministic_y(params, st, st.t + 20.0 * params.retrace.tau);
    CHECK(std::fabs(late) < 1e-14);

    trigger_post_exposure_settling(st);
    CHECK(deterministic_y(params, st, st.t) == doctest::Approx(1e-10 + 2e-9).epsilon(1e-6));
}
