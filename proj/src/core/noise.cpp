#include "core/noise.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>

#include "core/errors.hpp"

namespace gdo {

namespace {

constexpr std::size_t kMaxFilterLen = std::size_t(1) << 20;
constexpr double kTwoPi = 6.283185307179586476925286766559;

// FFTW plan creation is not thread-safe; execution of distinct plans is.
std::mutex& fftw_mutex() {
    static std::mutex m;
    return m;
}

struct FftwBuf {
    double* re = nullptr;
    fftw_complex* cx = nullptr;
    ~FftwBuf() {
        if (re) fftw_free(re);
        if (cx) fftw_free(cx);
    }
};

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

// Linear convolution y[k] = sum_j a[j] w[k-j], truncated to the first n
// outputs, evaluated with one round trip through the frequency domain.
std::vector<double> fft_convolve(const std::vector<double>& a,
                                 const std::vector<double>& w,
                                 std::size_t n) {
    const std::size_t nfft = next_pow2(a.size() + w.size());
    const std::size_t nc = nfft / 2 + 1;

    FftwBuf ta, tw;
    ta.re = fftw_alloc_real(nfft);
    ta.cx = fftw_alloc_complex(nc);
    tw.re = fftw_alloc_real(nfft);
    tw.cx = fftw_alloc_complex(nc);

    fftw_plan fwd_a, fwd_w, bwd;
    {
        std::lock_guard<std::mutex> lock(fftw_mutex());
        // FFTW_ESTIMATE keeps planning deterministic (no runtime timing).
        fwd_a = fftw_plan_dft_r2c_1d(static_cast<int>(nfft), ta.re, ta.cx, FFTW_ESTIMATE);
        fwd_w = fftw_plan_dft_r2c_1d(static_cast<int>(nfft), tw.re, tw.cx, FFTW_ESTIMATE);
        bwd = fftw_plan_dft_c2r_1d(static_cast<int>(nfft), tw.cx, tw.re, FFTW_ESTIMATE);
    }

    for (std::size_t i = 0; i < nfft; ++i) ta.re[i] = i < a.size() ? a[i] : 0.0;
    for (std::size_t i = 0; i < nfft; ++i) tw.re[i] = i < w.size() ? w[i] : 0.0;
    fftw_execute(fwd_a);
    fftw_execute(fwd_w);

    const double scale = 1.0 / static_cast<double>(nfft);
    for (std::size_t i = 0; i < nc; ++i) {
        double re = ta.cx[i][0] * tw.cx[i][0] - ta.cx[i][1] * tw.cx[i][1];
        double im = ta.cx[i][0] * tw.cx[i][1] + ta.cx[i][1] * tw.cx[i][0];
        tw.cx[i][0] = re * scale;
        tw.cx[i][1] = im * scale;
    }
    fftw_execute(bwd);

    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = tw.re[i];

    {
        std::lock_guard<std::mutex> lock(fftw_mutex());
        fftw_destroy_plan(fwd_a);
        fftw_destroy_plan(fwd_w);
        fftw_destroy_plan(bwd);
    }
    return out;
}

// White-input standard deviation that makes the filtered sequence match
// S_y(f) = h f^alpha under the one-sided PSD convention.
double white_sigma(int alpha, double h, double tau0) {
    return std::sqrt(0.5 * h * std::pow(kTwoPi, -alpha) * std::pow(tau0, -(1 + alpha)));
}

} // namespace

double warmup_y(const WarmupModel& model, double t) {
    if (t < 0.0) throw InvalidArgument("warmup_y: t must be >= 0");
    if (!(model.tau > 0.0)) throw InvalidArgument("warmup_y: tau must be > 0");
    return model.amplitude * std::exp(-t / model.tau);
}

double aging_y(const AgingModel& model, double t) {
    if (t < 0.0) throw InvalidArgument("aging_y: t must be >= 0");
    return model.rate * t;
}

double wfm_adev(double h0, double tau) {
    return std::sqrt(0.5 * h0 / tau);
}

std::vector<double> gen_powerlaw_component(int alpha, double h, std::size_t n,
                                           double tau0, const RandomStream& stream) {
    if (n < 1) throw InvalidArgument("gen_powerlaw_component: n must be >= 1");
    if (!(tau0 > 0.0)) throw InvalidArgument("gen_powerlaw_component: tau0 must be > 0");
    if (h < 0.0) throw InvalidArgument("gen_powerlaw_component: negative intensity");
    if (alpha < -2 || alpha > 2)
        throw InvalidArgument("gen_powerlaw_component: alpha outside [-2, 2]");

    std::vector<double> y(n, 0.0);
    if (h == 0.0) return y;

    const double sw = white_sigma(alpha, h, tau0);
    Rng rng(stream);

    switch (alpha) {
    case 0: // white FM: passthrough
        for (std::size_t i = 0; i < n; ++i) y[i] = sw * rng.normal();
        return y;
    case 2: { // white PM: first difference of white noise
        double prev = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double w = rng.normal();
            y[i] = sw * (w - prev);
            prev = w;
        }
        return y;
    }
    case -2: { // random-walk FM: running sum
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            acc += rng.normal();
            y[i] = sw * acc;
        }
        return y;
    }
    default: { // flicker PM (alpha=1, d=-1/2) or flicker FM (alpha=-1, d=+1/2)
        const double d = -0.5 * alpha;
        const std::size_t len = std::min(n, kMaxFilterLen);
        std::vector<double> a(len);
        a[0] = 1.0;
        for (std::size_t k = 1; k < len; ++k)
            a[k] = a[k - 1] * (static_cast<double>(k) - 1.0 + d) / static_cast<double>(k);

        std::vector<double> w(n);
        for (std::size_t i = 0; i < n; ++i) w[i] = sw * rng.normal();
        return fft_convolve(a, w, n);
    }
    }
}

std::vector<double> gen_powerlaw_y(const NoiseModel& model, std::size_t n,
                                   double tau0, const RandomStream& stream) {
    if (n < 1) throw InvalidArgument("gen_powerlaw_y: n must be >= 1");

    std::vector<double> y(n, 0.0);
    const int alphas[5] = {2, 1, 0, -1, -2};
    const double hs[5] = {model.h2, model.h1, model.h0, model.hm1, model.hm2};
    for (int k = 0; k < 5; ++k) {
        if (hs[k] == 0.0) continue;
        std::vector<double> c =
            gen_powerlaw_component(alphas[k], hs[k], n, tau0, stream.split(static_cast<std::uint64_t>(k)));
        for (std::size_t i = 0; i < n; ++i) y[i] += c[i];
    }
    return y;
}

} // namespace gdo
