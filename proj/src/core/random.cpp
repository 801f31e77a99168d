#include "core/random.hpp"

#include <cmath>

namespace gdo {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += kGolden);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Order-sensitive two-input mix; used to derive child stream ids.
std::uint64_t mix2(std::uint64_t a, std::uint64_t b) {
    std::uint64_t state = a ^ (b * kGolden + (a << 6) + (a >> 2));
    std::uint64_t out = splitmix64(state);
    return out ^ splitmix64(state);
}

std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

} // namespace

RandomStream RandomStream::split(std::uint64_t child_index) const {
    return RandomStream{seed, mix2(stream, child_index + 1)};
}

Rng::Rng(const RandomStream& rs) {
    std::uint64_t key = mix2(rs.seed, rs.stream);
    // Expand the 64-bit key into the 256-bit xoshiro state; splitmix64
    // guarantees the state is not all-zero.
    for (auto& w : s_) w = splitmix64(key);
}

std::uint64_t Rng::next_u64() {
    std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double Rng::uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u, v, s;
    do {
        u = 2.0 * uniform01() - 1.0;
        v = 2.0 * uniform01() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
}

double Rng::laplace(double scale) {
    double u = uniform01() - 0.5;
    double mag = -std::log(1.0 - 2.0 * std::fabs(u));
    return (u < 0.0 ? -scale : scale) * mag;
}

bool Rng::bernoulli(double p) {
    return uniform01() < p;
}

} // namespace gdo
