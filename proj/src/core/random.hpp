#ifndef GDO_CORE_RANDOM_HPP
#define GDO_CORE_RANDOM_HPP

#include <cstdint>

namespace gdo {

// Identifies one reproducible random stream. Equal (seed, stream) always
// produce the same draw sequence; streams derived via split() with
// different child indices are statistically independent. All arithmetic
// is fixed-width integer, so sequences do not depend on the platform.
struct RandomStream {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;

    RandomStream split(std::uint64_t child_index) const;

    bool operator==(const RandomStream&) const = default;
};

// xoshiro256++ keyed from a RandomStream via splitmix64 state expansion.
// One instance per thread; instances from distinct streams may run in
// parallel.
class Rng {
public:
    explicit Rng(const RandomStream& rs);

    std::uint64_t next_u64();

    // Uniform on [0, 1) with 53-bit resolution.
    double uniform01();

    // Standard normal via the Marsaglia polar method (spare cached).
    double normal();

    // Laplace(0, scale) by inverse CDF.
    double laplace(double scale);

    bool bernoulli(double p);

private:
    std::uint64_t s_[4];
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace gdo

#endif
