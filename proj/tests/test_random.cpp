#include <doctest.h>

#include <cmath>
#include <vector>

#include "core/random.hpp"

using namespace gdo;

namespace {

std::vector<std::uint64_t> draw(const RandomStream& rs, std::size_t n) {
    Rng rng(rs);
    std::vector<std::uint64_t> out(n);
    for (auto& v : out) v = rng.next_u64();
    return out;
}

} // namespace

TEST_CASE("identical stream ids give identical sequences") {
    RandomStream root{42, 0};
    CHECK(draw(root.split(0), 1000) == draw(root.split(0), 1000));
}

TEST_CASE("sibling streams differ") {
    RandomStream root{42, 0};
    auto a = draw(root.split(0), 1000);
    auto b = draw(root.split(1), 1000);
    std::size_t differing = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) ++differing;
    CHECK(differing >= 1);
    // Independent streams should disagree essentially everywhere.
    CHECK(differing > 990);
}

TEST_CASE("different seeds give different sequences") {
    auto a = draw(RandomStream{1, 0}.split(0), 1000);
    auto b = draw(RandomStream{2, 0}.split(0), 1000);
    CHECK(a != b);
}

TEST_CASE("split is deterministic and order-sensitive") {
    RandomStream root{7, 3};
    CHECK(root.split(5) == root.split(5));
    CHECK(root.split(5) != root.split(6));
    CHECK(root.split(0).split(1) != root.split(1).split(0));
}

TEST_CASE("uniform01 stays in [0, 1)") {
    Rng rng(RandomStream{99, 0});
    for (int i = 0; i < 100000; ++i) {
        double u = rng.uniform01();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("normal moments") {
    Rng rng(RandomStream{123, 1});
    const int n = 200000;
    double sum = 0.0, sq = 0.0;
    for (int i = 0; i < n; ++i) {
        double z = rng.normal();
        sum += z;
        sq += z * z;
    }
    double mean = sum / n;
    double var = sq / n - mean * mean;
    CHECK(std::fabs(mean) < 0.01);
    CHECK(var == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("laplace moments") {
    Rng rng(RandomStream{5, 2});
    const int n = 200000;
    const double scale = 3.0;
    double sum = 0.0, sq = 0.0;
    for (int i = 0; i < n; ++i) {
        double z = rng.laplace(scale);
        sum += z;
        sq += z * z;
    }
    double mean = sum / n;
    double var = sq / n - mean * mean;
    CHECK(std::fabs(mean) < 0.05);
    CHECK(var == doctest::Approx(2.0 * scale * scale).epsilon(0.05));
}

TEST_CASE("bernoulli rate") {
    Rng rng(RandomStream{5, 3});
    const int n = 100000;
    int hits = 0;
    for (int i = 0; i < n; ++i)
        if (rng.bernoulli(0.25)) ++hits;
    CHECK(static_cast<double>(hits) / n == doctest::Approx(0.25).epsilon(0.05));
}
