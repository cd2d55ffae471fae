#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "osgpcp/random.hpp"

using namespace osgpcp;

TEST_CASE("mt19937_64 engine is the standard-mandated generator") {
    // The standard fixes the 10000th output of a default-seeded mt19937_64.
    std::mt19937_64 engine;
    engine.discard(9999);
    CHECK(engine() == 9981545732273789042ULL);
}

TEST_CASE("streams are deterministic and independent per purpose") {
    RandomStream a(7, StreamId::Data), b(7, StreamId::Data), c(7, StreamId::Frequencies), d(8, StreamId::Data);
    bool differs_purpose = false, differs_seed = false;
    for (int i = 0; i < 100; ++i) {
        const double va = a.normal();
        CHECK(va == b.normal());
        differs_purpose |= va != c.normal();
        differs_seed |= va != d.normal();
    }
    CHECK(differs_purpose);
    CHECK(differs_seed);
}

TEST_CASE("uniforms use the top 53 bits and normals the Box-Muller pair") {
    RandomStream s(3, StreamId::Test);
    std::mt19937_64 raw(splitmix64(splitmix64(3) ^ static_cast<std::uint64_t>(StreamId::Test)));
    const double u1 = static_cast<double>(raw() >> 11) / 9007199254740992.0;
    const double u2 = static_cast<double>(raw() >> 11) / 9007199254740992.0;
    const double r = std::sqrt(-2.0 * std::log(1.0 - u1));
    CHECK(s.normal() == doctest::Approx(r * std::cos(2.0 * std::numbers::pi * u2)).epsilon(1e-15));
    CHECK(s.normal() == doctest::Approx(r * std::sin(2.0 * std::numbers::pi * u2)).epsilon(1e-15));
    CHECK(s.uniform() == static_cast<double>(raw() >> 11) / 9007199254740992.0);
}

TEST_CASE("normal moments") {
    RandomStream s(11, StreamId::Test);
    const int n = 200000;
    double sum = 0.0, sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double z = s.normal();
        sum += z;
        sq += z * z;
    }
    const double mean = sum / n;
    CHECK(std::abs(mean) < 4.0 / std::sqrt(n));
    CHECK(sq / n - mean * mean == doctest::Approx(1.0).epsilon(4.0 * std::sqrt(2.0 / n)));
}
