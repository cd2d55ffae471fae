#pragma once

#include <cstdint>
#include <optional>
#include <random>

namespace osgpcp {

/// Purpose tags for independent random streams. Each purpose gets its own
/// engine so that, e.g., changing the feature count never perturbs a dataset.
enum class StreamId : std::uint64_t {
    Frequencies = 1,
    Data = 2,
    Test = 99,
};

/// SplitMix64 finalizer; used to derive engine seeds from (seed, purpose).
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Deterministic random stream.
///
/// Engine: std::mt19937_64, whose output sequence is fixed by the standard.
/// Uniforms take the top 53 bits of one engine draw: u = (w >> 11) * 2^-53,
/// so u lies in [0, 1). Normals use the Box-Muller pair transform
///   z0 = sqrt(-2 ln(1 - u1)) cos(2 pi u2),  z1 = sqrt(-2 ln(1 - u1)) sin(2 pi u2)
/// returning z0 first and caching z1 for the next call. std::*_distribution is
/// avoided because its algorithm is implementation-defined.
class RandomStream {
public:
    RandomStream(std::uint64_t seed, StreamId purpose);

    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    double normal();
    double normal(double mean, double stddev) { return mean + stddev * normal(); }

private:
    std::mt19937_64 engine_;
    std::optional<double> spare_;
};

}  // namespace osgpcp
