#pragma once

#include <cstdint>
#include <random>

namespace stablelab {

/// 64-bit Mersenne Twister with explicit stream derivation.
///
/// Every Monte Carlo path draws from its own stream keyed by
/// (master_seed, path_index), so results do not depend on how paths are
/// scheduled across threads. All variates are produced from raw engine
/// output with fixed transforms, which keeps them bit-identical across
/// standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    static Rng stream(std::uint64_t master_seed, std::uint64_t index);

    /// Uniform on the open interval (0, 1).
    double uniform();
    /// Exponential with unit mean.
    double exponential();

    std::uint64_t next_u64() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

}  // namespace stablelab
