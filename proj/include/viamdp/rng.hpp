#pragma once

#include <cstdint>

namespace viamdp {

/// SplitMix64 uniform stream: a counter-based generator whose output is a
/// hash of a Weyl-sequence counter. Identical seeds give identical streams
/// on every platform.
class UniformStream {
public:
    explicit UniformStream(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double next() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Independent child stream (SplittableRandom-style).
    UniformStream split() { return UniformStream(next_u64()); }

private:
    std::uint64_t state_;
};

}  // namespace viamdp
