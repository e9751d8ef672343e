#pragma once

#include <cstdint>

namespace spectrafrac {

// splitmix64 (Steele, Lea, Flood 2014). Chosen over std:: distributions so
// that seeded output is bit-identical across platforms and standard library
// versions; all stochastic paths in the library go through this generator.
class SplitMix64 {
public:
    explicit SplitMix64(uint64_t seed) : state_(seed) {}

    uint64_t next_u64() {
        uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform double in [0, 1), 53 random bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform double in [-b, b].
    double next_symmetric(double b) { return (2.0 * next_double() - 1.0) * b; }

private:
    uint64_t state_;
};

// Derives an independent stream for (seed, index); used for per-point and
// per-grid-cell streams so results do not depend on evaluation order.
inline uint64_t derive_stream(uint64_t seed, uint64_t index) {
    SplitMix64 g(seed ^ (0xA0761D6478BD642FULL + index * 0xE7037ED1A0B428DBULL));
    return g.next_u64();
}

}  // namespace spectrafrac
