#pragma once

#include <cstdint>

namespace curv {

// splitmix64: cheap, high-quality 64-bit mixer. Used both as a stream
// generator and as a counter-based generator (hash of seed and index),
// which gives addressable draws that are independent of evaluation order.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t x = state_;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    // uniform in [0,1)
    double next_double() {
        return (double)(next_u64() >> 11) * 0x1.0p-53;
    }

    // uniform in {0, ..., n-1}, n > 0; rejection keeps it unbiased
    std::uint64_t next_below(std::uint64_t n) {
        std::uint64_t limit = ~0ULL - ~0ULL % n;
        std::uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        return x % n;
    }

private:
    std::uint64_t state_;
};

// Addressable draw: value depends only on (seed, index).
inline double counter_double(std::uint64_t seed, std::uint64_t index) {
    return (double)(splitmix64(splitmix64(seed) ^ index) >> 11) * 0x1.0p-53;
}

inline std::uint64_t counter_u64(std::uint64_t seed, std::uint64_t index) {
    return splitmix64(splitmix64(seed) ^ index);
}

} // namespace curv
