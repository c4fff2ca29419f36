#ifndef RESOURCETUNE_RNG_HPP
#define RESOURCETUNE_RNG_HPP

#include <cstdint>
#include <string_view>

namespace rtune::rng {

// SplitMix64 (Steele, Lea, Flood). Used both as a stream generator and to
// derive sub-stream seeds. All outputs are fixed functions of the seed, so
// generated scenarios are stable across platforms and refactors.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform double in [0, 1), 53-bit resolution.
    double next_double() { return double(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform double in (0, 1].
    double next_double_open_closed() { return 1.0 - next_double(); }

    // Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + next_double() * (hi - lo); }

    // Uniform integer in [lo, hi], unbiased via rejection.
    std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi) {
        const std::uint64_t span = hi - lo + 1;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
        std::uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        return lo + x % span;
    }

    bool bernoulli(double p) { return next_double() < p; }

private:
    std::uint64_t state_;
};

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Named sub-stream: the returned generator depends only on (seed, tag, index).
inline SplitMix64 substream(std::uint64_t seed, std::string_view tag, std::uint64_t index = 0) {
    SplitMix64 mixer(seed ^ fnv1a64(tag));
    mixer.next_u64();
    const std::uint64_t derived = mixer.next_u64() ^ (0x9e3779b97f4a7c15ULL * (index + 1));
    return SplitMix64(derived);
}

}  // namespace rtune::rng

#endif  // RESOURCETUNE_RNG_HPP
