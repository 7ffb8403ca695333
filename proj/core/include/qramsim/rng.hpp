#pragma once

#include <cstdint>

namespace qramsim {

// SplitMix64 (Steele, Lea, Flood 2014). Used for seeding, seed derivation and
// dataset bit generation. Unlike std::uniform_* distributions, the output
// stream is identical on every platform, which the reproducibility contract
// relies on.
struct SplitMix64 {
    uint64_t state;

    explicit SplitMix64(uint64_t seed) : state(seed) {}

    uint64_t next() {
        uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
};

// Mixes a sequence of integers into a single derived seed. Each trajectory
// owns the stream derived from (master_seed, indices...), so results do not
// depend on how trajectories are distributed over workers.
inline uint64_t derive_seed(uint64_t master, std::initializer_list<uint64_t> indices) {
    SplitMix64 sm(master);
    uint64_t h = sm.next();
    for (uint64_t v : indices) {
        SplitMix64 mix(h ^ (v + 0x9e3779b97f4a7c15ull));
        h = mix.next();
    }
    return h;
}

// xoshiro256++ (Blackman, Vigna 2019). Small, fast, deterministic across
// platforms. next_double() returns a uniform double in [0, 1).
class Rng {
  public:
    explicit Rng(uint64_t seed) {
        SplitMix64 sm(seed);
        for (auto& w : s_) w = sm.next();
    }

    uint64_t next_u64() {
        const uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, bound) by rejection; bound must be > 0.
    uint64_t next_below(uint64_t bound) {
        const uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            uint64_t r = next_u64();
            if (r >= threshold) return r % bound;
        }
    }

  private:
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    uint64_t s_[4];
};

}  // namespace qramsim
