#pragma once

#include <array>
#include <cmath>
#include <cstdint>

// Deterministic random streams with splittable keys.
//
// Every consumer of randomness receives an explicit stream; there is no
// hidden global state. Stream keys are derived along the lineage
// root seed -> trial -> iteration -> arm, so results are reproducible
// no matter how trials are scheduled across threads.

namespace kabc::rng {

// SplitMix64 finalizer; also used as the key-derivation mix.
inline std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Child stream key. Mixing is order-sensitive, so derive(derive(s, a), b)
// and derive(derive(s, b), a) give unrelated streams.
inline std::uint64_t derive(std::uint64_t parent, std::uint64_t index) {
    return mix(parent ^ mix(index + 0x51'7c'c1'b7'27'22'0a'95ull));
}

// xoshiro256** (Blackman & Vigna), state seeded via SplitMix64.
class Xoshiro256ss {
public:
    explicit Xoshiro256ss(std::uint64_t seed) {
        std::uint64_t s = seed;
        for (auto& word : state_) {
            s += 0x9e3779b97f4a7c15ull;
            word = mix(s);
        }
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform in [0, 1), 53 random bits.
    double uniform01() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller; two uniforms per draw, no cached spare.
    double normal() {
        const double u1 = 1.0 - uniform01();  // (0, 1]
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * pi() * u2);
    }

private:
    static constexpr double pi() { return 3.14159265358979323846; }

    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> state_{};
};

}  // namespace kabc::rng
