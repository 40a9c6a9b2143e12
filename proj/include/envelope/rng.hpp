#ifndef ENVELOPE_RNG_HPP
#define ENVELOPE_RNG_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstring>

namespace envelope {

// All randomness in this library flows through SplitMix64. The algorithm is
// fixed here (not delegated to <random>) so that identical seeds produce
// identical streams on every platform and standard library.
//
// Reference sequence: state advances by 0x9E3779B97F4A7C15 per draw and the
// output is mixed with the Stafford mix13 constants.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Deterministic stream-splitting: derives an independent seed from a base
// seed and a salt (module tag, replicate index, candidate hash, ...).
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t s = seed ^ (salt * 0xD6E8FEB86659FD93ULL + 0x2545F4914F6CDD1DULL);
    return splitmix64_next(s);
}

// 64-bit FNV-1a over raw bytes; used to hash candidate membership patterns.
inline std::uint64_t hash_bytes(const void* data, std::size_t n,
                                std::uint64_t basis = 0xCBF29CE484222325ULL) {
    const unsigned char* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = basis;
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 0x100000001B3ULL;
    }
    return h;
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() { return splitmix64_next(state_); }

    // Uniform on [0,1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform01();
    }

    // Uniform index in [0, n). Uses the 53-bit uniform; the bias of at most
    // one part in 2^53/n is irrelevant at the sample sizes used here.
    std::size_t uniform_index(std::size_t n) {
        std::size_t i = static_cast<std::size_t>(uniform01() * static_cast<double>(n));
        return i < n ? i : n - 1;
    }

    // Box-Muller with caching of the second deviate.
    double normal(double mean = 0.0, double sd = 1.0) {
        if (has_spare_) {
            has_spare_ = false;
            return mean + sd * spare_;
        }
        // u1 in (0,1] so the log is finite.
        double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
        double u2 = uniform01();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return mean + sd * r * std::cos(a);
    }

private:
    std::uint64_t state_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

} // namespace envelope

#endif // ENVELOPE_RNG_HPP
