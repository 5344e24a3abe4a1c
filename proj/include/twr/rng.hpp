#pragma once

#include <cmath>
#include <cstdint>

namespace twr {

// SplitMix64 generator. Standard-library engines are portable but the
// distributions are not, so all randomness in the pipeline goes through this
// (results must be bit-identical across platforms and compilers).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1) with 53-bit resolution.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [0, n).
    std::uint64_t uniform_int(std::uint64_t n) { return next_u64() % n; }

    // Standard normal via Box-Muller, one cached spare.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        while (u1 == 0.0) u1 = uniform();
        const double u2 = uniform();
        const double mag = std::sqrt(-2.0 * std::log(u1));
        const double two_pi = 6.283185307179586476925286766559;
        spare_ = mag * std::sin(two_pi * u2);
        has_spare_ = true;
        return mag * std::cos(two_pi * u2);
    }

    std::uint64_t state() const { return state_; }
    bool has_spare() const { return has_spare_; }
    double spare() const { return spare_; }
    void restore(std::uint64_t state, bool has_spare, double spare) {
        state_ = state;
        has_spare_ = has_spare;
        spare_ = spare;
    }

private:
    std::uint64_t state_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

// Stateless mix of several integers into a child seed. Sample generation
// derives per-sample seeds this way so parallel order cannot matter.
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b, std::uint64_t c = 0) {
    Rng r(a ^ 0xD1B54A32D192ED03ULL);
    std::uint64_t s = r.next_u64();
    s ^= b + 0x9E3779B97F4A7C15ULL + (s << 6) + (s >> 2);
    Rng r2(s);
    s = r2.next_u64();
    s ^= c + 0x9E3779B97F4A7C15ULL + (s << 6) + (s >> 2);
    return Rng(s).next_u64();
}

}  // namespace twr
