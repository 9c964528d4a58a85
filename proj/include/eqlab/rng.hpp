// rng.hpp — counter-based random streams for reproducible sampling.
//
// Every draw is a pure function of (stream key, position). Streams are keyed
// by (seed, instance index, stream name), so concurrent instances can never
// perturb each other's draws and results are independent of evaluation order.
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <string_view>

namespace eqlab {

class Rng {
public:
    explicit Rng(std::uint64_t key) : key_(key) {}

    static std::uint64_t derive_key(std::uint64_t seed, std::uint64_t index,
                                    std::string_view stream) {
        // FNV-1a over the stream name, mixed with seed and index.
        std::uint64_t h = 1469598103934665603ull;
        for (unsigned char c : stream) {
            h ^= c;
            h *= 1099511628211ull;
        }
        return mix(mix(seed) ^ mix(index + golden) ^ h);
    }

    static Rng keyed(std::uint64_t seed, std::uint64_t index, std::string_view stream) {
        return Rng(derive_key(seed, index, stream));
    }

    // SplitMix64: finalizer applied to key + counter * golden.
    std::uint64_t next_u64() { return mix(key_ + (++counter_) * golden); }

    // Uniform in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    // Standard normal via Box-Muller.
    double gaussian() {
        double u1 = 1.0 - uniform01();  // (0, 1], keeps log() finite
        double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
    }

    // Real and imaginary parts independent N(0, 1).
    std::complex<double> complex_gaussian() {
        double u1 = 1.0 - uniform01();
        double u2 = uniform01();
        double r = std::sqrt(-2.0 * std::log(u1));
        return {r * std::cos(two_pi * u2), r * std::sin(two_pi * u2)};
    }

private:
    static constexpr std::uint64_t golden = 0x9E3779B97F4A7C15ull;
    static constexpr double two_pi = 6.28318530717958647692;

    static constexpr std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace eqlab
