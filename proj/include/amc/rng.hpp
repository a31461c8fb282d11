#pragma once

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <string_view>

namespace amc {

// SplitMix64 finalizer. Good avalanche, used for seed derivation.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// FNV-1a, for folding tag strings into seed chains.
constexpr std::uint64_t hash_str(std::string_view s) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Order-sensitive fold of tags into a master seed. Every stochastic cell of an
// experiment (snr, split, sample index, stage) derives its own stream from the
// master seed, so reruns are bit-identical and cells are independent.
class SeedChain {
public:
    explicit constexpr SeedChain(std::uint64_t master) : state_(mix64(master ^ 0x6a09e667f3bcc908ULL)) {}

    [[nodiscard]] constexpr SeedChain with(std::string_view tag) const {
        return SeedChain(mix64(state_ ^ hash_str(tag)), raw_tag{});
    }
    [[nodiscard]] constexpr SeedChain with(std::uint64_t v) const {
        return SeedChain(mix64(state_ ^ mix64(v)), raw_tag{});
    }
    [[nodiscard]] SeedChain with(double v) const {
        return with(std::bit_cast<std::uint64_t>(v));
    }

    [[nodiscard]] constexpr std::uint64_t seed() const noexcept { return state_; }

private:
    struct raw_tag {};
    constexpr SeedChain(std::uint64_t s, raw_tag) : state_(s) {}
    std::uint64_t state_;
};

// mt19937_64 is fully specified by the standard, so streams are identical
// across platforms. Distributions are hand-rolled for the same reason.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // 53-bit uniform in [0, 1)
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool bit() {
        if (bits_left_ == 0) {
            bit_buf_ = next_u64();
            bits_left_ = 64;
        }
        bool b = bit_buf_ & 1u;
        bit_buf_ >>= 1;
        --bits_left_;
        return b;
    }

    // standard normal via Box-Muller; second variate cached
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = 1.0 - uniform01();  // (0, 1], keeps log() finite
        double u2 = uniform01();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 2.0 * pi_ * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

    // circularly symmetric complex normal, total variance `variance`
    std::complex<double> complex_normal(double variance) {
        double s = std::sqrt(variance * 0.5);
        double re = normal();
        double im = normal();
        return {s * re, s * im};
    }

private:
    static constexpr double pi_ = 3.14159265358979323846;
    std::mt19937_64 engine_;
    std::uint64_t bit_buf_ = 0;
    int bits_left_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace amc
