#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "rng.hpp"

namespace amc {

using cplx = std::complex<double>;

// Enum order doubles as the fixed tie-break order for classifiers.
enum class ModulationScheme : int { Bpsk = 0, Qpsk = 1, Psk8 = 2, Qam16 = 3, Qam64 = 4 };

inline constexpr std::array<ModulationScheme, 5> kAllSchemes = {
    ModulationScheme::Bpsk, ModulationScheme::Qpsk, ModulationScheme::Psk8,
    ModulationScheme::Qam16, ModulationScheme::Qam64};

inline constexpr std::size_t kSchemeCount = kAllSchemes.size();

constexpr int bits_per_symbol(ModulationScheme m) {
    switch (m) {
        case ModulationScheme::Bpsk: return 1;
        case ModulationScheme::Qpsk: return 2;
        case ModulationScheme::Psk8: return 3;
        case ModulationScheme::Qam16: return 4;
        case ModulationScheme::Qam64: return 6;
    }
    return 0;
}

constexpr std::string_view scheme_name(ModulationScheme m) {
    switch (m) {
        case ModulationScheme::Bpsk: return "BPSK";
        case ModulationScheme::Qpsk: return "QPSK";
        case ModulationScheme::Psk8: return "8PSK";
        case ModulationScheme::Qam16: return "16QAM";
        case ModulationScheme::Qam64: return "64QAM";
    }
    return "?";
}

inline std::optional<ModulationScheme> scheme_from_name(std::string_view name) {
    for (auto m : kAllSchemes)
        if (scheme_name(m) == name) return m;
    return std::nullopt;
}

namespace detail {

inline constexpr double kPi = 3.14159265358979323846;

constexpr unsigned gray(unsigned k) { return k ^ (k >> 1); }

// Gray-labelled PAM amplitudes for one axis of a square QAM: axis_amp[label]
// gives the level for an m-bit Gray label, levels {-(L-1), ..., L-1} step 2.
inline std::vector<double> gray_pam_axis(int bits) {
    const int levels = 1 << bits;
    std::vector<double> amp(static_cast<std::size_t>(levels));
    for (int p = 0; p < levels; ++p) amp[gray(static_cast<unsigned>(p))] = 2.0 * p - (levels - 1);
    return amp;
}

inline std::vector<cplx> build_constellation(ModulationScheme m) {
    const int k = bits_per_symbol(m);
    const std::size_t size = std::size_t{1} << k;
    std::vector<cplx> pts(size);
    switch (m) {
        case ModulationScheme::Bpsk:
            pts[0] = {1.0, 0.0};
            pts[1] = {-1.0, 0.0};
            break;
        case ModulationScheme::Qpsk:
            // Gray counterclockwise starting at pi/4: position p at angle pi/4 + p*pi/2
            for (unsigned p = 0; p < 4; ++p) {
                double ang = detail::kPi / 4.0 + p * (detail::kPi / 2.0);
                pts[gray(p)] = {std::cos(ang), std::sin(ang)};
            }
            break;
        case ModulationScheme::Psk8:
            // Gray counterclockwise starting at angle 0
            for (unsigned p = 0; p < 8; ++p) {
                double ang = p * (detail::kPi / 4.0);
                pts[gray(p)] = {std::cos(ang), std::sin(ang)};
            }
            break;
        case ModulationScheme::Qam16:
        case ModulationScheme::Qam64: {
            // square Gray map: first k/2 bits select I, last k/2 bits select Q
            const int half = k / 2;
            const auto axis = gray_pam_axis(half);
            const int levels = 1 << half;
            // mean power of the unscaled grid is 2*(L^2-1)/3 (10 for 16QAM, 42 for 64QAM)
            const double scale = 1.0 / std::sqrt(2.0 * (levels * levels - 1) / 3.0);
            for (std::size_t label = 0; label < size; ++label) {
                unsigned gi = static_cast<unsigned>(label) >> half;
                unsigned gq = static_cast<unsigned>(label) & ((1u << half) - 1u);
                pts[label] = {axis[gi] * scale, axis[gq] * scale};
            }
            break;
        }
    }
    return pts;
}

}  // namespace detail

// Gray-mapped constellation, unit average power, indexed by the MSB-first bit
// label of each point.
inline const std::vector<cplx>& constellation(ModulationScheme m) {
    static const std::array<std::vector<cplx>, kSchemeCount> cache = [] {
        std::array<std::vector<cplx>, kSchemeCount> c;
        for (auto s : kAllSchemes) c[static_cast<std::size_t>(s)] = detail::build_constellation(s);
        return c;
    }();
    return cache[static_cast<std::size_t>(m)];
}

inline std::vector<std::uint8_t> random_bits(std::size_t n, std::uint64_t seed) {
    if (n == 0) throw std::invalid_argument("random_bits: bit count must be >= 1");
    Rng rng(seed);
    std::vector<std::uint8_t> bits(n);
    for (auto& b : bits) b = rng.bit() ? 1 : 0;
    return bits;
}

struct SymbolStream {
    std::vector<cplx> symbols;
    ModulationScheme scheme = ModulationScheme::Bpsk;
};

// MSB-first bit groups onto the Gray constellation.
inline SymbolStream modulate(std::span<const std::uint8_t> bits, ModulationScheme m) {
    const std::size_t k = static_cast<std::size_t>(bits_per_symbol(m));
    if (bits.empty() || bits.size() % k != 0)
        throw std::invalid_argument("modulate: bit count not divisible by bits per symbol");
    const auto& pts = constellation(m);
    SymbolStream out;
    out.scheme = m;
    out.symbols.reserve(bits.size() / k);
    for (std::size_t i = 0; i < bits.size(); i += k) {
        std::size_t label = 0;
        for (std::size_t j = 0; j < k; ++j) label = (label << 1) | (bits[i + j] & 1u);
        out.symbols.push_back(pts[label]);
    }
    return out;
}

// Rescales so the empirical average per-symbol power is exactly 1.
inline std::vector<cplx> normalize_power(std::span<const cplx> symbols) {
    if (symbols.empty()) throw std::invalid_argument("normalize_power: empty input");
    double power = 0.0;
    for (const auto& s : symbols) power += std::norm(s);
    power /= static_cast<double>(symbols.size());
    if (power <= 0.0) throw std::invalid_argument("normalize_power: all-zero input");
    const double scale = 1.0 / std::sqrt(power);
    std::vector<cplx> out(symbols.begin(), symbols.end());
    for (auto& s : out) s *= scale;
    return out;
}

inline std::size_t nearest_point(const std::vector<cplx>& points, cplx v) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < points.size(); ++i) {
        double d = std::norm(v - points[i]);
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return best;
}

// Minimum-distance demapping back to bits (MSB first). Inverse of modulate()
// for noiseless unit-power symbols.
inline std::vector<std::uint8_t> demap_nearest(std::span<const cplx> symbols, ModulationScheme m) {
    const auto& pts = constellation(m);
    const int k = bits_per_symbol(m);
    std::vector<std::uint8_t> bits;
    bits.reserve(symbols.size() * static_cast<std::size_t>(k));
    for (const auto& s : symbols) {
        const std::size_t label = nearest_point(pts, s);
        for (int j = k - 1; j >= 0; --j) bits.push_back(static_cast<std::uint8_t>((label >> j) & 1u));
    }
    return bits;
}

}  // namespace amc
