#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "channel.hpp"

namespace amc {

enum class BinRule : int { SquareRoot = 0, Sturges = 1, Rice = 2 };

inline constexpr std::array<BinRule, 3> kAllBinRules = {BinRule::SquareRoot, BinRule::Sturges,
                                                        BinRule::Rice};

constexpr std::string_view bin_rule_name(BinRule r) {
    switch (r) {
        case BinRule::SquareRoot: return "sqrt";
        case BinRule::Sturges: return "sturges";
        case BinRule::Rice: return "rice";
    }
    return "?";
}

inline std::optional<BinRule> bin_rule_from_name(std::string_view name) {
    for (auto r : kAllBinRules)
        if (bin_rule_name(r) == name) return r;
    return std::nullopt;
}

// Exact integer ceilings of the three empirical rules:
//   sqrt:    ceil(sqrt(n))      -> smallest b with b^2 >= n
//   sturges: ceil(1 + log2(n))  -> 1 + ceil(log2(n))
//   rice:    ceil(2 n^(1/3))    -> smallest b with b^3 >= 8n
inline int bin_count(BinRule rule, std::size_t n) {
    if (n < 2) throw std::invalid_argument("bin_count: need at least 2 samples");
    switch (rule) {
        case BinRule::SquareRoot: {
            auto b = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
            while (b > 1 && (b - 1) * (b - 1) >= n) --b;
            while (b * b < n) ++b;
            return static_cast<int>(b);
        }
        case BinRule::Sturges:
            return 1 + std::bit_width(static_cast<std::uint64_t>(n) - 1);
        case BinRule::Rice: {
            auto b = static_cast<std::uint64_t>(std::llround(2.0 * std::cbrt(static_cast<double>(n))));
            while (b > 2 && (b - 1) * (b - 1) * (b - 1) >= 8 * n) --b;
            while (b * b * b < 8 * n) ++b;
            return static_cast<int>(b);
        }
    }
    throw std::invalid_argument("bin_count: unknown rule");
}

// b x b equal-width count grid over the IQ plane. k_ij, its marginals k_i and
// k_j, and the bin geometry of the plug-in estimators all live here.
struct Histogram2D {
    int bins = 0;
    std::uint64_t n = 0;
    std::vector<std::uint32_t> counts;       // row-major, index i*bins + j (i on X, j on Y)
    std::vector<std::uint32_t> x_marginals;  // k_i = sum_j counts(i, j)
    std::vector<std::uint32_t> y_marginals;  // k_j = sum_i counts(i, j)
    std::vector<double> x_edges;             // bins + 1, uniform width
    std::vector<double> y_edges;

    std::uint32_t at(int i, int j) const {
        return counts[static_cast<std::size_t>(i) * static_cast<std::size_t>(bins) +
                      static_cast<std::size_t>(j)];
    }
};

namespace detail {

inline std::vector<double> uniform_edges(double lo, double span, int bins) {
    std::vector<double> e(static_cast<std::size_t>(bins) + 1);
    for (int k = 0; k <= bins; ++k)
        e[static_cast<std::size_t>(k)] = lo + span * static_cast<double>(k) / static_cast<double>(bins);
    return e;
}

// Right-closed top bin: the axis maximum lands in bin b-1.
inline int bin_index(double v, double lo, double span, int bins) {
    double t = (v - lo) * static_cast<double>(bins) / span;
    auto idx = static_cast<long>(t);
    if (idx < 0) idx = 0;
    if (idx >= bins) idx = bins - 1;
    return static_cast<int>(idx);
}

inline void fill_marginals(Histogram2D& h) {
    const int b = h.bins;
    h.x_marginals.assign(static_cast<std::size_t>(b), 0);
    h.y_marginals.assign(static_cast<std::size_t>(b), 0);
    for (int i = 0; i < b; ++i)
        for (int j = 0; j < b; ++j) {
            const auto c = h.at(i, j);
            h.x_marginals[static_cast<std::size_t>(i)] += c;
            h.y_marginals[static_cast<std::size_t>(j)] += c;
        }
}

}  // namespace detail

// Histogram of the IQ scatter: X = real parts, Y = imaginary parts. Bin edges
// span the per-frame data range, which makes the counts invariant to positive
// rescaling of the samples. A degenerate axis (max == min) collapses all
// samples into one row/column.
inline Histogram2D histogram2d(std::span<const cplx> samples, int bins) {
    if (samples.size() < 2) throw std::invalid_argument("histogram2d: need at least 2 samples");
    if (bins < 2) throw std::invalid_argument("histogram2d: need at least 2 bins");

    double x_min = samples[0].real(), x_max = x_min;
    double y_min = samples[0].imag(), y_max = y_min;
    for (const auto& s : samples) {
        x_min = std::min(x_min, s.real());
        x_max = std::max(x_max, s.real());
        y_min = std::min(y_min, s.imag());
        y_max = std::max(y_max, s.imag());
    }
    const double x_span = (x_max > x_min) ? (x_max - x_min) : 1.0;
    const double y_span = (y_max > y_min) ? (y_max - y_min) : 1.0;

    Histogram2D h;
    h.bins = bins;
    h.n = samples.size();
    h.counts.assign(static_cast<std::size_t>(bins) * static_cast<std::size_t>(bins), 0);
    for (const auto& s : samples) {
        const int i = detail::bin_index(s.real(), x_min, x_span, bins);
        const int j = detail::bin_index(s.imag(), y_min, y_span, bins);
        ++h.counts[static_cast<std::size_t>(i) * static_cast<std::size_t>(bins) +
                   static_cast<std::size_t>(j)];
    }
    h.x_edges = detail::uniform_edges(x_min, x_span, bins);
    h.y_edges = detail::uniform_edges(y_min, y_span, bins);
    detail::fill_marginals(h);
    return h;
}

inline Histogram2D histogram2d(const IqFrame& frame, int bins) {
    return histogram2d(std::span<const cplx>(frame.samples), bins);
}

// Wraps a raw b x b count grid (row-major) as a Histogram2D with unit edges.
inline Histogram2D histogram_from_counts(std::vector<std::uint32_t> counts, int bins) {
    if (bins < 1 || counts.size() != static_cast<std::size_t>(bins) * static_cast<std::size_t>(bins))
        throw std::invalid_argument("histogram_from_counts: counts size must be bins*bins");
    Histogram2D h;
    h.bins = bins;
    h.counts = std::move(counts);
    h.n = std::accumulate(h.counts.begin(), h.counts.end(), std::uint64_t{0});
    h.x_edges = detail::uniform_edges(0.0, 1.0, bins);
    h.y_edges = detail::uniform_edges(0.0, 1.0, bins);
    detail::fill_marginals(h);
    return h;
}

}  // namespace amc
