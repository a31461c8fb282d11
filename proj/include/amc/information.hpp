#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "histogram.hpp"

namespace amc {

// H = -sum_i (k_i/n) log2(k_i/n), zero counts contribute nothing.
inline double entropy(std::span<const std::uint32_t> counts, std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("entropy: total count must be >= 1");
    const double dn = static_cast<double>(n);
    double h = 0.0;
    for (auto k : counts) {
        if (k == 0) continue;
        const double p = static_cast<double>(k) / dn;
        h -= p * std::log2(p);
    }
    return h;
}

// H(X|Y) = -sum_ij (k_ij/n) log2(k_ij/k_j)
inline double conditional_entropy(const Histogram2D& h) {
    if (h.n == 0) throw std::invalid_argument("conditional_entropy: empty histogram");
    const double dn = static_cast<double>(h.n);
    double acc = 0.0;
    for (int i = 0; i < h.bins; ++i) {
        for (int j = 0; j < h.bins; ++j) {
            const auto kij = h.at(i, j);
            if (kij == 0) continue;
            const auto kj = h.y_marginals[static_cast<std::size_t>(j)];
            acc -= (static_cast<double>(kij) / dn) *
                   std::log2(static_cast<double>(kij) / static_cast<double>(kj));
        }
    }
    return acc;
}

// Plug-in estimator I = sum_ij (k_ij/n) log2(k_ij n / (k_i k_j)); tiny negative
// round-off is clamped to zero.
inline double mutual_information(const Histogram2D& h) {
    if (h.n == 0) throw std::invalid_argument("mutual_information: empty histogram");
    const double dn = static_cast<double>(h.n);
    double acc = 0.0;
    for (int i = 0; i < h.bins; ++i) {
        const auto ki = h.x_marginals[static_cast<std::size_t>(i)];
        if (ki == 0) continue;
        for (int j = 0; j < h.bins; ++j) {
            const auto kij = h.at(i, j);
            if (kij == 0) continue;
            const auto kj = h.y_marginals[static_cast<std::size_t>(j)];
            acc += (static_cast<double>(kij) / dn) *
                   std::log2(static_cast<double>(kij) * dn /
                             (static_cast<double>(ki) * static_cast<double>(kj)));
        }
    }
    return acc > 0.0 ? acc : 0.0;
}

struct FeatureVector {
    double mi_bits = 0.0;
    std::optional<double> h_x;
    std::optional<double> h_y;
    std::optional<double> h_cond;
    BinRule rule = BinRule::SquareRoot;
    std::uint64_t n = 0;

    bool has_extras() const { return h_x.has_value(); }

    std::vector<double> row() const {
        if (has_extras()) return {mi_bits, *h_x, *h_y, *h_cond};
        return {mi_bits};
    }
};

constexpr std::size_t feature_dim(bool extras) { return extras ? 4 : 1; }

// bin_count -> histogram2d -> mutual_information (+ entropies when requested).
inline FeatureVector extract_features(const IqFrame& frame, BinRule rule, bool extras = false) {
    if (frame.n() < 2) throw std::invalid_argument("extract_features: need at least 2 samples");
    const int b = bin_count(rule, frame.n());
    const Histogram2D h = histogram2d(frame, b);
    FeatureVector f;
    f.rule = rule;
    f.n = frame.n();
    f.mi_bits = mutual_information(h);
    if (extras) {
        f.h_x = entropy(h.x_marginals, h.n);
        f.h_y = entropy(h.y_marginals, h.n);
        f.h_cond = conditional_entropy(h);
    }
    return f;
}

}  // namespace amc
