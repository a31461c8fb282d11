#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "modulation.hpp"

namespace amc {

// Flat row-major feature storage; d is 1 (MI only) or 4 (with entropies).
struct FeatureMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    FeatureMatrix() = default;
    FeatureMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

    std::span<const double> row(std::size_t r) const {
        return std::span<const double>(data).subspan(r * cols, cols);
    }
    std::span<double> row(std::size_t r) {
        return std::span<double>(data).subspan(r * cols, cols);
    }

    void push_row(std::span<const double> values) {
        if (rows == 0 && cols == 0) cols = values.size();
        if (values.size() != cols) throw std::invalid_argument("FeatureMatrix: row width mismatch");
        data.insert(data.end(), values.begin(), values.end());
        ++rows;
    }

    bool all_finite() const {
        for (double v : data)
            if (!std::isfinite(v)) return false;
        return true;
    }
};

enum class Split : int { Train = 0, Test = 1 };

constexpr std::string_view split_name(Split s) { return s == Split::Train ? "train" : "test"; }

// One per-SNR train or test split: M feature rows with their scheme labels.
struct LabeledDataset {
    FeatureMatrix features;
    std::vector<ModulationScheme> labels;
    double snr_db = 0.0;
    Split split = Split::Train;

    std::size_t size() const { return labels.size(); }

    void validate() const {
        if (features.rows != labels.size())
            throw std::invalid_argument("LabeledDataset: row/label count mismatch");
        if (!features.all_finite())
            throw std::invalid_argument("LabeledDataset: non-finite feature value");
    }
};

}  // namespace amc
