#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "dataset.hpp"

namespace amc {

// Per-dimension (x - mean) / std with population (1/M) variance, fitted on the
// training split only. A constant dimension (std == 0) passes through
// untouched so RBF/KNN distances stay finite.
struct Standardizer {
    std::vector<double> mean;
    std::vector<double> stddev;  // 0 marks a constant dimension

    static Standardizer fit(const FeatureMatrix& train) {
        if (train.rows < 2) throw std::invalid_argument("Standardizer: need at least 2 rows");
        const std::size_t d = train.cols;
        Standardizer s;
        s.mean.assign(d, 0.0);
        s.stddev.assign(d, 0.0);
        const double m = static_cast<double>(train.rows);
        for (std::size_t r = 0; r < train.rows; ++r)
            for (std::size_t c = 0; c < d; ++c) s.mean[c] += train.at(r, c);
        for (std::size_t c = 0; c < d; ++c) s.mean[c] /= m;
        for (std::size_t r = 0; r < train.rows; ++r)
            for (std::size_t c = 0; c < d; ++c) {
                const double dv = train.at(r, c) - s.mean[c];
                s.stddev[c] += dv * dv;
            }
        for (std::size_t c = 0; c < d; ++c) s.stddev[c] = std::sqrt(s.stddev[c] / m);
        return s;
    }

    std::size_t dim() const { return mean.size(); }

    void transform_row(std::span<double> row) const {
        if (row.size() != dim()) throw std::invalid_argument("Standardizer: dimension mismatch");
        for (std::size_t c = 0; c < row.size(); ++c)
            if (stddev[c] > 0.0) row[c] = (row[c] - mean[c]) / stddev[c];
    }

    FeatureMatrix transform(const FeatureMatrix& x) const {
        FeatureMatrix out = x;
        for (std::size_t r = 0; r < out.rows; ++r) transform_row(out.row(r));
        return out;
    }
};

}  // namespace amc
