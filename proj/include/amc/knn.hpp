#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "dataset.hpp"

namespace amc {

// k-nearest-neighbour classifier over Euclidean distance. All tie-breaks are
// value-based so predictions are invariant under permutation of the training
// rows: neighbour selection orders by (distance, label), a vote tie goes to
// the label with the smallest summed distance, then to the scheme order.
class KnnClassifier {
public:
    KnnClassifier(FeatureMatrix train, std::vector<ModulationScheme> labels, int k)
        : train_(std::move(train)), labels_(std::move(labels)), k_(k) {
        if (train_.rows != labels_.size())
            throw std::invalid_argument("KnnClassifier: row/label count mismatch");
        if (k_ < 1) throw std::invalid_argument("KnnClassifier: k must be >= 1");
        if (static_cast<std::size_t>(k_) > train_.rows)
            throw std::invalid_argument("KnnClassifier: k exceeds training size");
    }

    ModulationScheme predict_one(std::span<const double> x) const {
        if (x.size() != train_.cols) throw std::invalid_argument("KnnClassifier: dimension mismatch");
        struct Neighbour {
            double dist;
            int label;
        };
        std::vector<Neighbour> nb(train_.rows);
        for (std::size_t r = 0; r < train_.rows; ++r) {
            double d2 = 0.0;
            const auto row = train_.row(r);
            for (std::size_t c = 0; c < x.size(); ++c) {
                const double dv = row[c] - x[c];
                d2 += dv * dv;
            }
            nb[r] = {std::sqrt(d2), static_cast<int>(labels_[r])};
        }
        const auto kth = nb.begin() + k_;
        std::nth_element(nb.begin(), kth - 1, nb.end(), [](const Neighbour& a, const Neighbour& b) {
            return a.dist != b.dist ? a.dist < b.dist : a.label < b.label;
        });
        std::sort(nb.begin(), kth, [](const Neighbour& a, const Neighbour& b) {
            return a.dist != b.dist ? a.dist < b.dist : a.label < b.label;
        });

        std::array<int, kSchemeCount> votes{};
        std::array<double, kSchemeCount> dist_sum{};
        for (int i = 0; i < k_; ++i) {
            votes[static_cast<std::size_t>(nb[i].label)]++;
            dist_sum[static_cast<std::size_t>(nb[i].label)] += nb[i].dist;
        }
        int best = -1;
        for (int lab = 0; lab < static_cast<int>(kSchemeCount); ++lab) {
            if (votes[static_cast<std::size_t>(lab)] == 0) continue;
            if (best < 0) {
                best = lab;
                continue;
            }
            const auto l = static_cast<std::size_t>(lab);
            const auto b = static_cast<std::size_t>(best);
            if (votes[l] > votes[b] || (votes[l] == votes[b] && dist_sum[l] < dist_sum[b])) best = lab;
        }
        return static_cast<ModulationScheme>(best);
    }

    std::vector<ModulationScheme> predict(const FeatureMatrix& x) const {
        std::vector<ModulationScheme> out;
        out.reserve(x.rows);
        for (std::size_t r = 0; r < x.rows; ++r) out.push_back(predict_one(x.row(r)));
        return out;
    }

    int k() const { return k_; }
    const FeatureMatrix& train_features() const { return train_; }
    const std::vector<ModulationScheme>& train_labels() const { return labels_; }

private:
    FeatureMatrix train_;
    std::vector<ModulationScheme> labels_;
    int k_;
};

}  // namespace amc
