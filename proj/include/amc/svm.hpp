#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dataset.hpp"

namespace amc {

class SvmConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SmoParams {
    double c = 1.0;
    double gamma = 1.0;
    double tol = 1e-3;             // KKT violation tolerance
    std::size_t max_iter = 100000;  // pair updates before giving up
};

inline double rbf_kernel(std::span<const double> a, std::span<const double> b, double gamma) {
    double d2 = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        d2 += d * d;
    }
    return std::exp(-gamma * d2);
}

// One fitted binary machine: decision(x) = sum_i coeff_i K(sv_i, x) + bias,
// coeff_i = alpha_i * y_i.
struct BinarySvm {
    std::size_t dim = 0;
    std::vector<double> support_vectors;  // flat, nsv x dim
    std::vector<double> coeff;
    double bias = 0.0;
    double gamma = 1.0;

    std::size_t num_sv() const { return coeff.size(); }

    std::span<const double> sv(std::size_t i) const {
        return std::span<const double>(support_vectors).subspan(i * dim, dim);
    }

    double decision(std::span<const double> x) const {
        double f = bias;
        for (std::size_t i = 0; i < coeff.size(); ++i) f += coeff[i] * rbf_kernel(sv(i), x, gamma);
        return f;
    }
};

namespace detail {

// SMO on the C-SVC dual with maximal-violating-pair working-set selection
// (second-order choice of j). Gradient g_i = d/d alpha_i of
// 1/2 a'Qa - e'a with Q_ij = y_i y_j K_ij; stops when the maximal KKT
// violation drops below tol.
struct SmoResult {
    std::vector<double> alpha;
    double bias = 0.0;
    std::size_t iterations = 0;
};

inline SmoResult smo_solve(const FeatureMatrix& x, const std::vector<int>& y, const SmoParams& p,
                           const std::string& pair_label) {
    const std::size_t n = y.size();
    if (x.rows != n || n < 2) throw std::invalid_argument("smo_solve: bad problem size");
    const double C = p.c;

    // full kernel matrix for the problem sizes this pipeline sees
    const bool cache_full = n <= 4096;
    std::vector<double> kmat;
    if (cache_full) {
        kmat.resize(n * n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) {
                const double k = rbf_kernel(x.row(i), x.row(j), p.gamma);
                kmat[i * n + j] = k;
                kmat[j * n + i] = k;
            }
    }
    std::vector<double> krow_i(cache_full ? 0 : n), krow_j(cache_full ? 0 : n);
    auto kernel_row = [&](std::size_t r, std::vector<double>& buf) -> const double* {
        if (cache_full) return &kmat[r * n];
        for (std::size_t k = 0; k < n; ++k) buf[k] = rbf_kernel(x.row(r), x.row(k), p.gamma);
        return buf.data();
    };

    std::vector<double> alpha(n, 0.0);
    std::vector<double> grad(n, -1.0);

    auto in_up = [&](std::size_t k) { return y[k] > 0 ? alpha[k] < C : alpha[k] > 0.0; };
    auto in_low = [&](std::size_t k) { return y[k] > 0 ? alpha[k] > 0.0 : alpha[k] < C; };

    std::size_t iter = 0;
    double g_max = 0.0, g_min = 0.0;
    while (true) {
        // i: maximal -y*grad over the "up" set
        std::ptrdiff_t i = -1;
        g_max = -std::numeric_limits<double>::infinity();
        g_min = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < n; ++k) {
            if (in_up(k)) {
                const double v = -y[k] * grad[k];
                if (v > g_max) {
                    g_max = v;
                    i = static_cast<std::ptrdiff_t>(k);
                }
            }
            if (in_low(k)) g_min = std::min(g_min, -y[k] * grad[k]);
        }
        if (i < 0 || g_max - g_min < p.tol) break;

        const double* ki = kernel_row(static_cast<std::size_t>(i), krow_i);
        const double kii = ki[static_cast<std::size_t>(i)];

        // j: most objective decrease among valid lower candidates
        std::ptrdiff_t j = -1;
        double best_obj = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < n; ++k) {
            if (!in_low(k)) continue;
            const double b = g_max + y[k] * grad[k];
            if (b <= 0.0) continue;
            double a = kii + (cache_full ? kmat[k * n + k] : rbf_kernel(x.row(k), x.row(k), p.gamma)) -
                       2.0 * ki[k];
            a = std::max(a, 1e-12);
            const double obj = -(b * b) / a;
            if (obj < best_obj) {
                best_obj = obj;
                j = static_cast<std::ptrdiff_t>(k);
            }
        }
        if (j < 0) break;

        if (++iter > p.max_iter)
            throw SvmConvergenceError("svm: SMO failed to converge within iteration cap for pair " +
                                      pair_label);

        const auto ui = static_cast<std::size_t>(i);
        const auto uj = static_cast<std::size_t>(j);
        const double* kj = kernel_row(uj, krow_j);
        const double kjj = kj[uj];
        const double kij = ki[uj];

        double lambda = std::max(kii + kjj - 2.0 * kij, 1e-12);
        const double step = (-y[ui] * grad[ui] + y[uj] * grad[uj]) / lambda;

        const double old_ai = alpha[ui];
        const double old_aj = alpha[uj];
        const double sum = y[ui] * old_ai + y[uj] * old_aj;
        alpha[ui] = std::clamp(old_ai + y[ui] * step, 0.0, C);
        alpha[uj] = std::clamp(y[uj] * (sum - y[ui] * alpha[ui]), 0.0, C);
        alpha[ui] = y[ui] * (sum - y[uj] * alpha[uj]);

        const double dai = alpha[ui] - old_ai;
        const double daj = alpha[uj] - old_aj;
        for (std::size_t k = 0; k < n; ++k)
            grad[k] += y[k] * (ki[k] * dai * y[ui] + kj[k] * daj * y[uj]);
    }

    // bias from free support vectors; midpoint of the violation band otherwise
    double bias_acc = 0.0;
    std::size_t free_count = 0;
    for (std::size_t k = 0; k < n; ++k) {
        if (alpha[k] > 0.0 && alpha[k] < C) {
            bias_acc += -y[k] * grad[k];
            ++free_count;
        }
    }
    SmoResult res;
    res.alpha = std::move(alpha);
    res.bias = free_count > 0 ? bias_acc / static_cast<double>(free_count) : (g_max + g_min) / 2.0;
    res.iterations = iter;
    return res;
}

}  // namespace detail

// Trains one binary RBF machine; y entries must be +1/-1.
inline BinarySvm svm_train_binary(const FeatureMatrix& x, const std::vector<int>& y,
                                  const SmoParams& p, const std::string& pair_label = "binary") {
    for (int v : y)
        if (v != 1 && v != -1) throw std::invalid_argument("svm_train_binary: labels must be +1/-1");
    const auto res = detail::smo_solve(x, y, p, pair_label);
    BinarySvm m;
    m.dim = x.cols;
    m.gamma = p.gamma;
    m.bias = res.bias;
    for (std::size_t k = 0; k < y.size(); ++k) {
        if (res.alpha[k] > 0.0) {
            const auto row = x.row(k);
            m.support_vectors.insert(m.support_vectors.end(), row.begin(), row.end());
            m.coeff.push_back(res.alpha[k] * y[k]);
        }
    }
    return m;
}

// gamma default: 1/(d * variance of the training features), which is ~1/d
// after standardization.
inline double svm_auto_gamma(const FeatureMatrix& x) {
    if (x.rows == 0 || x.cols == 0) throw std::invalid_argument("svm_auto_gamma: empty matrix");
    double mean = 0.0;
    for (double v : x.data) mean += v;
    mean /= static_cast<double>(x.data.size());
    double var = 0.0;
    for (double v : x.data) var += (v - mean) * (v - mean);
    var /= static_cast<double>(x.data.size());
    const double d = static_cast<double>(x.cols);
    return var > 1e-12 ? 1.0 / (d * var) : 1.0 / d;
}

// One-vs-one multi-class SVM over the five schemes: 10 binary machines,
// pairwise voting, vote ties broken by summed decision margin, then by the
// fixed scheme order.
class SvmClassifier {
public:
    struct PairMachine {
        ModulationScheme pos;
        ModulationScheme neg;
        BinarySvm machine;
    };

    SvmClassifier() = default;

    SvmClassifier(const FeatureMatrix& train, const std::vector<ModulationScheme>& labels, double c,
                  std::optional<double> gamma) {
        if (train.rows != labels.size())
            throw std::invalid_argument("SvmClassifier: row/label count mismatch");
        if (c <= 0.0) throw std::invalid_argument("SvmClassifier: C must be positive");

        std::array<std::vector<std::size_t>, kSchemeCount> by_class;
        for (std::size_t r = 0; r < labels.size(); ++r)
            by_class[static_cast<std::size_t>(labels[r])].push_back(r);
        for (auto m : kAllSchemes)
            if (by_class[static_cast<std::size_t>(m)].empty())
                throw std::invalid_argument(std::string("SvmClassifier: class absent from training: ") +
                                            std::string(scheme_name(m)));

        c_ = c;
        gamma_ = gamma.value_or(svm_auto_gamma(train));
        if (gamma_ <= 0.0) throw std::invalid_argument("SvmClassifier: gamma must be positive");

        for (std::size_t a = 0; a < kSchemeCount; ++a) {
            for (std::size_t b = a + 1; b < kSchemeCount; ++b) {
                FeatureMatrix sub(0, 0);
                std::vector<int> y;
                for (auto r : by_class[a]) {
                    sub.push_row(train.row(r));
                    y.push_back(+1);
                }
                for (auto r : by_class[b]) {
                    sub.push_row(train.row(r));
                    y.push_back(-1);
                }
                SmoParams p;
                p.c = c_;
                p.gamma = gamma_;
                const std::string tag = std::string(scheme_name(kAllSchemes[a])) + "/" +
                                        std::string(scheme_name(kAllSchemes[b]));
                machines_.push_back({kAllSchemes[a], kAllSchemes[b], svm_train_binary(sub, y, p, tag)});
            }
        }
    }

    ModulationScheme predict_one(std::span<const double> x) const {
        std::array<int, kSchemeCount> votes{};
        std::array<double, kSchemeCount> margin{};
        for (const auto& pm : machines_) {
            const double f = pm.machine.decision(x);
            if (f > 0.0)
                votes[static_cast<std::size_t>(pm.pos)]++;
            else
                votes[static_cast<std::size_t>(pm.neg)]++;
            margin[static_cast<std::size_t>(pm.pos)] += f;
            margin[static_cast<std::size_t>(pm.neg)] -= f;
        }
        std::size_t best = 0;
        for (std::size_t lab = 1; lab < kSchemeCount; ++lab) {
            if (votes[lab] > votes[best] || (votes[lab] == votes[best] && margin[lab] > margin[best]))
                best = lab;
        }
        return static_cast<ModulationScheme>(best);
    }

    std::vector<ModulationScheme> predict(const FeatureMatrix& x) const {
        std::vector<ModulationScheme> out;
        out.reserve(x.rows);
        for (std::size_t r = 0; r < x.rows; ++r) out.push_back(predict_one(x.row(r)));
        return out;
    }

    double c() const { return c_; }
    double gamma() const { return gamma_; }
    const std::vector<PairMachine>& machines() const { return machines_; }
    std::vector<PairMachine>& machines() { return machines_; }
    void set_hyperparams(double c, double gamma) {
        c_ = c;
        gamma_ = gamma;
    }

private:
    double c_ = 1.0;
    double gamma_ = 1.0;
    std::vector<PairMachine> machines_;
};

}  // namespace amc
