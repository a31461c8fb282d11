#pragma once

#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "dataset.hpp"
#include "histogram.hpp"
#include "information.hpp"
#include "knn.hpp"
#include "standardize.hpp"
#include "svm.hpp"

namespace amc {

class ModelFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ClassifierKind : int { Knn = 0, Svm = 1 };

constexpr std::string_view classifier_name(ClassifierKind k) {
    return k == ClassifierKind::Knn ? "knn" : "svm";
}

inline std::optional<ClassifierKind> classifier_from_name(std::string_view name) {
    if (name == "knn") return ClassifierKind::Knn;
    if (name == "svm") return ClassifierKind::Svm;
    return std::nullopt;
}

// How the feature rows a model consumes were produced.
struct FeatureSpec {
    BinRule rule = BinRule::SquareRoot;
    bool extras = false;

    std::size_t dim() const { return feature_dim(extras); }
};

// A fitted model plus the standardizer and feature recipe it was trained
// with. predict() takes raw (unstandardized) feature rows.
class TrainedClassifier {
public:
    static constexpr int kFormatVersion = 1;

    static TrainedClassifier train_knn(const LabeledDataset& train, int k, FeatureSpec spec) {
        train.validate();
        TrainedClassifier tc;
        tc.kind_ = ClassifierKind::Knn;
        tc.spec_ = spec;
        tc.standardizer_ = Standardizer::fit(train.features);
        tc.knn_.emplace(tc.standardizer_.transform(train.features), train.labels, k);
        return tc;
    }

    static TrainedClassifier train_svm(const LabeledDataset& train, double c,
                                       std::optional<double> gamma, FeatureSpec spec) {
        train.validate();
        TrainedClassifier tc;
        tc.kind_ = ClassifierKind::Svm;
        tc.spec_ = spec;
        tc.standardizer_ = Standardizer::fit(train.features);
        tc.svm_.emplace(tc.standardizer_.transform(train.features), train.labels, c, gamma);
        return tc;
    }

    ClassifierKind kind() const { return kind_; }
    const FeatureSpec& feature_spec() const { return spec_; }
    const Standardizer& standardizer() const { return standardizer_; }
    const KnnClassifier& knn() const { return knn_.value(); }
    const SvmClassifier& svm() const { return svm_.value(); }

    ModulationScheme predict_one(std::span<const double> raw) const {
        std::vector<double> row(raw.begin(), raw.end());
        standardizer_.transform_row(row);
        return kind_ == ClassifierKind::Knn ? knn_->predict_one(row) : svm_->predict_one(row);
    }

    std::vector<ModulationScheme> predict(const FeatureMatrix& raw) const {
        const FeatureMatrix z = standardizer_.transform(raw);
        return kind_ == ClassifierKind::Knn ? knn_->predict(z) : svm_->predict(z);
    }

    ModulationScheme predict_frame(const IqFrame& frame) const {
        const FeatureVector f = extract_features(frame, spec_.rule, spec_.extras);
        const auto row = f.row();
        return predict_one(row);
    }

    void save(std::ostream& os) const {
        nlohmann::json j;
        j["format"] = "amc-model";
        j["version"] = kFormatVersion;
        j["kind"] = std::string(classifier_name(kind_));
        j["feature"] = {{"bin_rule", std::string(bin_rule_name(spec_.rule))}, {"extras", spec_.extras}};
        j["standardizer"] = {{"mean", standardizer_.mean}, {"stddev", standardizer_.stddev}};
        if (kind_ == ClassifierKind::Knn) {
            const auto& m = *knn_;
            nlohmann::json k;
            k["k"] = m.k();
            k["rows"] = m.train_features().rows;
            k["cols"] = m.train_features().cols;
            k["features"] = m.train_features().data;
            std::vector<int> labs;
            labs.reserve(m.train_labels().size());
            for (auto l : m.train_labels()) labs.push_back(static_cast<int>(l));
            k["labels"] = labs;
            j["knn"] = std::move(k);
        } else {
            const auto& m = *svm_;
            nlohmann::json s;
            s["c"] = m.c();
            s["gamma"] = m.gamma();
            nlohmann::json pairs = nlohmann::json::array();
            for (const auto& pm : m.machines()) {
                nlohmann::json pj;
                pj["pos"] = static_cast<int>(pm.pos);
                pj["neg"] = static_cast<int>(pm.neg);
                pj["dim"] = pm.machine.dim;
                pj["support_vectors"] = pm.machine.support_vectors;
                pj["coeff"] = pm.machine.coeff;
                pj["bias"] = pm.machine.bias;
                pairs.push_back(std::move(pj));
            }
            s["pairs"] = std::move(pairs);
            j["svm"] = std::move(s);
        }
        os << j.dump(2) << '\n';
    }

    void save(const std::string& path) const {
        std::ofstream os(path);
        if (!os) throw std::runtime_error("cannot open model file for writing: " + path);
        save(os);
    }

    static TrainedClassifier load(std::istream& is) {
        nlohmann::json j;
        try {
            is >> j;
        } catch (const nlohmann::json::exception& e) {
            throw ModelFormatError(std::string("model parse failure: ") + e.what());
        }
        if (j.value("format", "") != "amc-model") throw ModelFormatError("not an amc-model file");
        if (j.value("version", -1) != kFormatVersion)
            throw ModelFormatError("unsupported model version " + std::to_string(j.value("version", -1)));

        TrainedClassifier tc;
        const auto kind = classifier_from_name(j.at("kind").get<std::string>());
        if (!kind) throw ModelFormatError("unknown classifier kind");
        tc.kind_ = *kind;

        const auto rule = bin_rule_from_name(j.at("feature").at("bin_rule").get<std::string>());
        if (!rule) throw ModelFormatError("unknown bin rule");
        tc.spec_.rule = *rule;
        tc.spec_.extras = j.at("feature").at("extras").get<bool>();

        tc.standardizer_.mean = j.at("standardizer").at("mean").get<std::vector<double>>();
        tc.standardizer_.stddev = j.at("standardizer").at("stddev").get<std::vector<double>>();

        if (tc.kind_ == ClassifierKind::Knn) {
            const auto& k = j.at("knn");
            FeatureMatrix fm(k.at("rows").get<std::size_t>(), k.at("cols").get<std::size_t>());
            fm.data = k.at("features").get<std::vector<double>>();
            if (fm.data.size() != fm.rows * fm.cols) throw ModelFormatError("knn feature size mismatch");
            std::vector<ModulationScheme> labs;
            for (int v : k.at("labels").get<std::vector<int>>())
                labs.push_back(static_cast<ModulationScheme>(v));
            tc.knn_.emplace(std::move(fm), std::move(labs), k.at("k").get<int>());
        } else {
            const auto& s = j.at("svm");
            SvmClassifier svm;
            svm.set_hyperparams(s.at("c").get<double>(), s.at("gamma").get<double>());
            for (const auto& pj : s.at("pairs")) {
                SvmClassifier::PairMachine pm;
                pm.pos = static_cast<ModulationScheme>(pj.at("pos").get<int>());
                pm.neg = static_cast<ModulationScheme>(pj.at("neg").get<int>());
                pm.machine.dim = pj.at("dim").get<std::size_t>();
                pm.machine.support_vectors = pj.at("support_vectors").get<std::vector<double>>();
                pm.machine.coeff = pj.at("coeff").get<std::vector<double>>();
                pm.machine.bias = pj.at("bias").get<double>();
                pm.machine.gamma = svm.gamma();
                svm.machines().push_back(std::move(pm));
            }
            tc.svm_ = std::move(svm);
        }
        return tc;
    }

    static TrainedClassifier load(const std::string& path) {
        std::ifstream is(path);
        if (!is) throw std::runtime_error("cannot open model file: " + path);
        return load(is);
    }

private:
    ClassifierKind kind_ = ClassifierKind::Svm;
    FeatureSpec spec_;
    Standardizer standardizer_;
    std::optional<KnnClassifier> knn_;
    std::optional<SvmClassifier> svm_;
};

}  // namespace amc
