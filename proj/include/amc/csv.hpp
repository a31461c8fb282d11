#pragma once

#include <cstdio>
#include <ostream>
#include <span>
#include <string>

#include "experiment.hpp"

namespace amc {

// 12 significant digits, plain decimal/scientific as %g chooses.
inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

// mi_curve.csv, schema v1
inline void write_mi_curve_csv(std::ostream& os, std::span<const MiCurvePoint> points) {
    os << "scheme,snr_db,mi_mean_bits,mi_std_bits,mc_runs\n";
    for (const auto& p : points) {
        os << scheme_name(p.scheme) << ',' << format_double(p.snr_db) << ','
           << format_double(p.mi_mean_bits) << ',' << format_double(p.mi_std_bits) << ',' << p.mc_runs
           << '\n';
    }
}

// pcc.csv, schema v1. Wall-clock columns are written as 0 unless
// include_timings is set, so default outputs are byte-stable across reruns.
inline void write_pcc_csv(std::ostream& os, std::span<const PccResult> results,
                          bool include_timings = false) {
    os << "classifier,bin_rule,n_symbols,snr_db,pcc,train_time_s,eval_time_s\n";
    for (const auto& r : results) {
        for (const auto& c : r.cells) {
            os << classifier_name(r.classifier) << ',' << bin_rule_name(r.rule) << ',' << r.n_symbols
               << ',' << format_double(c.snr_db) << ',' << format_double(c.pcc) << ','
               << format_double(include_timings ? c.train_time_s : 0.0) << ','
               << format_double(include_timings ? c.eval_time_s : 0.0) << '\n';
        }
    }
}

// confusion.csv, schema v1; emits the full 5x5 grid per SNR point.
inline void write_confusion_csv(std::ostream& os, const PccResult& result) {
    os << "snr_db,true_scheme,predicted_scheme,count\n";
    for (const auto& c : result.cells) {
        for (auto t : kAllSchemes) {
            for (auto p : kAllSchemes) {
                os << format_double(c.snr_db) << ',' << scheme_name(t) << ',' << scheme_name(p) << ','
                   << c.confusion.counts[static_cast<std::size_t>(t)][static_cast<std::size_t>(p)]
                   << '\n';
            }
        }
    }
}

// dataset_<split>.csv written by the simulate command; one header, then row
// blocks per SNR point.
inline void write_dataset_csv_header(std::ostream& os, bool extras) {
    os << "scheme,snr_db,mi_bits";
    if (extras) os << ",h_x,h_y,h_cond";
    os << '\n';
}

inline void write_dataset_csv_rows(std::ostream& os, const LabeledDataset& ds) {
    for (std::size_t r = 0; r < ds.features.rows; ++r) {
        os << scheme_name(ds.labels[r]) << ',' << format_double(ds.snr_db);
        for (std::size_t c = 0; c < ds.features.cols; ++c)
            os << ',' << format_double(ds.features.at(r, c));
        os << '\n';
    }
}

}  // namespace amc
