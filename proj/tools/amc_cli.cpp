// amc: command-line front end for the MIMO automatic modulation
// classification pipeline. Subcommands cover dataset synthesis, MI curves,
// classifier evaluation, bin-rule and frame-length sweeps, and offline
// train/predict on IQ capture files.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <amc/amc.hpp>

namespace fs = std::filesystem;

namespace {

struct CliOptions {
    std::uint64_t seed = 0;
    std::string scale = "desk";
    std::string bin_rule = "sqrt";
    std::string classifier = "svm";
    std::string out_dir = "./out";
    std::size_t ns = 2;
    std::size_t nr = 2;
    std::size_t n_symbols = 1024;
    double snr_min = -10.0;
    double snr_max = 15.0;
    double snr_step = 1.0;
    std::size_t train_per_snr = 0;  // 0 -> from scale
    std::size_t test_per_snr = 0;
    std::size_t mc_runs = 100;
    double svm_c = 1.0;
    double svm_gamma = 0.0;  // 0 -> auto
    int knn_k = 5;
    std::string channel_draw = "global";
    double snr_scale = amc::kDefaultSnrScale;
    double snr_offset = amc::kDefaultSnrOffsetDb;
    std::string features = "full";
    bool timings = false;
};

amc::ExperimentConfig build_config(const CliOptions& o) {
    amc::ExperimentConfig cfg;
    cfg.ns = o.ns;
    cfg.nr = o.nr;
    cfg.n_symbols = o.n_symbols;
    cfg.master_seed = o.seed;
    cfg.mc_runs = o.mc_runs;
    cfg.svm_c = o.svm_c;
    if (o.svm_gamma > 0.0) cfg.svm_gamma = o.svm_gamma;
    cfg.knn_k = o.knn_k;

    if (o.scale == "full") {
        cfg.train_per_snr = 6000;
        cfg.test_per_snr = 4000;
    } else if (o.scale == "desk") {
        cfg.train_per_snr = 600;
        cfg.test_per_snr = 400;
    } else {
        throw std::invalid_argument("unknown scale: " + o.scale);
    }
    if (o.train_per_snr > 0) cfg.train_per_snr = o.train_per_snr;
    if (o.test_per_snr > 0) cfg.test_per_snr = o.test_per_snr;

    const auto rule = amc::bin_rule_from_name(o.bin_rule);
    if (!rule) throw std::invalid_argument("unknown bin rule: " + o.bin_rule);
    cfg.rule = *rule;

    const auto kind = amc::classifier_from_name(o.classifier);
    if (!kind) throw std::invalid_argument("unknown classifier: " + o.classifier);
    cfg.classifier = *kind;

    const auto policy = amc::channel_policy_from_name(o.channel_draw);
    if (!policy) throw std::invalid_argument("unknown channel draw policy: " + o.channel_draw);
    cfg.channel_policy = *policy;
    cfg.snr_scale = o.snr_scale;
    cfg.snr_offset_db = o.snr_offset;

    if (o.features == "full")
        cfg.feature_extras = true;
    else if (o.features == "mi")
        cfg.feature_extras = false;
    else
        throw std::invalid_argument("unknown feature set: " + o.features);

    if (o.snr_step <= 0.0) throw std::invalid_argument("snr-step must be positive");
    if (o.snr_max < o.snr_min) throw std::invalid_argument("snr-max must be >= snr-min");
    cfg.snr_grid_db.clear();
    for (double s = o.snr_min; s <= o.snr_max + 1e-9; s += o.snr_step) cfg.snr_grid_db.push_back(s);

    cfg.validate();
    return cfg;
}

fs::path resolve_out(const fs::path& out_dir, const std::string& name) {
    fs::path p(name);
    return p.is_absolute() ? p : out_dir / p;
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open output file: " + path.string());
    return os;
}

void print_pcc_summary(const amc::PccResult& r) {
    std::cout << amc::classifier_name(r.classifier) << '/' << amc::bin_rule_name(r.rule)
              << " n=" << r.n_symbols
              << " snr-averaged pcc=" << amc::format_double(r.snr_averaged_pcc()) << '\n';
}

int cmd_simulate(const CliOptions& opt, const fs::path& out_dir, bool captures_mode, double snr,
                 bool has_snr, std::size_t frames_per_scheme) {
    amc::ExperimentConfig cfg = build_config(opt);
    if (captures_mode) {
        if (!has_snr) throw std::invalid_argument("simulate --format captures requires --snr");
        const amc::NoiseSpec noise = amc::experiment_noise(cfg, snr);
        const amc::SeedChain base = amc::SeedChain(cfg.master_seed).with("capture").with(snr);
        std::optional<amc::ChannelRealization> shared;
        if (cfg.channel_policy != amc::ChannelPolicy::PerFrame)
            shared = amc::experiment_channel(cfg);
        std::size_t written = 0;
        for (const auto scheme : cfg.schemes) {
            const auto scheme_seed = base.with(static_cast<std::uint64_t>(scheme));
            for (std::size_t i = 0; i < frames_per_scheme; ++i) {
                amc::IqFrame f =
                    shared ? amc::synthesize_frame(scheme, cfg.n_symbols, *shared, noise,
                                                   scheme_seed.with(i))
                           : amc::synthesize_frame(scheme, cfg.n_symbols, cfg.ns, cfg.nr, noise,
                                                   scheme_seed.with(i));
                f.snr_db = snr;
                const std::string name = "capture_" + std::string(amc::scheme_name(scheme)) + "_" +
                                         std::to_string(i) + ".iqc";
                amc::write_capture((out_dir / name).string(), f);
                ++written;
            }
        }
        std::cout << "wrote " << written << " capture files to " << out_dir.string() << '\n';
        return 0;
    }

    std::vector<double> grid = cfg.snr_grid_db;
    if (has_snr) grid = {snr};
    for (const auto split : {amc::Split::Train, amc::Split::Test}) {
        const std::string name = "dataset_" + std::string(amc::split_name(split)) + ".csv";
        auto os = open_out(out_dir / name);
        amc::write_dataset_csv_header(os, cfg.feature_extras);
        for (const double s : grid)
            amc::write_dataset_csv_rows(os, amc::generate_dataset(cfg, s, split));
    }
    std::cout << "wrote dataset_train.csv and dataset_test.csv to " << out_dir.string() << '\n';
    return 0;
}

int cmd_mi_curve(const CliOptions& opt, const fs::path& out_dir) {
    const amc::ExperimentConfig cfg = build_config(opt);
    const auto points = amc::mi_curve(cfg);
    auto os = open_out(out_dir / "mi_curve.csv");
    amc::write_mi_curve_csv(os, points);
    std::cout << "wrote mi_curve.csv (" << points.size() << " rows) to " << out_dir.string() << '\n';
    return 0;
}

int cmd_classify_eval(const CliOptions& opt, const fs::path& out_dir) {
    const amc::ExperimentConfig cfg = build_config(opt);
    const amc::PccResult res = amc::run_classification(cfg);
    {
        auto os = open_out(out_dir / "pcc.csv");
        amc::write_pcc_csv(os, std::span<const amc::PccResult>(&res, 1), opt.timings);
    }
    {
        auto os = open_out(out_dir / "confusion.csv");
        amc::write_confusion_csv(os, res);
    }
    print_pcc_summary(res);
    return 0;
}

int cmd_sweep_bins(const CliOptions& opt, const fs::path& out_dir) {
    const amc::ExperimentConfig cfg = build_config(opt);
    const auto results = amc::sweep_bin_rules(cfg);
    auto os = open_out(out_dir / "pcc.csv");
    amc::write_pcc_csv(os, results, opt.timings);
    for (const auto& r : results) print_pcc_summary(r);
    return 0;
}

int cmd_sweep_n(const CliOptions& opt, const fs::path& out_dir) {
    const amc::ExperimentConfig cfg = build_config(opt);
    const std::vector<std::size_t> counts = {256, 512, 1024};
    const auto results = amc::sweep_symbol_count(cfg, counts);
    auto os = open_out(out_dir / "pcc.csv");
    amc::write_pcc_csv(os, results, opt.timings);
    for (const auto& r : results) print_pcc_summary(r);
    return 0;
}

int cmd_train(const CliOptions& opt, const fs::path& out_dir, double snr, const std::string& out_name) {
    const amc::ExperimentConfig cfg = build_config(opt);
    const auto train = amc::generate_dataset(cfg, snr, amc::Split::Train);
    const auto model = amc::train_classifier(cfg, train, cfg.rule);
    const fs::path path = resolve_out(out_dir, out_name);
    model.save(path.string());
    std::cout << "wrote model to " << path.string() << '\n';
    return 0;
}

int cmd_predict(const fs::path& out_dir, const std::string& model_path,
                const std::vector<std::string>& capture_paths) {
    if (!fs::exists(model_path))
        throw std::invalid_argument("model file does not exist: " + model_path);
    const auto model = amc::TrainedClassifier::load(model_path);

    auto os = open_out(out_dir / "predictions.csv");
    os << "capture,predicted_scheme,true_scheme,correct\n";
    std::size_t labelled = 0, correct = 0;
    for (const auto& path : capture_paths) {
        if (!fs::exists(path)) throw std::invalid_argument("capture file does not exist: " + path);
        const amc::IqFrame frame = amc::parse_capture(path);
        const auto pred = model.predict_frame(frame);
        os << path << ',' << amc::scheme_name(pred) << ',';
        if (frame.label) {
            os << amc::scheme_name(*frame.label) << ','
               << (pred == *frame.label ? "1" : "0");
            ++labelled;
            if (pred == *frame.label) ++correct;
        } else {
            os << ',';
        }
        os << '\n';
        std::cout << path << ' ' << amc::scheme_name(pred) << '\n';
    }
    if (labelled > 0)
        std::cout << "labelled accuracy: " << correct << '/' << labelled << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"MIMO automatic modulation classification via IQ-histogram mutual information"};
    app.require_subcommand(1);
    app.fallthrough();

    CliOptions opt;
    app.add_option("--seed", opt.seed, "master random seed")->capture_default_str();
    app.add_option("--scale", opt.scale, "dataset scale: full (6000/4000 per SNR) or desk (600/400)")
        ->check(CLI::IsMember({"full", "desk"}))
        ->capture_default_str();
    app.add_option("--bin-rule", opt.bin_rule, "histogram bin-count rule")
        ->check(CLI::IsMember({"sqrt", "sturges", "rice"}))
        ->capture_default_str();
    app.add_option("--classifier", opt.classifier, "classifier kind")
        ->check(CLI::IsMember({"svm", "knn"}))
        ->capture_default_str();
    app.add_option("--out-dir", opt.out_dir, "directory for all outputs")->capture_default_str();
    app.add_option("--ns", opt.ns, "transmit antenna count")->capture_default_str();
    app.add_option("--nr", opt.nr, "receive antenna count")->capture_default_str();
    app.add_option("--n", opt.n_symbols, "symbols per frame")->capture_default_str();
    app.add_option("--snr-min", opt.snr_min, "SNR grid start, dB")->capture_default_str();
    app.add_option("--snr-max", opt.snr_max, "SNR grid end, dB")->capture_default_str();
    app.add_option("--snr-step", opt.snr_step, "SNR grid step, dB")->capture_default_str();
    app.add_option("--train-per-snr", opt.train_per_snr, "training samples per SNR (0 = from scale)")
        ->capture_default_str();
    app.add_option("--test-per-snr", opt.test_per_snr, "test samples per SNR (0 = from scale)")
        ->capture_default_str();
    app.add_option("--mc-runs", opt.mc_runs, "Monte Carlo runs for mi-curve")->capture_default_str();
    app.add_option("--svm-c", opt.svm_c, "SVM penalty C")->capture_default_str();
    app.add_option("--svm-gamma", opt.svm_gamma, "SVM RBF gamma (0 = auto 1/(d*var))")
        ->capture_default_str();
    app.add_option("--knn-k", opt.knn_k, "KNN neighbour count")->capture_default_str();
    app.add_option("--channel-draw", opt.channel_draw,
                   "fading draw: global (one H per experiment), per-snr, per-frame")
        ->check(CLI::IsMember({"global", "per-snr", "per-frame"}))
        ->capture_default_str();
    app.add_option("--snr-scale", opt.snr_scale,
                   "slope of the nominal-to-applied SNR map (1 = raw per-receive-antenna convention)")
        ->capture_default_str();
    app.add_option("--snr-offset", opt.snr_offset,
                   "intercept of the nominal-to-applied SNR map, dB (0 = raw convention)")
        ->capture_default_str();
    app.add_option("--features", opt.features,
                   "classifier input: full = [MI, H(X), H(Y), H(X|Y)], mi = MI alone")
        ->check(CLI::IsMember({"full", "mi"}))
        ->capture_default_str();
    app.add_flag("--timings", opt.timings, "write wall-clock columns in pcc.csv")
        ->capture_default_str();

    auto* sim = app.add_subcommand("simulate", "generate datasets or capture files to disk");
    std::string sim_format = "features";
    double sim_snr = 0.0;
    std::size_t sim_frames = 20;
    sim->add_option("--format", sim_format, "features (CSV datasets) or captures (.iqc files)")
        ->check(CLI::IsMember({"features", "captures"}))
        ->capture_default_str();
    auto* sim_snr_opt = sim->add_option("--snr", sim_snr, "single SNR point, dB");
    sim->add_option("--frames-per-scheme", sim_frames, "captures per scheme (captures mode)")
        ->capture_default_str();

    auto* mi = app.add_subcommand("mi-curve", "write mi_curve.csv over the SNR grid");
    auto* ce = app.add_subcommand("classify-eval", "write pcc.csv and confusion.csv");
    auto* sb = app.add_subcommand("sweep-bins", "compare all bin rules on matched frames");
    auto* sn = app.add_subcommand("sweep-n", "compare frame lengths 256/512/1024");

    auto* tr = app.add_subcommand("train", "fit a model on synthetic data and save it");
    double train_snr = 15.0;
    std::string train_out = "model.json";
    tr->add_option("--snr", train_snr, "training SNR, dB")->capture_default_str();
    tr->add_option("--out", train_out, "model output path (relative paths land in --out-dir)")
        ->capture_default_str();

    auto* pr = app.add_subcommand("predict", "classify IQ capture files with a saved model");
    std::string model_path;
    std::vector<std::string> capture_paths;
    pr->add_option("--model", model_path, "model file from `train`")->required();
    pr->add_option("--capture", capture_paths, "capture file(s) to classify")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: usage: " << e.what() << '\n';
        return 2;
    }

    try {
        const fs::path out_dir(opt.out_dir);
        fs::create_directories(out_dir);
        if (sim->parsed())
            return cmd_simulate(opt, out_dir, sim_format == "captures", sim_snr,
                                sim_snr_opt->count() > 0, sim_frames);
        if (mi->parsed()) return cmd_mi_curve(opt, out_dir);
        if (ce->parsed()) return cmd_classify_eval(opt, out_dir);
        if (sb->parsed()) return cmd_sweep_bins(opt, out_dir);
        if (sn->parsed()) return cmd_sweep_n(opt, out_dir);
        if (tr->parsed()) return cmd_train(opt, out_dir, train_snr, train_out);
        if (pr->parsed()) return cmd_predict(out_dir, model_path, capture_paths);
        std::cerr << "error: usage: no subcommand selected\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: config: " << e.what() << '\n';
        return 2;
    } catch (const amc::CaptureFormatError& e) {
        std::cerr << "error: format: " << e.what() << '\n';
        return 1;
    } catch (const amc::CaptureVersionError& e) {
        std::cerr << "error: format: " << e.what() << '\n';
        return 1;
    } catch (const amc::CaptureCorruptionError& e) {
        std::cerr << "error: corrupt: " << e.what() << '\n';
        return 1;
    } catch (const amc::CaptureDataError& e) {
        std::cerr << "error: data: " << e.what() << '\n';
        return 1;
    } catch (const amc::ModelFormatError& e) {
        std::cerr << "error: format: " << e.what() << '\n';
        return 1;
    } catch (const amc::SvmConvergenceError& e) {
        std::cerr << "error: convergence: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: runtime: " << e.what() << '\n';
        return 1;
    }
}
