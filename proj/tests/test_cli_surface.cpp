// CLI contract checks that need the built binary: --help enumerates every
// flag with its default, usage errors exit 2, runtime errors exit 1 with a
// single machine-parsable line.
//
//   cli_surface_tests <path-to-amc-cli> [scratch-dir]

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <amc/capture.hpp>
#include <amc/rng.hpp>

namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void check(bool ok, const std::string& what) {
    std::cout << (ok ? "ok" : "FAILED") << "  " << what << std::endl;
    if (!ok) ++g_failures;
}

struct RunResult {
    int exit_code;
    std::string output;  // stdout + stderr
};

RunResult run(const std::string& cmd) {
    const std::string full = cmd + " 2>&1";
    FILE* pipe = popen(full.c_str(), "r");
    if (!pipe) return {-1, ""};
    std::string out;
    char buf[512];
    while (std::size_t n = std::fread(buf, 1, sizeof(buf), pipe)) out.append(buf, n);
    const int rc = pclose(pipe);
    return {WIFEXITED(rc) ? WEXITSTATUS(rc) : -1, out};
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: cli_surface_tests <path-to-amc-cli> [scratch-dir]\n";
        return 64;
    }
    const std::string cli = argv[1];
    const fs::path scratch = argc > 2 ? fs::path(argv[2]) : fs::path("./cli_test_out");
    fs::create_directories(scratch);

    {
        const auto r = run(cli + " --help");
        check(r.exit_code == 0, "--help exits 0");
        const std::array<const char*, 20> flags = {
            "--seed",        "--scale",     "--bin-rule",   "--classifier",   "--out-dir",
            "--ns",          "--nr",        "--n",          "--snr-min",      "--snr-max",
            "--snr-step",    "--train-per-snr", "--test-per-snr", "--mc-runs", "--svm-c",
            "--svm-gamma",   "--knn-k",     "--channel-draw", "--snr-scale",  "--features"};
        for (const auto* f : flags) {
            const auto pos = r.output.find(f);
            bool ok = pos != std::string::npos;
            if (ok) {
                // default shown in brackets on the same line
                const auto eol = r.output.find('\n', pos);
                const auto line = r.output.substr(pos, eol - pos);
                ok = line.find('[') != std::string::npos && line.find(']') != std::string::npos;
            }
            check(ok, std::string("--help documents ") + f + " with its default");
        }
        const std::array<const char*, 7> subs = {"simulate", "mi-curve", "classify-eval",
                                                 "sweep-bins", "sweep-n", "train", "predict"};
        for (const auto* s : subs)
            check(r.output.find(s) != std::string::npos, std::string("--help lists ") + s);
    }

    check(run(cli + " no-such-command").exit_code == 2, "unknown subcommand exits 2");
    check(run(cli + " mi-curve --no-such-flag").exit_code == 2, "unknown flag exits 2");
    check(run(cli + " simulate --format captures --out-dir " + scratch.string()).exit_code == 2,
          "captures mode without --snr exits 2 (config error)");
    check(run(cli + " classify-eval --scale desk --train-per-snr 7 --out-dir " + scratch.string())
                  .exit_code == 2,
          "unbalanced per-SNR count exits 2 (config error)");
    {
        const auto r = run(cli + " predict --model " + (scratch / "missing.json").string() +
                           " --capture " + (scratch / "missing.iqc").string() + " --out-dir " +
                           scratch.string());
        check(r.exit_code == 2, "missing model file exits 2");
        check(r.output.find("error: ") != std::string::npos, "missing file reports a single error line");
    }
    {
        // corrupt capture: write then truncate; must be a runtime (not usage) error
        amc::IqFrame f;
        amc::Rng rng(1);
        for (int i = 0; i < 64; ++i) f.samples.push_back({rng.normal(), rng.normal()});
        const fs::path cap = scratch / "trunc.iqc";
        amc::write_capture(cap.string(), f);
        const auto size = fs::file_size(cap);
        fs::resize_file(cap, size - 4);

        const fs::path model = scratch / "tiny_model.json";
        const auto tr = run(cli + " train --snr 15 --train-per-snr 50 --test-per-snr 50 --out " +
                            model.string() + " --out-dir " + scratch.string());
        check(tr.exit_code == 0, "train exits 0");
        const auto r = run(cli + " predict --model " + model.string() + " --capture " + cap.string() +
                           " --out-dir " + scratch.string());
        check(r.exit_code == 1, "corrupt capture exits 1 (runtime error)");
        check(r.output.find("error: corrupt:") != std::string::npos,
              "corruption error line is machine-parsable");
    }
    {
        // predict on a labelled capture produced by simulate
        const fs::path dir = scratch / "flow";
        const auto sim = run(cli + " simulate --format captures --snr 15 --frames-per-scheme 2 "
                                   "--out-dir " + dir.string());
        check(sim.exit_code == 0, "simulate captures exits 0");
        std::size_t count = 0;
        for (const auto& e : fs::directory_iterator(dir))
            if (e.path().extension() == ".iqc") ++count;
        check(count == 10, "simulate wrote 10 captures");
    }
    {
        // outputs stay inside --out-dir even when invoked from elsewhere
        const fs::path cwd = scratch / "cwdtest";
        const fs::path out = scratch / "cwdtest_out";
        fs::create_directories(cwd);
        const auto r = run("cd " + cwd.string() + " && " + fs::absolute(cli).string() +
                           " train --snr 15 --train-per-snr 50 --test-per-snr 50 --out rel_model.json"
                           " --out-dir " + fs::absolute(out).string());
        check(r.exit_code == 0, "train with relative --out exits 0");
        check(fs::exists(out / "rel_model.json"), "relative --out lands inside --out-dir");
        check(fs::is_empty(cwd), "nothing is written outside --out-dir");
    }

    std::cout << (g_failures == 0 ? "all cli checks passed"
                                  : std::to_string(g_failures) + " cli checks failed")
              << std::endl;
    return g_failures;
}
