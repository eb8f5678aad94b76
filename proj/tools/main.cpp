#include "mtp/infomeasure.hpp"
#include "mtp/motion.hpp"
#include "mtp/report.hpp"
#include "mtp/synth.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace {

struct CommonOptions {
    double retention = 0.90;
    std::string alignment = "ctw";
    double clamp = 1e-6;
    double variance_floor = 1e-12;
    int ctw_max_iters = 20;
    double ctw_tol = 1e-4;

    mtp::AnalyzeConfig to_config() const {
        mtp::AnalyzeConfig cfg;
        cfg.retention = retention;
        cfg.alignment = mtp::alignment_from_string(alignment);
        cfg.clamp = clamp;
        cfg.variance_floor = variance_floor;
        cfg.ctw.max_iters = ctw_max_iters;
        cfg.ctw.tol = ctw_tol;
        return cfg;
    }

    void add_flags(CLI::App& app) {
        app.add_option("--retention", retention, "PCA variance retention fraction");
        app.add_option("--alignment", alignment, "Alignment method: none, dtw, ctw")
            ->check(CLI::IsMember({"none", "dtw", "ctw"}));
        app.add_option("--clamp", clamp, "Correlation clamp margin");
        app.add_option("--variance-floor", variance_floor, "Degenerate-variance floor");
        app.add_option("--ctw-max-iters", ctw_max_iters, "CTW iteration cap");
        app.add_option("--ctw-tol", ctw_tol, "CTW relative cost-decrease tolerance");
    }
};

mtp::ThroughputReport run_analysis(const std::string& x_path,
                                   const std::string& y_path,
                                   const mtp::AnalyzeConfig& cfg) {
    const auto x = mtp::parse_csv_file(x_path);
    const auto y = mtp::parse_csv_file(y_path);
    return mtp::analyze_pair(x, y, cfg);
}

int cmd_analyze(const std::string& x_path, const std::string& y_path,
                const std::string& out_path, const CommonOptions& opts) {
    try {
        const auto report = run_analysis(x_path, y_path, opts.to_config());
        mtp::write_report_file(report, out_path);
        std::printf("TP(x|y) = %.4f bps (m=%d, n_eff=%lld)\n", report.total_tp,
                    report.retained_components,
                    static_cast<long long>(report.n_eff));
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "analyze: " << e.what() << "\n";
        return 2;
    }
}

struct BatchEntry {
    std::string x_path;
    std::string y_path;
};

struct BatchResult {
    bool ok = false;
    double tp_xy = 0.0;
    double tp_yx = 0.0;
    std::string error;
};

int cmd_batch(const std::string& manifest_path, const std::string& out_dir,
              const CommonOptions& opts) {
    std::ifstream in(manifest_path);
    if (!in) {
        std::cerr << "batch: cannot open '" << manifest_path << "'\n";
        return 2;
    }
    std::vector<BatchEntry> entries;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            std::cerr << "batch: manifest line without comma: " << line << "\n";
            return 2;
        }
        entries.push_back({line.substr(0, comma), line.substr(comma + 1)});
    }
    if (entries.empty()) {
        std::cerr << "batch: empty manifest\n";
        return 2;
    }

    const auto cfg = opts.to_config();
    std::vector<BatchResult> results(entries.size());

    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("MOTOR_TP_THREADS")) {
        const long cap = std::strtol(env, nullptr, 10);
        if (cap >= 1) threads = static_cast<unsigned>(cap);
    }
    threads = std::min<unsigned>(threads, static_cast<unsigned>(entries.size()));

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next.fetch_add(1); i < entries.size();
             i = next.fetch_add(1)) {
            auto& r = results[i];
            try {
                const auto fwd = run_analysis(entries[i].x_path, entries[i].y_path, cfg);
                const auto rev = run_analysis(entries[i].y_path, entries[i].x_path, cfg);
                mtp::write_report_file(
                    fwd, out_dir + "/pair" + std::to_string(i + 1) + "_xy.json");
                mtp::write_report_file(
                    rev, out_dir + "/pair" + std::to_string(i + 1) + "_yx.json");
                r.tp_xy = fwd.total_tp;
                r.tp_yx = rev.total_tp;
                r.ok = true;
            } catch (const std::exception& e) {
                r.error = e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned k = 1; k < threads; ++k) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    bool any_failed = false;
    std::printf("pair  TP(x|y) [bps]  TP(y|x) [bps]\n");
    for (std::size_t i = 0; i < results.size(); ++i) {
        if (results[i].ok) {
            std::printf("%4zu  %13.4f  %13.4f\n", i + 1, results[i].tp_xy,
                        results[i].tp_yx);
        } else {
            any_failed = true;
            std::printf("%4zu  FAILED: %s\n", i + 1, results[i].error.c_str());
        }
    }
    return any_failed ? 1 : 0;
}

int cmd_synth(const mtp::SynthSpec& spec, int warp_segments,
              Eigen::Index warp_out_len, const std::string& out_x,
              const std::string& out_y) {
    try {
        mtp::SynthSpec full = spec;
        if (warp_segments > 0) {
            // Warp knots drawn from a stream decoupled from the signal draws.
            mtp::GaussianRng warp_rng(spec.seed ^ 0x9e3779b97f4a7c15ull);
            const Eigen::Index out_len =
                warp_out_len > 0 ? warp_out_len : spec.frames;
            full.warp = mtp::make_random_warp(warp_rng, spec.frames, out_len,
                                              warp_segments);
        }
        const auto [x, y] = mtp::generate_pair(full);
        mtp::serialize_csv_file(x, out_x);
        mtp::serialize_csv_file(y, out_y);
        std::printf("wrote %s (%lld frames) and %s (%lld frames)\n", out_x.c_str(),
                    static_cast<long long>(x.num_frames()), out_y.c_str(),
                    static_cast<long long>(y.num_frames()));
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "synth: " << e.what() << "\n";
        return 2;
    }
}

int cmd_fitts(double a, double b, double distance, double width) {
    try {
        mtp::FittsTask task{a, b, distance, width};
        std::printf("MT=%.3f s, IP=%.1f bps\n", mtp::fitts_mt(task),
                    mtp::fitts_ip(b));
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "fitts: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Motor-system information throughput estimation"};
    app.require_subcommand(1);

    CommonOptions opts;

    std::string x_path, y_path, out_path = "report.json";
    auto* analyze = app.add_subcommand("analyze", "Analyze one sequence pair");
    analyze->add_option("x", x_path, "First sequence CSV")->required();
    analyze->add_option("y", y_path, "Second sequence CSV")->required();
    analyze->add_option("--out", out_path, "Report output path");
    opts.add_flags(*analyze);

    std::string manifest_path, out_dir = ".";
    auto* batch = app.add_subcommand("batch", "Analyze pairs from a manifest");
    batch->add_option("manifest", manifest_path, "CSV manifest of x,y path pairs")
        ->required();
    batch->add_option("--out", out_dir, "Directory for per-pair reports");
    opts.add_flags(*batch);

    mtp::SynthSpec spec;
    spec.beta1 = 1.2;
    spec.beta2 = -0.5;
    spec.frames = 1000;
    int warp_segments = 0;
    long long warp_out_len = 0;
    std::string out_x = "x.csv", out_y = "y.csv";
    auto* synth = app.add_subcommand("synth", "Generate a synthetic pair");
    synth->add_option("--beta0", spec.beta0, "AR(2) intercept");
    synth->add_option("--beta1", spec.beta1, "AR(2) lag-1 coefficient");
    synth->add_option("--beta2", spec.beta2, "AR(2) lag-2 coefficient");
    synth->add_option("--rho", spec.rho, "Innovation correlation");
    synth->add_option("--frames", spec.frames, "Frame count T");
    synth->add_option("--components", spec.components, "Component count p");
    synth->add_option("--frame-rate", spec.frame_rate, "Frames per second");
    synth->add_option("--seed", spec.seed, "RNG seed");
    synth->add_option("--warp-segments", warp_segments,
                      "Piecewise-linear warp segments for y (0 = no warp)");
    synth->add_option("--warp-out-len", warp_out_len, "Warped length of y");
    synth->add_option("--out-x", out_x, "Output path for x");
    synth->add_option("--out-y", out_y, "Output path for y");

    double fitts_a = 0.0, fitts_b = 0.0, fitts_d = 0.0, fitts_w = 0.0;
    auto* fitts = app.add_subcommand("fitts", "Fitts' law baseline");
    fitts->add_option("--a", fitts_a, "Intercept (seconds)")->required();
    fitts->add_option("--b", fitts_b, "Slope (seconds per bit)")->required();
    fitts->add_option("--D", fitts_d, "Distance to target")->required();
    fitts->add_option("--W", fitts_w, "Target width")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : 2;
    }

    if (analyze->parsed()) return cmd_analyze(x_path, y_path, out_path, opts);
    if (batch->parsed()) return cmd_batch(manifest_path, out_dir, opts);
    if (synth->parsed())
        return cmd_synth(spec, warp_segments,
                         static_cast<Eigen::Index>(warp_out_len), out_x, out_y);
    if (fitts->parsed()) return cmd_fitts(fitts_a, fitts_b, fitts_d, fitts_w);
    return 2;
}
