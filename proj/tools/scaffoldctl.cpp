// scaffoldctl: scaffold cross-brace completeness checks from the command line.
//
// Subcommands:
//   detect   run brace detection on one image + COCO annotations
//   synth    generate a synthetic ground-truth corpus
//   eval     score detection against a corpus' truth file
//   monitor  diff a frame sequence and append alarms to a JSONL log
//
// Exit codes: 0 ok / all complete, 1 error, 2 incomplete unit found,
// 3 alarms fired (monitor), 64 usage.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "scaffold/imaging.hpp"
#include "scaffold/pipeline.hpp"

namespace fs = std::filesystem;
using namespace scaffold;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitIncomplete = 2;
constexpr int kExitAlarm = 3;
constexpr int kExitUsage = 64;

std::string read_text(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path);
    out << text;
}

struct CommonOpts {
    std::string config_path;
    std::int64_t seed = -1; // -1: keep config/default value
};

RunConfig make_config(const CommonOpts& opts) {
    RunConfig cfg;
    if (!opts.config_path.empty()) cfg = load_config(opts.config_path);
    if (opts.seed >= 0) cfg.seed = static_cast<std::uint64_t>(opts.seed);
    return cfg;
}

int run_detect(const std::string& image_path, const std::string& coco_path,
               const CommonOpts& opts, const std::string& overlay_path,
               const std::string& report_path, bool no_timing) {
    const RunConfig cfg = make_config(opts);
    const GrayImage img = to_grayscale(load_image(image_path));
    const AnnotationSet annotations =
        parse_coco(read_text(coco_path), cfg.category);

    const std::string file_name = fs::path(image_path).filename().string();
    FrameDetection det =
        detect_frame(img, file_name, annotations, cfg, !no_timing);

    if (!overlay_path.empty()) save_png(draw_overlay(img, det), overlay_path);

    const std::string report = build_report({det}, cfg);
    if (!report_path.empty()) {
        write_text(report_path, report);
    } else {
        std::cout << report << '\n';
    }

    bool all_present = true;
    for (const auto& u : det.units) all_present &= u.verdict.brace_present;
    return all_present ? kExitOk : kExitIncomplete;
}

int run_synth(const std::string& out_dir, int frames, double presence_rate,
              int clutter, double noise, double jitter, int cols, int rows,
              const CommonOpts& opts) {
    const RunConfig cfg = make_config(opts);
    CorpusClutter cc{clutter, noise, jitter};
    CorpusManifest manifest = generate_corpus(
        cfg.synth, frames, presence_rate, cc, cfg.seed, out_dir, cols, rows);
    std::cout << "wrote " << manifest.frame_files.size() << " frame(s) to "
              << out_dir << '\n';
    return kExitOk;
}

int run_eval(const std::string& corpus_dir, const CommonOpts& opts,
             const std::string& out_path) {
    const RunConfig cfg = make_config(opts);
    const EvalCounts counts = evaluate_corpus(corpus_dir, cfg);

    nlohmann::json j = {{"tp", counts.tp}, {"fp", counts.fp},
                        {"fn", counts.fn}, {"tn", counts.tn}};
    auto metric = [&](const char* name, double v) {
        if (v < 0) j[name] = nullptr;
        else j[name] = v;
    };
    metric("precision", counts.precision());
    metric("recall", counts.recall());
    metric("accuracy", counts.accuracy());
    std::cout << j.dump(2) << '\n';
    if (!out_path.empty()) write_text(out_path, j.dump(2));
    return kExitOk;
}

int run_monitor(const std::string& frames_dir, const std::string& coco_path,
                const std::string& log_path, const CommonOpts& opts) {
    const RunConfig cfg = make_config(opts);
    const AnnotationSet annotations =
        parse_coco(read_text(coco_path), cfg.category);

    std::vector<std::string> files;
    for (const auto& entry : fs::directory_iterator(frames_dir)) {
        if (entry.path().extension() == ".png")
            files.push_back(entry.path().filename().string());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw IoError("no .png frames in " + frames_dir);
    if (annotations.images.empty())
        throw Error("COCO file lists no images");

    // Fixed-camera monitoring: one region set (the first image's) applies to
    // every frame, so unit ids stay stable across the sequence.
    const std::string region_source = annotations.images.front().file_name;

    std::size_t total_alarms = 0;
    FrameSnapshot prev;
    bool have_prev = false;
    std::int64_t timestamp = 0;
    for (const auto& file : files) {
        const GrayImage img =
            to_grayscale(load_image((fs::path(frames_dir) / file).string()));
        FrameDetection det =
            detect_frame(img, region_source, annotations, cfg, false);
        FrameSnapshot snap = snapshot_from_detection(det, file, timestamp++);
        if (have_prev) {
            auto alarms = compare_frames(prev, snap);
            append_log(alarms, log_path);
            total_alarms += alarms.size();
        }
        prev = std::move(snap);
        have_prev = true;
    }
    std::cout << total_alarms << " alarm(s)\n";
    return total_alarms == 0 ? kExitOk : kExitAlarm;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Scaffold cross-brace completeness inspector"};
    app.require_subcommand(1);

    CommonOpts opts;

    auto* detect = app.add_subcommand("detect", "Detect braces in one image");
    std::string image_path, coco_path, overlay_path, report_path;
    bool no_timing = false;
    detect->add_option("--image", image_path, "Input image (PNG or PPM)")
        ->required();
    detect->add_option("--coco", coco_path, "COCO annotation JSON")->required();
    detect->add_option("--config", opts.config_path, "TOML config file");
    detect->add_option("--overlay", overlay_path, "Write overlay PNG here");
    detect->add_option("--report", report_path, "Write report JSON here");
    detect->add_option("--seed", opts.seed, "Override the RNG seed");
    detect->add_flag("--no-timing", no_timing,
                     "Zero the elapsed_ms field (golden-file runs)");

    auto* synth = app.add_subcommand("synth", "Generate a synthetic corpus");
    std::string out_dir;
    int frames = 1, clutter = 0, cols = 3, rows = 2;
    double presence_rate = 1.0, noise = 0.0, jitter_px = 0.0;
    synth->add_option("--out", out_dir, "Output directory")->required();
    synth->add_option("--frames", frames, "Number of frames")->required();
    synth->add_option("--presence-rate", presence_rate,
                      "Per-unit brace probability");
    synth->add_option("--clutter", clutter, "Max clutter lines per unit");
    synth->add_option("--noise", noise, "Max Gaussian noise sigma");
    synth->add_option("--jitter", jitter_px, "Max structural vertex jitter");
    synth->add_option("--cols", cols, "Units per row");
    synth->add_option("--rows", rows, "Unit rows per frame");
    synth->add_option("--config", opts.config_path, "TOML config file");
    synth->add_option("--seed", opts.seed, "Override the RNG seed");

    auto* eval = app.add_subcommand("eval", "Score detection against truth");
    std::string corpus_dir, metrics_path;
    eval->add_option("--corpus", corpus_dir, "Corpus directory")->required();
    eval->add_option("--config", opts.config_path, "TOML config file");
    eval->add_option("--out", metrics_path, "Write metrics JSON here");
    eval->add_option("--seed", opts.seed, "Override the RNG seed");

    auto* monitor =
        app.add_subcommand("monitor", "Diff a frame sequence, log alarms");
    std::string frames_dir, log_path;
    monitor->add_option("--frames", frames_dir, "Directory of ordered frames")
        ->required();
    monitor->add_option("--coco", coco_path, "COCO annotation JSON")
        ->required();
    monitor->add_option("--log", log_path, "JSONL alarm log")->required();
    monitor->add_option("--config", opts.config_path, "TOML config file");
    monitor->add_option("--seed", opts.seed, "Override the RNG seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (detect->parsed())
            return run_detect(image_path, coco_path, opts, overlay_path,
                              report_path, no_timing);
        if (synth->parsed())
            return run_synth(out_dir, frames, presence_rate, clutter, noise,
                             jitter_px, cols, rows, opts);
        if (eval->parsed()) return run_eval(corpus_dir, opts, metrics_path);
        if (monitor->parsed())
            return run_monitor(frames_dir, coco_path, log_path, opts);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
    return kExitUsage;
}
