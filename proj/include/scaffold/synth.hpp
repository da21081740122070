#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "scaffold/coco.hpp"
#include "scaffold/image.hpp"

namespace scaffold {

/// Physical unit geometry and rendering scale.
struct ScaffoldSpec {
    double unit_width_mm = 762.0;
    double net_width_mm = 719.3;
    double platform_width_mm = 300.0;
    double unit_height_mm = 1900.0;
    double px_per_mm = 0.25;
    int upright_thickness_px = 4;
    int brace_thickness_px = 2;
    int line_gray = 40; // stroke level on the 255 background

    int canvas_width() const;
    int canvas_height() const;
};

struct ClutterParams {
    int n_clutter_lines = 0;  // 0..10
    double noise_sigma = 0.0; // 0..16
    double jitter_px = 0.0;   // 0..3
};

struct TruthUnit {
    int unit_id = 0;
    double bbox_x = 0, bbox_y = 0, bbox_w = 0, bbox_h = 0;
    bool brace_present = false;
    std::optional<std::pair<double, double>> crossing;
    int clutter_count = 0;
    double noise_sigma = 0.0;
    std::uint64_t seed = 0;
};

std::pair<GrayImage, TruthUnit> render_unit(const ScaffoldSpec& spec,
                                            bool brace_present,
                                            const ClutterParams& clutter,
                                            std::uint64_t seed);

struct FrameRender {
    GrayImage image;
    AnnotationSet annotations;
    std::vector<TruthUnit> truth;
};

/// Tile n_cols x n_rows units; presence is row-major, one flag per unit.
FrameRender render_frame(const ScaffoldSpec& spec, int n_cols, int n_rows,
                         const std::vector<std::uint8_t>& presence,
                         const ClutterParams& clutter, std::uint64_t seed,
                         int image_id = 1,
                         const std::string& file_name = "frame.png");

/// Per-unit upper bounds; each unit samples its clutter uniformly below them.
struct CorpusClutter {
    int max_clutter_lines = 0;
    double max_noise_sigma = 0.0;
    double max_jitter_px = 0.0;
};

struct CorpusManifest {
    std::vector<std::string> frame_files;
    std::vector<std::uint64_t> frame_seeds;
    std::string coco_file;
    std::string truth_file;
};

/// Write PNG frames plus coco.json, truth.json and manifest.json under
/// out_dir. Deterministic for a fixed seed.
CorpusManifest generate_corpus(const ScaffoldSpec& spec, int n_frames,
                               double presence_rate,
                               const CorpusClutter& clutter,
                               std::uint64_t seed, const std::string& out_dir,
                               int n_cols = 3, int n_rows = 2);

/// Serialize an AnnotationSet back to the COCO-subset JSON.
std::string serialize_coco(const AnnotationSet& set,
                           const std::string& unit_category = "scaffold_unit");

std::string serialize_truth(const std::vector<std::string>& frame_files,
                            const std::vector<std::vector<TruthUnit>>& units,
                            std::uint64_t seed, const ScaffoldSpec& spec);

struct TruthFrame {
    std::string file;
    std::vector<TruthUnit> units;
};
std::vector<TruthFrame> parse_truth(const std::string& json_text);

} // namespace scaffold
