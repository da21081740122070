#include "scaffold/synth.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include <json.hpp>

#include "scaffold/imaging.hpp"

namespace scaffold {

using nlohmann::json;
namespace fs = std::filesystem;

int ScaffoldSpec::canvas_width() const {
    return static_cast<int>(std::lround(unit_width_mm * px_per_mm));
}

int ScaffoldSpec::canvas_height() const {
    return static_cast<int>(std::lround(unit_height_mm * px_per_mm));
}

namespace {

double point_segment_distance(double px, double py, double x0, double y0,
                              double x1, double y1) {
    const double dx = x1 - x0, dy = y1 - y0;
    const double len2 = dx * dx + dy * dy;
    double t = len2 > 0 ? ((px - x0) * dx + (py - y0) * dy) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return std::hypot(px - (x0 + t * dx), py - (y0 + t * dy));
}

// Coverage-antialiased stroke; overlapping strokes keep the darker value.
void draw_stroke(GrayImage& img, double x0, double y0, double x1, double y1,
                 double thickness, int gray) {
    const double half = thickness / 2.0;
    const int xa = std::max(0, static_cast<int>(
                                   std::floor(std::min(x0, x1) - half - 1)));
    const int xb = std::min(img.width - 1,
                            static_cast<int>(
                                std::ceil(std::max(x0, x1) + half + 1)));
    const int ya = std::max(0, static_cast<int>(
                                   std::floor(std::min(y0, y1) - half - 1)));
    const int yb = std::min(img.height - 1,
                            static_cast<int>(
                                std::ceil(std::max(y0, y1) + half + 1)));
    for (int y = ya; y <= yb; ++y) {
        for (int x = xa; x <= xb; ++x) {
            const double d = point_segment_distance(x, y, x0, y0, x1, y1);
            const double cov = std::clamp(half + 0.5 - d, 0.0, 1.0);
            if (cov <= 0.0) continue;
            const int v = static_cast<int>(
                std::lround(255.0 - cov * (255.0 - gray)));
            img.at(x, y) = static_cast<std::uint8_t>(
                std::min<int>(img.at(x, y), v));
        }
    }
}

struct Seg {
    double x0, y0, x1, y1;
};

std::optional<std::pair<double, double>> segment_intersection(const Seg& a,
                                                              const Seg& b) {
    const double rx = a.x1 - a.x0, ry = a.y1 - a.y0;
    const double sx = b.x1 - b.x0, sy = b.y1 - b.y0;
    const double det = rx * sy - ry * sx;
    if (std::abs(det) < 1e-12) return std::nullopt;
    const double qpx = b.x0 - a.x0, qpy = b.y0 - a.y0;
    const double t = (qpx * sy - qpy * sx) / det;
    return std::make_pair(a.x0 + t * rx, a.y0 + t * ry);
}

} // namespace

std::pair<GrayImage, TruthUnit> render_unit(const ScaffoldSpec& spec,
                                            bool brace_present,
                                            const ClutterParams& clutter,
                                            std::uint64_t seed) {
    const int w = spec.canvas_width();
    const int h = spec.canvas_height();
    if (w < 32 || h < 32)
        throw CanvasTooSmall("unit canvas must be at least 32x32 px");

    GrayImage img(w, h, 255);
    std::mt19937_64 rng(seed);
    auto jitter = [&](double v) {
        if (clutter.jitter_px <= 0.0) return v;
        std::uniform_real_distribution<double> d(-clutter.jitter_px,
                                                 clutter.jitter_px);
        return v + d(rng);
    };

    const double up = spec.upright_thickness_px;
    // Uprights at the left/right edges, ledgers top/bottom.
    draw_stroke(img, jitter(up / 2.0), jitter(0), jitter(up / 2.0), jitter(h),
                up, spec.line_gray);
    draw_stroke(img, jitter(w - up / 2.0), jitter(0), jitter(w - up / 2.0),
                jitter(h), up, spec.line_gray);
    draw_stroke(img, jitter(0), jitter(up / 2.0), jitter(w), jitter(up / 2.0),
                up, spec.line_gray);
    draw_stroke(img, jitter(0), jitter(h - up / 2.0), jitter(w),
                jitter(h - up / 2.0), up, spec.line_gray);

    TruthUnit truth;
    truth.bbox_w = w;
    truth.bbox_h = h;
    truth.brace_present = brace_present;
    truth.clutter_count = clutter.n_clutter_lines;
    truth.noise_sigma = clutter.noise_sigma;
    truth.seed = seed;

    if (brace_present) {
        Seg d1{jitter(0), jitter(0), jitter(w), jitter(h)};
        Seg d2{jitter(w), jitter(0), jitter(0), jitter(h)};
        draw_stroke(img, d1.x0, d1.y0, d1.x1, d1.y1, spec.brace_thickness_px,
                    spec.line_gray);
        draw_stroke(img, d2.x0, d2.y0, d2.x1, d2.y1, spec.brace_thickness_px,
                    spec.line_gray);
        auto crossing = segment_intersection(d1, d2);
        truth.crossing = crossing.value_or(
            std::make_pair(w / 2.0, h / 2.0));
    }

    std::uniform_real_distribution<double> ux(0.0, w);
    std::uniform_real_distribution<double> uy(0.0, h);
    for (int i = 0; i < clutter.n_clutter_lines; ++i) {
        draw_stroke(img, ux(rng), uy(rng), ux(rng), uy(rng),
                    spec.brace_thickness_px, spec.line_gray);
    }

    if (clutter.noise_sigma > 0.0) {
        std::normal_distribution<double> noise(0.0, clutter.noise_sigma);
        for (auto& p : img.data) {
            const int v = static_cast<int>(std::lround(p + noise(rng)));
            p = static_cast<std::uint8_t>(std::clamp(v, 0, 255));
        }
    }
    return {std::move(img), truth};
}

FrameRender render_frame(const ScaffoldSpec& spec, int n_cols, int n_rows,
                         const std::vector<std::uint8_t>& presence,
                         const ClutterParams& clutter, std::uint64_t seed,
                         int image_id, const std::string& file_name) {
    if (static_cast<int>(presence.size()) != n_cols * n_rows)
        throw Error("presence matrix size must equal n_cols * n_rows");
    const int uw = spec.canvas_width();
    const int uh = spec.canvas_height();

    FrameRender frame;
    frame.image = GrayImage(uw * n_cols, uh * n_rows, 255);
    frame.annotations.images.push_back(
        {image_id, file_name, frame.image.width, frame.image.height});

    int unit_index = 0;
    for (int row = 0; row < n_rows; ++row) {
        for (int col = 0; col < n_cols; ++col, ++unit_index) {
            const std::uint64_t unit_seed = seed + unit_index;
            auto [tile, truth] = render_unit(
                spec, presence[unit_index] != 0, clutter, unit_seed);
            const int ox = col * uw, oy = row * uh;
            // Shared-upright tiling: darker pixel wins where tiles meet.
            for (int y = 0; y < uh; ++y) {
                for (int x = 0; x < uw; ++x) {
                    auto& dst = frame.image.at(ox + x, oy + y);
                    dst = std::min(dst, tile.at(x, y));
                }
            }
            const int unit_id = unit_index + 1;
            truth.unit_id = unit_id;
            truth.bbox_x = ox;
            truth.bbox_y = oy;
            if (truth.crossing) {
                truth.crossing = std::make_pair(truth.crossing->first + ox,
                                                truth.crossing->second + oy);
            }
            frame.truth.push_back(truth);

            UnitRegion region;
            region.id = unit_id;
            region.image_id = image_id;
            region.bbox_x = ox;
            region.bbox_y = oy;
            region.bbox_w = uw;
            region.bbox_h = uh;
            region.category = "scaffold_unit";
            region.polygon = {static_cast<double>(ox),
                              static_cast<double>(oy),
                              static_cast<double>(ox + uw),
                              static_cast<double>(oy),
                              static_cast<double>(ox + uw),
                              static_cast<double>(oy + uh),
                              static_cast<double>(ox),
                              static_cast<double>(oy + uh)};
            frame.annotations.regions.push_back(std::move(region));
        }
    }
    return frame;
}

std::string serialize_coco(const AnnotationSet& set,
                           const std::string& unit_category) {
    json root;
    root["images"] = json::array();
    for (const auto& img : set.images) {
        root["images"].push_back({{"id", img.id},
                                  {"file_name", img.file_name},
                                  {"width", img.width},
                                  {"height", img.height}});
    }
    root["categories"] = json::array({{{"id", 1}, {"name", unit_category}}});
    root["annotations"] = json::array();
    for (const auto& r : set.regions) {
        root["annotations"].push_back(
            {{"id", r.id},
             {"image_id", r.image_id},
             {"category_id", 1},
             {"bbox", {r.bbox_x, r.bbox_y, r.bbox_w, r.bbox_h}},
             {"segmentation", json::array({r.polygon})}});
    }
    return root.dump(2);
}

std::string serialize_truth(const std::vector<std::string>& frame_files,
                            const std::vector<std::vector<TruthUnit>>& units,
                            std::uint64_t seed, const ScaffoldSpec& spec) {
    json root;
    root["seed"] = seed;
    root["spec"] = {{"unit_width_mm", spec.unit_width_mm},
                    {"net_width_mm", spec.net_width_mm},
                    {"platform_width_mm", spec.platform_width_mm},
                    {"unit_height_mm", spec.unit_height_mm},
                    {"px_per_mm", spec.px_per_mm},
                    {"upright_thickness_px", spec.upright_thickness_px},
                    {"brace_thickness_px", spec.brace_thickness_px},
                    {"line_gray", spec.line_gray}};
    root["frames"] = json::array();
    for (std::size_t f = 0; f < frame_files.size(); ++f) {
        json frame;
        frame["file"] = frame_files[f];
        frame["units"] = json::array();
        for (const auto& u : units[f]) {
            json ju = {{"unit_id", u.unit_id},
                       {"bbox", {u.bbox_x, u.bbox_y, u.bbox_w, u.bbox_h}},
                       {"brace_present", u.brace_present}};
            if (u.crossing) {
                ju["crossing"] = {u.crossing->first, u.crossing->second};
            } else {
                ju["crossing"] = nullptr;
            }
            frame["units"].push_back(ju);
        }
        root["frames"].push_back(frame);
    }
    return root.dump(2);
}

std::vector<TruthFrame> parse_truth(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw MalformedJson(e.what());
    }
    if (!root.contains("frames")) throw MissingField("frames");
    std::vector<TruthFrame> frames;
    for (const auto& jf : root["frames"]) {
        TruthFrame frame;
        frame.file = jf.at("file").get<std::string>();
        for (const auto& ju : jf.at("units")) {
            TruthUnit u;
            u.unit_id = ju.at("unit_id").get<int>();
            const auto& bb = ju.at("bbox");
            u.bbox_x = bb[0].get<double>();
            u.bbox_y = bb[1].get<double>();
            u.bbox_w = bb[2].get<double>();
            u.bbox_h = bb[3].get<double>();
            u.brace_present = ju.at("brace_present").get<bool>();
            if (!ju.at("crossing").is_null()) {
                u.crossing = std::make_pair(ju["crossing"][0].get<double>(),
                                            ju["crossing"][1].get<double>());
            }
            frame.units.push_back(u);
        }
        frames.push_back(std::move(frame));
    }
    return frames;
}

CorpusManifest generate_corpus(const ScaffoldSpec& spec, int n_frames,
                               double presence_rate,
                               const CorpusClutter& clutter,
                               std::uint64_t seed, const std::string& out_dir,
                               int n_cols, int n_rows) {
    if (presence_rate < 0.0 || presence_rate > 1.0)
        throw Error("presence_rate must be in [0, 1]");
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create " + out_dir + ": " + ec.message());

    CorpusManifest manifest;
    AnnotationSet all_annotations;
    std::vector<std::vector<TruthUnit>> all_truth;

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit01(0.0, 1.0);

    for (int f = 0; f < n_frames; ++f) {
        const std::uint64_t frame_seed = seed + 1000003ULL * (f + 1);
        char name[32];
        std::snprintf(name, sizeof(name), "frame_%04d.png", f);

        std::vector<std::uint8_t> presence(
            static_cast<std::size_t>(n_cols) * n_rows, 0);
        for (auto& p : presence) p = unit01(rng) < presence_rate ? 1 : 0;

        ClutterParams cp;
        if (clutter.max_clutter_lines > 0) {
            std::uniform_int_distribution<int> d(0, clutter.max_clutter_lines);
            cp.n_clutter_lines = d(rng);
        }
        if (clutter.max_noise_sigma > 0.0)
            cp.noise_sigma = unit01(rng) * clutter.max_noise_sigma;
        if (clutter.max_jitter_px > 0.0)
            cp.jitter_px = unit01(rng) * clutter.max_jitter_px;

        FrameRender frame = render_frame(spec, n_cols, n_rows, presence, cp,
                                         frame_seed, f + 1, name);
        save_png(frame.image, (fs::path(out_dir) / name).string());
        manifest.frame_files.push_back(name);
        manifest.frame_seeds.push_back(frame_seed);
        all_truth.push_back(frame.truth);

        all_annotations.images.insert(all_annotations.images.end(),
                                      frame.annotations.images.begin(),
                                      frame.annotations.images.end());
        // Region ids are per-frame; renumber so they stay unique corpus-wide.
        for (auto r : frame.annotations.regions) {
            r.id += f * n_cols * n_rows;
            all_annotations.regions.push_back(std::move(r));
        }
    }
    // Keep truth unit ids in step with the renumbered annotations.
    for (std::size_t f = 0; f < all_truth.size(); ++f) {
        for (auto& u : all_truth[f])
            u.unit_id += static_cast<int>(f) * n_cols * n_rows;
    }

    auto write_text = [&](const std::string& name, const std::string& text) {
        const std::string path = (fs::path(out_dir) / name).string();
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write " + path);
        out << text;
        return name;
    };
    manifest.coco_file = write_text("coco.json", serialize_coco(all_annotations));
    manifest.truth_file = write_text(
        "truth.json",
        serialize_truth(manifest.frame_files, all_truth, seed, spec));

    json jm;
    jm["seed"] = seed;
    jm["coco"] = manifest.coco_file;
    jm["truth"] = manifest.truth_file;
    jm["frames"] = json::array();
    for (std::size_t f = 0; f < manifest.frame_files.size(); ++f) {
        jm["frames"].push_back({{"file", manifest.frame_files[f]},
                                {"seed", manifest.frame_seeds[f]}});
    }
    write_text("manifest.json", jm.dump(2));
    return manifest;
}

} // namespace scaffold
