#include "scaffold/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "scaffold/imaging.hpp"

namespace scaffold {

using nlohmann::json;
namespace fs = std::filesystem;

FrameDetection detect_frame(const GrayImage& img, const std::string& file_name,
                            const AnnotationSet& annotations,
                            const RunConfig& config, bool with_timing) {
    FrameDetection out;
    out.file = file_name;

    int image_id = -1;
    for (const auto& entry : annotations.images) {
        if (entry.file_name == file_name) {
            image_id = entry.id;
            break;
        }
    }
    if (image_id < 0)
        throw Error("no COCO image entry for " + file_name);

    std::vector<const UnitRegion*> regions;
    for (const auto& r : annotations.regions) {
        if (r.image_id == image_id) regions.push_back(&r);
    }
    std::sort(regions.begin(), regions.end(),
              [](const UnitRegion* a, const UnitRegion* b) {
                  return a->id < b->id;
              });

    const auto t0 = std::chrono::steady_clock::now();
    const DetectParams params = config.detect_params();
    for (const UnitRegion* r : regions) {
        out.units.push_back(detect_unit_full(img, *r, params, config.seed));
    }
    if (with_timing) {
        out.elapsed_ms =
            std::chrono::duration<double, std::milli>(
                std::chrono::steady_clock::now() - t0)
                .count();
    }
    return out;
}

std::string build_report(const std::vector<FrameDetection>& frames,
                         const RunConfig& config) {
    json root;
    root["images"] = json::array();
    for (const auto& frame : frames) {
        json jf;
        jf["file"] = frame.file;
        jf["elapsed_ms"] = frame.elapsed_ms;
        jf["units"] = json::array();
        for (const auto& unit : frame.units) {
            const UnitVerdict& v = unit.verdict;
            json ju = {{"unit_id", v.unit_id},
                       {"brace_present", v.brace_present},
                       {"n_lines_a", v.n_lines_a},
                       {"n_lines_b", v.n_lines_b},
                       {"central_hits", v.central_hits}};
            ju["intersections"] = json::array();
            for (const auto& p : v.intersections)
                ju["intersections"].push_back({p.x, p.y});
            jf["units"].push_back(ju);
        }
        root["images"].push_back(jf);
    }
    root["config"] = {
        {"seed", config.seed},
        {"category", config.category},
        {"canny", {{"low", config.canny_low}, {"high", config.canny_high}}},
        {"hough",
         {{"rho_res", config.hough.rho_res},
          {"theta_res_deg", config.hough.theta_res * 180.0 / M_PI},
          {"threshold_frac", config.hough.threshold_frac},
          {"threshold_abs", config.hough.threshold_abs},
          {"nms_rho", config.hough.nms_rho},
          {"nms_theta", config.hough.nms_theta},
          {"max_lines", config.hough.max_lines}}},
        {"brace",
         {{"vert_tol_deg", config.brace.vert_tol * 180.0 / M_PI},
          {"horiz_tol_deg", config.brace.horiz_tol * 180.0 / M_PI},
          {"central_frac", config.brace.central_frac},
          {"kmeans_restarts", config.brace.kmeans_restarts},
          {"kmeans_max_iter", config.brace.kmeans_max_iter},
          {"kmeans_tol", config.brace.kmeans_tol},
          {"parallel_eps", config.brace.parallel_eps}}}};
    return root.dump(2);
}

EvalCounts evaluate_corpus(const std::string& corpus_dir,
                           const RunConfig& config) {
    const fs::path dir(corpus_dir);
    auto read_text = [](const fs::path& p) {
        std::ifstream in(p);
        if (!in) throw IoError("cannot open " + p.string());
        std::stringstream buf;
        buf << in.rdbuf();
        return buf.str();
    };
    const AnnotationSet annotations =
        parse_coco(read_text(dir / "coco.json"), config.category);
    const auto truth = parse_truth(read_text(dir / "truth.json"));

    EvalCounts counts;
    for (const auto& frame : truth) {
        const GrayImage img =
            to_grayscale(load_image((dir / frame.file).string()));
        FrameDetection det =
            detect_frame(img, frame.file, annotations, config, false);
        std::map<int, bool> detected;
        for (const auto& u : det.units)
            detected[u.verdict.unit_id] = u.verdict.brace_present;
        for (const auto& tu : frame.units) {
            auto it = detected.find(tu.unit_id);
            const bool found = it != detected.end() && it->second;
            if (tu.brace_present && found) ++counts.tp;
            else if (tu.brace_present && !found) ++counts.fn;
            else if (!tu.brace_present && found) ++counts.fp;
            else ++counts.tn;
        }
    }
    return counts;
}

namespace {

void draw_rgb_segment(RgbImage& img, double x0, double y0, double x1,
                      double y1, std::uint8_t r, std::uint8_t g,
                      std::uint8_t b) {
    const double steps = std::max(std::abs(x1 - x0), std::abs(y1 - y0));
    const int n = std::max(1, static_cast<int>(std::ceil(steps)));
    for (int i = 0; i <= n; ++i) {
        const double t = static_cast<double>(i) / n;
        const int x = static_cast<int>(std::lround(x0 + t * (x1 - x0)));
        const int y = static_cast<int>(std::lround(y0 + t * (y1 - y0)));
        if (x < 0 || y < 0 || x >= img.width || y >= img.height) continue;
        std::uint8_t* p = img.pixel(x, y);
        p[0] = r;
        p[1] = g;
        p[2] = b;
    }
}

// Liang-Barsky clip of a segment to [x0,x1] x [y0,y1].
bool clip_segment(double& ax, double& ay, double& bx, double& by, double x0,
                  double y0, double x1, double y1) {
    const double dx = bx - ax, dy = by - ay;
    double t0 = 0.0, t1 = 1.0;
    const double p[4] = {-dx, dx, -dy, dy};
    const double q[4] = {ax - x0, x1 - ax, ay - y0, y1 - ay};
    for (int i = 0; i < 4; ++i) {
        if (p[i] == 0.0) {
            if (q[i] < 0.0) return false;
            continue;
        }
        const double t = q[i] / p[i];
        if (p[i] < 0.0) {
            t0 = std::max(t0, t);
        } else {
            t1 = std::min(t1, t);
        }
    }
    if (t0 > t1) return false;
    const double nax = ax + t0 * dx, nay = ay + t0 * dy;
    bx = ax + t1 * dx;
    by = ay + t1 * dy;
    ax = nax;
    ay = nay;
    return true;
}

} // namespace

RgbImage draw_overlay(const GrayImage& img, const FrameDetection& detection) {
    RgbImage out = to_rgb(img);
    for (const auto& unit : detection.units) {
        const double ux = unit.offset_x, uy = unit.offset_y;
        const double uw = unit.crop_w, uh = unit.crop_h;

        // Detected lines, clipped to the unit crop.
        for (const auto& line : unit.lines) {
            auto [a, b] = line_to_segment(line, 1000.0);
            double ax = a.first + ux, ay = a.second + uy;
            double bx = b.first + ux, by = b.second + uy;
            if (clip_segment(ax, ay, bx, by, ux, uy, ux + uw - 1, uy + uh - 1))
                draw_rgb_segment(out, ax, ay, bx, by, 60, 60, 255);
        }

        // Intersections as radius-4 discs.
        for (const auto& p : unit.verdict.intersections) {
            for (int dy = -4; dy <= 4; ++dy) {
                for (int dx = -4; dx <= 4; ++dx) {
                    if (dx * dx + dy * dy > 16) continue;
                    const int x = static_cast<int>(std::lround(p.x)) + dx;
                    const int y = static_cast<int>(std::lround(p.y)) + dy;
                    if (x < 0 || y < 0 || x >= out.width || y >= out.height)
                        continue;
                    std::uint8_t* q = out.pixel(x, y);
                    q[0] = 255;
                    q[1] = 200;
                    q[2] = 0;
                }
            }
        }

        // Unit bbox: green when complete, red when the brace is missing.
        const std::uint8_t r = unit.verdict.brace_present ? 0 : 255;
        const std::uint8_t g = unit.verdict.brace_present ? 255 : 0;
        draw_rgb_segment(out, ux, uy, ux + uw - 1, uy, r, g, 0);
        draw_rgb_segment(out, ux + uw - 1, uy, ux + uw - 1, uy + uh - 1, r, g,
                         0);
        draw_rgb_segment(out, ux + uw - 1, uy + uh - 1, ux, uy + uh - 1, r, g,
                         0);
        draw_rgb_segment(out, ux, uy + uh - 1, ux, uy, r, g, 0);
    }
    return out;
}

FrameSnapshot snapshot_from_detection(const FrameDetection& detection,
                                      const std::string& frame_id,
                                      std::int64_t timestamp) {
    FrameSnapshot snap;
    snap.frame_id = frame_id;
    snap.timestamp = timestamp;
    for (const auto& u : detection.units) snap.verdicts.push_back(u.verdict);
    return snap;
}

} // namespace scaffold
