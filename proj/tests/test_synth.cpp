#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "scaffold/hough.hpp"
#include "scaffold/imaging.hpp"
#include "scaffold/synth.hpp"

using namespace scaffold;
namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

fs::path temp_dir(const char* name) {
    const fs::path dir = fs::temp_directory_path() / name;
    fs::remove_all(dir);
    return dir;
}

double angular_distance(double a, double b) {
    double d = std::fmod(std::abs(a - b), M_PI);
    return std::min(d, M_PI - d);
}

} // namespace

TEST_CASE("render_unit: clean brace crosses at the exact canvas center") {
    ScaffoldSpec spec;
    auto [img, truth] = render_unit(spec, true, {}, 7);
    CHECK(img.width == spec.canvas_width());
    CHECK(img.height == spec.canvas_height());
    REQUIRE(truth.crossing.has_value());
    CHECK(truth.crossing->first == img.width / 2.0);
    CHECK(truth.crossing->second == img.height / 2.0);
    CHECK(truth.brace_present);
}

TEST_CASE("render_unit: no brace means no crossing and no diagonal strokes") {
    ScaffoldSpec spec;
    auto [img, truth] = render_unit(spec, false, {}, 7);
    CHECK_FALSE(truth.crossing.has_value());
    // interior away from uprights/ledgers stays background white
    int dark_interior = 0;
    for (int y = 20; y < img.height - 20; ++y) {
        for (int x = 20; x < img.width - 20; ++x) {
            if (img.at(x, y) < 200) ++dark_interior;
        }
    }
    CHECK(dark_interior == 0);
}

TEST_CASE("render_unit is deterministic for a fixed seed") {
    ScaffoldSpec spec;
    ClutterParams clutter{5, 8.0, 2.0};
    auto [img1, truth1] = render_unit(spec, true, clutter, 1234);
    auto [img2, truth2] = render_unit(spec, true, clutter, 1234);
    CHECK(img1 == img2);
    CHECK(truth1.crossing == truth2.crossing);

    auto [img3, _] = render_unit(spec, true, clutter, 1235);
    CHECK(img1 != img3);
}

TEST_CASE("render_unit rejects sub-32px canvases") {
    ScaffoldSpec spec;
    spec.px_per_mm = 0.01;
    CHECK_THROWS_AS(render_unit(spec, true, {}, 1), CanvasTooSmall);
}

TEST_CASE("clean render: Hough recovers both diagonal angles within 2 degrees") {
    ScaffoldSpec spec;
    auto [img, truth] = render_unit(spec, true, {}, 11);
    const double w = img.width, h = img.height;
    // line directions of the two corner-to-corner diagonals -> normals
    const double phi1 = std::atan2(h, w);
    const double phi2 = std::atan2(h, -w);
    auto normal_of = [](double phi) {
        double t = std::fmod(phi + M_PI / 2, M_PI);
        if (t < 0) t += M_PI;
        return t;
    };

    const EdgeMap edges = canny_edges(img, 50, 150);
    HoughParams params;
    const auto peaks = find_peaks(hough_accumulate(edges, params), params,
                                  params.threshold_for_height(img.height));
    REQUIRE(peaks.size() >= 2);

    for (double expect : {normal_of(phi1), normal_of(phi2)}) {
        double best = 1e9;
        for (const auto& p : peaks)
            best = std::min(best, angular_distance(p.theta, expect));
        CHECK(best <= 2.0 * M_PI / 180.0);
    }
}

TEST_CASE("render_frame: 1x1 equals render_unit at origin") {
    ScaffoldSpec spec;
    const FrameRender frame = render_frame(spec, 1, 1, {1}, {}, 77);
    auto [unit, truth] = render_unit(spec, true, {}, 77);
    CHECK(frame.image == unit);
    REQUIRE(frame.annotations.regions.size() == 1);
    CHECK(frame.annotations.regions[0].bbox_w == unit.width);
    REQUIRE(frame.truth.size() == 1);
    CHECK(frame.truth[0].crossing == truth.crossing);
}

TEST_CASE("render_frame: 3x2 tiling and presence accounting") {
    ScaffoldSpec spec;
    const std::vector<std::uint8_t> presence = {1, 1, 0, 1, 0, 1};
    const FrameRender frame = render_frame(spec, 3, 2, presence, {}, 5);
    CHECK(frame.image.width == 3 * spec.canvas_width());
    CHECK(frame.image.height == 2 * spec.canvas_height());
    CHECK(frame.annotations.regions.size() == 6);
    CHECK(frame.truth.size() == 6);
    int without = 0;
    for (std::size_t i = 0; i < 6; ++i) {
        CHECK(frame.truth[i].brace_present == (presence[i] != 0));
        if (!frame.truth[i].crossing.has_value()) ++without;
        if (frame.truth[i].crossing) {
            // crossing at that unit's center
            const auto& u = frame.truth[i];
            CHECK(u.crossing->first ==
                  doctest::Approx(u.bbox_x + u.bbox_w / 2));
            CHECK(u.crossing->second ==
                  doctest::Approx(u.bbox_y + u.bbox_h / 2));
        }
    }
    CHECK(without == 2);
}

TEST_CASE("generate_corpus writes a parseable, deterministic corpus") {
    ScaffoldSpec spec;
    const fs::path dir1 = temp_dir("synth_corpus_a");
    const fs::path dir2 = temp_dir("synth_corpus_b");
    const CorpusManifest m1 =
        generate_corpus(spec, 3, 0.5, {3, 4.0, 1.0}, 2024, dir1.string());
    const CorpusManifest m2 =
        generate_corpus(spec, 3, 0.5, {3, 4.0, 1.0}, 2024, dir2.string());

    REQUIRE(m1.frame_files.size() == 3);
    for (const auto& f : m1.frame_files) {
        CHECK(read_file(dir1 / f) == read_file(dir2 / f));
    }
    CHECK(read_file(dir1 / "coco.json") == read_file(dir2 / "coco.json"));
    CHECK(read_file(dir1 / "truth.json") == read_file(dir2 / "truth.json"));
    CHECK(read_file(dir1 / "manifest.json") ==
          read_file(dir2 / "manifest.json"));

    // round-trip: parse what we emitted
    const AnnotationSet set = parse_coco(read_file(dir1 / "coco.json"));
    CHECK(set.images.size() == 3);
    CHECK(set.regions.size() == 3u * 6u);
    const auto truth = parse_truth(read_file(dir1 / "truth.json"));
    CHECK(truth.size() == 3);

    // png round-trip, pixel identical
    const GrayImage img = to_grayscale(load_image((dir1 / "frame_0000.png").string()));
    const auto png = encode_png(img);
    CHECK(std::get<GrayImage>(decode_image(png)) == img);

    fs::remove_all(dir1);
    fs::remove_all(dir2);
}

TEST_CASE("generate_corpus: empty corpus and extreme presence rates") {
    ScaffoldSpec spec;
    const fs::path dir = temp_dir("synth_corpus_empty");
    const CorpusManifest m =
        generate_corpus(spec, 0, 0.5, {}, 1, dir.string());
    CHECK(m.frame_files.empty());
    const AnnotationSet set = parse_coco(read_file(dir / "coco.json"));
    CHECK(set.images.empty());
    CHECK(set.regions.empty());
    fs::remove_all(dir);

    const fs::path dir_full = temp_dir("synth_corpus_full");
    generate_corpus(spec, 2, 1.0, {}, 1, dir_full.string());
    for (const auto& frame : parse_truth(read_file(dir_full / "truth.json"))) {
        for (const auto& u : frame.units) {
            CHECK(u.brace_present);
            CHECK(u.crossing.has_value());
        }
    }
    fs::remove_all(dir_full);
}
