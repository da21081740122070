#include <doctest.h>

#include <cmath>
#include <random>

#include "scaffold/imaging.hpp"

using namespace scaffold;

namespace {

RgbImage solid_rgb(int w, int h, int r, int g, int b) {
    RgbImage img(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            img.pixel(x, y)[0] = static_cast<std::uint8_t>(r);
            img.pixel(x, y)[1] = static_cast<std::uint8_t>(g);
            img.pixel(x, y)[2] = static_cast<std::uint8_t>(b);
        }
    }
    return img;
}

// Independent 3x3 convolution, written directly from the kernel matrices.
void sobel_oracle(const GrayImage& img, int x, int y, int& gx, int& gy) {
    static const int kx[3][3] = {{-1, 0, 1}, {-2, 0, 2}, {-1, 0, 1}};
    static const int ky[3][3] = {{-1, -2, -1}, {0, 0, 0}, {1, 2, 1}};
    gx = 0;
    gy = 0;
    for (int j = 0; j < 3; ++j) {
        for (int i = 0; i < 3; ++i) {
            const int v = img.at(x + i - 1, y + j - 1);
            gx += kx[j][i] * v;
            gy += ky[j][i] * v;
        }
    }
}

} // namespace

TEST_CASE("to_grayscale evaluates the 601 luma weights") {
    CHECK(to_grayscale(solid_rgb(1, 1, 0, 0, 0)).at(0, 0) == 0);
    CHECK(to_grayscale(solid_rgb(1, 1, 255, 255, 255)).at(0, 0) == 255);
    CHECK(to_grayscale(solid_rgb(1, 1, 255, 0, 0)).at(0, 0) == 76);
    CHECK(to_grayscale(solid_rgb(1, 1, 100, 100, 100)).at(0, 0) == 100);
}

TEST_CASE("to_grayscale is monotone in every channel") {
    std::mt19937 rng(3);
    std::uniform_int_distribution<int> byte(0, 254);
    for (int trial = 0; trial < 200; ++trial) {
        const int r = byte(rng), g = byte(rng), b = byte(rng);
        const int base = to_grayscale(solid_rgb(1, 1, r, g, b)).at(0, 0);
        CHECK(to_grayscale(solid_rgb(1, 1, r + 1, g, b)).at(0, 0) >= base);
        CHECK(to_grayscale(solid_rgb(1, 1, r, g + 1, b)).at(0, 0) >= base);
        CHECK(to_grayscale(solid_rgb(1, 1, r, g, b + 1)).at(0, 0) >= base);
    }
}

TEST_CASE("decode_image reads ASCII PPM") {
    const std::string ppm = "P3\n2 2\n255\n"
                            "255 255 255 255 255 255\n"
                            "255 255 255 255 255 255\n";
    std::vector<std::uint8_t> bytes(ppm.begin(), ppm.end());
    const GrayImage gray = to_grayscale(decode_image(bytes));
    CHECK(gray.width == 2);
    CHECK(gray.height == 2);
    for (auto v : gray.data) CHECK(v == 255);
}

TEST_CASE("decode_image error paths") {
    const std::string truncated = "P3\n2 2\n";
    std::vector<std::uint8_t> bytes(truncated.begin(), truncated.end());
    CHECK_THROWS_AS(decode_image(bytes), CorruptPayload);

    std::vector<std::uint8_t> garbage = {'G', 'I', 'F', '8', '9'};
    CHECK_THROWS_AS(decode_image(garbage), UnsupportedFormat);

    // valid signature, truncated stream
    std::vector<std::uint8_t> broken_png = {0x89, 'P', 'N', 'G',
                                            '\r', '\n', 0x1a, '\n', 0, 0};
    CHECK_THROWS_AS(decode_image(broken_png), CorruptPayload);
}

TEST_CASE("png encode/decode round-trips pixel-identical") {
    std::mt19937 rng(5);
    GrayImage img(8, 8);
    for (auto& p : img.data) p = static_cast<std::uint8_t>(rng() % 256);
    const auto bytes = encode_png(img);
    const GrayImage back = std::get<GrayImage>(decode_image(bytes));
    CHECK(back == img);

    RgbImage rgb(9, 5);
    for (auto& p : rgb.data) p = static_cast<std::uint8_t>(rng() % 256);
    const RgbImage rgb_back =
        std::get<RgbImage>(decode_image(encode_png(rgb)));
    CHECK(rgb_back == rgb);
}

TEST_CASE("sobel: constant image has zero magnitude") {
    GrayImage img(7, 6, 80);
    const GradientField field = sobel_gradients(img);
    for (double m : field.magnitude) CHECK(m == 0.0);
}

TEST_CASE("sobel rejects images under 3x3") {
    CHECK_THROWS_AS(sobel_gradients(GrayImage(2, 5)), ImageTooSmall);
    CHECK_THROWS_AS(sobel_gradients(GrayImage(5, 2)), ImageTooSmall);
}

TEST_CASE("sobel: vertical step edge responds along the step") {
    GrayImage img(12, 8, 0);
    for (int y = 0; y < 8; ++y)
        for (int x = 6; x < 12; ++x) img.at(x, y) = 255;
    const GradientField field = sobel_gradients(img);
    for (int y = 1; y < 7; ++y) {
        const double m5 = field.magnitude[y * 12 + 5];
        const double m6 = field.magnitude[y * 12 + 6];
        CHECK(m5 == 4 * 255.0);
        CHECK(m6 == 4 * 255.0);
        // gradient points along +x: direction ~ 0
        CHECK(std::abs(field.direction[y * 12 + 5]) < 1e-12);
        CHECK(field.magnitude[y * 12 + 2] == 0.0);
    }
}

TEST_CASE("sobel matches the naive convolution oracle exactly") {
    std::mt19937 rng(9);
    for (int trial = 0; trial < 20; ++trial) {
        GrayImage img(5, 5);
        for (auto& p : img.data) p = static_cast<std::uint8_t>(rng() % 256);
        const GradientField field = sobel_gradients(img);
        for (int y = 0; y < 5; ++y) {
            for (int x = 0; x < 5; ++x) {
                if (x == 0 || y == 0 || x == 4 || y == 4) {
                    CHECK(field.magnitude[y * 5 + x] == 0.0);
                    continue;
                }
                int gx, gy;
                sobel_oracle(img, x, y, gx, gy);
                const double expect = std::sqrt(double(gx) * gx +
                                                double(gy) * gy);
                CHECK(field.magnitude[y * 5 + x] == expect);
                CHECK(field.direction[y * 5 + x] ==
                      std::atan2(double(gy), double(gx)));
            }
        }
    }
}

TEST_CASE("canny: constant image yields no edges") {
    const EdgeMap edges = canny_edges(GrayImage(20, 20, 128), 50, 150);
    CHECK(edges.count() == 0);
}

TEST_CASE("canny rejects low > high") {
    CHECK_THROWS_AS(canny_edges(GrayImage(5, 5), 100, 50), InvalidThresholds);
}

TEST_CASE("canny: half-plane split localizes to the step columns") {
    GrayImage img(24, 16, 0);
    for (int y = 0; y < 16; ++y)
        for (int x = 10; x < 24; ++x) img.at(x, y) = 255;
    const EdgeMap edges = canny_edges(img, 50, 150);
    for (int y = 1; y < 15; ++y) {
        int per_row = 0;
        for (int x = 0; x < 24; ++x) {
            if (!edges.is_edge(x, y)) continue;
            ++per_row;
            CHECK(x >= 9);
            CHECK(x <= 11);
        }
        CHECK(per_row == 1);
    }
}

TEST_CASE("canny: high == low degenerates to a single threshold") {
    std::mt19937 rng(21);
    GrayImage img(30, 30);
    for (auto& p : img.data) p = static_cast<std::uint8_t>(rng() % 256);
    const EdgeMap hysteresis = canny_edges(img, 40, 40);

    // single-threshold oracle: NMS survivors at >= 40, no weak tier
    const EdgeMap two_tier = canny_edges(img, 40, 255.0);
    // every strong pixel of the degenerate run must at least appear
    for (std::size_t i = 0; i < hysteresis.edges.size(); ++i) {
        if (two_tier.edges[i]) CHECK(hysteresis.edges[i]);
    }
}

TEST_CASE("canny output is a subset of pixels at or above the low threshold") {
    std::mt19937 rng(23);
    GrayImage img(40, 40);
    for (auto& p : img.data) p = static_cast<std::uint8_t>(rng() % 256);
    const double low = 30, high = 90;
    const EdgeMap edges = canny_edges(img, low, high);
    const GradientField field = sobel_gradients(img);
    for (std::size_t i = 0; i < edges.edges.size(); ++i) {
        if (edges.edges[i])
            CHECK(field.magnitude[i] >= low * kSobelMagnitudeScale);
    }
}

TEST_CASE("apply_mask intersects and is idempotent") {
    EdgeMap edges(8, 8);
    for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 8; ++x) edges.set(x, y);

    UnitMask full;
    full.width = full.height = 8;
    full.inside.assign(64, 1);
    CHECK(apply_mask(edges, full) == edges);

    UnitMask checker;
    checker.width = checker.height = 8;
    checker.inside.assign(64, 0);
    for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 8; ++x) checker.inside[y * 8 + x] = (x + y) % 2;
    const EdgeMap once = apply_mask(edges, checker);
    CHECK(once.count() == 32);
    CHECK(apply_mask(once, checker) == once);

    UnitMask empty = checker;
    empty.inside.assign(64, 0);
    CHECK(apply_mask(edges, empty).count() == 0);

    UnitMask wrong;
    wrong.width = 4;
    wrong.height = 8;
    wrong.inside.assign(32, 1);
    CHECK_THROWS_AS(apply_mask(edges, wrong), DimensionMismatch);
}
