#pragma once

#include <cstdint>
#include <vector>

#include "scaffold/errors.hpp"

namespace scaffold {

/// 8-bit single-channel raster, row-major, origin at the top-left pixel.
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data; // width * height luminance values

    GrayImage() = default;
    GrayImage(int w, int h, std::uint8_t fill = 0)
        : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill) {}

    std::uint8_t at(int x, int y) const {
        return data[static_cast<std::size_t>(y) * width + x];
    }
    std::uint8_t& at(int x, int y) {
        return data[static_cast<std::size_t>(y) * width + x];
    }
    bool operator==(const GrayImage&) const = default;
};

/// Interleaved 8-bit RGB raster.
struct RgbImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data; // width * height * 3, R G B per pixel

    RgbImage() = default;
    RgbImage(int w, int h)
        : width(w), height(h), data(static_cast<std::size_t>(w) * h * 3, 0) {}

    const std::uint8_t* pixel(int x, int y) const {
        return data.data() + (static_cast<std::size_t>(y) * width + x) * 3;
    }
    std::uint8_t* pixel(int x, int y) {
        return data.data() + (static_cast<std::size_t>(y) * width + x) * 3;
    }
    bool operator==(const RgbImage&) const = default;
};

/// Per-pixel gradient magnitude and direction (radians in [-pi, pi]).
struct GradientField {
    int width = 0;
    int height = 0;
    std::vector<double> magnitude;
    std::vector<double> direction;
};

/// Binary edge raster.
struct EdgeMap {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> edges; // 0 or 1 per pixel

    EdgeMap() = default;
    EdgeMap(int w, int h)
        : width(w), height(h), edges(static_cast<std::size_t>(w) * h, 0) {}

    bool is_edge(int x, int y) const {
        return edges[static_cast<std::size_t>(y) * width + x] != 0;
    }
    void set(int x, int y, bool v = true) {
        edges[static_cast<std::size_t>(y) * width + x] = v ? 1 : 0;
    }
    std::size_t count() const {
        std::size_t n = 0;
        for (auto e : edges) n += e != 0;
        return n;
    }
    bool operator==(const EdgeMap&) const = default;
};

/// Binary interior mask for one scaffold unit, with its tight bounding box.
struct UnitMask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> inside;
    int bbox_x_min = 0, bbox_y_min = 0, bbox_x_max = 0, bbox_y_max = 0;

    bool is_inside(int x, int y) const {
        return inside[static_cast<std::size_t>(y) * width + x] != 0;
    }
};

} // namespace scaffold
