#include "scaffold/imaging.hpp"

#include <cmath>
#include <deque>

#include "scaffold/kernels.hpp"

namespace scaffold {

GrayImage to_grayscale(const RgbImage& rgb) {
    const std::size_t n = static_cast<std::size_t>(rgb.width) * rgb.height;
    std::vector<std::uint8_t> r(n), g(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
        r[i] = rgb.data[i * 3];
        g[i] = rgb.data[i * 3 + 1];
        b[i] = rgb.data[i * 3 + 2];
    }
    GrayImage out(rgb.width, rgb.height);
    kernels::active().luma(r.data(), g.data(), b.data(), n, out.data.data());
    return out;
}

GrayImage to_grayscale(const DecodedImage& img) {
    if (const auto* g = std::get_if<GrayImage>(&img)) return *g;
    return to_grayscale(std::get<RgbImage>(img));
}

RgbImage to_rgb(const GrayImage& gray) {
    RgbImage out(gray.width, gray.height);
    for (std::size_t i = 0; i < gray.data.size(); ++i) {
        out.data[i * 3] = gray.data[i];
        out.data[i * 3 + 1] = gray.data[i];
        out.data[i * 3 + 2] = gray.data[i];
    }
    return out;
}

GradientField sobel_gradients(const GrayImage& img) {
    if (img.width < 3 || img.height < 3)
        throw ImageTooSmall("sobel needs at least 3x3");
    const int w = img.width, h = img.height;
    GradientField field;
    field.width = w;
    field.height = h;
    field.magnitude.assign(static_cast<std::size_t>(w) * h, 0.0);
    field.direction.assign(static_cast<std::size_t>(w) * h, 0.0);

    const auto& k = kernels::active();
    std::vector<std::int32_t> gx(w), gy(w);
    for (int y = 1; y < h - 1; ++y) {
        const std::uint8_t* above = &img.data[static_cast<std::size_t>(y - 1) * w];
        const std::uint8_t* row = above + w;
        const std::uint8_t* below = row + w;
        k.sobel_row(above, row, below, w, gx.data(), gy.data());
        double* mag = &field.magnitude[static_cast<std::size_t>(y) * w];
        double* dir = &field.direction[static_cast<std::size_t>(y) * w];
        k.magnitude(gx.data() + 1, gy.data() + 1,
                    static_cast<std::size_t>(w - 2), mag + 1);
        for (int x = 1; x < w - 1; ++x) {
            dir[x] = std::atan2(static_cast<double>(gy[x]),
                                static_cast<double>(gx[x]));
        }
    }
    return field;
}

namespace {

// Quantize a gradient direction to one of four sectors and return the
// positive-direction neighbor offset.
std::pair<int, int> sector_offset(double dir) {
    double a = dir;
    if (a < 0) a += M_PI; // orientation, period pi
    const double deg = a * 180.0 / M_PI;
    if (deg < 22.5 || deg >= 157.5) return {1, 0};   // ~horizontal gradient
    if (deg < 67.5) return {1, 1};                   // diagonal
    if (deg < 112.5) return {0, 1};                  // ~vertical gradient
    return {-1, 1};                                  // anti-diagonal
}

} // namespace

EdgeMap canny_edges(const GrayImage& img, double low, double high) {
    if (low > high) throw InvalidThresholds("canny: low > high");
    if (low < 0) throw InvalidThresholds("canny: negative threshold");
    GradientField field = sobel_gradients(img);
    const int w = img.width, h = img.height;
    auto mag = [&](int x, int y) {
        return field.magnitude[static_cast<std::size_t>(y) * w + x];
    };

    // Non-maximum suppression. On plateaus of equal magnitude the pixel on
    // the positive-offset side survives, so a two-pixel-wide response thins
    // to one.
    const double low_raw = low * kSobelMagnitudeScale;
    const double high_raw = high * kSobelMagnitudeScale;
    std::vector<std::uint8_t> strength(static_cast<std::size_t>(w) * h, 0);
    for (int y = 1; y < h - 1; ++y) {
        for (int x = 1; x < w - 1; ++x) {
            const double m = mag(x, y);
            if (m < low_raw) continue;
            auto [dx, dy] =
                sector_offset(field.direction[static_cast<std::size_t>(y) * w + x]);
            if (!(m >= mag(x - dx, y - dy) && m > mag(x + dx, y + dy)))
                continue;
            strength[static_cast<std::size_t>(y) * w + x] =
                (m >= high_raw) ? 2 : 1;
        }
    }

    // Hysteresis: flood from strong pixels through weak ones, 8-connected.
    EdgeMap out(w, h);
    std::deque<std::pair<int, int>> queue;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (strength[static_cast<std::size_t>(y) * w + x] == 2 &&
                !out.is_edge(x, y)) {
                out.set(x, y);
                queue.emplace_back(x, y);
                while (!queue.empty()) {
                    auto [cx, cy] = queue.front();
                    queue.pop_front();
                    for (int dy = -1; dy <= 1; ++dy) {
                        for (int dx = -1; dx <= 1; ++dx) {
                            const int nx = cx + dx, ny = cy + dy;
                            if (nx < 0 || ny < 0 || nx >= w || ny >= h)
                                continue;
                            if (strength[static_cast<std::size_t>(ny) * w + nx] ==
                                    0 ||
                                out.is_edge(nx, ny))
                                continue;
                            out.set(nx, ny);
                            queue.emplace_back(nx, ny);
                        }
                    }
                }
            }
        }
    }
    return out;
}

EdgeMap apply_mask(const EdgeMap& edges, const UnitMask& mask) {
    if (edges.width != mask.width || edges.height != mask.height)
        throw DimensionMismatch("apply_mask: mismatched dimensions");
    EdgeMap out(edges.width, edges.height);
    for (std::size_t i = 0; i < edges.edges.size(); ++i) {
        out.edges[i] = edges.edges[i] & mask.inside[i];
    }
    return out;
}

} // namespace scaffold
