#include "scaffold/kernels.hpp"

#include <cmath>

namespace scaffold::kernels::scalar {

void luma(const std::uint8_t* r, const std::uint8_t* g, const std::uint8_t* b,
          std::size_t n, std::uint8_t* out) {
    for (std::size_t i = 0; i < n; ++i) {
        double y = 0.299 * r[i] + 0.587 * g[i] + 0.114 * b[i];
        out[i] = static_cast<std::uint8_t>(std::floor(y + 0.5));
    }
}

void sobel_row(const std::uint8_t* above, const std::uint8_t* row,
               const std::uint8_t* below, int width, std::int32_t* gx,
               std::int32_t* gy) {
    for (int x = 1; x < width - 1; ++x) {
        int a0 = above[x - 1], a1 = above[x], a2 = above[x + 1];
        int r0 = row[x - 1], r2 = row[x + 1];
        int b0 = below[x - 1], b1 = below[x], b2 = below[x + 1];
        gx[x] = (a2 + 2 * r2 + b2) - (a0 + 2 * r0 + b0);
        gy[x] = (b0 + 2 * b1 + b2) - (a0 + 2 * a1 + a2);
    }
}

void magnitude(const std::int32_t* gx, const std::int32_t* gy, std::size_t n,
               double* mag) {
    for (std::size_t i = 0; i < n; ++i) {
        double dx = gx[i];
        double dy = gy[i];
        mag[i] = std::sqrt(dx * dx + dy * dy);
    }
}

void hough_rho_bins(double x, double y, const double* cos_t,
                    const double* sin_t, std::size_t theta_bins, double diag,
                    double rho_res, std::int32_t* bin) {
    for (std::size_t j = 0; j < theta_bins; ++j) {
        double rho = x * cos_t[j] + y * sin_t[j];
        bin[j] = static_cast<std::int32_t>(
            std::floor((rho + diag) / rho_res + 0.5));
    }
}

} // namespace scaffold::kernels::scalar
