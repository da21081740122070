#pragma once

// Data-parallel inner loops used by the imaging and Hough stages.
// Each kernel has a scalar reference implementation and, on x86-64, an
// AVX2 variant selected once at startup. Both variants are required to
// produce bit-identical results; tests/test_kernels.cpp enforces this.

#include <cstddef>
#include <cstdint>

namespace scaffold::kernels {

// y = floor(0.299 r + 0.587 g + 0.114 b + 0.5), planar inputs.
using LumaFn = void (*)(const std::uint8_t* r, const std::uint8_t* g,
                        const std::uint8_t* b, std::size_t n,
                        std::uint8_t* out);

// One interior row of the 3x3 Sobel pair. `above`, `row`, `below` point at
// column 0 of the three source rows; gx/gy are written for columns
// [1, width-2] only.
using SobelRowFn = void (*)(const std::uint8_t* above, const std::uint8_t* row,
                            const std::uint8_t* below, int width,
                            std::int32_t* gx, std::int32_t* gy);

// mag[i] = sqrt(gx[i]^2 + gy[i]^2)
using MagnitudeFn = void (*)(const std::int32_t* gx, const std::int32_t* gy,
                             std::size_t n, double* mag);

// For one edge pixel (x, y): bin[j] = floor((x cos_t[j] + y sin_t[j] + diag)
// / rho_res + 0.5) for every theta bin j.
using HoughRhoBinFn = void (*)(double x, double y, const double* cos_t,
                               const double* sin_t, std::size_t theta_bins,
                               double diag, double rho_res, std::int32_t* bin);

namespace scalar {
void luma(const std::uint8_t* r, const std::uint8_t* g, const std::uint8_t* b,
          std::size_t n, std::uint8_t* out);
void sobel_row(const std::uint8_t* above, const std::uint8_t* row,
               const std::uint8_t* below, int width, std::int32_t* gx,
               std::int32_t* gy);
void magnitude(const std::int32_t* gx, const std::int32_t* gy, std::size_t n,
               double* mag);
void hough_rho_bins(double x, double y, const double* cos_t,
                    const double* sin_t, std::size_t theta_bins, double diag,
                    double rho_res, std::int32_t* bin);
} // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define SCAFFOLD_HAVE_AVX2_KERNELS 1
namespace avx2 {
void luma(const std::uint8_t* r, const std::uint8_t* g, const std::uint8_t* b,
          std::size_t n, std::uint8_t* out);
void sobel_row(const std::uint8_t* above, const std::uint8_t* row,
               const std::uint8_t* below, int width, std::int32_t* gx,
               std::int32_t* gy);
void magnitude(const std::int32_t* gx, const std::int32_t* gy, std::size_t n,
               double* mag);
void hough_rho_bins(double x, double y, const double* cos_t,
                    const double* sin_t, std::size_t theta_bins, double diag,
                    double rho_res, std::int32_t* bin);
} // namespace avx2
#else
#define SCAFFOLD_HAVE_AVX2_KERNELS 0
#endif

struct Dispatch {
    LumaFn luma;
    SobelRowFn sobel_row;
    MagnitudeFn magnitude;
    HoughRhoBinFn hough_rho_bins;
    const char* backend; // "scalar" or "avx2"
};

/// Kernel table picked at first use (AVX2 when the CPU supports it).
const Dispatch& active();

/// Force a backend, for tests and benchmarking. Returns false if the
/// requested backend is unavailable on this machine.
bool force_backend(const char* name);

} // namespace scaffold::kernels
