// AVX2 kernel variants. Must match the scalar reference bit-for-bit, so the
// arithmetic mirrors the scalar expression order exactly and no FMA
// contraction is used (mul then add, both correctly rounded, so lane results
// equal the scalar doubles).

#include "scaffold/kernels.hpp"

#if SCAFFOLD_HAVE_AVX2_KERNELS

#include <immintrin.h>

#include <cmath>

namespace scaffold::kernels::avx2 {

__attribute__((target("avx2"))) void luma(const std::uint8_t* r,
                                          const std::uint8_t* g,
                                          const std::uint8_t* b, std::size_t n,
                                          std::uint8_t* out) {
    const __m256d wr = _mm256_set1_pd(0.299);
    const __m256d wg = _mm256_set1_pd(0.587);
    const __m256d wb = _mm256_set1_pd(0.114);
    const __m256d half = _mm256_set1_pd(0.5);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d rv = _mm256_set_pd(r[i + 3], r[i + 2], r[i + 1], r[i]);
        __m256d gv = _mm256_set_pd(g[i + 3], g[i + 2], g[i + 1], g[i]);
        __m256d bv = _mm256_set_pd(b[i + 3], b[i + 2], b[i + 1], b[i]);
        __m256d y = _mm256_add_pd(
            _mm256_add_pd(_mm256_mul_pd(wr, rv), _mm256_mul_pd(wg, gv)),
            _mm256_mul_pd(wb, bv));
        y = _mm256_floor_pd(_mm256_add_pd(y, half));
        __m128i yi = _mm256_cvttpd_epi32(y);
        alignas(16) std::int32_t tmp[4];
        _mm_store_si128(reinterpret_cast<__m128i*>(tmp), yi);
        out[i] = static_cast<std::uint8_t>(tmp[0]);
        out[i + 1] = static_cast<std::uint8_t>(tmp[1]);
        out[i + 2] = static_cast<std::uint8_t>(tmp[2]);
        out[i + 3] = static_cast<std::uint8_t>(tmp[3]);
    }
    for (; i < n; ++i) {
        double y = 0.299 * r[i] + 0.587 * g[i] + 0.114 * b[i];
        out[i] = static_cast<std::uint8_t>(std::floor(y + 0.5));
    }
}

namespace {

__attribute__((target("avx2"))) inline __m256i load8_epi32(
    const std::uint8_t* p) {
    __m128i v = _mm_loadl_epi64(reinterpret_cast<const __m128i*>(p));
    return _mm256_cvtepu8_epi32(v);
}

} // namespace

__attribute__((target("avx2"))) void sobel_row(const std::uint8_t* above,
                                               const std::uint8_t* row,
                                               const std::uint8_t* below,
                                               int width, std::int32_t* gx,
                                               std::int32_t* gy) {
    int x = 1;
    for (; x + 8 <= width - 1; x += 8) {
        __m256i a0 = load8_epi32(above + x - 1);
        __m256i a1 = load8_epi32(above + x);
        __m256i a2 = load8_epi32(above + x + 1);
        __m256i r0 = load8_epi32(row + x - 1);
        __m256i r2 = load8_epi32(row + x + 1);
        __m256i b0 = load8_epi32(below + x - 1);
        __m256i b1 = load8_epi32(below + x);
        __m256i b2 = load8_epi32(below + x + 1);
        __m256i right = _mm256_add_epi32(
            _mm256_add_epi32(a2, _mm256_slli_epi32(r2, 1)), b2);
        __m256i left = _mm256_add_epi32(
            _mm256_add_epi32(a0, _mm256_slli_epi32(r0, 1)), b0);
        __m256i bot = _mm256_add_epi32(
            _mm256_add_epi32(b0, _mm256_slli_epi32(b1, 1)), b2);
        __m256i top = _mm256_add_epi32(
            _mm256_add_epi32(a0, _mm256_slli_epi32(a1, 1)), a2);
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(gx + x),
                            _mm256_sub_epi32(right, left));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(gy + x),
                            _mm256_sub_epi32(bot, top));
    }
    for (; x < width - 1; ++x) {
        int a0 = above[x - 1], a1 = above[x], a2 = above[x + 1];
        int r0 = row[x - 1], r2 = row[x + 1];
        int c0 = below[x - 1], c1 = below[x], c2 = below[x + 1];
        gx[x] = (a2 + 2 * r2 + c2) - (a0 + 2 * r0 + c0);
        gy[x] = (c0 + 2 * c1 + c2) - (a0 + 2 * a1 + a2);
    }
}

__attribute__((target("avx2"))) void magnitude(const std::int32_t* gx,
                                               const std::int32_t* gy,
                                               std::size_t n, double* mag) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m128i xi = _mm_loadu_si128(reinterpret_cast<const __m128i*>(gx + i));
        __m128i yi = _mm_loadu_si128(reinterpret_cast<const __m128i*>(gy + i));
        __m256d dx = _mm256_cvtepi32_pd(xi);
        __m256d dy = _mm256_cvtepi32_pd(yi);
        __m256d m = _mm256_sqrt_pd(
            _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy)));
        _mm256_storeu_pd(mag + i, m);
    }
    for (; i < n; ++i) {
        double dx = gx[i];
        double dy = gy[i];
        mag[i] = std::sqrt(dx * dx + dy * dy);
    }
}

__attribute__((target("avx2"))) void hough_rho_bins(
    double x, double y, const double* cos_t, const double* sin_t,
    std::size_t theta_bins, double diag, double rho_res, std::int32_t* bin) {
    const __m256d xv = _mm256_set1_pd(x);
    const __m256d yv = _mm256_set1_pd(y);
    const __m256d dv = _mm256_set1_pd(diag);
    const __m256d rres = _mm256_set1_pd(rho_res);
    const __m256d half = _mm256_set1_pd(0.5);
    std::size_t j = 0;
    for (; j + 4 <= theta_bins; j += 4) {
        __m256d c = _mm256_loadu_pd(cos_t + j);
        __m256d s = _mm256_loadu_pd(sin_t + j);
        __m256d rho =
            _mm256_add_pd(_mm256_mul_pd(xv, c), _mm256_mul_pd(yv, s));
        __m256d v = _mm256_add_pd(
            _mm256_div_pd(_mm256_add_pd(rho, dv), rres), half);
        v = _mm256_floor_pd(v);
        __m128i idx = _mm256_cvttpd_epi32(v);
        _mm_storeu_si128(reinterpret_cast<__m128i*>(bin + j), idx);
    }
    for (; j < theta_bins; ++j) {
        double rho = x * cos_t[j] + y * sin_t[j];
        bin[j] = static_cast<std::int32_t>(
            std::floor((rho + diag) / rho_res + 0.5));
    }
}

} // namespace scaffold::kernels::avx2

#endif // SCAFFOLD_HAVE_AVX2_KERNELS
