#include "scaffold/kernels.hpp"

#include <cstring>

namespace scaffold::kernels {

namespace {

constexpr Dispatch kScalar{scalar::luma, scalar::sobel_row, scalar::magnitude,
                           scalar::hough_rho_bins, "scalar"};

#if SCAFFOLD_HAVE_AVX2_KERNELS
constexpr Dispatch kAvx2{avx2::luma, avx2::sobel_row, avx2::magnitude,
                         avx2::hough_rho_bins, "avx2"};

bool cpu_has_avx2() { return __builtin_cpu_supports("avx2"); }
#endif

const Dispatch& detect() {
#if SCAFFOLD_HAVE_AVX2_KERNELS
    if (cpu_has_avx2()) return kAvx2;
#endif
    return kScalar;
}

const Dispatch* g_active = nullptr;

} // namespace

const Dispatch& active() {
    if (!g_active) g_active = &detect();
    return *g_active;
}

bool force_backend(const char* name) {
    if (std::strcmp(name, "scalar") == 0) {
        g_active = &kScalar;
        return true;
    }
#if SCAFFOLD_HAVE_AVX2_KERNELS
    if (std::strcmp(name, "avx2") == 0 && cpu_has_avx2()) {
        g_active = &kAvx2;
        return true;
    }
#endif
    return false;
}

} // namespace scaffold::kernels
