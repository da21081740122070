#pragma once

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "scaffold/image.hpp"

namespace scaffold {

/// Line in polar normal form: { (x, y) : x cos(theta) + y sin(theta) = rho },
/// theta in [0, pi), rho signed.
struct PolarLine {
    double rho = 0.0;
    double theta = 0.0;
};

struct HoughParams {
    double rho_res = 1.0;                     // pixels per rho bin
    double theta_res = M_PI / 180.0;          // radians per theta bin
    double threshold_frac = 0.3;              // votes >= frac * crop height
    int threshold_abs = 0;                    // >0 overrides the fraction
    int nms_rho = 2;                          // suppression half-window, bins
    int nms_theta = 2;
    int max_lines = 16;

    /// Vote floor for a crop of the given height.
    int threshold_for_height(int crop_height) const;
};

/// Vote histogram over (rho bin, theta bin). Rho bins span [-diag, +diag];
/// theta bin j is centered at j * theta_res.
struct HoughAccumulator {
    double rho_res = 1.0;
    double theta_res = M_PI / 180.0;
    int rho_bins = 0;
    int theta_bins = 0;
    double diag = 0.0;
    std::vector<std::uint32_t> votes; // rho_bins x theta_bins, row-major

    std::uint32_t at(int rho_bin, int theta_bin) const {
        return votes[static_cast<std::size_t>(rho_bin) * theta_bins +
                     theta_bin];
    }
    double rho_center(int rho_bin) const { return rho_bin * rho_res - diag; }
    double theta_center(int theta_bin) const { return theta_bin * theta_res; }
    int rho_bin_of(double rho) const;
    std::uint64_t total_votes() const;
};

/// One vote per (edge pixel, theta bin): rho = x cos(theta_j) + y sin(theta_j).
HoughAccumulator hough_accumulate(const EdgeMap& edges,
                                  const HoughParams& params);

/// Greedy peak extraction with NMS. `threshold` is the absolute vote floor
/// (callers derive it via threshold_for_height or threshold_abs).
std::vector<PolarLine> find_peaks(const HoughAccumulator& acc,
                                  const HoughParams& params, int threshold);

/// Segment of half-length `half_extent` centered on the foot of the
/// perpendicular from the origin.
std::pair<std::pair<double, double>, std::pair<double, double>>
line_to_segment(const PolarLine& line, double half_extent = 1000.0);

} // namespace scaffold
