#include "scaffold/hough.hpp"

#include <algorithm>
#include <cmath>

#include "scaffold/kernels.hpp"

namespace scaffold {

int HoughParams::threshold_for_height(int crop_height) const {
    if (threshold_abs > 0) return threshold_abs;
    return std::max(1, static_cast<int>(std::lround(threshold_frac *
                                                    crop_height)));
}

int HoughAccumulator::rho_bin_of(double rho) const {
    return static_cast<int>(std::floor((rho + diag) / rho_res + 0.5));
}

std::uint64_t HoughAccumulator::total_votes() const {
    std::uint64_t sum = 0;
    for (auto v : votes) sum += v;
    return sum;
}

HoughAccumulator hough_accumulate(const EdgeMap& edges,
                                  const HoughParams& params) {
    HoughAccumulator acc;
    acc.rho_res = params.rho_res;
    acc.theta_res = params.theta_res;
    acc.theta_bins =
        static_cast<int>(std::lround(M_PI / params.theta_res));
    acc.diag = std::hypot(edges.width - 1, edges.height - 1);
    acc.rho_bins =
        static_cast<int>(std::ceil(2.0 * acc.diag / params.rho_res)) + 1;
    acc.votes.assign(static_cast<std::size_t>(acc.rho_bins) * acc.theta_bins,
                     0);

    std::vector<double> cos_t(acc.theta_bins), sin_t(acc.theta_bins);
    for (int j = 0; j < acc.theta_bins; ++j) {
        cos_t[j] = std::cos(j * acc.theta_res);
        sin_t[j] = std::sin(j * acc.theta_res);
    }

    const auto& k = kernels::active();
    std::vector<std::int32_t> bin(acc.theta_bins);
    for (int y = 0; y < edges.height; ++y) {
        for (int x = 0; x < edges.width; ++x) {
            if (!edges.is_edge(x, y)) continue;
            k.hough_rho_bins(x, y, cos_t.data(), sin_t.data(),
                             static_cast<std::size_t>(acc.theta_bins),
                             acc.diag, acc.rho_res, bin.data());
            for (int j = 0; j < acc.theta_bins; ++j) {
                ++acc.votes[static_cast<std::size_t>(bin[j]) * acc.theta_bins +
                            j];
            }
        }
    }
    return acc;
}

std::vector<PolarLine> find_peaks(const HoughAccumulator& acc,
                                  const HoughParams& params, int threshold) {
    struct Cell {
        std::uint32_t votes;
        int rho_bin;
        int theta_bin;
    };
    std::vector<Cell> candidates;
    for (int r = 0; r < acc.rho_bins; ++r) {
        for (int t = 0; t < acc.theta_bins; ++t) {
            const std::uint32_t v = acc.at(r, t);
            if (v >= static_cast<std::uint32_t>(threshold))
                candidates.push_back({v, r, t});
        }
    }
    std::sort(candidates.begin(), candidates.end(),
              [](const Cell& a, const Cell& b) {
                  if (a.votes != b.votes) return a.votes > b.votes;
                  if (a.theta_bin != b.theta_bin)
                      return a.theta_bin < b.theta_bin;
                  return a.rho_bin < b.rho_bin;
              });

    std::vector<std::uint8_t> suppressed(
        static_cast<std::size_t>(acc.rho_bins) * acc.theta_bins, 0);
    auto is_suppressed = [&](int r, int t) {
        return suppressed[static_cast<std::size_t>(r) * acc.theta_bins + t] !=
               0;
    };
    auto mark = [&](int r, int t) {
        suppressed[static_cast<std::size_t>(r) * acc.theta_bins + t] = 1;
    };

    std::vector<PolarLine> peaks;
    for (const Cell& c : candidates) {
        if (static_cast<int>(peaks.size()) >= params.max_lines) break;
        if (is_suppressed(c.rho_bin, c.theta_bin)) continue;
        peaks.push_back(
            {acc.rho_center(c.rho_bin), acc.theta_center(c.theta_bin)});

        // Suppress the NMS window. Theta wraps modulo theta_bins; crossing
        // the 0/pi seam flips the sign of rho, so the window re-centers on
        // the bin of -rho there.
        for (int dt = -params.nms_theta; dt <= params.nms_theta; ++dt) {
            int t = c.theta_bin + dt;
            bool wrapped = false;
            if (t < 0) {
                t += acc.theta_bins;
                wrapped = true;
            } else if (t >= acc.theta_bins) {
                t -= acc.theta_bins;
                wrapped = true;
            }
            const int center =
                wrapped ? acc.rho_bin_of(-acc.rho_center(c.rho_bin))
                        : c.rho_bin;
            for (int dr = -params.nms_rho; dr <= params.nms_rho; ++dr) {
                const int r = center + dr;
                if (r >= 0 && r < acc.rho_bins) mark(r, t);
            }
        }
    }
    return peaks;
}

std::pair<std::pair<double, double>, std::pair<double, double>>
line_to_segment(const PolarLine& line, double half_extent) {
    const double c = std::cos(line.theta);
    const double s = std::sin(line.theta);
    const double x0 = line.rho * c;
    const double y0 = line.rho * s;
    return {{x0 - half_extent * s, y0 + half_extent * c},
            {x0 + half_extent * s, y0 - half_extent * c}};
}

} // namespace scaffold
