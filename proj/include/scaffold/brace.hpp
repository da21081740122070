#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "scaffold/coco.hpp"
#include "scaffold/hough.hpp"
#include "scaffold/image.hpp"

namespace scaffold {

/// A line's orientation on the doubled-angle unit circle.
struct AnglePoint {
    int line_index = 0;
    double x = 0.0;
    double y = 0.0;
};

struct LinePartition {
    std::vector<PolarLine> group_a;
    std::vector<PolarLine> group_b;
    std::vector<int> indices_a; // positions in the input list
    std::vector<int> indices_b;
    double objective = 0.0; // within-cluster sum of squared distances
};

struct IntersectionPoint {
    double x = 0.0;
    double y = 0.0;
    int parent_a = -1;
    int parent_b = -1;
};

struct UnitVerdict {
    int unit_id = 0;
    bool brace_present = false;
    std::vector<IntersectionPoint> intersections; // image-global coordinates
    int n_lines_a = 0;
    int n_lines_b = 0;
    int central_hits = 0;
};

struct BraceParams {
    double vert_tol = 15.0 * M_PI / 180.0;  // around theta = 0 (uprights)
    double horiz_tol = 10.0 * M_PI / 180.0; // around theta = pi/2 (ledgers)
    double central_frac = 0.6;
    int kmeans_restarts = 10;
    int kmeans_max_iter = 100;
    double kmeans_tol = 1e-6;
    double parallel_eps = 1e-3;
};

struct BBox {
    double x = 0, y = 0, w = 0, h = 0;
    bool contains(double px, double py) const {
        return px >= x && px <= x + w && py >= y && py <= y + h;
    }
};

/// Distance between two orientations modulo pi.
double axial_distance(double a, double b);

/// Split lines into (diagonals, structural): near-vertical and
/// near-horizontal lines are structural, input order preserved.
std::pair<std::vector<PolarLine>, std::vector<PolarLine>>
filter_structural_lines(const std::vector<PolarLine>& lines,
                        const BraceParams& params);

/// (cos 2*theta, sin 2*theta) per line, so theta and theta+pi coincide.
std::vector<AnglePoint> embed_angles(const std::vector<PolarLine>& lines);

/// Lloyd's k=2 on the embedded points: deterministic farthest-pair init for
/// restart 0, seeded random inits after, best objective wins.
LinePartition kmeans_two(const std::vector<PolarLine>& lines,
                         const BraceParams& params, std::uint64_t seed);

/// Solve the 2x2 polar-line system; throws NearParallel when
/// |sin(theta_b - theta_a)| < parallel_eps.
IntersectionPoint intersect(const PolarLine& a, const PolarLine& b,
                            const BraceParams& params);

/// All cross-group pairs, near-parallel pairs skipped, points outside
/// `bounds` dropped; ordered by (parent_a, parent_b).
std::vector<IntersectionPoint> cross_pair_intersections(
    const LinePartition& part, const BBox& bounds, const BraceParams& params);

/// Brace present iff at least one intersection falls in the centered
/// central_frac window of the bbox.
UnitVerdict judge_unit(const std::vector<IntersectionPoint>& points,
                       const BBox& bounds, const BraceParams& params);

struct DetectParams {
    double canny_low = 50.0;
    double canny_high = 150.0;
    HoughParams hough;
    BraceParams brace;
};

/// Full per-unit pipeline: crop, mask, Canny, Hough, structural filter,
/// k-means, intersections, verdict. Intersections come back in image-global
/// coordinates. Fewer than 2 diagonal lines is a negative verdict.
UnitVerdict detect_unit(const GrayImage& img, const UnitRegion& region,
                        const DetectParams& params, std::uint64_t seed);

/// detect_unit plus the intermediate lines, for overlay rendering.
struct UnitDetection {
    UnitVerdict verdict;
    std::vector<PolarLine> lines;     // all peaks, crop-local
    std::vector<PolarLine> diagonals; // after structural filter
    int offset_x = 0, offset_y = 0;
    int crop_w = 0, crop_h = 0;
};
UnitDetection detect_unit_full(const GrayImage& img, const UnitRegion& region,
                               const DetectParams& params, std::uint64_t seed);

} // namespace scaffold
