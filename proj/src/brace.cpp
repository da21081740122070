#include "scaffold/brace.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <random>

#include "scaffold/imaging.hpp"

namespace scaffold {

double axial_distance(double a, double b) {
    double d = std::fmod(std::abs(a - b), M_PI);
    return std::min(d, M_PI - d);
}

std::pair<std::vector<PolarLine>, std::vector<PolarLine>>
filter_structural_lines(const std::vector<PolarLine>& lines,
                        const BraceParams& params) {
    std::vector<PolarLine> diagonals, structural;
    for (const PolarLine& line : lines) {
        const bool vertical = axial_distance(line.theta, 0.0) <= params.vert_tol;
        const bool horizontal =
            axial_distance(line.theta, M_PI / 2.0) <= params.horiz_tol;
        (vertical || horizontal ? structural : diagonals).push_back(line);
    }
    return {std::move(diagonals), std::move(structural)};
}

std::vector<AnglePoint> embed_angles(const std::vector<PolarLine>& lines) {
    std::vector<AnglePoint> points;
    points.reserve(lines.size());
    for (std::size_t i = 0; i < lines.size(); ++i) {
        double theta = std::fmod(lines[i].theta, M_PI);
        if (theta < 0) theta += M_PI;
        points.push_back({static_cast<int>(i), std::cos(2.0 * theta),
                          std::sin(2.0 * theta)});
    }
    return points;
}

namespace {

double sq_dist(double ax, double ay, double bx, double by) {
    const double dx = ax - bx, dy = ay - by;
    return dx * dx + dy * dy;
}

struct KmeansRun {
    std::vector<int> assign;
    double objective = 0.0;
};

KmeansRun lloyd(const std::vector<AnglePoint>& pts, double cx0, double cy0,
                double cx1, double cy1, const BraceParams& params) {
    const std::size_t n = pts.size();
    double cx[2] = {cx0, cx1}, cy[2] = {cy0, cy1};
    std::vector<int> assign(n, -1);
    double prev_objective = std::numeric_limits<double>::infinity();

    for (int iter = 0; iter < params.kmeans_max_iter; ++iter) {
        bool changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            const double d0 = sq_dist(pts[i].x, pts[i].y, cx[0], cy[0]);
            const double d1 = sq_dist(pts[i].x, pts[i].y, cx[1], cy[1]);
            const int a = d1 < d0 ? 1 : 0;
            if (a != assign[i]) {
                assign[i] = a;
                changed = true;
            }
        }
        // Empty-cluster repair: hand the point farthest from its centroid
        // to the empty cluster.
        for (int k = 0; k < 2; ++k) {
            if (std::count(assign.begin(), assign.end(), k) > 0) continue;
            std::size_t worst = 0;
            double worst_d = -1.0;
            for (std::size_t i = 0; i < n; ++i) {
                const int a = assign[i];
                const double d = sq_dist(pts[i].x, pts[i].y, cx[a], cy[a]);
                if (d > worst_d) {
                    worst_d = d;
                    worst = i;
                }
            }
            assign[worst] = k;
            changed = true;
        }
        if (!changed) break;

        double sx[2] = {0, 0}, sy[2] = {0, 0};
        int cnt[2] = {0, 0};
        for (std::size_t i = 0; i < n; ++i) {
            sx[assign[i]] += pts[i].x;
            sy[assign[i]] += pts[i].y;
            ++cnt[assign[i]];
        }
        double move = 0.0;
        for (int k = 0; k < 2; ++k) {
            if (cnt[k] == 0) continue;
            const double nx = sx[k] / cnt[k], ny = sy[k] / cnt[k];
            move = std::max(move, std::sqrt(sq_dist(nx, ny, cx[k], cy[k])));
            cx[k] = nx;
            cy[k] = ny;
        }
        double objective = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            objective += sq_dist(pts[i].x, pts[i].y, cx[assign[i]],
                                 cy[assign[i]]);
        assert(objective <= prev_objective + 1e-12);
        prev_objective = objective;
        if (move < params.kmeans_tol) break;
    }

    // Final objective against the final centroids.
    double sx[2] = {0, 0}, sy[2] = {0, 0};
    int cnt[2] = {0, 0};
    for (std::size_t i = 0; i < n; ++i) {
        sx[assign[i]] += pts[i].x;
        sy[assign[i]] += pts[i].y;
        ++cnt[assign[i]];
    }
    for (int k = 0; k < 2; ++k) {
        if (cnt[k] > 0) {
            cx[k] = sx[k] / cnt[k];
            cy[k] = sy[k] / cnt[k];
        }
    }
    KmeansRun run;
    run.assign = std::move(assign);
    run.objective = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        run.objective +=
            sq_dist(pts[i].x, pts[i].y, cx[run.assign[i]], cy[run.assign[i]]);
    return run;
}

} // namespace

LinePartition kmeans_two(const std::vector<PolarLine>& lines,
                         const BraceParams& params, std::uint64_t seed) {
    const std::vector<AnglePoint> pts = embed_angles(lines);
    const std::size_t n = pts.size();
    bool distinct = false;
    for (std::size_t i = 1; i < n && !distinct; ++i)
        distinct = sq_dist(pts[i].x, pts[i].y, pts[0].x, pts[0].y) > 1e-18;
    if (n < 2 || !distinct)
        throw InsufficientLines("k-means needs two distinct orientations");

    // Restart 0: deterministic farthest pair, ties by lowest index pair.
    std::size_t best_i = 0, best_j = 1;
    double best_d = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = sq_dist(pts[i].x, pts[i].y, pts[j].x, pts[j].y);
            if (d > best_d + 1e-15) {
                best_d = d;
                best_i = i;
                best_j = j;
            }
        }
    }

    std::mt19937_64 rng(seed);
    KmeansRun best;
    best.objective = std::numeric_limits<double>::infinity();
    int best_restart = -1;
    for (int r = 0; r < std::max(1, params.kmeans_restarts); ++r) {
        std::size_t i = best_i, j = best_j;
        if (r > 0) {
            std::uniform_int_distribution<std::size_t> pick(0, n - 1);
            i = pick(rng);
            j = pick(rng);
            for (int tries = 0;
                 tries < 64 &&
                 sq_dist(pts[i].x, pts[i].y, pts[j].x, pts[j].y) < 1e-18;
                 ++tries) {
                j = pick(rng);
            }
            if (sq_dist(pts[i].x, pts[i].y, pts[j].x, pts[j].y) < 1e-18)
                continue;
        }
        KmeansRun run =
            lloyd(pts, pts[i].x, pts[i].y, pts[j].x, pts[j].y, params);
        if (best_restart < 0 || run.objective < best.objective) {
            best = std::move(run);
            best_restart = r;
        }
    }

    LinePartition part;
    for (std::size_t i = 0; i < n; ++i) {
        if (best.assign[i] == 0) {
            part.group_a.push_back(lines[i]);
            part.indices_a.push_back(static_cast<int>(i));
        } else {
            part.group_b.push_back(lines[i]);
            part.indices_b.push_back(static_cast<int>(i));
        }
    }
    part.objective = best.objective;
    return part;
}

IntersectionPoint intersect(const PolarLine& a, const PolarLine& b,
                            const BraceParams& params) {
    const double det = std::sin(b.theta - a.theta);
    if (std::abs(det) < params.parallel_eps)
        throw NearParallel("lines are near-parallel");
    IntersectionPoint p;
    p.x = (a.rho * std::sin(b.theta) - b.rho * std::sin(a.theta)) / det;
    p.y = (b.rho * std::cos(a.theta) - a.rho * std::cos(b.theta)) / det;
    return p;
}

std::vector<IntersectionPoint> cross_pair_intersections(
    const LinePartition& part, const BBox& bounds, const BraceParams& params) {
    std::vector<IntersectionPoint> points;
    for (std::size_t i = 0; i < part.group_a.size(); ++i) {
        for (std::size_t j = 0; j < part.group_b.size(); ++j) {
            IntersectionPoint p;
            try {
                p = intersect(part.group_a[i], part.group_b[j], params);
            } catch (const NearParallel&) {
                continue;
            }
            if (!bounds.contains(p.x, p.y)) continue;
            p.parent_a = static_cast<int>(i);
            p.parent_b = static_cast<int>(j);
            points.push_back(p);
        }
    }
    return points;
}

UnitVerdict judge_unit(const std::vector<IntersectionPoint>& points,
                       const BBox& bounds, const BraceParams& params) {
    UnitVerdict verdict;
    verdict.intersections = points;
    const double cw = params.central_frac * bounds.w;
    const double ch = params.central_frac * bounds.h;
    const double wx = bounds.x + (bounds.w - cw) / 2.0;
    const double wy = bounds.y + (bounds.h - ch) / 2.0;
    for (const auto& p : points) {
        if (p.x >= wx && p.x <= wx + cw && p.y >= wy && p.y <= wy + ch)
            ++verdict.central_hits;
    }
    verdict.brace_present = verdict.central_hits >= 1;
    return verdict;
}

UnitDetection detect_unit_full(const GrayImage& img, const UnitRegion& region,
                               const DetectParams& params,
                               std::uint64_t seed) {
    UnitDetection det;
    auto [crop, offset] = crop_unit(img, region);
    det.offset_x = offset.first;
    det.offset_y = offset.second;
    det.crop_w = crop.width;
    det.crop_h = crop.height;
    det.verdict.unit_id = region.id;

    if (crop.width < 3 || crop.height < 3) return det; // too small: no brace

    // Rasterize the region polygon in crop-local coordinates.
    UnitRegion local = region;
    for (std::size_t i = 0; i < local.polygon.size(); i += 2) {
        local.polygon[i] -= offset.first;
        local.polygon[i + 1] -= offset.second;
    }
    UnitMask mask = rasterize_polygon(local, crop.width, crop.height);

    EdgeMap edges = apply_mask(
        canny_edges(crop, params.canny_low, params.canny_high), mask);

    HoughAccumulator acc = hough_accumulate(edges, params.hough);
    det.lines = find_peaks(acc, params.hough,
                           params.hough.threshold_for_height(crop.height));

    auto [diagonals, structural] =
        filter_structural_lines(det.lines, params.brace);
    det.diagonals = diagonals;

    const BBox bounds{0.0, 0.0, static_cast<double>(crop.width),
                      static_cast<double>(crop.height)};
    if (diagonals.size() >= 2) {
        LinePartition part;
        try {
            part = kmeans_two(diagonals, params.brace, seed);
        } catch (const InsufficientLines&) {
            return det; // all diagonals coincide: no crossing
        }
        auto points = cross_pair_intersections(part, bounds, params.brace);
        UnitVerdict verdict = judge_unit(points, bounds, params.brace);
        verdict.unit_id = region.id;
        verdict.n_lines_a = static_cast<int>(part.group_a.size());
        verdict.n_lines_b = static_cast<int>(part.group_b.size());
        for (auto& p : verdict.intersections) {
            p.x += offset.first;
            p.y += offset.second;
        }
        det.verdict = verdict;
    }
    return det;
}

UnitVerdict detect_unit(const GrayImage& img, const UnitRegion& region,
                        const DetectParams& params, std::uint64_t seed) {
    return detect_unit_full(img, region, params, seed).verdict;
}

} // namespace scaffold
