#pragma once

#include <string>
#include <vector>

#include "scaffold/brace.hpp"
#include "scaffold/config.hpp"
#include "scaffold/monitor.hpp"
#include "scaffold/synth.hpp"

namespace scaffold {

struct FrameDetection {
    std::string file;
    double elapsed_ms = 0.0;
    std::vector<UnitDetection> units; // region-id order
};

/// Detect every region of `annotations` that belongs to the image named
/// `file_name` (results sorted by region id).
FrameDetection detect_frame(const GrayImage& img, const std::string& file_name,
                            const AnnotationSet& annotations,
                            const RunConfig& config, bool with_timing);

/// Report JSON for a batch of frames, schema-stable for golden comparisons.
std::string build_report(const std::vector<FrameDetection>& frames,
                         const RunConfig& config);

struct EvalCounts {
    int tp = 0, fp = 0, fn = 0, tn = 0;
    double precision() const {
        return tp + fp > 0 ? static_cast<double>(tp) / (tp + fp) : -1.0;
    }
    double recall() const {
        return tp + fn > 0 ? static_cast<double>(tp) / (tp + fn) : -1.0;
    }
    double accuracy() const {
        const int n = tp + fp + fn + tn;
        return n > 0 ? static_cast<double>(tp + tn) / n : -1.0;
    }
};

/// Run detection over a generated corpus directory (coco.json + truth.json)
/// and tally verdicts against the truth.
EvalCounts evaluate_corpus(const std::string& corpus_dir,
                           const RunConfig& config);

/// Overlay: detected lines, intersection discs (radius 4), unit bboxes
/// (green when complete, red when not).
RgbImage draw_overlay(const GrayImage& img, const FrameDetection& detection);

FrameSnapshot snapshot_from_detection(const FrameDetection& detection,
                                      const std::string& frame_id,
                                      std::int64_t timestamp);

} // namespace scaffold
