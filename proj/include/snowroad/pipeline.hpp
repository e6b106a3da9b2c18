#pragma once

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "snowroad/config.hpp"
#include "snowroad/evaluation.hpp"
#include "snowroad/vanishing.hpp"

namespace snowroad {

struct StageArtifact {
    std::string name;
    std::variant<RgbImage, HsvImage, BinaryMask> image;
};

struct StageTiming {
    std::string stage;
    double ms = 0.0;
};

struct DetectionResult {
    RoadRegion road;
    VanishingPoint vanishing_point;
    /// Filled only when stages are kept: hsv, equalized, blurred, snow-mask,
    /// opened, triangle-overlay.
    std::vector<StageArtifact> stage_artifacts;
    std::vector<StageTiming> timings;
    std::vector<std::string> warnings;
};

/// rain/snow removal -> shadow removal -> light filter (all RGB, each
/// optional) -> HSV -> V equalization -> blur -> snow classification ->
/// opening/closing -> triangle fit -> road extraction.
///
/// Throws NoRoadDetected / DegenerateBase from the fit, ConfigError for an
/// invalid config.
DetectionResult run_pipeline(const RgbImage& img, const PipelineConfig& cfg, bool keep_stages = false);

/// Road tinted green at 50%, triangle edges red, red ring of radius 4 at the
/// vanishing point.
RgbImage render_overlay(const RgbImage& img, const RoadRegion& road);

/// {vanishing_point, triangle, road_pixel_count, timings_ms, config, warnings}
std::string result_to_json(const DetectionResult& result, const PipelineConfig& cfg);

/// Writes overlay.ppm, result.json and, when kept, stage_<name>.ppm/.pgm.
void write_detection(const DetectionResult& result, const RgbImage& input, const PipelineConfig& cfg,
                     const std::filesystem::path& out_dir);

/// Runs the pipeline over every image of a corpus directory and scores it
/// against truth/<id>.pgm. Images where no road is found count as an empty
/// prediction flagged "no_road_detected". Rows are ordered by id.
MetricsReport evaluate_corpus_dir(const std::filesystem::path& dir, const PipelineConfig& cfg, int threads = 0);

}  // namespace snowroad
