#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "snowroad/filters.hpp"
#include "snowroad/segmentation.hpp"

namespace snowroad {

struct SceneSpec;

/// Every tunable of the detection pipeline.
struct PipelineConfig {
    bool rain_snow = true;
    RainSnowParams rain_snow_params;
    bool shadow = true;
    ShadowParams shadow_params;
    bool light_filter = false;
    LightFilterParams light_params;
    bool gaussian = true;
    double gaussian_sigma = 1.5;
    bool equalize = true;
    SnowThresholds snow;
    StructuringElement se;
    double min_coverage = 0.02;
    double min_base_width_frac = 0.10;

    /// Throws ConfigError when any field is out of range.
    void validate() const;

    bool operator==(const PipelineConfig&) const = default;
};

using KeyValues = std::vector<std::pair<std::string, std::string>>;

// Text format: one `key = value` per line, `#` starts a comment, blank lines
// are ignored. Unknown keys, duplicate keys and malformed values are errors
// (ConfigError, with the line number).

PipelineConfig parse_pipeline_config(std::string_view text);
PipelineConfig load_pipeline_config(const std::filesystem::path& path);
void set_option(PipelineConfig& cfg, std::string_view key, std::string_view value);
KeyValues to_key_values(const PipelineConfig& cfg);
std::string serialize(const PipelineConfig& cfg);

SceneSpec parse_scene_spec(std::string_view text);
SceneSpec load_scene_spec(const std::filesystem::path& path);
void set_option(SceneSpec& spec, std::string_view key, std::string_view value);
KeyValues to_key_values(const SceneSpec& spec);
std::string serialize(const SceneSpec& spec);

}  // namespace snowroad
