#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "snowroad/image.hpp"
#include "snowroad/vanishing.hpp"

namespace snowroad {

/// Per-pixel Gaussian colour: mean and per-channel standard deviation.
struct ColorModel {
    std::array<double, 3> mean{};
    std::array<double, 3> stddev{};

    bool operator==(const ColorModel&) const = default;
};

/// Everything that determines a synthetic snowy-forest scene.
struct SceneSpec {
    int width = 320;
    int height = 240;
    Triangle road{160.0, 96.0, 40, 280, 239};
    /// 0 is straight; otherwise the centre line bends by
    /// curvature * (base_y - y)^2 / base_y pixels.
    double curvature = 0.0;
    ColorModel snow{{228.0, 232.0, 240.0}, {5.0, 5.0, 5.0}};
    ColorModel foliage{{55.0, 85.0, 50.0}, {12.0, 12.0, 12.0}};
    int speck_count = 40;
    int speck_size = 2;
    /// Blend weight of falling-snow streaks.
    double streak_alpha = 0.3;
    int streak_count = 150;
    int streak_length = 14;
    /// Corpus-only: uniform jitter applied to each scene's road geometry.
    double apex_jitter_x = 24.0;
    double apex_jitter_y = 12.0;
    double base_jitter = 20.0;
    std::uint64_t seed = 1;

    /// Throws InvalidSpec. The snow mean must classify as snow under the
    /// default thresholds and the road must sit on the bottom row.
    void validate() const;

    bool operator==(const SceneSpec&) const = default;
};

struct Scene {
    RgbImage image;
    BinaryMask truth;
};

struct CorpusEntry {
    std::string id;
    SceneSpec spec;
    Scene scene;
};

/// Deterministic in the spec, seed included. Uses mt19937_64 with in-house
/// uniform/normal transforms so output does not depend on the standard
/// library's distribution implementations.
Scene generate_scene(const SceneSpec& spec);

/// Spec for corpus member `index`: seed + index, with road geometry jittered
/// from a stream derived from that seed.
SceneSpec corpus_scene_spec(const SceneSpec& base, std::uint64_t seed, int index);

std::string corpus_id(int index);

std::vector<CorpusEntry> generate_corpus(const SceneSpec& base, int n, std::uint64_t seed);

/// Writes <dir>/images/<id>.ppm, <dir>/truth/<id>.pgm and <dir>/corpus.json.
void write_corpus(const std::vector<CorpusEntry>& corpus, const SceneSpec& base, std::uint64_t seed,
                  const std::filesystem::path& dir);

/// Image ids of a corpus directory, from corpus.json when present, otherwise
/// the sorted stems of images/*.ppm.
std::vector<std::string> read_corpus_ids(const std::filesystem::path& dir);

}  // namespace snowroad
