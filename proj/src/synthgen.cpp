#include "snowroad/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include "json.hpp"
#include "snowroad/colorspace.hpp"
#include "snowroad/config.hpp"
#include "snowroad/filters.hpp"
#include "snowroad/image_io.hpp"
#include "snowroad/segmentation.hpp"

namespace snowroad {
namespace {

namespace fs = std::filesystem;

// Keeps specks this far (Chebyshev) from the road and from each other so
// each one stays an isolated component.
constexpr int kSpeckGap = 6;
constexpr std::uint64_t kJitterStream = 0x9E3779B97F4A7C15ULL;

class SceneRng {
public:
    explicit SceneRng(std::uint64_t seed) : engine_(seed) {}

    /// [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// [lo, hi] inclusive.
    int uniform_int(int lo, int hi) {
        const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<int>(engine_() % span);
    }

    /// Box-Muller, one value per call.
    double normal() {
        const double u1 = 1.0 - uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

private:
    std::mt19937_64 engine_;
};

void paint(RgbImage& img, int x, int y, const ColorModel& color, SceneRng& rng) {
    for (int c = 0; c < 3; ++c) {
        img.at(x, y, c) = quantize(color.mean[c] + color.stddev[c] * rng.normal());
    }
}

BinaryMask road_mask(const SceneSpec& spec) {
    const auto& t = spec.road;
    if (spec.curvature == 0.0) return rasterize_triangle(t, spec.width, spec.height);

    BinaryMask m(spec.width, spec.height);
    const double base_center = 0.5 * (t.base_left + t.base_right);
    const double base_half = 0.5 * (t.base_right - t.base_left);
    for (int y = static_cast<int>(std::ceil(t.apex_y)); y <= t.base_y; ++y) {
        const double frac = (y - t.apex_y) / (t.base_y - t.apex_y);
        const double bend = spec.curvature * (t.base_y - y) * (t.base_y - y) / t.base_y;
        const double center = t.apex_x + frac * (base_center - t.apex_x) + bend;
        const double half = frac * base_half;
        for (int x = 0; x < spec.width; ++x) {
            if (std::abs(x - center) <= half) m.set(x, y, true);
        }
    }
    return m;
}

void place_specks(const SceneSpec& spec, const BinaryMask& road, RgbImage& img, SceneRng& rng) {
    if (spec.speck_count == 0) return;
    // Road grown by the gap; placed specks are added as they land.
    const int gap_side = 2 * kSpeckGap + 1;
    BinaryMask blocked = dilate(road, StructuringElement{gap_side, gap_side});
    const int size = spec.speck_size;
    for (int i = 0; i < spec.speck_count; ++i) {
        for (int attempt = 0; attempt < 64; ++attempt) {
            const int x0 = rng.uniform_int(0, spec.width - size);
            const int y0 = rng.uniform_int(0, spec.height - size);
            bool clear = true;
            for (int y = y0; y < y0 + size && clear; ++y) {
                for (int x = x0; x < x0 + size; ++x) {
                    if (blocked.get(x, y)) {
                        clear = false;
                        break;
                    }
                }
            }
            if (!clear) continue;
            for (int y = y0; y < y0 + size; ++y) {
                for (int x = x0; x < x0 + size; ++x) paint(img, x, y, spec.snow, rng);
            }
            for (int y = std::max(0, y0 - kSpeckGap); y < std::min(spec.height, y0 + size + kSpeckGap); ++y) {
                for (int x = std::max(0, x0 - kSpeckGap); x < std::min(spec.width, x0 + size + kSpeckGap); ++x) {
                    blocked.set(x, y, true);
                }
            }
            break;
        }
    }
}

RgbImage add_streaks(const SceneSpec& spec, const RgbImage& img, SceneRng& rng) {
    if (spec.streak_count == 0 || spec.streak_alpha == 0.0) return img;
    RgbImage streaks = img;
    for (int i = 0; i < spec.streak_count; ++i) {
        const double x0 = rng.uniform(0.0, spec.width);
        const double y0 = rng.uniform(0.0, spec.height);
        const double angle = rng.uniform(-0.3, 0.3);
        const double dx = std::sin(angle);
        const double dy = std::cos(angle);
        for (int s = 0; s < spec.streak_length; ++s) {
            const int x = static_cast<int>(std::floor(x0 + s * dx));
            const int y = static_cast<int>(std::floor(y0 + s * dy));
            if (x < 0 || y < 0 || x >= spec.width || y >= spec.height) break;
            for (int c = 0; c < 3; ++c) streaks.at(x, y, c) = 255;
        }
    }
    return simulate_rain_snow(img, streaks, spec.streak_alpha);
}

}  // namespace

void SceneSpec::validate() const {
    auto bad = [](const std::string& why) { fail(ErrorCode::InvalidSpec, "invalid scene spec: " + why); };
    if (width < 8 || height < 8) bad("width and height must be >= 8");
    if (road.base_y != height - 1) bad("road base must sit on the bottom row");
    try {
        road.validate(width, height);
    } catch (const Error& e) {
        bad(e.what());
    }
    if (!std::isfinite(curvature)) bad("curvature must be finite");
    for (int c = 0; c < 3; ++c) {
        if (!(snow.mean[c] >= 0 && snow.mean[c] <= 255 && foliage.mean[c] >= 0 && foliage.mean[c] <= 255)) {
            bad("colour means must lie in [0, 255]");
        }
        if (!(snow.stddev[c] >= 0 && foliage.stddev[c] >= 0)) bad("colour deviations must be >= 0");
    }
    const auto hsv = rgb_to_hsv_pixel(quantize(snow.mean[0]), quantize(snow.mean[1]), quantize(snow.mean[2]));
    const SnowThresholds defaults;
    if (hsv.s > defaults.s_max || hsv.v < defaults.v_min) {
        bad("snow colour does not satisfy the default snow thresholds");
    }
    if (speck_count < 0 || speck_size < 1 || speck_size >= std::min(width, height)) bad("bad speck settings");
    if (!(streak_alpha >= 0.0 && streak_alpha <= 1.0)) bad("streak_alpha must lie in [0, 1]");
    if (streak_count < 0 || streak_length < 1) bad("bad streak settings");
    if (!(apex_jitter_x >= 0 && apex_jitter_y >= 0 && base_jitter >= 0)) bad("jitter must be >= 0");
}

Scene generate_scene(const SceneSpec& spec) {
    spec.validate();
    SceneRng rng(spec.seed);
    Scene scene{RgbImage(spec.width, spec.height), road_mask(spec)};
    for (int y = 0; y < spec.height; ++y) {
        for (int x = 0; x < spec.width; ++x) {
            paint(scene.image, x, y, scene.truth.get(x, y) ? spec.snow : spec.foliage, rng);
        }
    }
    place_specks(spec, scene.truth, scene.image, rng);
    scene.image = add_streaks(spec, scene.image, rng);
    return scene;
}

SceneSpec corpus_scene_spec(const SceneSpec& base, std::uint64_t seed, int index) {
    SceneSpec spec = base;
    spec.seed = seed + static_cast<std::uint64_t>(index);
    SceneRng rng(spec.seed ^ kJitterStream);
    auto& t = spec.road;
    t.apex_x = std::round(base.road.apex_x + rng.uniform(-base.apex_jitter_x, base.apex_jitter_x));
    t.apex_y = std::round(base.road.apex_y + rng.uniform(-base.apex_jitter_y, base.apex_jitter_y));
    t.base_left = static_cast<int>(std::lround(base.road.base_left + rng.uniform(-base.base_jitter, base.base_jitter)));
    t.base_right = static_cast<int>(std::lround(base.road.base_right + rng.uniform(-base.base_jitter, base.base_jitter)));
    t.apex_x = std::clamp(t.apex_x, 0.0, static_cast<double>(base.width - 1));
    t.apex_y = std::clamp(t.apex_y, 0.0, static_cast<double>(t.base_y - 1));
    t.base_left = std::clamp(t.base_left, 0, base.width - 2);
    t.base_right = std::clamp(t.base_right, t.base_left + 1, base.width - 1);
    return spec;
}

std::string corpus_id(int index) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "scene_%04d", index);
    return buf;
}

std::vector<CorpusEntry> generate_corpus(const SceneSpec& base, int n, std::uint64_t seed) {
    if (n < 1) fail(ErrorCode::InvalidSpec, "corpus size must be >= 1");
    base.validate();
    std::vector<CorpusEntry> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        auto spec = corpus_scene_spec(base, seed, i);
        auto scene = generate_scene(spec);
        out.push_back({corpus_id(i), std::move(spec), std::move(scene)});
    }
    return out;
}

void write_corpus(const std::vector<CorpusEntry>& corpus, const SceneSpec& base, std::uint64_t seed,
                  const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir / "images", ec);
    fs::create_directories(dir / "truth", ec);
    if (ec) fail(ErrorCode::IoError, "cannot create corpus directory " + dir.string() + ": " + ec.message());

    nlohmann::json ids = nlohmann::json::array();
    for (const auto& entry : corpus) {
        save_image(entry.scene.image, dir / "images" / (entry.id + ".ppm"));
        save_image(entry.scene.truth, dir / "truth" / (entry.id + ".pgm"));
        ids.push_back(entry.id);
    }
    nlohmann::json spec_echo = nlohmann::json::object();
    for (const auto& [key, value] : to_key_values(base)) spec_echo[key] = value;
    const nlohmann::json doc = {
        {"seed", seed}, {"count", corpus.size()}, {"ids", ids}, {"spec", spec_echo}};
    std::ofstream out(dir / "corpus.json", std::ios::trunc);
    out << doc.dump(2) << "\n";
    if (!out) fail(ErrorCode::IoError, "cannot write " + (dir / "corpus.json").string());
}

std::vector<std::string> read_corpus_ids(const fs::path& dir) {
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) fail(ErrorCode::FileNotFound, "no corpus directory " + dir.string());
    std::vector<std::string> ids;
    const auto manifest = dir / "corpus.json";
    if (fs::is_regular_file(manifest, ec)) {
        std::ifstream in(manifest);
        try {
            const auto doc = nlohmann::json::parse(in);
            for (const auto& id : doc.at("ids")) ids.push_back(id.get<std::string>());
        } catch (const nlohmann::json::exception& e) {
            fail(ErrorCode::CorruptData, "bad corpus manifest " + manifest.string() + ": " + e.what());
        }
        return ids;
    }
    for (const auto& entry : fs::directory_iterator(dir / "images", ec)) {
        if (entry.path().extension() == ".ppm") ids.push_back(entry.path().stem().string());
    }
    std::sort(ids.begin(), ids.end());
    return ids;
}

}  // namespace snowroad
