#include "snowroad/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <mutex>
#include <optional>
#include <thread>

#include "json.hpp"
#include "snowroad/colorspace.hpp"
#include "snowroad/image_io.hpp"
#include "snowroad/synthgen.hpp"

namespace snowroad {
namespace {

namespace fs = std::filesystem;

class StageClock {
public:
    explicit StageClock(std::vector<StageTiming>& sink) : sink_(sink) {}

    template <typename F>
    auto run(const char* stage, F&& f) {
        const auto start = std::chrono::steady_clock::now();
        auto out = f();
        const std::chrono::duration<double, std::milli> dt = std::chrono::steady_clock::now() - start;
        sink_.push_back({stage, dt.count()});
        return out;
    }

private:
    std::vector<StageTiming>& sink_;
};

void blend(RgbImage& img, int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b, double w) {
    const std::uint8_t c[3] = {r, g, b};
    for (int k = 0; k < 3; ++k) img.at(x, y, k) = quantize((1.0 - w) * img.at(x, y, k) + w * c[k]);
}

void put(RgbImage& img, int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    if (x < 0 || y < 0 || x >= img.width() || y >= img.height()) return;
    img.at(x, y, 0) = r;
    img.at(x, y, 1) = g;
    img.at(x, y, 2) = b;
}

void draw_line(RgbImage& img, int x0, int y0, int x1, int y1) {
    const int dx = std::abs(x1 - x0), sx = x0 < x1 ? 1 : -1;
    const int dy = -std::abs(y1 - y0), sy = y0 < y1 ? 1 : -1;
    int err = dx + dy;
    while (true) {
        put(img, x0, y0, 255, 0, 0);
        if (x0 == x1 && y0 == y1) break;
        const int e2 = 2 * err;
        if (e2 >= dy) {
            err += dy;
            x0 += sx;
        }
        if (e2 <= dx) {
            err += dx;
            y0 += sy;
        }
    }
}

bool is_detection_failure(ErrorCode code) {
    return code == ErrorCode::NoRoadDetected || code == ErrorCode::DegenerateBase;
}

}  // namespace

DetectionResult run_pipeline(const RgbImage& img, const PipelineConfig& cfg, bool keep_stages) {
    cfg.validate();
    DetectionResult result;
    StageClock clock(result.timings);
    FilterWarnings warnings;

    RgbImage rgb = img;
    if (cfg.rain_snow) {
        rgb = clock.run("rain_snow", [&] { return remove_rain_snow(rgb, cfg.rain_snow_params); });
    }
    if (cfg.shadow) {
        rgb = clock.run("shadow", [&] {
            const auto mask = detect_shadow_mask(rgb_to_hsv(rgb), cfg.shadow_params);
            return remove_shadow(rgb, mask, cfg.shadow_params, &warnings);
        });
    }
    if (cfg.light_filter) {
        rgb = clock.run("light_filter", [&] { return light_filter(rgb, cfg.light_params); });
    }

    auto keep = [&](const char* name, auto image) {
        if (keep_stages) result.stage_artifacts.push_back({name, std::move(image)});
    };

    HsvImage hsv = clock.run("hsv", [&] { return rgb_to_hsv(rgb); });
    keep("hsv", hsv);
    // Equalizing first: a blurred edge between two flat regions holds only a
    // handful of pixels per V level, so equalization after the blur would
    // push the whole ramp toward the darker region's level.
    if (cfg.equalize) hsv = clock.run("equalize", [&] { return equalize_value_channel(hsv); });
    keep("equalized", hsv);
    if (cfg.gaussian) hsv = clock.run("gaussian", [&] { return gaussian_blur(hsv, cfg.gaussian_sigma); });
    keep("blurred", hsv);

    const BinaryMask snow = clock.run("classify", [&] { return classify_snow(hsv, cfg.snow); });
    keep("snow-mask", snow);
    const BinaryMask cleaned = clock.run("morphology", [&] { return open_close(snow, cfg.se); });
    keep("opened", cleaned);

    FitOptions fit;
    fit.min_coverage = cfg.min_coverage;
    fit.min_base_width_frac = cfg.min_base_width_frac;
    const Triangle tri = clock.run("fit_triangle", [&] { return fit_triangle(cleaned, fit); });
    result.road = clock.run("extract_road", [&] { return extract_road(cleaned, tri); });
    result.vanishing_point = result.road.vanishing_point;
    if (keep_stages) keep("triangle-overlay", render_overlay(img, result.road));
    result.warnings = std::move(warnings.messages);
    return result;
}

RgbImage render_overlay(const RgbImage& img, const RoadRegion& road) {
    RgbImage out = img;
    for (int y = 0; y < out.height(); ++y) {
        for (int x = 0; x < out.width(); ++x) {
            if (road.mask.get(x, y)) blend(out, x, y, 0, 255, 0, 0.5);
        }
    }
    const auto& t = road.triangle;
    const int ax = static_cast<int>(std::lround(t.apex_x));
    const int ay = static_cast<int>(std::lround(t.apex_y));
    draw_line(out, ax, ay, t.base_left, t.base_y);
    draw_line(out, t.base_left, t.base_y, t.base_right, t.base_y);
    draw_line(out, t.base_right, t.base_y, ax, ay);

    constexpr int kRadius = 4;
    const auto vp = road.vanishing_point;
    for (int dy = -kRadius - 1; dy <= kRadius + 1; ++dy) {
        for (int dx = -kRadius - 1; dx <= kRadius + 1; ++dx) {
            if (std::abs(std::hypot(dx, dy) - kRadius) < 0.5) put(out, vp.x + dx, vp.y + dy, 255, 0, 0);
        }
    }
    return out;
}

std::string result_to_json(const DetectionResult& result, const PipelineConfig& cfg) {
    const auto& t = result.road.triangle;
    nlohmann::json timings = nlohmann::json::object();
    for (const auto& s : result.timings) timings[s.stage] = s.ms;
    nlohmann::json config = nlohmann::json::object();
    for (const auto& [k, v] : to_key_values(cfg)) config[k] = v;
    const nlohmann::json doc = {
        {"vanishing_point", {{"x", result.vanishing_point.x}, {"y", result.vanishing_point.y}}},
        {"triangle",
         {{"apex_x", t.apex_x}, {"apex_y", t.apex_y}, {"base_left", t.base_left}, {"base_right", t.base_right},
          {"base_y", t.base_y}}},
        {"road_pixel_count", result.road.mask.count()},
        {"timings_ms", timings},
        {"config", config},
        {"warnings", result.warnings},
    };
    return doc.dump(2) + "\n";
}

void write_detection(const DetectionResult& result, const RgbImage& input, const PipelineConfig& cfg,
                     const fs::path& out_dir) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) fail(ErrorCode::IoError, "cannot create " + out_dir.string() + ": " + ec.message());
    save_image(render_overlay(input, result.road), out_dir / "overlay.ppm");
    {
        std::ofstream out(out_dir / "result.json", std::ios::trunc);
        out << result_to_json(result, cfg);
        if (!out) fail(ErrorCode::IoError, "cannot write result.json in " + out_dir.string());
    }
    for (const auto& artifact : result.stage_artifacts) {
        std::visit(
            [&](const auto& image) {
                using T = std::decay_t<decltype(image)>;
                const char* ext = std::is_same_v<T, BinaryMask> ? ".pgm" : ".ppm";
                save_image(image, out_dir / ("stage_" + artifact.name + ext));
            },
            artifact.image);
    }
}

MetricsReport evaluate_corpus_dir(const fs::path& dir, const PipelineConfig& cfg, int threads) {
    cfg.validate();
    auto ids = read_corpus_ids(dir);
    if (ids.empty()) fail(ErrorCode::EmptyCorpus, "corpus " + dir.string() + " holds no images");
    std::sort(ids.begin(), ids.end());

    std::vector<std::optional<EvalPair>> pairs(ids.size());
    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::exception_ptr first_error;

    auto worker = [&] {
        for (std::size_t i = next++; i < ids.size(); i = next++) {
            try {
                const auto image = load_image(dir / "images" / (ids[i] + ".ppm"));
                auto truth = mask_from_gray(load_gray(dir / "truth" / (ids[i] + ".pgm")), 128);
                EvalPair pair{BinaryMask(image.width(), image.height()), std::move(truth), ids[i], {}};
                try {
                    pair.pred = run_pipeline(image, cfg).road.mask;
                } catch (const Error& e) {
                    if (!is_detection_failure(e.code())) throw;
                    pair.flags.emplace_back("no_road_detected");
                }
                pairs[i] = std::move(pair);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        }
    };

    if (threads <= 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    threads = std::min<int>(threads, static_cast<int>(ids.size()));
    std::vector<std::thread> pool;
    for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);

    std::vector<EvalPair> ordered;
    ordered.reserve(pairs.size());
    for (auto& p : pairs) ordered.push_back(std::move(*p));
    return evaluate_corpus(ordered);
}

}  // namespace snowroad
