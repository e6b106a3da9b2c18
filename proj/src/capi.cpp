#include "snowroad/snowroad.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <new>
#include <string>

#include "snowroad/image_io.hpp"
#include "snowroad/pipeline.hpp"
#include "snowroad/synthgen.hpp"

struct sr_image {
    snowroad::RgbImage value;
};

struct sr_mask {
    snowroad::BinaryMask value;
};

struct sr_config {
    snowroad::PipelineConfig value;
};

struct sr_scene_spec {
    snowroad::SceneSpec value;
};

struct sr_result {
    snowroad::DetectionResult value;
    snowroad::PipelineConfig config;
    snowroad::RgbImage input;
};

namespace {

thread_local std::string g_last_error;

sr_status to_status(snowroad::ErrorCode code) {
    using snowroad::ErrorCode;
    switch (code) {
        case ErrorCode::FileNotFound: return SR_ERR_FILE_NOT_FOUND;
        case ErrorCode::UnsupportedFormat: return SR_ERR_UNSUPPORTED_FORMAT;
        case ErrorCode::CorruptData: return SR_ERR_CORRUPT_DATA;
        case ErrorCode::IoError: return SR_ERR_IO;
        case ErrorCode::InvalidParameter: return SR_ERR_INVALID_PARAMETER;
        case ErrorCode::DimensionMismatch: return SR_ERR_DIMENSION_MISMATCH;
        case ErrorCode::NoRoadDetected: return SR_ERR_NO_ROAD_DETECTED;
        case ErrorCode::DegenerateBase: return SR_ERR_DEGENERATE_BASE;
        case ErrorCode::EmptyCorpus: return SR_ERR_EMPTY_CORPUS;
        case ErrorCode::InvalidSpec: return SR_ERR_INVALID_SPEC;
        case ErrorCode::ConfigError: return SR_ERR_CONFIG;
    }
    return SR_ERR_INTERNAL;
}

sr_status set_error(sr_status status, std::string message) {
    g_last_error = std::move(message);
    return status;
}

template <typename F>
sr_status try_(F&& f) {
    try {
        f();
        return SR_OK;
    } catch (const snowroad::Error& e) {
        return set_error(to_status(e.code()), e.what());
    } catch (const std::bad_alloc&) {
        return set_error(SR_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return set_error(SR_ERR_INTERNAL, e.what());
    } catch (...) {
        return set_error(SR_ERR_INTERNAL, "unknown error");
    }
}

template <typename... Ps>
bool any_null(Ps... ps) {
    return ((ps == nullptr) || ...);
}

sr_status null_arg(const char* fn) { return set_error(SR_ERR_NULL_ARGUMENT, std::string(fn) + ": null argument"); }

char* dup_string(const std::string& s) {
    auto* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

void write_text(const char* path, const std::string& text) {
    std::ofstream out(path, std::ios::trunc);
    out << text;
    if (!out) snowroad::fail(snowroad::ErrorCode::IoError, std::string("cannot write ") + path);
}

}  // namespace

extern "C" {

const char* sr_status_name(sr_status status) {
    switch (status) {
        case SR_OK: return "OK";
        case SR_ERR_FILE_NOT_FOUND: return "FileNotFound";
        case SR_ERR_UNSUPPORTED_FORMAT: return "UnsupportedFormat";
        case SR_ERR_CORRUPT_DATA: return "CorruptData";
        case SR_ERR_IO: return "IoError";
        case SR_ERR_INVALID_PARAMETER: return "InvalidParameter";
        case SR_ERR_DIMENSION_MISMATCH: return "DimensionMismatch";
        case SR_ERR_NO_ROAD_DETECTED: return "NoRoadDetected";
        case SR_ERR_DEGENERATE_BASE: return "DegenerateBase";
        case SR_ERR_EMPTY_CORPUS: return "EmptyCorpus";
        case SR_ERR_INVALID_SPEC: return "InvalidSpec";
        case SR_ERR_CONFIG: return "ConfigError";
        case SR_ERR_NULL_ARGUMENT: return "NullArgument";
        case SR_ERR_INTERNAL: return "Internal";
    }
    return "Unknown";
}

const char* sr_last_error(void) { return g_last_error.c_str(); }

const char* sr_version(void) { return "0.1.0"; }

void sr_string_free(char* s) { std::free(s); }

sr_status sr_image_create(int32_t width, int32_t height, const uint8_t* rgb, sr_image** out) {
    if (any_null(rgb, out)) return null_arg("sr_image_create");
    return try_([&] {
        if (width < 1 || height < 1) snowroad::fail(snowroad::ErrorCode::InvalidParameter, "image size must be positive");
        const auto n = static_cast<std::size_t>(width) * height * 3;
        *out = new sr_image{snowroad::RgbImage(width, height, std::vector<std::uint8_t>(rgb, rgb + n))};
    });
}

sr_status sr_image_load(const char* path, sr_image** out) {
    if (any_null(path, out)) return null_arg("sr_image_load");
    return try_([&] { *out = new sr_image{snowroad::load_image(path)}; });
}

sr_status sr_image_save(const sr_image* image, const char* path) {
    if (any_null(image, path)) return null_arg("sr_image_save");
    return try_([&] { snowroad::save_image(image->value, path); });
}

int32_t sr_image_width(const sr_image* image) { return image ? image->value.width() : 0; }
int32_t sr_image_height(const sr_image* image) { return image ? image->value.height() : 0; }
const uint8_t* sr_image_data(const sr_image* image) { return image ? image->value.data().data() : nullptr; }
void sr_image_free(sr_image* image) { delete image; }

sr_status sr_mask_load(const char* path, uint8_t threshold, sr_mask** out) {
    if (any_null(path, out)) return null_arg("sr_mask_load");
    return try_([&] { *out = new sr_mask{snowroad::mask_from_gray(snowroad::load_gray(path), threshold)}; });
}

sr_status sr_mask_save(const sr_mask* mask, const char* path) {
    if (any_null(mask, path)) return null_arg("sr_mask_save");
    return try_([&] { snowroad::save_image(mask->value, path); });
}

int32_t sr_mask_width(const sr_mask* mask) { return mask ? mask->value.width() : 0; }
int32_t sr_mask_height(const sr_mask* mask) { return mask ? mask->value.height() : 0; }

int sr_mask_get(const sr_mask* mask, int32_t x, int32_t y) {
    return mask && mask->value.get_or_false(x, y) ? 1 : 0;
}

int64_t sr_mask_count(const sr_mask* mask) { return mask ? static_cast<int64_t>(mask->value.count()) : 0; }
void sr_mask_free(sr_mask* mask) { delete mask; }

sr_status sr_config_default(sr_config** out) {
    if (any_null(out)) return null_arg("sr_config_default");
    return try_([&] { *out = new sr_config{}; });
}

sr_status sr_config_load(const char* path, sr_config** out) {
    if (any_null(path, out)) return null_arg("sr_config_load");
    return try_([&] { *out = new sr_config{snowroad::load_pipeline_config(path)}; });
}

sr_status sr_config_parse(const char* text, sr_config** out) {
    if (any_null(text, out)) return null_arg("sr_config_parse");
    return try_([&] { *out = new sr_config{snowroad::parse_pipeline_config(text)}; });
}

sr_status sr_config_set(sr_config* config, const char* key, const char* value) {
    if (any_null(config, key, value)) return null_arg("sr_config_set");
    return try_([&] {
        auto updated = config->value;
        snowroad::set_option(updated, key, value);
        updated.validate();
        config->value = updated;
    });
}

sr_status sr_config_serialize(const sr_config* config, char** out_text) {
    if (any_null(config, out_text)) return null_arg("sr_config_serialize");
    return try_([&] { *out_text = dup_string(snowroad::serialize(config->value)); });
}

void sr_config_free(sr_config* config) { delete config; }

sr_status sr_scene_spec_default(sr_scene_spec** out) {
    if (any_null(out)) return null_arg("sr_scene_spec_default");
    return try_([&] { *out = new sr_scene_spec{}; });
}

sr_status sr_scene_spec_load(const char* path, sr_scene_spec** out) {
    if (any_null(path, out)) return null_arg("sr_scene_spec_load");
    return try_([&] { *out = new sr_scene_spec{snowroad::load_scene_spec(path)}; });
}

sr_status sr_scene_spec_set(sr_scene_spec* spec, const char* key, const char* value) {
    if (any_null(spec, key, value)) return null_arg("sr_scene_spec_set");
    return try_([&] { snowroad::set_option(spec->value, key, value); });
}

uint64_t sr_scene_spec_seed(const sr_scene_spec* spec) { return spec ? spec->value.seed : 0; }

sr_status sr_scene_spec_serialize(const sr_scene_spec* spec, char** out_text) {
    if (any_null(spec, out_text)) return null_arg("sr_scene_spec_serialize");
    return try_([&] { *out_text = dup_string(snowroad::serialize(spec->value)); });
}

void sr_scene_spec_free(sr_scene_spec* spec) { delete spec; }

sr_status sr_detect(const sr_image* image, const sr_config* config, uint32_t flags, sr_result** out) {
    if (any_null(image, config, out)) return null_arg("sr_detect");
    return try_([&] {
        auto result = snowroad::run_pipeline(image->value, config->value, (flags & SR_DETECT_KEEP_STAGES) != 0);
        *out = new sr_result{std::move(result), config->value, image->value};
    });
}

sr_status sr_result_triangle(const sr_result* result, sr_triangle* out) {
    if (any_null(result, out)) return null_arg("sr_result_triangle");
    const auto& t = result->value.road.triangle;
    *out = sr_triangle{t.apex_x, t.apex_y, t.base_left, t.base_right, t.base_y};
    return SR_OK;
}

sr_status sr_result_vanishing_point(const sr_result* result, int32_t* x, int32_t* y) {
    if (any_null(result, x, y)) return null_arg("sr_result_vanishing_point");
    *x = result->value.vanishing_point.x;
    *y = result->value.vanishing_point.y;
    return SR_OK;
}

int64_t sr_result_road_pixel_count(const sr_result* result) {
    return result ? static_cast<int64_t>(result->value.road.mask.count()) : 0;
}

sr_status sr_result_road_mask(const sr_result* result, sr_mask** out) {
    if (any_null(result, out)) return null_arg("sr_result_road_mask");
    return try_([&] { *out = new sr_mask{result->value.road.mask}; });
}

sr_status sr_result_to_json(const sr_result* result, char** out_text) {
    if (any_null(result, out_text)) return null_arg("sr_result_to_json");
    return try_([&] { *out_text = dup_string(snowroad::result_to_json(result->value, result->config)); });
}

sr_status sr_result_write(const sr_result* result, const char* out_dir) {
    if (any_null(result, out_dir)) return null_arg("sr_result_write");
    return try_([&] { snowroad::write_detection(result->value, result->input, result->config, out_dir); });
}

void sr_result_free(sr_result* result) { delete result; }

sr_status sr_synth_corpus(const sr_scene_spec* spec, const char* out_dir, int32_t count, uint64_t seed) {
    if (any_null(spec, out_dir)) return null_arg("sr_synth_corpus");
    return try_([&] {
        const auto corpus = snowroad::generate_corpus(spec->value, count, seed);
        snowroad::write_corpus(corpus, spec->value, seed, out_dir);
    });
}

sr_status sr_eval_corpus(const char* corpus_dir, const sr_config* config, const char* report_path,
                         const char* csv_path, int32_t threads, sr_metrics* metrics) {
    if (any_null(corpus_dir, config, report_path)) return null_arg("sr_eval_corpus");
    return try_([&] {
        const auto report = snowroad::evaluate_corpus_dir(corpus_dir, config->value, threads);
        write_text(report_path, snowroad::to_json(report));
        if (csv_path) write_text(csv_path, snowroad::to_csv(report));
        if (metrics) {
            *metrics = sr_metrics{report.mean_fnr, report.mean_fpr, static_cast<int32_t>(report.per_image.size())};
        }
    });
}

sr_status sr_evaluate_masks(const sr_mask* pred, const sr_mask* truth, double* fnr, double* fpr) {
    if (any_null(pred, truth, fnr, fpr)) return null_arg("sr_evaluate_masks");
    return try_([&] {
        const auto c = snowroad::confusion(pred->value, truth->value);
        *fnr = snowroad::fnr(c);
        *fpr = snowroad::fpr(c);
    });
}

}  // extern "C"
