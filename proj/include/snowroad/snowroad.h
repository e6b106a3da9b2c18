/*
 * C interface to the snowroad road-detection library.
 *
 * All objects are opaque handles created by a *_create / *_load / *_default
 * call and released with the matching *_free. Every fallible call returns an
 * sr_status; on failure a description is available from sr_last_error() on
 * the calling thread until that thread's next failing call.
 */
#ifndef SNOWROAD_H
#define SNOWROAD_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(SNOWROAD_BUILDING)
#    define SNOWROAD_API __declspec(dllexport)
#  else
#    define SNOWROAD_API __declspec(dllimport)
#  endif
#else
#  define SNOWROAD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sr_status {
    SR_OK = 0,
    SR_ERR_FILE_NOT_FOUND = 1,
    SR_ERR_UNSUPPORTED_FORMAT = 2,
    SR_ERR_CORRUPT_DATA = 3,
    SR_ERR_IO = 4,
    SR_ERR_INVALID_PARAMETER = 5,
    SR_ERR_DIMENSION_MISMATCH = 6,
    SR_ERR_NO_ROAD_DETECTED = 7,
    SR_ERR_DEGENERATE_BASE = 8,
    SR_ERR_EMPTY_CORPUS = 9,
    SR_ERR_INVALID_SPEC = 10,
    SR_ERR_CONFIG = 11,
    SR_ERR_NULL_ARGUMENT = 12,
    SR_ERR_INTERNAL = 13
} sr_status;

typedef struct sr_image sr_image;
typedef struct sr_mask sr_mask;
typedef struct sr_config sr_config;
typedef struct sr_scene_spec sr_scene_spec;
typedef struct sr_result sr_result;

typedef struct sr_triangle {
    double apex_x;
    double apex_y;
    int32_t base_left;
    int32_t base_right;
    int32_t base_y;
} sr_triangle;

typedef struct sr_metrics {
    double mean_fnr;
    double mean_fpr;
    int32_t image_count;
} sr_metrics;

/* Keep per-stage images in the result so sr_result_write dumps them. */
#define SR_DETECT_KEEP_STAGES 0x1u

SNOWROAD_API const char* sr_status_name(sr_status status);
SNOWROAD_API const char* sr_last_error(void);
SNOWROAD_API const char* sr_version(void);
/* Frees strings returned through char** out-parameters. */
SNOWROAD_API void sr_string_free(char* s);

/* Images: 8-bit interleaved RGB. */
SNOWROAD_API sr_status sr_image_create(int32_t width, int32_t height, const uint8_t* rgb, sr_image** out);
SNOWROAD_API sr_status sr_image_load(const char* path, sr_image** out);
SNOWROAD_API sr_status sr_image_save(const sr_image* image, const char* path);
SNOWROAD_API int32_t sr_image_width(const sr_image* image);
SNOWROAD_API int32_t sr_image_height(const sr_image* image);
SNOWROAD_API const uint8_t* sr_image_data(const sr_image* image);
SNOWROAD_API void sr_image_free(sr_image* image);

/* Masks: loaded from gray images with bit = (sample >= threshold). */
SNOWROAD_API sr_status sr_mask_load(const char* path, uint8_t threshold, sr_mask** out);
SNOWROAD_API sr_status sr_mask_save(const sr_mask* mask, const char* path);
SNOWROAD_API int32_t sr_mask_width(const sr_mask* mask);
SNOWROAD_API int32_t sr_mask_height(const sr_mask* mask);
SNOWROAD_API int sr_mask_get(const sr_mask* mask, int32_t x, int32_t y);
SNOWROAD_API int64_t sr_mask_count(const sr_mask* mask);
SNOWROAD_API void sr_mask_free(sr_mask* mask);

/* Pipeline configuration (key = value text format). */
SNOWROAD_API sr_status sr_config_default(sr_config** out);
SNOWROAD_API sr_status sr_config_load(const char* path, sr_config** out);
SNOWROAD_API sr_status sr_config_parse(const char* text, sr_config** out);
SNOWROAD_API sr_status sr_config_set(sr_config* config, const char* key, const char* value);
SNOWROAD_API sr_status sr_config_serialize(const sr_config* config, char** out_text);
SNOWROAD_API void sr_config_free(sr_config* config);

/* Synthetic scene specification (same text format). */
SNOWROAD_API sr_status sr_scene_spec_default(sr_scene_spec** out);
SNOWROAD_API sr_status sr_scene_spec_load(const char* path, sr_scene_spec** out);
SNOWROAD_API sr_status sr_scene_spec_set(sr_scene_spec* spec, const char* key, const char* value);
SNOWROAD_API uint64_t sr_scene_spec_seed(const sr_scene_spec* spec);
SNOWROAD_API sr_status sr_scene_spec_serialize(const sr_scene_spec* spec, char** out_text);
SNOWROAD_API void sr_scene_spec_free(sr_scene_spec* spec);

/* Detection. */
SNOWROAD_API sr_status sr_detect(const sr_image* image, const sr_config* config, uint32_t flags, sr_result** out);
SNOWROAD_API sr_status sr_result_triangle(const sr_result* result, sr_triangle* out);
SNOWROAD_API sr_status sr_result_vanishing_point(const sr_result* result, int32_t* x, int32_t* y);
SNOWROAD_API int64_t sr_result_road_pixel_count(const sr_result* result);
/* The returned mask is owned by the caller. */
SNOWROAD_API sr_status sr_result_road_mask(const sr_result* result, sr_mask** out);
SNOWROAD_API sr_status sr_result_to_json(const sr_result* result, char** out_text);
/* overlay.ppm, result.json and any kept stage images. */
SNOWROAD_API sr_status sr_result_write(const sr_result* result, const char* out_dir);
SNOWROAD_API void sr_result_free(sr_result* result);

/* Synthetic corpus: <dir>/images/<id>.ppm, <dir>/truth/<id>.pgm, <dir>/corpus.json. */
SNOWROAD_API sr_status sr_synth_corpus(const sr_scene_spec* spec, const char* out_dir, int32_t count, uint64_t seed);

/* Evaluation of a corpus directory; report_path receives the JSON report and
 * csv_path (may be NULL) an id,fnr,fpr table. metrics may be NULL. threads
 * <= 0 uses all hardware threads. */
SNOWROAD_API sr_status sr_eval_corpus(const char* corpus_dir, const sr_config* config, const char* report_path,
                                      const char* csv_path, int32_t threads, sr_metrics* metrics);

/* FNR/FPR of a single prediction against truth. */
SNOWROAD_API sr_status sr_evaluate_masks(const sr_mask* pred, const sr_mask* truth, double* fnr, double* fpr);

#ifdef __cplusplus
}
#endif

#endif /* SNOWROAD_H */
