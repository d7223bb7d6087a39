#ifndef ORTHOMOM_ORTHOMOM_H
#define ORTHOMOM_ORTHOMOM_H

#include <stddef.h>
#include <stdint.h>

#if defined(ORTHOMOM_BUILDING_LIBRARY)
#define OM_API __attribute__((visibility("default")))
#else
#define OM_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum om_status {
  OM_OK = 0,
  OM_INVALID_ARGUMENT = 1,
  OM_DOMAIN = 2,
  OM_IO = 3,
  OM_FORMAT = 4,
  OM_INTERNAL = 5
} om_status;

typedef struct om_image om_image;
typedef struct om_matrix om_matrix;
typedef struct om_moments om_moments;

/* Message of the most recent failure on the calling thread ("" if none). */
OM_API const char* om_last_error(void);
OM_API const char* om_status_string(om_status status);
OM_API const char* om_version(void);

/* Images. Intensities are row-major doubles in [0, 1]. */
OM_API om_status om_image_load(const char* path, om_image** out);
OM_API om_status om_image_save(const om_image* image, const char* path);
OM_API om_status om_image_create(size_t rows, size_t cols, const double* intensities,
                                 om_image** out);
OM_API om_status om_image_synth_model(size_t rows, size_t cols, om_image** out);
OM_API om_status om_image_size(const om_image* image, size_t* rows, size_t* cols);
/* Borrowed pointer, valid until om_image_free. */
OM_API const double* om_image_data(const om_image* image);
OM_API void om_image_free(om_image* image);

/* family: "legendre", "cheb2", "dcheb" or "legendre-cf". threads = 0 means 1. */
OM_API om_status om_moments_compute(const om_image* image, const char* family, size_t order,
                                    unsigned threads, om_moments** out);
OM_API om_status om_moments_load_csv(const char* path, om_moments** out);
OM_API om_status om_moments_save_csv(const om_moments* moments, const char* path);
/* order + 1 rows and columns; mu is row-major. rows/cols are the image grid. */
OM_API om_status om_moments_info(const om_moments* moments, size_t* order, size_t* rows,
                                 size_t* cols);
OM_API const double* om_moments_data(const om_moments* moments);
OM_API om_status om_moments_reconstruct(const om_moments* moments, size_t rows, size_t cols,
                                        unsigned threads, om_matrix** out);
OM_API void om_moments_free(om_moments* moments);

/* max |reference - approximation| / max |reference|. */
OM_API om_status om_reconstruction_error(const om_image* reference, const om_matrix* approximation,
                                         double* out);

OM_API om_status om_matrix_size(const om_matrix* m, size_t* rows, size_t* cols);
OM_API const double* om_matrix_data(const om_matrix* m);
/* .csv writes the exact values, anything else a clamped 16-bit PGM. */
OM_API om_status om_matrix_save(const om_matrix* m, const char* path);
OM_API void om_matrix_free(om_matrix* m);

/* Co-occurrence counts for one offset; angle in {0, 45, 90, 135}. The image is
   requantized to `levels` levels first. */
OM_API om_status om_glcm_compute(const om_image* image, size_t distance, int angle, size_t levels,
                                 int symmetric, int normalize, om_matrix** out);
OM_API om_status om_glcm_save_csv(const om_image* image, size_t distance, int angle,
                                  size_t levels, int symmetric, int normalize, const char* path);

/* source: "image" or "glcm". GLCM features use distance 1, all four angles,
   `levels` gray levels and asymmetric counting. Writes *count doubles into
   values when capacity allows; *count is always set. */
OM_API om_status om_features_compute(const om_image* image, const char* source,
                                     const char* family, size_t order, size_t levels,
                                     double* values, size_t capacity, size_t* count);
OM_API om_status om_features_from_manifest(const char* manifest_path, const char* source,
                                           const char* family, size_t order, size_t levels,
                                           unsigned threads, const char* out_csv);

/* Rotation protocol on a features CSV; writes the JSON report. */
OM_API om_status om_classify_features_csv(const char* features_csv, size_t repeats,
                                          uint64_t seed, unsigned threads, const char* out_json);

/* suite: "reconstruction" or "timing". */
OM_API om_status om_bench_run(const char* suite, size_t runs, unsigned threads,
                              const char* out_csv);

/* Synthetic texture fixture: PGM images plus manifest.json in out_dir. */
OM_API om_status om_synth_dataset(size_t size, uint64_t seed, const char* out_dir);

#ifdef __cplusplus
}
#endif

#endif
