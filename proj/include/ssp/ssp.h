#ifndef SSP_SSP_H
#define SSP_SSP_H

/* C interface to the self-supervised probing toolkit.
 *
 * Every fallible call returns an ssp_status. On failure, ssp_last_error() gives a
 * message for the calling thread that stays valid until that thread's next call. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(SSP_BUILDING_LIBRARY)
#    define SSP_API __declspec(dllexport)
#  else
#    define SSP_API __declspec(dllimport)
#  endif
#else
#  define SSP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ssp_status {
  SSP_OK = 0,
  SSP_ERR_INVALID_INPUT = 1,
  SSP_ERR_BAD_MAGIC = 2,
  SSP_ERR_UNSUPPORTED_VERSION = 3,
  SSP_ERR_UNSUPPORTED_DTYPE = 4,
  SSP_ERR_TRUNCATED = 5,
  SSP_ERR_IO = 6,
  SSP_ERR_UNDEFINED_METRIC = 7,
  SSP_ERR_CONFIG = 8,
  SSP_ERR_MISSING_INPUT = 9,
  SSP_ERR_NUMERIC = 10,
  SSP_ERR_INTERNAL = 99
} ssp_status;

typedef enum ssp_dtype { SSP_DTYPE_F32 = 1, SSP_DTYPE_I32 = 2 } ssp_dtype;

typedef struct ssp_tensor ssp_tensor;
typedef struct ssp_config ssp_config;

SSP_API const char* ssp_version(void);
SSP_API const char* ssp_last_error(void);
SSP_API const char* ssp_status_name(ssp_status status);
/* Process exit code for a status: 0 ok, 2 config, 3 missing input, 4 numeric, 1 otherwise. */
SSP_API int ssp_exit_code(ssp_status status);

/* ---- SSPB tensors ---- */

SSP_API ssp_status ssp_tensor_read(const char* path, ssp_tensor** out);
SSP_API ssp_status ssp_tensor_decode(const void* bytes, size_t size, ssp_tensor** out);
SSP_API ssp_status ssp_tensor_create_f32(const uint32_t* dims, size_t ndim, const float* data, ssp_tensor** out);
SSP_API ssp_status ssp_tensor_create_i32(const uint32_t* dims, size_t ndim, const int32_t* data, ssp_tensor** out);
SSP_API ssp_status ssp_tensor_write(const ssp_tensor* t, const char* path);
SSP_API void ssp_tensor_free(ssp_tensor* t);
SSP_API ssp_dtype ssp_tensor_dtype(const ssp_tensor* t);
SSP_API size_t ssp_tensor_ndim(const ssp_tensor* t);
SSP_API uint32_t ssp_tensor_dim(const ssp_tensor* t, size_t axis);
SSP_API size_t ssp_tensor_count(const ssp_tensor* t);
/* NULL when the dtype does not match. */
SSP_API const float* ssp_tensor_f32(const ssp_tensor* t);
SSP_API const int32_t* ssp_tensor_i32(const ssp_tensor* t);

/* ---- numerics ---- */

/* Row-wise softmax of an n x k row-major matrix. */
SSP_API ssp_status ssp_softmax_rows(const double* logits, size_t n, size_t k, double* probs_out);

/* Detection metrics. `positive` holds 0/1 flags; higher scores mean "more positive". */
SSP_API ssp_status ssp_auroc(const double* scores, const uint8_t* positive, size_t n, double* out);
SSP_API ssp_status ssp_aupr(const double* scores, const uint8_t* positive, size_t n, double* out);
SSP_API ssp_status ssp_fpr_at_95_tpr(const double* scores, const uint8_t* positive, size_t n, double* out);

/* Calibration metrics over top-label confidences and 0/1 correctness. */
SSP_API ssp_status ssp_ece(const double* confidence, const uint8_t* correct, size_t n, size_t bins, double* out);
SSP_API ssp_status ssp_mce(const double* confidence, const uint8_t* correct, size_t n, size_t bins, double* out);
/* n x k probabilities with integer labels in [0, k). */
SSP_API ssp_status ssp_nll(const double* probs, const int32_t* labels, size_t n, size_t k, double* out);
SSP_API ssp_status ssp_brier(const double* probs, const int32_t* labels, size_t n, size_t k, double* out);

/* Image transforms on one c x h x w image; `out` must hold c*h*w floats. */
SSP_API ssp_status ssp_rotate_quarter(const float* img, size_t c, size_t h, size_t w, int quarter_turns, float* out);
SSP_API ssp_status ssp_translate_reflect(const float* img, size_t c, size_t h, size_t w, int dx, int dy, float* out);

/* ---- pipeline ---- */

SSP_API ssp_status ssp_config_default(ssp_config** out);
/* Defaults overlaid with the file at `path`. */
SSP_API ssp_status ssp_config_load(const char* path, ssp_config** out);
SSP_API ssp_status ssp_config_set(ssp_config* cfg, const char* key, const char* value);
/* Validates the configuration without running anything. */
SSP_API ssp_status ssp_config_check(const ssp_config* cfg);
SSP_API void ssp_config_free(ssp_config* cfg);
/* Default configuration as file text. The pointer stays valid for the process lifetime. */
SSP_API const char* ssp_config_default_text(void);

/* Runs a pipeline command: gen-data, train, eval-misclass, eval-ood, calibrate, ablate,
 * ingest, export or all. `export_dir` is only used by export and may be NULL otherwise. */
SSP_API ssp_status ssp_run(const ssp_config* cfg, const char* command, const char* export_dir);

/* Writes the 4x4 transform conformance pattern and its transforms as SSPB files. */
SSP_API ssp_status ssp_write_golden_transforms(const char* dir);

#ifdef __cplusplus
}
#endif

#endif /* SSP_SSP_H */
