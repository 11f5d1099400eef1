#include "ssp/ssp.h"

#include <new>
#include <span>
#include <string>

#include "core/softmax.hpp"
#include "core/sspb.hpp"
#include "metrics/metrics.hpp"
#include "pipeline/stages.hpp"
#include "transforms/transforms.hpp"

struct ssp_tensor {
  ssp::Tensor value;
};

struct ssp_config {
  ssp::pipeline::ConfigText text;
};

namespace {

thread_local std::string g_last_error;

ssp_status status_of(ssp::ErrorCode code) { return static_cast<ssp_status>(static_cast<int>(code)); }

template <class F>
ssp_status guarded(F&& body) {
  g_last_error.clear();
  try {
    body();
    return SSP_OK;
  } catch (const ssp::Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return SSP_ERR_INTERNAL;
  } catch (const std::filesystem::filesystem_error& e) {
    g_last_error = e.what();
    return SSP_ERR_IO;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SSP_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return SSP_ERR_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  if (!p) ssp::fail(ssp::ErrorCode::invalid_input, std::string(what) + " must not be NULL");
}

ssp::Matrix matrix_of(const double* data, std::size_t n, std::size_t k) {
  need(data, "matrix data");
  return ssp::Matrix(n, k, std::vector<double>(data, data + n * k));
}

ssp::LabelVector labels_of(const int32_t* labels, std::size_t n, std::size_t k) {
  need(labels, "labels");
  ssp::LabelVector l{std::vector<int32_t>(labels, labels + n), static_cast<int>(k)};
  ssp::validate(l);
  return l;
}

template <class T>
ssp_status create(const uint32_t* dims, size_t ndim, const T* data, ssp_tensor** out) {
  return guarded([&] {
    need(out, "out");
    need(dims, "dims");
    ssp::Tensor t;
    t.dims.assign(dims, dims + ndim);
    std::size_t count = 1;
    for (auto d : t.dims) count *= d;
    if (count) need(data, "data");
    t.data = std::vector<T>(data, data + count);
    *out = new ssp_tensor{std::move(t)};
  });
}

}  // namespace

extern "C" {

const char* ssp_version(void) { return "1.0.0"; }

const char* ssp_last_error(void) { return g_last_error.c_str(); }

const char* ssp_status_name(ssp_status status) {
  switch (status) {
    case SSP_OK: return "ok";
    case SSP_ERR_INVALID_INPUT: return "invalid_input";
    case SSP_ERR_BAD_MAGIC: return "bad_magic";
    case SSP_ERR_UNSUPPORTED_VERSION: return "unsupported_version";
    case SSP_ERR_UNSUPPORTED_DTYPE: return "unsupported_dtype";
    case SSP_ERR_TRUNCATED: return "truncated";
    case SSP_ERR_IO: return "io";
    case SSP_ERR_UNDEFINED_METRIC: return "undefined_metric";
    case SSP_ERR_CONFIG: return "config";
    case SSP_ERR_MISSING_INPUT: return "missing_input";
    case SSP_ERR_NUMERIC: return "numeric";
    case SSP_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

int ssp_exit_code(ssp_status status) {
  switch (status) {
    case SSP_OK: return 0;
    case SSP_ERR_CONFIG: return 2;
    case SSP_ERR_MISSING_INPUT: return 3;
    case SSP_ERR_NUMERIC: return 4;
    default: return 1;
  }
}

ssp_status ssp_tensor_read(const char* path, ssp_tensor** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = new ssp_tensor{ssp::read_tensor(path)};
  });
}

ssp_status ssp_tensor_decode(const void* bytes, size_t size, ssp_tensor** out) {
  return guarded([&] {
    need(out, "out");
    if (size) need(bytes, "bytes");
    std::span<const std::byte> view(static_cast<const std::byte*>(bytes), size);
    std::size_t used = 0;
    auto t = ssp::decode_tensor(view, &used);
    if (used != size) {
      ssp::fail(ssp::ErrorCode::invalid_input,
                std::to_string(size - used) + " trailing bytes after tensor payload");
    }
    *out = new ssp_tensor{std::move(t)};
  });
}

ssp_status ssp_tensor_create_f32(const uint32_t* dims, size_t ndim, const float* data, ssp_tensor** out) {
  return create(dims, ndim, data, out);
}

ssp_status ssp_tensor_create_i32(const uint32_t* dims, size_t ndim, const int32_t* data, ssp_tensor** out) {
  return create(dims, ndim, data, out);
}

ssp_status ssp_tensor_write(const ssp_tensor* t, const char* path) {
  return guarded([&] {
    need(t, "tensor");
    need(path, "path");
    ssp::write_tensor(path, t->value);
  });
}

void ssp_tensor_free(ssp_tensor* t) { delete t; }

ssp_dtype ssp_tensor_dtype(const ssp_tensor* t) {
  return t && t->value.dtype() == ssp::DType::i32 ? SSP_DTYPE_I32 : SSP_DTYPE_F32;
}

size_t ssp_tensor_ndim(const ssp_tensor* t) { return t ? t->value.dims.size() : 0; }

uint32_t ssp_tensor_dim(const ssp_tensor* t, size_t axis) {
  return t && axis < t->value.dims.size() ? t->value.dims[axis] : 0;
}

size_t ssp_tensor_count(const ssp_tensor* t) { return t ? t->value.element_count() : 0; }

const float* ssp_tensor_f32(const ssp_tensor* t) {
  return t && t->value.dtype() == ssp::DType::f32 ? t->value.f32().data() : nullptr;
}

const int32_t* ssp_tensor_i32(const ssp_tensor* t) {
  return t && t->value.dtype() == ssp::DType::i32 ? t->value.i32().data() : nullptr;
}

ssp_status ssp_softmax_rows(const double* logits, size_t n, size_t k, double* probs_out) {
  return guarded([&] {
    need(probs_out, "probs_out");
    const auto probs = ssp::softmax_rows(ssp::LogitMatrix(matrix_of(logits, n, k)));
    std::copy(probs.values().begin(), probs.values().end(), probs_out);
  });
}

#define SSP_DETECTION_METRIC(fn, impl)                                                   \
  ssp_status fn(const double* scores, const uint8_t* positive, size_t n, double* out) { \
    return guarded([&] {                                                               \
      need(scores, "scores");                                                          \
      need(positive, "positive");                                                      \
      need(out, "out");                                                                \
      *out = impl(std::span<const double>(scores, n), std::span<const uint8_t>(positive, n)); \
    });                                                                                \
  }

SSP_DETECTION_METRIC(ssp_auroc, ssp::metrics::auroc)
SSP_DETECTION_METRIC(ssp_aupr, ssp::metrics::aupr)
SSP_DETECTION_METRIC(ssp_fpr_at_95_tpr, ssp::metrics::fpr_at_95_tpr)

ssp_status ssp_ece(const double* confidence, const uint8_t* correct, size_t n, size_t bins, double* out) {
  return guarded([&] {
    need(confidence, "confidence");
    need(correct, "correct");
    need(out, "out");
    *out = ssp::metrics::ece({confidence, n}, {correct, n}, bins);
  });
}

ssp_status ssp_mce(const double* confidence, const uint8_t* correct, size_t n, size_t bins, double* out) {
  return guarded([&] {
    need(confidence, "confidence");
    need(correct, "correct");
    need(out, "out");
    *out = ssp::metrics::mce({confidence, n}, {correct, n}, bins);
  });
}

ssp_status ssp_nll(const double* probs, const int32_t* labels, size_t n, size_t k, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = ssp::metrics::nll(ssp::ProbMatrix(matrix_of(probs, n, k)), labels_of(labels, n, k));
  });
}

ssp_status ssp_brier(const double* probs, const int32_t* labels, size_t n, size_t k, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = ssp::metrics::brier(ssp::ProbMatrix(matrix_of(probs, n, k)), labels_of(labels, n, k));
  });
}

ssp_status ssp_rotate_quarter(const float* img, size_t c, size_t h, size_t w, int quarter_turns, float* out) {
  return guarded([&] {
    need(img, "img");
    need(out, "out");
    const auto r = ssp::transforms::rotate_quarter({img, c * h * w}, {c, h, w}, quarter_turns);
    std::copy(r.begin(), r.end(), out);
  });
}

ssp_status ssp_translate_reflect(const float* img, size_t c, size_t h, size_t w, int dx, int dy, float* out) {
  return guarded([&] {
    need(img, "img");
    need(out, "out");
    const auto r = ssp::transforms::translate_reflect({img, c * h * w}, {c, h, w}, dx, dy);
    std::copy(r.begin(), r.end(), out);
  });
}

ssp_status ssp_config_default(ssp_config** out) {
  return guarded([&] {
    need(out, "out");
    *out = new ssp_config{ssp::pipeline::ConfigText::defaults()};
  });
}

ssp_status ssp_config_load(const char* path, ssp_config** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = new ssp_config{ssp::pipeline::ConfigText::load(path)};
  });
}

ssp_status ssp_config_set(ssp_config* cfg, const char* key, const char* value) {
  return guarded([&] {
    need(cfg, "config");
    need(key, "key");
    need(value, "value");
    cfg->text.set(key, value);
  });
}

ssp_status ssp_config_check(const ssp_config* cfg) {
  return guarded([&] {
    need(cfg, "config");
    (void)cfg->text.resolve();
  });
}

void ssp_config_free(ssp_config* cfg) { delete cfg; }

const char* ssp_config_default_text(void) {
  static const std::string text = ssp::pipeline::default_config_text();
  return text.c_str();
}

ssp_status ssp_run(const ssp_config* cfg, const char* command, const char* export_dir) {
  return guarded([&] {
    need(cfg, "config");
    need(command, "command");
    const auto cmd = ssp::pipeline::parse_command(command);
    if (!cmd) ssp::fail(ssp::ErrorCode::config, std::string("unknown command '") + command + "'");
    const auto resolved = cfg->text.resolve();
    ssp::pipeline::run_command(resolved, *cmd, export_dir ? std::filesystem::path(export_dir) : std::filesystem::path{});
  });
}

ssp_status ssp_write_golden_transforms(const char* dir) {
  return guarded([&] {
    need(dir, "dir");
    ssp::pipeline::write_golden_transforms(dir);
  });
}

}  // extern "C"
