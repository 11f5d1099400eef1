#include "core/types.hpp"

#include <cmath>

namespace ssp {

void validate(const ImageBatch& batch) {
  require(batch.n >= 1, "image batch must hold at least one image");
  require(batch.c == 1 || batch.c == 3, "image batch must have 1 or 3 channels");
  require(batch.h >= 1 && batch.w >= 1, "image batch has an empty spatial extent");
  require(batch.data.size() == batch.n * batch.image_size(), "image batch data length does not match shape");
  for (float v : batch.data) {
    require(std::isfinite(v) && v >= 0.0f && v <= 1.0f, "image intensities must be finite and within [0,1]");
  }
}

void validate(const LabelVector& labels) {
  require(labels.num_classes >= 2, "label vector needs at least two classes");
  for (auto y : labels.labels) {
    require(y >= 0 && y < labels.num_classes, "label out of range");
  }
}

void quantize_f32(Matrix& m) {
  for (double& v : m.values()) v = static_cast<double>(static_cast<float>(v));
}

}  // namespace ssp
