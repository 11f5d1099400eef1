#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "core/error.hpp"

namespace ssp {

/// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    require(data_.size() == rows_ * cols_, "matrix data length does not match shape");
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::vector<double>& values() noexcept { return data_; }
  const std::vector<double>& values() const noexcept { return data_; }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Distinct matrix roles. Conversions toward Matrix are implicit, the reverse is explicit.
struct EmbeddingMatrix : Matrix {
  EmbeddingMatrix() = default;
  using Matrix::Matrix;
  explicit EmbeddingMatrix(Matrix m) : Matrix(std::move(m)) {}
};

struct LogitMatrix : Matrix {
  LogitMatrix() = default;
  using Matrix::Matrix;
  explicit LogitMatrix(Matrix m) : Matrix(std::move(m)) {}
};

/// Rows are probability distributions.
struct ProbMatrix : Matrix {
  ProbMatrix() = default;
  using Matrix::Matrix;
  explicit ProbMatrix(Matrix m) : Matrix(std::move(m)) {}
};

using ScoreVector = std::vector<double>;

/// N x C x H x W intensities in [0,1], stored as 32-bit floats.
struct ImageBatch {
  std::size_t n = 0, c = 0, h = 0, w = 0;
  std::vector<float> data;

  ImageBatch() = default;
  ImageBatch(std::size_t n_, std::size_t c_, std::size_t h_, std::size_t w_)
      : n(n_), c(c_), h(h_), w(w_), data(n_ * c_ * h_ * w_, 0.0f) {}

  std::size_t image_size() const noexcept { return c * h * w; }
  std::span<float> image(std::size_t i) { return {data.data() + i * image_size(), image_size()}; }
  std::span<const float> image(std::size_t i) const {
    return {data.data() + i * image_size(), image_size()};
  }

  bool operator==(const ImageBatch&) const = default;
};

/// Throws invalid_input when the batch breaks its value or shape invariants.
void validate(const ImageBatch& batch);

struct LabelVector {
  std::vector<std::int32_t> labels;
  int num_classes = 0;

  std::size_t size() const noexcept { return labels.size(); }
  bool operator==(const LabelVector&) const = default;
};

void validate(const LabelVector& labels);

/// Rounds every entry to the nearest 32-bit float, the precision of persisted tensors.
void quantize_f32(Matrix& m);

}  // namespace ssp
