#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "core/types.hpp"

namespace ssp::transforms {

/// Shape of one image plane stack.
struct ImageShape {
  std::size_t c = 1, h = 0, w = 0;
  std::size_t size() const noexcept { return c * h * w; }
};

struct Rotate {
  int quarter_turns = 0;  // counterclockwise, 0..3
  bool operator==(const Rotate&) const = default;
};

struct Translate {
  int dx = 0;  // positive moves content toward larger column index
  int dy = 0;  // positive moves content toward larger row index
  bool operator==(const Translate&) const = default;
};

struct Transform {
  enum class Kind { rotate, translate } kind = Kind::rotate;
  Rotate rotate{};
  Translate translate{};

  static Transform rotation(int quarter_turns) { return {Kind::rotate, {quarter_turns}, {}}; }
  static Transform translation(int dx, int dy) { return {Kind::translate, {}, {dx, dy}}; }

  bool is_identity() const noexcept {
    return kind == Kind::rotate ? rotate.quarter_turns == 0 : (translate.dx == 0 && translate.dy == 0);
  }
  /// "90" for rotations (degrees), "-8:0" for translations.
  std::string to_string() const;
  bool operator==(const Transform&) const = default;
};

struct ProbingTask {
  std::string name;
  std::vector<Transform> transforms;

  std::size_t size() const noexcept { return transforms.size(); }
  /// Comma-joined transform strings, the form used in config and manifest files.
  std::string spec_string() const;
};

/// Throws invalid_input unless transforms[0] is the identity, there are >= 2, and all are distinct.
void validate(const ProbingTask& task);

/// Parses "0,90,180,270" (multiples of 90 degrees).
ProbingTask parse_rotation_task(const std::string& name, const std::string& text);
/// Parses "0:0,-8:0,8:0" (dx:dy pairs).
ProbingTask parse_translation_task(const std::string& name, const std::string& text);

ProbingTask default_rotation_task();
ProbingTask default_translation_task();

/// Counterclockwise quarter turns: for k = 1, out[r][c] = in[c][W-1-r].
std::vector<float> rotate_quarter(std::span<const float> img, ImageShape shape, int quarter_turns);

/// Integer shift with mirror padding that does not repeat the border pixel.
std::vector<float> translate_reflect(std::span<const float> img, ImageShape shape, int dx, int dy);

std::vector<float> apply(const Transform& t, std::span<const float> img, ImageShape shape);

/// Returns N * k images ordered sample-major with transform-index labels.
std::pair<ImageBatch, std::vector<int>> apply_task(const ImageBatch& batch, const ProbingTask& task);

/// Reflected source index for an out-of-range coordinate along an axis of length n.
inline long reflect_index(long i, long n) {
  if (i < 0) return -i;
  if (i >= n) return 2 * n - 2 - i;
  return i;
}

}  // namespace ssp::transforms
