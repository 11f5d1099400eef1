#include "transforms/transforms.hpp"

#include <charconv>
#include <cstdlib>

namespace ssp::transforms {
namespace {

int parse_int(std::string_view s, const std::string& context) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  int v = 0;
  const auto* first = s.data();
  if (!s.empty() && s.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
    fail(ErrorCode::invalid_input, "cannot parse integer '" + std::string(s) + "' in " + context);
  }
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

}  // namespace

std::string Transform::to_string() const {
  if (kind == Kind::rotate) return std::to_string(rotate.quarter_turns * 90);
  return std::to_string(translate.dx) + ":" + std::to_string(translate.dy);
}

std::string ProbingTask::spec_string() const {
  std::string s;
  for (std::size_t i = 0; i < transforms.size(); ++i) {
    if (i) s += ',';
    s += transforms[i].to_string();
  }
  return s;
}

void validate(const ProbingTask& task) {
  require(task.transforms.size() >= 2, "probing task '" + task.name + "' needs at least two transforms");
  require(task.transforms.front().is_identity(),
          "probing task '" + task.name + "' must list the identity transform first");
  for (std::size_t i = 0; i < task.transforms.size(); ++i) {
    const auto& t = task.transforms[i];
    if (t.kind == Transform::Kind::rotate) {
      require(t.rotate.quarter_turns >= 0 && t.rotate.quarter_turns <= 3, "rotation must be 0..3 quarter turns");
    }
    for (std::size_t j = 0; j < i; ++j) {
      require(!(task.transforms[j] == t), "probing task '" + task.name + "' repeats transform " + t.to_string());
    }
  }
}

ProbingTask parse_rotation_task(const std::string& name, const std::string& text) {
  ProbingTask task{name, {}};
  for (auto part : split(text, ',')) {
    const int deg = parse_int(part, "rotation list '" + text + "'");
    require(deg >= 0 && deg < 360 && deg % 90 == 0,
            "rotation degrees must be one of 0, 90, 180, 270 (got " + std::to_string(deg) + ")");
    task.transforms.push_back(Transform::rotation(deg / 90));
  }
  validate(task);
  return task;
}

ProbingTask parse_translation_task(const std::string& name, const std::string& text) {
  ProbingTask task{name, {}};
  for (auto part : split(text, ',')) {
    const auto xy = split(part, ':');
    require(xy.size() == 2, "translation entries must be dx:dy (got '" + std::string(part) + "')");
    task.transforms.push_back(Transform::translation(parse_int(xy[0], "translation list '" + text + "'"),
                                                     parse_int(xy[1], "translation list '" + text + "'")));
  }
  validate(task);
  return task;
}

ProbingTask default_rotation_task() { return parse_rotation_task("rotation", "0,90,180,270"); }

ProbingTask default_translation_task() { return parse_translation_task("translation", "0:0,-8:0,8:0,0:-8,0:8"); }

std::vector<float> rotate_quarter(std::span<const float> img, ImageShape shape, int quarter_turns) {
  require(img.size() == shape.size(), "rotate_quarter: image length does not match shape");
  require(quarter_turns >= 0 && quarter_turns <= 3, "rotate_quarter: k must be in 0..3");
  require(quarter_turns % 2 == 0 || shape.h == shape.w, "rotate_quarter: odd quarter turns need a square image");
  const std::size_t H = shape.h, W = shape.w, plane = H * W;
  std::vector<float> out(img.size());
  for (std::size_t ch = 0; ch < shape.c; ++ch) {
    const float* in = img.data() + ch * plane;
    float* dst = out.data() + ch * plane;
    for (std::size_t r = 0; r < H; ++r) {
      for (std::size_t c = 0; c < W; ++c) {
        float v = 0.0f;
        switch (quarter_turns) {
          case 0: v = in[r * W + c]; break;
          case 1: v = in[c * W + (W - 1 - r)]; break;
          case 2: v = in[(H - 1 - r) * W + (W - 1 - c)]; break;
          case 3: v = in[(H - 1 - c) * W + r]; break;
        }
        dst[r * W + c] = v;
      }
    }
  }
  return out;
}

std::vector<float> translate_reflect(std::span<const float> img, ImageShape shape, int dx, int dy) {
  require(img.size() == shape.size(), "translate_reflect: image length does not match shape");
  const long H = static_cast<long>(shape.h), W = static_cast<long>(shape.w);
  require(std::labs(dx) < W && std::labs(dy) < H, "translate_reflect: shift magnitude must be below the image size");
  const std::size_t plane = shape.h * shape.w;
  std::vector<float> out(img.size());
  for (std::size_t ch = 0; ch < shape.c; ++ch) {
    const float* in = img.data() + ch * plane;
    float* dst = out.data() + ch * plane;
    for (long r = 0; r < H; ++r) {
      const long sr = reflect_index(r - dy, H);
      for (long c = 0; c < W; ++c) {
        dst[r * W + c] = in[sr * W + reflect_index(c - dx, W)];
      }
    }
  }
  return out;
}

std::vector<float> apply(const Transform& t, std::span<const float> img, ImageShape shape) {
  if (t.kind == Transform::Kind::rotate) return rotate_quarter(img, shape, t.rotate.quarter_turns);
  return translate_reflect(img, shape, t.translate.dx, t.translate.dy);
}

std::pair<ImageBatch, std::vector<int>> apply_task(const ImageBatch& batch, const ProbingTask& task) {
  validate(task);
  const ImageShape shape{batch.c, batch.h, batch.w};
  require(batch.data.size() == batch.n * shape.size(), "apply_task: batch data length does not match shape");
  const std::size_t k = task.size();
  ImageBatch out(batch.n * k, batch.c, batch.h, batch.w);
  std::vector<int> labels(batch.n * k);
  for (std::size_t i = 0; i < batch.n; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      const auto img = apply(task.transforms[j], batch.image(i), shape);
      std::copy(img.begin(), img.end(), out.image(i * k + j).begin());
      labels[i * k + j] = static_cast<int>(j);
    }
  }
  return {std::move(out), std::move(labels)};
}

}  // namespace ssp::transforms
