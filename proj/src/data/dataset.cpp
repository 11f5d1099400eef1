#include "data/dataset.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "core/rng.hpp"

namespace ssp::data {
namespace {

enum Segment : SegmentMask { A = 1, B = 2, C = 4, D = 8, E = 16, F = 32, G = 64 };

constexpr std::array<SegmentMask, kNumDigits> kDigits = {
    A | B | C | D | E | F,      // 0
    B | C,                      // 1
    A | B | D | E | G,          // 2
    A | B | C | D | G,          // 3
    B | C | F | G,              // 4
    A | C | D | F | G,          // 5
    A | C | D | E | F | G,      // 6
    A | B | C,                  // 7
    A | B | C | D | E | F | G,  // 8
    A | B | C | F | G,          // 9 (no tail: keeps 6 and 9 apart under a half turn)
};

constexpr std::array<SegmentMask, kNumGlyphs> kGlyphs = {
    A | B | C | E | F | G,  // A
    A | D | E | F,          // C
    A | D | E | F | G,      // E
    A | E | F | G,          // F
    B | C | E | F | G,      // H
    A | B | E | F | G,      // P
};
constexpr std::array<char, kNumGlyphs> kGlyphNames = {'A', 'C', 'E', 'F', 'H', 'P'};

// Digit box 14 wide x 24 tall, centered; segments 3 px thick.
constexpr int kBoxW = 14, kBoxH = 24, kThick = 3;
constexpr int kLeft = (static_cast<int>(kCanvas) - kBoxW) / 2;
constexpr int kTop = (static_cast<int>(kCanvas) - kBoxH) / 2;
constexpr int kMid = kTop + kBoxH / 2 - kThick / 2 - 1;  // first row of segment G

struct Rect {
  int r0, r1, c0, c1;  // half-open
};

constexpr std::array<Rect, 7> kSegmentRects = {{
    {kTop, kTop + kThick, kLeft, kLeft + kBoxW},                                 // A
    {kTop, kMid + kThick, kLeft + kBoxW - kThick, kLeft + kBoxW},                // B
    {kMid, kTop + kBoxH, kLeft + kBoxW - kThick, kLeft + kBoxW},                 // C
    {kTop + kBoxH - kThick, kTop + kBoxH, kLeft, kLeft + kBoxW},                 // D
    {kMid, kTop + kBoxH, kLeft, kLeft + kThick},                                 // E
    {kTop, kMid + kThick, kLeft, kLeft + kThick},                                // F
    {kMid, kMid + kThick, kLeft, kLeft + kBoxW},                                 // G
}};

constexpr std::uint64_t split_tag(Split s) {
  switch (s) {
    case Split::train: return 0x7472A1B3C4D5E6F7ULL;
    case Split::val: return 0x76616C0F1E2D3C4BULL;
    case Split::test: return 0x7465737489ABCDEFULL;
  }
  return 0;
}

constexpr std::uint64_t kOodTag = 0x6F6F64DEADBEEF01ULL;

void paint(std::vector<float>& img, SegmentMask mask, int jx, int jy) {
  const int n = static_cast<int>(kCanvas);
  for (int s = 0; s < 7; ++s) {
    if (!(mask & (1u << s))) continue;
    const Rect& rc = kSegmentRects[s];
    for (int r = rc.r0 + jy; r < rc.r1 + jy; ++r) {
      if (r < 0 || r >= n) continue;
      for (int c = rc.c0 + jx; c < rc.c1 + jx; ++c) {
        if (c < 0 || c >= n) continue;
        img[r * n + c] = 1.0f;
      }
    }
  }
}

Dataset generate(const GenConfig& cfg, Split split, std::uint64_t family_tag, std::span<const SegmentMask> masks) {
  validate(cfg);
  const std::size_t k = masks.size();
  const std::size_t n = cfg.n_per_class * k;
  Dataset ds;
  ds.split = split;
  ds.images = ImageBatch(n, 1, kCanvas, kCanvas);
  ds.labels.num_classes = static_cast<int>(k);
  ds.labels.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto cls = static_cast<int>(i % k);
    const std::uint64_t stream = cfg.seed ^ split_tag(split) ^ family_tag ^ static_cast<std::uint64_t>(i);
    const auto img = render_sample(masks[cls], cfg, stream);
    std::copy(img.begin(), img.end(), ds.images.image(i).begin());
    ds.labels.labels[i] = cls;
  }
  return ds;
}

}  // namespace

const char* split_name(Split s) {
  switch (s) {
    case Split::train: return "train";
    case Split::val: return "val";
    case Split::test: return "test";
  }
  return "?";
}

void validate(const GenConfig& cfg) {
  require(cfg.n_per_class >= 1, "n_per_class must be at least 1");
  require(cfg.noise_sigma >= 0.0 && cfg.noise_sigma <= 1.0, "noise_sigma must lie in [0,1]");
  require(cfg.jitter_px >= 0 && cfg.jitter_px <= 6, "jitter_px must lie in [0,6]");
}

SegmentMask digit_segments(int digit) {
  require(digit >= 0 && digit < kNumDigits, "digit out of range");
  return kDigits[digit];
}

SegmentMask glyph_segments(int glyph) {
  require(glyph >= 0 && glyph < kNumGlyphs, "glyph out of range");
  return kGlyphs[glyph];
}

char glyph_name(int glyph) {
  require(glyph >= 0 && glyph < kNumGlyphs, "glyph out of range");
  return kGlyphNames[glyph];
}

std::vector<float> render_template(SegmentMask mask) {
  std::vector<float> img(kCanvas * kCanvas, 0.0f);
  paint(img, mask, 0, 0);
  return img;
}

std::vector<float> render_sample(SegmentMask mask, const GenConfig& cfg, std::uint64_t stream_seed) {
  Rng rng(stream_seed);
  const auto span = static_cast<std::uint64_t>(2 * cfg.jitter_px + 1);
  const int jx = static_cast<int>(rng.below(span)) - cfg.jitter_px;
  const int jy = static_cast<int>(rng.below(span)) - cfg.jitter_px;
  std::vector<float> img(kCanvas * kCanvas, 0.0f);
  paint(img, mask, jx, jy);
  if (cfg.noise_sigma > 0.0) {
    for (float& v : img) {
      const double noisy = static_cast<double>(v) + cfg.noise_sigma * rng.normal();
      v = static_cast<float>(std::clamp(noisy, 0.0, 1.0));
    }
  }
  return img;
}

Dataset generate_id_dataset(const GenConfig& cfg, Split split) {
  return generate(cfg, split, 0, kDigits);
}

Dataset generate_ood_dataset(const GenConfig& cfg, Split split) {
  return generate(cfg, split, kOodTag, kGlyphs);
}

std::pair<Dataset, Dataset> carve_validation(const Dataset& train, double fraction) {
  require(fraction > 0.0 && fraction < 1.0, "validation fraction must lie in (0,1)");
  const int k = train.labels.num_classes;
  std::vector<std::size_t> per_class(k, 0);
  for (auto y : train.labels.labels) ++per_class[y];
  std::vector<std::size_t> keep_count(k);
  for (int c = 0; c < k; ++c) {
    const auto carved = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(per_class[c])));
    require(carved >= 1 && carved < per_class[c], "validation fraction leaves an empty split for some class");
    keep_count[c] = per_class[c] - carved;
  }

  std::vector<std::size_t> keep, carve;
  std::vector<std::size_t> seen(k, 0);
  for (std::size_t i = 0; i < train.labels.size(); ++i) {
    const auto y = train.labels.labels[i];
    (seen[y]++ < keep_count[y] ? keep : carve).push_back(i);
  }

  auto take = [&](const std::vector<std::size_t>& idx, Split split) {
    Dataset d;
    d.split = split;
    d.images = ImageBatch(idx.size(), train.images.c, train.images.h, train.images.w);
    d.labels.num_classes = k;
    for (std::size_t j = 0; j < idx.size(); ++j) {
      const auto src = train.images.image(idx[j]);
      std::copy(src.begin(), src.end(), d.images.image(j).begin());
      d.labels.labels.push_back(train.labels.labels[idx[j]]);
    }
    return d;
  };
  return {take(keep, Split::train), take(carve, Split::val)};
}

}  // namespace ssp::data
