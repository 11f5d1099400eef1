#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/types.hpp"

namespace ssp::data {

enum class Split { train, val, test };

const char* split_name(Split s);

struct GenConfig {
  std::uint64_t seed = 1;
  std::size_t n_per_class = 200;
  double noise_sigma = 0.3;
  int jitter_px = 4;
};

void validate(const GenConfig& cfg);

struct Dataset {
  ImageBatch images;
  LabelVector labels;
  Split split = Split::train;
};

inline constexpr std::size_t kCanvas = 32;
inline constexpr int kNumDigits = 10;
inline constexpr int kNumGlyphs = 6;

/// Seven-segment bitmask, bit 0 = segment A ... bit 6 = segment G.
using SegmentMask = std::uint8_t;

/// Standard encodings for the digits 0-9.
SegmentMask digit_segments(int digit);
/// Encodings for the non-digit glyphs A, C, E, F, H, P, in that order.
SegmentMask glyph_segments(int glyph);
char glyph_name(int glyph);

/// Noiseless, unjittered 32x32 rendering of a segment mask.
std::vector<float> render_template(SegmentMask mask);

/// Renders `mask` at a random jitter with Gaussian noise. The jitter and noise come from `stream_seed`.
std::vector<float> render_sample(SegmentMask mask, const GenConfig& cfg, std::uint64_t stream_seed);

/// Ten digit classes, n_per_class each, interleaved by class (sample i has class i % 10).
Dataset generate_id_dataset(const GenConfig& cfg, Split split);
/// Six non-digit glyphs, n_per_class each.
Dataset generate_ood_dataset(const GenConfig& cfg, Split split);

/// Moves the last round(fraction * count) samples of every class into a second dataset.
/// Returns {remaining, carved}; both stay class balanced.
std::pair<Dataset, Dataset> carve_validation(const Dataset& train, double fraction);

}  // namespace ssp::data
