#include <algorithm>

#include "core/rng.hpp"
#include "support.hpp"
#include "transforms/transforms.hpp"

using namespace ssp;
using namespace ssp::transforms;

namespace {

std::vector<float> random_image(Rng& rng, ImageShape s) {
  std::vector<float> img(s.size());
  for (float& v : img) v = static_cast<float>(rng.uniform());
  return img;
}

}  // namespace

TEST_CASE("rotate_quarter follows out[r][c] = in[c][W-1-r]") {
  const std::vector<float> img{1, 2, 3, 4};  // [[a,b],[c,d]]
  CHECK(rotate_quarter(img, {1, 2, 2}, 0) == img);
  CHECK(rotate_quarter(img, {1, 2, 2}, 1) == std::vector<float>{2, 4, 1, 3});
  CHECK(rotate_quarter(img, {1, 2, 2}, 2) == std::vector<float>{4, 3, 2, 1});
  CHECK(rotate_quarter(img, {1, 2, 2}, 3) == std::vector<float>{3, 1, 4, 2});
}

TEST_CASE("rotation group properties") {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const ImageShape s{1 + rng.below(3), 2 + rng.below(6), 0};
    const ImageShape sq{s.c, s.h, s.h};
    const auto img = random_image(rng, sq);
    auto x = img;
    for (int i = 0; i < 4; ++i) x = rotate_quarter(x, sq, 1);
    CHECK(x == img);
    for (int k = 0; k < 4; ++k) {
      CHECK(rotate_quarter(rotate_quarter(img, sq, k), sq, (4 - k) % 4) == img);
    }
  }
  SUBCASE("channels rotate independently") {
    const std::vector<float> img{1, 2, 3, 4, 5, 6, 7, 8};
    CHECK(rotate_quarter(img, {2, 2, 2}, 1) == std::vector<float>{2, 4, 1, 3, 6, 8, 5, 7});
  }
  SUBCASE("half turn of a non-square image is allowed, odd turns are not") {
    const std::vector<float> img{1, 2, 3, 4, 5, 6};
    CHECK(rotate_quarter(img, {1, 2, 3}, 2) == std::vector<float>{6, 5, 4, 3, 2, 1});
    CHECK_ERROR_CODE(rotate_quarter(img, {1, 2, 3}, 1), ErrorCode::invalid_input);
    CHECK_ERROR_CODE(rotate_quarter(img, {1, 2, 3}, 4), ErrorCode::invalid_input);
  }
}

TEST_CASE("translate_reflect mirrors without repeating the edge") {
  const std::vector<float> row{1, 2, 3};
  CHECK(translate_reflect(row, {1, 1, 3}, 0, 0) == row);
  CHECK(translate_reflect(row, {1, 1, 3}, 1, 0) == std::vector<float>{2, 1, 2});
  CHECK(translate_reflect(row, {1, 1, 3}, -1, 0) == std::vector<float>{2, 3, 2});
  CHECK(translate_reflect(row, {1, 3, 1}, 0, 1) == std::vector<float>{2, 1, 2});
  CHECK_ERROR_CODE(translate_reflect(row, {1, 1, 3}, 3, 0), ErrorCode::invalid_input);
  CHECK_ERROR_CODE(translate_reflect(row, {1, 1, 3}, 0, 1), ErrorCode::invalid_input);
}

TEST_CASE("translate_reflect agrees with the per-axis index rule") {
  Rng rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const ImageShape s{1 + rng.below(2), 2 + rng.below(9), 2 + rng.below(9)};
    const auto img = random_image(rng, s);
    const int dx = static_cast<int>(rng.below(2 * s.w - 1)) - static_cast<int>(s.w - 1);
    const int dy = static_cast<int>(rng.below(2 * s.h - 1)) - static_cast<int>(s.h - 1);
    const auto out = translate_reflect(img, s, dx, dy);
    const long H = static_cast<long>(s.h), W = static_cast<long>(s.w);
    auto refl = [](long i, long n) { return i < 0 ? -i : (i >= n ? 2 * n - 2 - i : i); };
    bool same = true;
    for (std::size_t ch = 0; ch < s.c; ++ch) {
      for (long r = 0; r < H; ++r) {
        for (long c = 0; c < W; ++c) {
          const float want = img[(ch * H + refl(r - dy, H)) * W + refl(c - dx, W)];
          same = same && out[(ch * H + r) * W + c] == want;
        }
      }
    }
    CHECK(same);
    const auto [lo, hi] = std::minmax_element(img.begin(), img.end());
    CHECK(*std::min_element(out.begin(), out.end()) >= *lo);
    CHECK(*std::max_element(out.begin(), out.end()) <= *hi);
  }
}

TEST_CASE("probing task parsing and validation") {
  const auto rot = default_rotation_task();
  CHECK(rot.size() == 4);
  CHECK(rot.spec_string() == "0,90,180,270");
  const auto tr = default_translation_task();
  CHECK(tr.size() == 5);
  CHECK(tr.spec_string() == "0:0,-8:0,8:0,0:-8,0:8");
  CHECK(parse_rotation_task("r", "0,180").transforms[1] == Transform::rotation(2));
  CHECK(parse_translation_task("t", "0:0,3:-2").transforms[1] == Transform::translation(3, -2));
  CHECK_ERROR_CODE(parse_rotation_task("r", "90,0"), ErrorCode::invalid_input);
  CHECK_ERROR_CODE(parse_rotation_task("r", "0"), ErrorCode::invalid_input);
  CHECK_ERROR_CODE(parse_rotation_task("r", "0,45"), ErrorCode::invalid_input);
  CHECK_ERROR_CODE(parse_rotation_task("r", "0,90,90"), ErrorCode::invalid_input);
  CHECK_ERROR_CODE(parse_translation_task("t", "0:0,1"), ErrorCode::invalid_input);
  CHECK_ERROR_CODE(parse_translation_task("t", "0:0,x:1"), ErrorCode::invalid_input);
}

TEST_CASE("apply_task emits sample-major copies") {
  ImageBatch b(3, 1, 2, 2);
  for (std::size_t i = 0; i < b.data.size(); ++i) b.data[i] = static_cast<float>(i) / 12.0f;
  const auto task = parse_rotation_task("r", "0,90");
  const auto [out, labels] = apply_task(b, task);
  CHECK(out.n == 6);
  CHECK(labels == std::vector<int>{0, 1, 0, 1, 0, 1});
  for (std::size_t i = 0; i < 3; ++i) {
    const auto orig = b.image(i);
    CHECK(std::equal(orig.begin(), orig.end(), out.image(2 * i).begin()));
    const auto turned = rotate_quarter(orig, {1, 2, 2}, 1);
    CHECK(std::equal(turned.begin(), turned.end(), out.image(2 * i + 1).begin()));
  }
  ImageBatch big(2, 1, 32, 32);
  const auto [rot_out, rot_labels] = apply_task(big, default_rotation_task());
  CHECK(rot_out.n == 8);
  const auto [tr_out, tr_labels] = apply_task(big, default_translation_task());
  CHECK(tr_out.n == 10);
  CHECK(tr_labels == std::vector<int>{0, 1, 2, 3, 4, 0, 1, 2, 3, 4});
}
