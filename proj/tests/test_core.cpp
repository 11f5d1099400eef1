#include <cmath>
#include <cstring>
#include <numeric>

#include "core/hash.hpp"
#include "core/rng.hpp"
#include "core/softmax.hpp"
#include "core/sspb.hpp"
#include "support.hpp"

using namespace ssp;

TEST_CASE("splitmix64 matches the reference sequence for seed 0") {
  Rng rng(0);
  CHECK(rng.next() == 0xE220A8397B1DCDAFULL);
  CHECK(rng.next() == 0x6E789E6AA1B965F4ULL);
  CHECK(rng.next() == 0x06C45D188009454FULL);
}

TEST_CASE("rng draws stay in range and normal draws have unit moments") {
  Rng rng(42);
  double sum = 0, sq = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    CHECK(rng.below(7) < 7);
    const double z = rng.normal();
    REQUIRE(std::isfinite(z));
    sum += z;
    sq += z * z;
  }
  CHECK(std::abs(sum / n) < 0.01);
  CHECK(std::abs(sq / n - 1.0) < 0.02);
}

TEST_CASE("softmax_rows") {
  SUBCASE("logits [0,0] give [0.5,0.5]") {
    const auto p = softmax_rows(LogitMatrix(1, 2, {0.0, 0.0}));
    CHECK(p(0, 0) == doctest::Approx(0.5));
    CHECK(p(0, 1) == doctest::Approx(0.5));
  }
  SUBCASE("shift invariance and no overflow at 1000") {
    const auto a = softmax_rows(LogitMatrix(1, 3, {1000.0, 1001.0, 1002.0}));
    const auto b = softmax_rows(LogitMatrix(1, 3, {0.0, 1.0, 2.0}));
    for (std::size_t k = 0; k < 3; ++k) {
      CHECK(std::isfinite(a(0, k)));
      CHECK(a(0, k) == doctest::Approx(b(0, k)).epsilon(1e-12));
    }
  }
  SUBCASE("rows sum to one") {
    Rng rng(5);
    LogitMatrix z(20, 10);
    for (double& v : z.values()) v = 30.0 * rng.normal();
    const auto p = softmax_rows(z);
    for (std::size_t r = 0; r < p.rows(); ++r) {
      const double s = std::accumulate(p.row(r).begin(), p.row(r).end(), 0.0);
      CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
  SUBCASE("non-finite logits are rejected") {
    CHECK_ERROR_CODE(softmax_rows(LogitMatrix(1, 2, {0.0, std::nan("")})), ErrorCode::invalid_input);
    CHECK_ERROR_CODE(softmax_rows(LogitMatrix(1, 2, {0.0, INFINITY})), ErrorCode::invalid_input);
  }
  SUBCASE("argmax ties go to the lowest index") {
    const std::vector<double> row{0.2, 0.7, 0.7};
    CHECK(argmax_row(row) == 1);
  }
}

TEST_CASE("validation of domain values") {
  ImageBatch b(1, 1, 2, 2);
  b.data = {0.0f, 0.5f, 1.0f, 1.5f};
  CHECK_ERROR_CODE(validate(b), ErrorCode::invalid_input);
  b.data[3] = 1.0f;
  CHECK_NOTHROW(validate(b));
  CHECK_ERROR_CODE(validate(LabelVector{{0, 3}, 3}), ErrorCode::invalid_input);
  CHECK_ERROR_CODE(validate(LabelVector{{0}, 1}), ErrorCode::invalid_input);
  CHECK_ERROR_CODE(Matrix(2, 2, std::vector<double>{1, 2, 3}), ErrorCode::invalid_input);
}

namespace {

std::vector<std::byte> bytes_of(std::initializer_list<int> v) {
  std::vector<std::byte> out;
  for (int x : v) out.push_back(static_cast<std::byte>(x));
  return out;
}

}  // namespace

TEST_CASE("SSPB encoding is byte-exact") {
  SUBCASE("f32 2x1 tensor [1.0, -2.0]") {
    const Tensor t{{2, 1}, std::vector<float>{1.0f, -2.0f}};
    const auto expected = bytes_of({'S', 'S', 'P', 'B', 0x01, 0x01, 0x02, 2, 0, 0, 0, 1, 0, 0, 0,
                                    0x00, 0x00, 0x80, 0x3F, 0x00, 0x00, 0x00, 0xC0});
    CHECK(encode_tensor(t) == expected);
    CHECK(decode_tensor(expected) == t);
  }
  SUBCASE("i32 labels") {
    const Tensor t{{3}, std::vector<std::int32_t>{0, 1, -1}};
    const auto enc = encode_tensor(t);
    CHECK(enc.size() == 7 + 4 + 12);
    CHECK(enc[5] == std::byte{0x02});
    CHECK(enc.back() == std::byte{0xFF});
    CHECK(decode_tensor(enc) == t);
  }
}

TEST_CASE("SSPB decoding reports distinct errors") {
  const auto good = encode_tensor(Tensor{{2}, std::vector<float>{1.0f, 2.0f}});
  SUBCASE("bad magic") {
    auto b = good;
    b[0] = std::byte{'X'};
    CHECK_ERROR_CODE(decode_tensor(b), ErrorCode::bad_magic);
  }
  SUBCASE("unsupported version") {
    auto b = good;
    b[4] = std::byte{0x02};
    CHECK_ERROR_CODE(decode_tensor(b), ErrorCode::unsupported_version);
  }
  SUBCASE("unsupported dtype 0x03") {
    auto b = good;
    b[5] = std::byte{0x03};
    CHECK_ERROR_CODE(decode_tensor(b), ErrorCode::unsupported_dtype);
  }
  SUBCASE("truncated payload") {
    auto b = good;
    b.pop_back();
    CHECK_ERROR_CODE(decode_tensor(b), ErrorCode::truncated);
  }
  SUBCASE("truncated header and dims") {
    CHECK_ERROR_CODE(decode_tensor(std::span(good).first(5)), ErrorCode::truncated);
    CHECK_ERROR_CODE(decode_tensor(std::span(good).first(9)), ErrorCode::truncated);
  }
  SUBCASE("wrong dtype accessor") {
    const auto t = decode_tensor(good);
    CHECK_ERROR_CODE(t.i32(), ErrorCode::unsupported_dtype);
  }
}

TEST_CASE("SSPB file and container round trips") {
  testing::TempDir dir("core");
  Rng rng(9);
  std::vector<float> payload(3 * 4 * 5);
  for (float& v : payload) v = static_cast<float>(rng.normal());
  const Tensor t{{3, 4, 5}, payload};
  write_tensor(dir.path() / "nested" / "t.sspb", t);
  CHECK(read_tensor(dir.path() / "nested" / "t.sspb") == t);
  CHECK_ERROR_CODE(read_tensor(dir.path() / "absent.sspb"), ErrorCode::missing_input);

  const NamedTensors sections{{"a.weight", t}, {"labels", Tensor{{2}, std::vector<std::int32_t>{4, 5}}}};
  const auto bytes = encode_container(sections);
  const std::string head(reinterpret_cast<const char*>(bytes.data()), 7);
  CHECK(head == "SSPC 1\n");
  CHECK(decode_container(bytes) == sections);
  CHECK(find_section(sections, "labels").i32()[1] == 5);
  CHECK_ERROR_CODE(find_section(sections, "missing"), ErrorCode::missing_input);

  auto broken = bytes;
  broken.resize(broken.size() - 3);
  CHECK_ERROR_CODE(decode_container(broken), ErrorCode::truncated);
}

TEST_CASE("domain conversions through tensors") {
  Matrix m(2, 3, {1.5, -2.0, 0.25, 3.0, 4.0, 5.0});
  CHECK(matrix_from(to_tensor(m)) == m);
  ImageBatch b(2, 1, 2, 2);
  b.data = {0, 0.25f, 0.5f, 1, 1, 0.5f, 0.25f, 0};
  CHECK(images_from(to_tensor(b)) == b);
  const LabelVector l{{0, 2, 1}, 3};
  CHECK(labels_from(to_tensor(l), 3) == l);
  CHECK_ERROR_CODE(labels_from(to_tensor(l), 2), ErrorCode::invalid_input);
  CHECK_ERROR_CODE(matrix_from(to_tensor(l)), ErrorCode::invalid_input);
}

TEST_CASE("quantize_f32 rounds to the nearest float") {
  Matrix m(1, 2, {0.1, 1.0 / 3.0});
  quantize_f32(m);
  CHECK(m(0, 0) == static_cast<double>(0.1f));
  CHECK(m(0, 1) == static_cast<double>(1.0f / 3.0f));
}

TEST_CASE("fnv1a") {
  CHECK(fnv1a({}) == 0xCBF29CE484222325ULL);
  const char a = 'a';
  CHECK(fnv1a(std::as_bytes(std::span(&a, 1))) == 0xAF63DC4C8601EC8CULL);
  CHECK(hex64(0xABCULL) == "0000000000000abc");
}
