#pragma once

// SSPB tensor exchange format.
//
//   offset 0  : "SSPB"
//   offset 4  : version byte (0x01)
//   offset 5  : dtype byte (0x01 float32, 0x02 int32)
//   offset 6  : ndim byte
//   offset 7  : ndim x uint32 little-endian dimensions
//   then      : row-major payload, little-endian
//
// A container bundles named tensors behind a text manifest:
//
//   SSPC 1
//   <name> <offset> <length> <d0>x<d1>...
//   ...
//   end
//   <concatenated SSPB blobs>
//
// Offsets are relative to the first byte after the "end" line.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "core/types.hpp"

namespace ssp {

enum class DType : std::uint8_t { f32 = 0x01, i32 = 0x02 };

struct Tensor {
  std::vector<std::uint32_t> dims;
  std::variant<std::vector<float>, std::vector<std::int32_t>> data;

  DType dtype() const noexcept { return data.index() == 0 ? DType::f32 : DType::i32; }
  std::size_t element_count() const noexcept;
  const std::vector<float>& f32() const;
  const std::vector<std::int32_t>& i32() const;

  bool operator==(const Tensor&) const = default;
};

std::vector<std::byte> encode_tensor(const Tensor& t);
/// Parses one tensor from the front of `bytes`; `consumed` receives its encoded length.
Tensor decode_tensor(std::span<const std::byte> bytes, std::size_t* consumed = nullptr);

void write_tensor(const std::filesystem::path& path, const Tensor& t);
Tensor read_tensor(const std::filesystem::path& path);

using NamedTensors = std::vector<std::pair<std::string, Tensor>>;

std::vector<std::byte> encode_container(const NamedTensors& sections);
NamedTensors decode_container(std::span<const std::byte> bytes);
void write_container(const std::filesystem::path& path, const NamedTensors& sections);
NamedTensors read_container(const std::filesystem::path& path);
const Tensor& find_section(const NamedTensors& sections, const std::string& name);

std::vector<std::byte> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, std::span<const std::byte> bytes);

// Conversions between in-memory domain values and tensors.
Tensor to_tensor(const Matrix& m);
Matrix matrix_from(const Tensor& t);
Tensor to_tensor(const ImageBatch& b);
ImageBatch images_from(const Tensor& t);
Tensor to_tensor(const LabelVector& l);
LabelVector labels_from(const Tensor& t, int num_classes);
Tensor to_tensor(std::span<const double> v);

}  // namespace ssp
