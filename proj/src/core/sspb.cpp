#include "core/sspb.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

namespace ssp {
namespace {

constexpr std::uint8_t kVersion = 0x01;
constexpr std::size_t kFixedHeader = 7;

void put_u32(std::vector<std::byte>& out, std::uint32_t v) {
  for (int s = 0; s < 32; s += 8) out.push_back(static_cast<std::byte>((v >> s) & 0xFFu));
}

std::uint32_t get_u32(const std::byte* p) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(p[i]) << (8 * i);
  return v;
}

std::string dims_string(const std::vector<std::uint32_t>& dims) {
  std::string s;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (i) s += 'x';
    s += std::to_string(dims[i]);
  }
  return s.empty() ? "scalar" : s;
}

std::size_t product(const std::vector<std::uint32_t>& dims) {
  std::size_t n = 1;
  for (auto d : dims) n *= d;
  return n;
}

}  // namespace

std::size_t Tensor::element_count() const noexcept {
  return std::visit([](const auto& v) { return v.size(); }, data);
}

const std::vector<float>& Tensor::f32() const {
  if (dtype() != DType::f32) fail(ErrorCode::unsupported_dtype, "tensor is not float32");
  return std::get<0>(data);
}

const std::vector<std::int32_t>& Tensor::i32() const {
  if (dtype() != DType::i32) fail(ErrorCode::unsupported_dtype, "tensor is not int32");
  return std::get<1>(data);
}

std::vector<std::byte> encode_tensor(const Tensor& t) {
  require(t.dims.size() <= 255, "tensor has too many dimensions");
  require(product(t.dims) == t.element_count(), "tensor dims product does not match data length");
  std::vector<std::byte> out;
  out.reserve(kFixedHeader + 4 * t.dims.size() + 4 * t.element_count());
  for (char ch : {'S', 'S', 'P', 'B'}) out.push_back(static_cast<std::byte>(ch));
  out.push_back(static_cast<std::byte>(kVersion));
  out.push_back(static_cast<std::byte>(t.dtype()));
  out.push_back(static_cast<std::byte>(t.dims.size()));
  for (auto d : t.dims) put_u32(out, d);
  std::visit(
      [&](const auto& values) {
        for (auto v : values) put_u32(out, std::bit_cast<std::uint32_t>(v));
      },
      t.data);
  return out;
}

Tensor decode_tensor(std::span<const std::byte> bytes, std::size_t* consumed) {
  if (bytes.size() < kFixedHeader) fail(ErrorCode::truncated, "SSPB header truncated");
  if (std::memcmp(bytes.data(), "SSPB", 4) != 0) fail(ErrorCode::bad_magic, "bad SSPB magic");
  const auto version = static_cast<std::uint8_t>(bytes[4]);
  if (version != kVersion) {
    fail(ErrorCode::unsupported_version, "unsupported SSPB version " + std::to_string(version));
  }
  const auto dtype = static_cast<std::uint8_t>(bytes[5]);
  if (dtype != 0x01 && dtype != 0x02) {
    fail(ErrorCode::unsupported_dtype, "unsupported SSPB dtype " + std::to_string(dtype));
  }
  const std::size_t ndim = static_cast<std::uint8_t>(bytes[6]);
  std::size_t pos = kFixedHeader;
  if (bytes.size() < pos + 4 * ndim) fail(ErrorCode::truncated, "SSPB dimensions truncated");

  Tensor t;
  for (std::size_t i = 0; i < ndim; ++i, pos += 4) t.dims.push_back(get_u32(bytes.data() + pos));
  const std::size_t count = product(t.dims);
  if ((bytes.size() - pos) / 4 < count) {
    fail(ErrorCode::truncated, "SSPB payload truncated: header declares " + dims_string(t.dims) + " (" +
                                   std::to_string(count) + " values) but only " +
                                   std::to_string((bytes.size() - pos) / 4) + " are present");
  }
  auto fill = [&](auto& values) {
    using V = typename std::decay_t<decltype(values)>::value_type;
    values.resize(count);
    for (std::size_t i = 0; i < count; ++i, pos += 4) {
      values[i] = std::bit_cast<V>(get_u32(bytes.data() + pos));
    }
  };
  if (dtype == 0x01) {
    std::vector<float> v;
    fill(v);
    t.data = std::move(v);
  } else {
    std::vector<std::int32_t> v;
    fill(v);
    t.data = std::move(v);
  }
  if (consumed) *consumed = pos;
  return t;
}

std::vector<std::byte> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::missing_input, "cannot open " + path.string());
  std::vector<char> raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::vector<std::byte> bytes(raw.size());
  std::memcpy(bytes.data(), raw.data(), raw.size());
  return bytes;
}

void write_file_bytes(const std::filesystem::path& path, std::span<const std::byte> bytes) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::io, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorCode::io, "short write to " + path.string());
}

void write_tensor(const std::filesystem::path& path, const Tensor& t) {
  write_file_bytes(path, encode_tensor(t));
}

Tensor read_tensor(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  try {
    return decode_tensor(bytes);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

std::vector<std::byte> encode_container(const NamedTensors& sections) {
  std::ostringstream header;
  header << "SSPC 1\n";
  std::vector<std::byte> body;
  for (const auto& [name, tensor] : sections) {
    require(!name.empty() && name.find_first_of(" \n") == std::string::npos,
            "container section names must be non-empty and free of whitespace");
    const auto blob = encode_tensor(tensor);
    header << name << ' ' << body.size() << ' ' << blob.size() << ' ' << dims_string(tensor.dims) << '\n';
    body.insert(body.end(), blob.begin(), blob.end());
  }
  header << "end\n";
  const std::string text = header.str();
  std::vector<std::byte> out(text.size());
  std::memcpy(out.data(), text.data(), text.size());
  out.insert(out.end(), body.begin(), body.end());
  return out;
}

NamedTensors decode_container(std::span<const std::byte> bytes) {
  const std::string_view view(reinterpret_cast<const char*>(bytes.data()), bytes.size());
  if (!view.starts_with("SSPC 1\n")) fail(ErrorCode::bad_magic, "bad SSPC container header");
  const auto end_pos = view.find("\nend\n");
  if (end_pos == std::string_view::npos) fail(ErrorCode::truncated, "SSPC manifest not terminated");
  const std::size_t body_start = end_pos + 5;

  std::istringstream manifest(std::string(view.substr(7, end_pos + 1 - 7)));
  NamedTensors sections;
  std::string line;
  while (std::getline(manifest, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string name, dims;
    std::size_t offset = 0, length = 0;
    if (!(fields >> name >> offset >> length >> dims)) fail(ErrorCode::truncated, "malformed SSPC manifest line: " + line);
    if (body_start + offset + length > bytes.size()) fail(ErrorCode::truncated, "SSPC section '" + name + "' truncated");
    std::size_t used = 0;
    Tensor t = decode_tensor(bytes.subspan(body_start + offset, length), &used);
    if (dims_string(t.dims) != dims) {
      fail(ErrorCode::invalid_input, "SSPC section '" + name + "' dims " + dims_string(t.dims) +
                                         " disagree with manifest " + dims);
    }
    sections.emplace_back(std::move(name), std::move(t));
  }
  return sections;
}

void write_container(const std::filesystem::path& path, const NamedTensors& sections) {
  write_file_bytes(path, encode_container(sections));
}

NamedTensors read_container(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  try {
    return decode_container(bytes);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

const Tensor& find_section(const NamedTensors& sections, const std::string& name) {
  auto it = std::find_if(sections.begin(), sections.end(), [&](const auto& s) { return s.first == name; });
  if (it == sections.end()) fail(ErrorCode::missing_input, "container has no section '" + name + "'");
  return it->second;
}

Tensor to_tensor(const Matrix& m) {
  std::vector<float> v(m.values().begin(), m.values().end());
  return {{static_cast<std::uint32_t>(m.rows()), static_cast<std::uint32_t>(m.cols())}, std::move(v)};
}

Matrix matrix_from(const Tensor& t) {
  if (t.dims.size() != 2) fail(ErrorCode::invalid_input, "expected a 2-D tensor, found " + dims_string(t.dims));
  const auto& f = t.f32();
  return Matrix(t.dims[0], t.dims[1], std::vector<double>(f.begin(), f.end()));
}

Tensor to_tensor(const ImageBatch& b) {
  return {{static_cast<std::uint32_t>(b.n), static_cast<std::uint32_t>(b.c), static_cast<std::uint32_t>(b.h),
           static_cast<std::uint32_t>(b.w)},
          b.data};
}

ImageBatch images_from(const Tensor& t) {
  if (t.dims.size() != 4) fail(ErrorCode::invalid_input, "expected an N x C x H x W tensor, found " + dims_string(t.dims));
  ImageBatch b;
  b.n = t.dims[0];
  b.c = t.dims[1];
  b.h = t.dims[2];
  b.w = t.dims[3];
  b.data = t.f32();
  return b;
}

Tensor to_tensor(const LabelVector& l) {
  return {{static_cast<std::uint32_t>(l.labels.size())}, l.labels};
}

LabelVector labels_from(const Tensor& t, int num_classes) {
  if (t.dims.size() != 1) fail(ErrorCode::invalid_input, "expected a 1-D label tensor, found " + dims_string(t.dims));
  LabelVector l{t.i32(), num_classes};
  validate(l);
  return l;
}

Tensor to_tensor(std::span<const double> v) {
  return {{static_cast<std::uint32_t>(v.size())}, std::vector<float>(v.begin(), v.end())};
}

}  // namespace ssp
