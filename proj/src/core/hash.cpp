#include "core/hash.hpp"

#include <cstdio>

#include "core/sspb.hpp"

namespace ssp {

std::uint64_t fnv1a(std::span<const std::byte> bytes, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (auto b : bytes) {
    h ^= static_cast<std::uint64_t>(b);
    h *= 0x100000001B3ULL;
  }
  return h;
}

std::uint64_t fnv1a_file(const std::filesystem::path& path) { return fnv1a(read_file_bytes(path)); }

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace ssp
