#pragma once

#include <stdexcept>
#include <string>

namespace ssp {

// Numeric values are shared with the C API (include/ssp/ssp.h).
enum class ErrorCode : int {
  invalid_input = 1,
  bad_magic = 2,
  unsupported_version = 3,
  unsupported_dtype = 4,
  truncated = 5,
  io = 6,
  undefined_metric = 7,
  config = 8,
  missing_input = 9,
  numeric = 10,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool ok, const std::string& what) {
  if (!ok) fail(ErrorCode::invalid_input, what);
}

}  // namespace ssp
