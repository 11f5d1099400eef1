#pragma once

#include <filesystem>
#include <string>

#include <unistd.h>

#include "core/error.hpp"
#include "doctest.h"

// Runs `expr` and checks that it throws ssp::Error with the given code.
#define CHECK_ERROR_CODE(expr, expected_code)                    \
  do {                                                           \
    bool threw_ = false;                                         \
    try {                                                        \
      (void)(expr);                                              \
    } catch (const ssp::Error& e_) {                             \
      threw_ = true;                                             \
      CHECK_MESSAGE(e_.code() == (expected_code), e_.what());    \
    }                                                            \
    CHECK_MESSAGE(threw_, "expected an ssp::Error from " #expr); \
  } while (0)

namespace testing {

/// Fresh scratch directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("ssp_test_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace testing
