#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "data/dataset.hpp"
#include "model/model.hpp"
#include "transforms/transforms.hpp"

namespace ssp::pipeline {

enum class Mode { synthetic, ingest };

/// Fully resolved pipeline settings.
struct RunConfig {
  Mode mode = Mode::synthetic;

  data::GenConfig gen{1, 250, 0.3, 4};
  std::size_t test_per_class = 500;
  std::size_t ood_per_class = 200;
  double val_fraction = 0.2;

  std::size_t hidden = 64;
  model::TrainConfig train{10, 32, 0.05, 1};

  std::vector<transforms::ProbingTask> tasks;
  model::TrainConfig probe{10, 32, 0.1, 2};
  std::uint64_t random_head_seed = 3;

  std::vector<double> lambda_grid;
  std::size_t calib_bins = 15;

  std::vector<std::vector<std::size_t>> ablate_rotation;     // transform index subsets
  std::vector<std::vector<std::size_t>> ablate_translation;

  std::filesystem::path run_dir = "run";
  std::filesystem::path ingest_dir;

  /// Raw key/value pairs after defaults and overrides, as written to the manifest.
  std::map<std::string, std::string> entries;

  const transforms::ProbingTask* task(const std::string& name) const;
};

/// Key/value pairs before validation. Keeps the source line of every key.
class ConfigText {
 public:
  static ConfigText defaults();
  /// Parses `key = value` lines; `#` starts a comment. Unknown or repeated keys are config errors.
  static ConfigText parse(const std::string& text, const std::string& origin = "config");
  static ConfigText load(const std::filesystem::path& path);

  /// Overrides (or sets) a key; unknown keys are config errors.
  void set(const std::string& key, const std::string& value);
  /// Overlays `other` on top of this text.
  void merge(const ConfigText& other);

  /// Validates every key and value before any work happens.
  RunConfig resolve() const;

  const std::map<std::string, std::string>& values() const noexcept { return values_; }

 private:
  std::map<std::string, std::string> values_;
  std::map<std::string, std::string> where_;  // key -> "origin:line"
};

/// All recognized keys, in canonical order.
const std::vector<std::string>& known_keys();

/// Default config as file text (comments included), handy for `ssp init-config`.
std::string default_config_text();

}  // namespace ssp::pipeline
