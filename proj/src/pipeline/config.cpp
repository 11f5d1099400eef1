#include "pipeline/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace ssp::pipeline {
namespace {

struct KeyInfo {
  const char* key;
  const char* value;
  const char* comment;
};

// Canonical key list with defaults.
const std::vector<KeyInfo>& key_table() {
  static const std::vector<KeyInfo> table = {
      {"mode", "synthetic", "synthetic | ingest"},
      {"data.seed", "1", "dataset generation seed"},
      {"data.train_per_class", "250", "labeled samples per class before the validation carve-out"},
      {"data.test_per_class", "500", ""},
      {"data.ood_per_class", "200", "samples per out-of-distribution glyph"},
      {"data.noise_sigma", "0.3", "per-pixel Gaussian noise, clamped to [0,1]"},
      {"data.jitter_px", "4", "max integer translation of the glyph"},
      {"data.val_fraction", "0.2", "share of each class moved from train to validation"},
      {"model.hidden", "64", "embedding dimension D"},
      {"train.epochs", "10", ""},
      {"train.batch_size", "32", ""},
      {"train.lr0", "0.05", "initial SGD learning rate, cosine annealed per step"},
      {"train.seed", "1", ""},
      {"probe.rotation", "0,90,180,270", "degrees; empty disables the task"},
      {"probe.translation", "0:0,-8:0,8:0,0:-8,0:8", "dx:dy pixels; empty disables the task"},
      {"probe.epochs", "10", ""},
      {"probe.batch_size", "32", "original samples per mini-batch"},
      {"probe.lr0", "0.1", ""},
      {"probe.seed", "2", ""},
      {"probe.random_seed", "3", "seed of the untrained N(0,1) comparison head"},
      {"fusion.grid", "0,0.25,0.5,0.75,1,1.5,2", "candidate lambda values per task"},
      {"calib.bins", "15", "bins for ECE/MCE and histogram binning"},
      {"ablate.rotation", "0,90;0,90,180,270", "';'-separated rotation subsets"},
      {"ablate.translation", "0:0,0:-8,0:8;0:0,-8:0,8:0,0:-8,0:8", "';'-separated translation subsets"},
      {"io.run_dir", "run", "stage outputs"},
      {"io.ingest_dir", "", "directory of externally extracted SSPB files (mode = ingest)"},
  };
  return table;
}

std::string trim(std::string_view s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string_view::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return std::string(s.substr(a, b - a + 1));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) parts.push_back(trim(cur));
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

bool is_known(const std::string& key) {
  const auto& t = key_table();
  return std::any_of(t.begin(), t.end(), [&](const KeyInfo& k) { return key == k.key; });
}

class Resolver {
 public:
  Resolver(const std::map<std::string, std::string>& values, const std::map<std::string, std::string>& where)
      : values_(values), where_(where) {}

  [[noreturn]] void bad(const std::string& key, const std::string& why) const {
    auto it = where_.find(key);
    const std::string loc = it == where_.end() ? "default" : it->second;
    fail(ErrorCode::config, "config key '" + key + "' (" + loc + "): " + why);
  }

  const std::string& str(const std::string& key) const { return values_.at(key); }

  double real(const std::string& key) const { return parse_real(key, str(key)); }

  double parse_real(const std::string& key, const std::string& text) const {
    double v = 0.0;
    auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc{} || p != text.data() + text.size() || !std::isfinite(v)) {
      bad(key, "expected a real number, found '" + text + "'");
    }
    return v;
  }

  std::uint64_t integer(const std::string& key, std::uint64_t min, std::uint64_t max) const {
    const auto& text = str(key);
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc{} || p != text.data() + text.size()) {
      bad(key, "expected a non-negative integer, found '" + text + "'");
    }
    if (v < min || v > max) bad(key, "value " + text + " outside [" + std::to_string(min) + ", " + std::to_string(max) + "]");
    return v;
  }

 private:
  const std::map<std::string, std::string>& values_;
  const std::map<std::string, std::string>& where_;
};

std::vector<std::vector<std::size_t>> resolve_subsets(const Resolver& r, const std::string& key,
                                                      const transforms::ProbingTask* task, bool rotation) {
  std::vector<std::vector<std::size_t>> out;
  const auto& text = r.str(key);
  if (text.empty()) return out;
  if (!task) r.bad(key, "ablation subsets need the matching probe task to be enabled");
  for (const auto& part : split(text, ';')) {
    transforms::ProbingTask subset;
    try {
      subset = rotation ? transforms::parse_rotation_task(task->name, part)
                        : transforms::parse_translation_task(task->name, part);
    } catch (const Error& e) {
      r.bad(key, e.what());
    }
    std::vector<std::size_t> idx;
    for (const auto& t : subset.transforms) {
      auto it = std::find(task->transforms.begin(), task->transforms.end(), t);
      if (it == task->transforms.end()) {
        r.bad(key, "transform " + t.to_string() + " is not part of probe." + task->name);
      }
      idx.push_back(static_cast<std::size_t>(it - task->transforms.begin()));
    }
    out.push_back(std::move(idx));
  }
  return out;
}

}  // namespace

const transforms::ProbingTask* RunConfig::task(const std::string& name) const {
  for (const auto& t : tasks) {
    if (t.name == name) return &t;
  }
  return nullptr;
}

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& info : key_table()) k.emplace_back(info.key);
    return k;
  }();
  return keys;
}

std::string default_config_text() {
  std::string out;
  for (const auto& k : key_table()) {
    if (*k.comment) out += std::string("# ") + k.comment + "\n";
    out += std::string(k.key) + " = " + k.value + "\n";
  }
  return out;
}

ConfigText ConfigText::defaults() {
  ConfigText c;
  for (const auto& k : key_table()) c.values_[k.key] = k.value;
  return c;
}

ConfigText ConfigText::parse(const std::string& text, const std::string& origin) {
  ConfigText c;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    const std::string body = trim(hash == std::string::npos ? line : line.substr(0, hash));
    if (body.empty()) continue;
    const std::string loc = origin + ":" + std::to_string(lineno);
    const auto eq = body.find('=');
    if (eq == std::string::npos) fail(ErrorCode::config, loc + ": expected 'key = value', found '" + body + "'");
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    if (!is_known(key)) fail(ErrorCode::config, loc + ": unknown config key '" + key + "'");
    if (c.values_.count(key)) {
      fail(ErrorCode::config, loc + ": config key '" + key + "' repeats " + c.where_[key]);
    }
    c.values_[key] = value;
    c.where_[key] = loc;
  }
  return c;
}

ConfigText ConfigText::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::missing_input, "cannot open config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  ConfigText c = defaults();
  c.merge(parse(buf.str(), path.string()));
  return c;
}

void ConfigText::set(const std::string& key, const std::string& value) {
  if (!is_known(key)) fail(ErrorCode::config, "unknown config key '" + key + "'");
  values_[key] = trim(value);
  where_[key] = "override";
}

void ConfigText::merge(const ConfigText& other) {
  for (const auto& [k, v] : other.values_) values_[k] = v;
  for (const auto& [k, w] : other.where_) where_[k] = w;
}

RunConfig ConfigText::resolve() const {
  auto all = defaults().values_;
  for (const auto& [k, v] : values_) all[k] = v;
  const Resolver r(all, where_);
  RunConfig cfg;
  cfg.entries = all;

  const auto& mode = r.str("mode");
  if (mode == "synthetic") cfg.mode = Mode::synthetic;
  else if (mode == "ingest") cfg.mode = Mode::ingest;
  else r.bad("mode", "expected 'synthetic' or 'ingest', found '" + mode + "'");

  cfg.gen.seed = r.integer("data.seed", 0, UINT64_MAX);
  cfg.gen.n_per_class = r.integer("data.train_per_class", 2, 1'000'000);
  cfg.test_per_class = r.integer("data.test_per_class", 1, 1'000'000);
  cfg.ood_per_class = r.integer("data.ood_per_class", 1, 1'000'000);
  cfg.gen.noise_sigma = r.real("data.noise_sigma");
  if (cfg.gen.noise_sigma < 0.0 || cfg.gen.noise_sigma > 1.0) r.bad("data.noise_sigma", "must lie in [0,1]");
  cfg.gen.jitter_px = static_cast<int>(r.integer("data.jitter_px", 0, 6));
  cfg.val_fraction = r.real("data.val_fraction");
  if (cfg.val_fraction <= 0.0 || cfg.val_fraction >= 1.0) r.bad("data.val_fraction", "must lie in (0,1)");

  cfg.hidden = r.integer("model.hidden", 10, 4096);
  cfg.train.epochs = static_cast<int>(r.integer("train.epochs", 1, 100'000));
  cfg.train.batch_size = r.integer("train.batch_size", 1, 1'000'000);
  cfg.train.lr0 = r.real("train.lr0");
  if (cfg.train.lr0 < 0.0) r.bad("train.lr0", "must be non-negative");
  cfg.train.seed = r.integer("train.seed", 0, UINT64_MAX);

  const std::pair<const char*, bool> task_keys[] = {{"rotation", true}, {"translation", false}};
  for (const auto& [name, rotation] : task_keys) {
    const std::string key = std::string("probe.") + name;
    const auto& text = r.str(key);
    if (text.empty()) continue;
    try {
      cfg.tasks.push_back(rotation ? transforms::parse_rotation_task(name, text)
                                   : transforms::parse_translation_task(name, text));
    } catch (const Error& e) {
      r.bad(key, e.what());
    }
  }
  if (cfg.tasks.empty()) fail(ErrorCode::config, "config must declare at least one probing task (probe.rotation or probe.translation)");
  for (const auto& t : cfg.tasks) {
    for (const auto& tr : t.transforms) {
      if (tr.kind == transforms::Transform::Kind::translate &&
          (std::abs(tr.translate.dx) >= static_cast<int>(data::kCanvas) ||
           std::abs(tr.translate.dy) >= static_cast<int>(data::kCanvas))) {
        r.bad("probe.translation", "shift " + tr.to_string() + " must be smaller than the 32 px canvas");
      }
    }
  }
  cfg.probe.epochs = static_cast<int>(r.integer("probe.epochs", 1, 100'000));
  cfg.probe.batch_size = r.integer("probe.batch_size", 1, 1'000'000);
  cfg.probe.lr0 = r.real("probe.lr0");
  if (cfg.probe.lr0 < 0.0) r.bad("probe.lr0", "must be non-negative");
  cfg.probe.seed = r.integer("probe.seed", 0, UINT64_MAX);
  cfg.random_head_seed = r.integer("probe.random_seed", 0, UINT64_MAX);

  for (const auto& part : split(r.str("fusion.grid"), ',')) cfg.lambda_grid.push_back(r.parse_real("fusion.grid", part));
  if (std::find(cfg.lambda_grid.begin(), cfg.lambda_grid.end(), 0.0) == cfg.lambda_grid.end()) {
    r.bad("fusion.grid", "must contain 0 so fusion can fall back to the base score");
  }
  cfg.calib_bins = r.integer("calib.bins", 1, 10'000);

  cfg.ablate_rotation = resolve_subsets(r, "ablate.rotation", cfg.task("rotation"), true);
  cfg.ablate_translation = resolve_subsets(r, "ablate.translation", cfg.task("translation"), false);

  if (r.str("io.run_dir").empty()) r.bad("io.run_dir", "must not be empty");
  cfg.run_dir = r.str("io.run_dir");
  cfg.ingest_dir = r.str("io.ingest_dir");
  if (cfg.mode == Mode::ingest && cfg.ingest_dir.empty()) r.bad("io.ingest_dir", "required when mode = ingest");
  return cfg;
}

}  // namespace ssp::pipeline
