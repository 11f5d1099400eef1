#include "pipeline/stages.hpp"

#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include "core/hash.hpp"
#include "core/softmax.hpp"
#include "core/sspb.hpp"

namespace ssp::pipeline {
namespace fs = std::filesystem;
namespace {

constexpr const char* kSplits[] = {"train", "val", "test"};

fs::path data_dir(const RunConfig& cfg) { return cfg.run_dir / "data"; }
fs::path ood_dir(const RunConfig& cfg) { return cfg.run_dir / "data_ood"; }
fs::path manifest_path(const RunConfig& cfg) { return cfg.run_dir / "manifest.txt"; }
fs::path reports_dir(const RunConfig& cfg) { return cfg.run_dir / "reports"; }

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string key_part(const std::string& s) {
  std::string out;
  for (char ch : s) {
    if (std::isalnum(static_cast<unsigned char>(ch))) out += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    else if (!out.empty() && out.back() != '_') out += '_';
  }
  while (!out.empty() && out.back() == '_') out.pop_back();
  return out;
}

void write_text(const fs::path& path, const std::string& text) {
  const auto* p = reinterpret_cast<const std::byte*>(text.data());
  write_file_bytes(path, std::span<const std::byte>(p, text.size()));
}

std::string read_text(const fs::path& path) {
  const auto bytes = read_file_bytes(path);
  return std::string(reinterpret_cast<const char*>(bytes.data()), bytes.size());
}

void log_line(const RunConfig& cfg, const std::string& what) {
  fs::create_directories(cfg.run_dir);
  std::ofstream out(cfg.run_dir / "log.txt", std::ios::app);
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  out << stamp << ' ' << what << '\n';
}

Manifest open_manifest(const RunConfig& cfg) {
  Manifest m = fs::exists(manifest_path(cfg)) ? Manifest::load(manifest_path(cfg)) : Manifest{};
  for (const auto& [k, v] : cfg.entries) {
    if (k.rfind("io.", 0) == 0) continue;  // paths vary between otherwise identical runs
    m.set("config." + k, v);
  }
  return m;
}

void write_table(const RunConfig& cfg, const std::string& stem, const metrics::ReportTable& table, Manifest& m) {
  write_text(reports_dir(cfg) / (stem + ".csv"), metrics::to_csv(table));
  write_text(reports_dir(cfg) / (stem + ".md"), metrics::to_markdown(table));
  for (const auto& row : table.rows) {
    for (auto c : table.columns) {
      if (auto v = metrics::column_value(row.values, c)) {
        m.set(stem + "." + key_part(row.method) + "." + metrics::column_key(c), *v);
      }
    }
  }
}

fs::path split_file(const fs::path& dir, const std::string& split, const char* what) {
  return dir / (split + "." + what + ".sspb");
}

data::Dataset load_split(const fs::path& dir, const std::string& split, int classes) {
  data::Dataset d;
  d.images = images_from(read_tensor(split_file(dir, split, "images")));
  d.labels = labels_from(read_tensor(split_file(dir, split, "labels")), classes);
  if (d.images.n != d.labels.size()) {
    fail(ErrorCode::invalid_input, dir.string() + "/" + split + ": " + std::to_string(d.images.n) + " images but " +
                                       std::to_string(d.labels.size()) + " labels");
  }
  validate(d.images);
  return d;
}

void save_split(const fs::path& dir, const std::string& split, const data::Dataset& d, Manifest& m,
                const std::string& prefix) {
  for (const char* what : {"images", "labels"}) {
    const auto path = split_file(dir, split, what);
    if (std::string(what) == "images") write_tensor(path, to_tensor(d.images));
    else write_tensor(path, to_tensor(d.labels));
    m.set(prefix + "." + split + "." + what, hex64(fnv1a_file(path)));
  }
}

model::Model load_model(const RunConfig& cfg) {
  const auto path = cfg.run_dir / "model.sspc";
  if (!fs::exists(path)) fail(ErrorCode::missing_input, "missing model checkpoint " + path.string() + " (run 'train' first)");
  return model::model_from(read_container(path));
}

void quantize(model::Model& m) {
  quantize_f32(m.backbone.w1);
  quantize_f32(m.head.weight);
  for (auto* v : {&m.backbone.b1, &m.head.bias}) {
    for (double& x : *v) x = static_cast<double>(static_cast<float>(x));
  }
}

// Embeddings and logits rounded to what an SSPB file would hold.
SplitData embed_split(const model::Model& m, const data::Dataset& d) {
  SplitData s;
  s.embeddings = model::embed_dataset(m.backbone, d.images);
  quantize_f32(s.embeddings);
  s.logits = model::apply_layer(m.head, s.embeddings);
  quantize_f32(s.logits);
  s.labels = d.labels;
  return s;
}

std::vector<probing::TaskEmbeddings> synthetic_task_embeddings(const RunConfig& cfg, const model::Model& m) {
  const auto train = load_split(data_dir(cfg), "train", data::kNumDigits);
  std::vector<probing::TaskEmbeddings> out;
  for (const auto& task : cfg.tasks) {
    auto te = probing::embed_task(m.backbone, train.images, task);
    quantize_f32(te.rows);
    out.push_back(std::move(te));
  }
  return out;
}

fs::path ingest_file(const RunConfig& cfg, const std::string& name) {
  const auto path = cfg.ingest_dir / name;
  if (!fs::exists(path)) fail(ErrorCode::missing_input, "ingest: missing file " + path.string());
  return path;
}

void check_ingest_manifest(const RunConfig& cfg) {
  const auto m = parse_manifest(read_text(ingest_file(cfg, "manifest.txt")));
  for (const auto& task : cfg.tasks) {
    const auto declared = m.get("probe." + task.name);
    if (!declared) {
      fail(ErrorCode::missing_input, "ingest: manifest does not declare probe." + task.name);
    }
    if (*declared != task.spec_string()) {
      fail(ErrorCode::config, "ingest: probe." + task.name + " was extracted as '" + *declared +
                                  "' but the config declares '" + task.spec_string() + "'");
    }
  }
}

SplitData ingest_split(const RunConfig& cfg, const std::string& split) {
  SplitData s;
  s.embeddings = EmbeddingMatrix(matrix_from(read_tensor(ingest_file(cfg, split + ".emb.sspb"))));
  s.logits = LogitMatrix(matrix_from(read_tensor(ingest_file(cfg, split + ".logits.sspb"))));
  s.labels = labels_from(read_tensor(ingest_file(cfg, split + ".labels.sspb")), static_cast<int>(s.logits.cols()));
  return s;
}

std::vector<probing::HeadTraining> train_and_save_heads(const RunConfig& cfg,
                                                        const std::vector<probing::TaskEmbeddings>& tasks, Manifest& m) {
  auto trained = probing::train_probing_heads(tasks, cfg.probe, true);
  NamedTensors sections;
  for (const auto& t : trained) {
    model::append_layer(sections, "head." + t.head.task_name, t.head.layer);
    m.set("probe." + t.head.task_name + ".train_accuracy", t.train_accuracy);
    m.set("probe." + t.head.task_name + ".final_loss", t.epoch_loss.back());
  }
  const auto path = cfg.run_dir / "heads.sspc";
  write_container(path, sections);
  m.set("heads.hash", hex64(fnv1a_file(path)));
  return trained;
}

void record_misclass(const RunConfig& cfg, const MisclassResult& r, Manifest& m) {
  write_table(cfg, "misclass", r.table, m);
  for (std::size_t t = 0; t < cfg.tasks.size(); ++t) {
    m.set("lambda." + cfg.tasks[t].name, r.msp_fusion.lambdas[t]);
    m.set("lambda.entropy." + cfg.tasks[t].name, r.entropy_fusion.lambdas[t]);
  }
  m.set("misclass.test_accuracy", r.test_accuracy);
  m.set("misclass.val_aupr_err.msp", r.val_aupr_err_msp);
  m.set("misclass.val_aupr_err.msp_ssp", r.val_aupr_err_msp_ssp);
  m.set("misclass.val_aupr_err.entropy", r.val_aupr_err_entropy);
  m.set("misclass.val_aupr_err.entropy_ssp", r.val_aupr_err_entropy_ssp);
  for (const auto& p : r.probes) {
    const std::string k = "probe." + p.task + ".";
    m.set(k + "spearman", p.curve.spearman);
    m.set(k + "mean_conf_correct", p.mean_conf_correct);
    m.set(k + "mean_conf_error", p.mean_conf_error);
    m.set(k + "point_biserial", p.point_biserial);
    m.set(k + "random_point_biserial", p.random_point_biserial);
    write_text(reports_dir(cfg) / ("probing_curve_" + p.task + ".csv"), metrics::curve_csv(p.curve));
  }
}

void record_calibration(const RunConfig& cfg, const CalibrationResult& r, Manifest& m) {
  write_table(cfg, "calibration", r.table, m);
  m.set("temp.scalar", r.temperature);
  m.set("temp.a0", r.input_dependent.model.a0);
  for (std::size_t t = 0; t < cfg.tasks.size(); ++t) m.set("temp.a." + cfg.tasks[t].name, r.input_dependent.model.a[t]);
  m.set("temp.iterations", static_cast<double>(r.input_dependent.iterations));
  m.set("temp.clamped", static_cast<double>(r.input_dependent.clamped));
  m.set("calibration.val_nll.temperature", r.val_nll_temperature);
  m.set("calibration.val_nll.input_dependent", r.val_nll_input_dependent);
}

void record_ablation(const RunConfig& cfg, const AblationResult& r, Manifest& m) { write_table(cfg, "ablation", r.table, m); }

std::string join_names(const std::vector<probing::TaskEmbeddings>& tasks) {
  std::string s;
  for (const auto& t : tasks) s += (s.empty() ? "" : "+") + t.task_name;
  return s;
}

}  // namespace

std::optional<Command> parse_command(const std::string& name) {
  for (auto c : {Command::gen_data, Command::train, Command::eval_misclass, Command::eval_ood, Command::calibrate,
                 Command::ablate, Command::ingest, Command::export_embeddings, Command::all}) {
    if (name == command_name(c)) return c;
  }
  return std::nullopt;
}

const char* command_name(Command c) {
  switch (c) {
    case Command::gen_data: return "gen-data";
    case Command::train: return "train";
    case Command::eval_misclass: return "eval-misclass";
    case Command::eval_ood: return "eval-ood";
    case Command::calibrate: return "calibrate";
    case Command::ablate: return "ablate";
    case Command::ingest: return "ingest";
    case Command::export_embeddings: return "export";
    case Command::all: return "all";
  }
  return "?";
}

Manifest Manifest::load(const fs::path& path) { return parse_manifest(read_text(path)); }

Manifest parse_manifest(const std::string& text) {
  Manifest m;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string{} : s.substr(a, b - a + 1);
    };
    m.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return m;
}

void Manifest::set(const std::string& key, const std::string& value) { entries_[key] = value; }
void Manifest::set(const std::string& key, double value) { entries_[key] = format_real(value); }

std::optional<std::string> Manifest::get(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

std::string Manifest::text() const {
  std::string out;
  for (const auto& [k, v] : entries_) out += k + " = " + v + "\n";
  return out;
}

void Manifest::save(const fs::path& path) const { write_text(path, text()); }

EvalInputs load_eval_inputs(const RunConfig& cfg) {
  EvalInputs in;
  if (cfg.mode == Mode::ingest) {
    check_ingest_manifest(cfg);
    in.val = ingest_split(cfg, "val");
    in.test = ingest_split(cfg, "test");
    if (fs::exists(cfg.ingest_dir / "ood.emb.sspb") || fs::exists(cfg.ingest_dir / "ood.logits.sspb")) {
      OodData ood;
      ood.embeddings = EmbeddingMatrix(matrix_from(read_tensor(ingest_file(cfg, "ood.emb.sspb"))));
      ood.logits = LogitMatrix(matrix_from(read_tensor(ingest_file(cfg, "ood.logits.sspb"))));
      in.ood = std::move(ood);
    }
  } else {
    const auto m = load_model(cfg);
    const int classes = static_cast<int>(m.head.out_dim());
    in.val = embed_split(m, load_split(data_dir(cfg), "val", classes));
    in.test = embed_split(m, load_split(data_dir(cfg), "test", classes));
    if (fs::exists(split_file(ood_dir(cfg), "test", "images"))) {
      auto ood = embed_split(m, load_split(ood_dir(cfg), "test", data::kNumGlyphs));
      in.ood = OodData{std::move(ood.embeddings), std::move(ood.logits)};
    }
  }
  validate(in);
  return in;
}

std::vector<probing::TaskEmbeddings> load_train_task_embeddings(const RunConfig& cfg) {
  if (cfg.mode == Mode::synthetic) return synthetic_task_embeddings(cfg, load_model(cfg));
  check_ingest_manifest(cfg);
  std::vector<probing::TaskEmbeddings> out;
  std::size_t samples = 0;
  for (const auto& task : cfg.tasks) {
    const auto name = "train_" + task.name + ".emb.sspb";
    const auto path = cfg.ingest_dir / name;
    if (!fs::exists(path)) {
      fail(ErrorCode::missing_input, "ingest: missing training embeddings for task '" + task.name + "' (" +
                                         task.spec_string() + "): expected " + path.string());
    }
    probing::TaskEmbeddings te{task.name, task.size(), EmbeddingMatrix(matrix_from(read_tensor(path)))};
    if (te.rows.rows() % task.size() != 0) {
      fail(ErrorCode::invalid_input, "ingest: " + name + " has " + std::to_string(te.rows.rows()) +
                                         " rows, not a multiple of the task's " + std::to_string(task.size()) +
                                         " transforms");
    }
    if (samples && te.sample_count() != samples) {
      fail(ErrorCode::invalid_input, "ingest: " + name + " covers " + std::to_string(te.sample_count()) +
                                         " samples, expected " + std::to_string(samples));
    }
    samples = te.sample_count();
    out.push_back(std::move(te));
  }
  return out;
}

std::vector<probing::ProbingHead> load_heads(const RunConfig& cfg) {
  const auto path = cfg.run_dir / "heads.sspc";
  if (!fs::exists(path)) fail(ErrorCode::missing_input, "missing probing heads " + path.string() + " (run 'train' first)");
  const auto sections = read_container(path);
  std::vector<probing::ProbingHead> heads;
  for (const auto& task : cfg.tasks) {
    probing::ProbingHead h{task.name, model::layer_from(sections, "head." + task.name)};
    if (h.transform_count() != task.size()) {
      fail(ErrorCode::invalid_input, "head '" + task.name + "' predicts " + std::to_string(h.transform_count()) +
                                         " transforms but the task declares " + std::to_string(task.size()));
    }
    heads.push_back(std::move(h));
  }
  return heads;
}

std::vector<AblationRow> ablation_rows(const RunConfig& cfg, const std::vector<probing::TaskEmbeddings>& full) {
  std::vector<AblationRow> rows;
  // Every non-empty subset of tasks, in bitmask order (single tasks first for two tasks).
  const std::size_t m = full.size();
  for (std::size_t mask = 1; mask < (std::size_t{1} << m); ++mask) {
    AblationRow row;
    for (std::size_t t = 0; t < m; ++t) {
      if (mask & (std::size_t{1} << t)) row.tasks.push_back(full[t]);
    }
    row.label = "tasks = " + join_names(row.tasks);
    rows.push_back(std::move(row));
  }
  auto counts = [&](const std::string& task, const std::vector<std::vector<std::size_t>>& subsets, const char* label) {
    for (std::size_t t = 0; t < m; ++t) {
      if (full[t].task_name != task) continue;
      for (const auto& keep : subsets) {
        rows.push_back({std::string("#") + label + " = " + std::to_string(keep.size()),
                        {probing::select_transforms(full[t], keep)}});
      }
    }
  };
  counts("rotation", cfg.ablate_rotation, "rotations");
  counts("translation", cfg.ablate_translation, "translations");
  return rows;
}

void cmd_gen_data(const RunConfig& cfg) {
  auto m = open_manifest(cfg);
  auto pool = data::generate_id_dataset(cfg.gen, data::Split::train);
  auto [train, val] = data::carve_validation(pool, cfg.val_fraction);
  data::GenConfig test_cfg = cfg.gen;
  test_cfg.n_per_class = cfg.test_per_class;
  const auto test = data::generate_id_dataset(test_cfg, data::Split::test);
  data::GenConfig ood_cfg = cfg.gen;
  ood_cfg.n_per_class = cfg.ood_per_class;
  const auto ood = data::generate_ood_dataset(ood_cfg, data::Split::test);

  save_split(data_dir(cfg), "train", train, m, "data");
  save_split(data_dir(cfg), "val", val, m, "data");
  save_split(data_dir(cfg), "test", test, m, "data");
  save_split(ood_dir(cfg), "test", ood, m, "data_ood");
  m.save(manifest_path(cfg));
  log_line(cfg, "gen-data");
}

TrainSummary cmd_train(const RunConfig& cfg) {
  auto m = open_manifest(cfg);
  TrainSummary summary;
  std::vector<probing::TaskEmbeddings> task_embeddings;
  if (cfg.mode == Mode::synthetic) {
    const auto train = load_split(data_dir(cfg), "train", data::kNumDigits);
    const auto test = load_split(data_dir(cfg), "test", data::kNumDigits);
    auto model = model::init_model(train.images.image_size(), cfg.hidden, data::kNumDigits, cfg.train.seed);
    const auto trace = model::train_classifier(model, train, cfg.train);
    quantize(model);
    model.backbone.frozen = true;
    const auto path = cfg.run_dir / "model.sspc";
    write_container(path, model::to_sections(model));
    m.set("model.hash", hex64(fnv1a_file(path)));
    summary.epoch_loss = trace.epoch_loss;
    summary.test_accuracy = model::accuracy(embed_split(model, test).logits, test.labels);
    m.set("train.initial_loss", trace.epoch_loss.front());
    m.set("train.final_loss", trace.epoch_loss.back());
    m.set("train.test_accuracy", summary.test_accuracy);
    task_embeddings = synthetic_task_embeddings(cfg, model);
  } else {
    task_embeddings = load_train_task_embeddings(cfg);
  }
  summary.heads = train_and_save_heads(cfg, task_embeddings, m);
  m.save(manifest_path(cfg));
  log_line(cfg, "train");
  return summary;
}

MisclassResult cmd_eval_misclass(const RunConfig& cfg) {
  const auto in = load_eval_inputs(cfg);
  const auto heads = load_heads(cfg);
  auto m = open_manifest(cfg);
  auto r = evaluate_misclassification(in, heads, cfg.lambda_grid, cfg.random_head_seed);
  record_misclass(cfg, r, m);
  m.save(manifest_path(cfg));
  log_line(cfg, "eval-misclass");
  return r;
}

OodResult cmd_eval_ood(const RunConfig& cfg) {
  const auto in = load_eval_inputs(cfg);
  if (!in.ood) {
    fail(ErrorCode::missing_input, cfg.mode == Mode::ingest ? "ingest: missing ood.emb.sspb / ood.logits.sspb"
                                                            : "missing out-of-distribution data (run 'gen-data')");
  }
  const auto heads = load_heads(cfg);
  // The fusion weights are the ones selected for misclassification detection.
  const auto mis = evaluate_misclassification(in, heads, cfg.lambda_grid, cfg.random_head_seed);
  auto m = open_manifest(cfg);
  auto r = evaluate_ood(in, heads, mis.msp_fusion, mis.entropy_fusion);
  write_table(cfg, "ood", r.table, m);
  m.save(manifest_path(cfg));
  log_line(cfg, "eval-ood");
  return r;
}

CalibrationResult cmd_calibrate(const RunConfig& cfg) {
  const auto in = load_eval_inputs(cfg);
  const auto heads = load_heads(cfg);
  auto m = open_manifest(cfg);
  auto r = evaluate_calibration(in, heads, cfg.calib_bins);
  record_calibration(cfg, r, m);
  m.save(manifest_path(cfg));
  log_line(cfg, "calibrate");
  return r;
}

AblationResult cmd_ablate(const RunConfig& cfg) {
  const auto in = load_eval_inputs(cfg);
  const auto full = load_train_task_embeddings(cfg);
  auto m = open_manifest(cfg);
  auto r = evaluate_ablation(in, ablation_rows(cfg, full), cfg.probe, cfg.lambda_grid);
  record_ablation(cfg, r, m);
  m.save(manifest_path(cfg));
  log_line(cfg, "ablate");
  return r;
}

void cmd_ingest(const RunConfig& cfg) {
  if (cfg.mode != Mode::ingest) fail(ErrorCode::config, "the ingest command requires mode = ingest");
  cmd_train(cfg);
  cmd_eval_misclass(cfg);
  if (fs::exists(cfg.ingest_dir / "ood.emb.sspb")) cmd_eval_ood(cfg);
  cmd_calibrate(cfg);
  cmd_ablate(cfg);
}

void cmd_export(const RunConfig& cfg, const fs::path& out_dir) {
  if (cfg.mode != Mode::synthetic) fail(ErrorCode::config, "export works on synthetic runs");
  if (out_dir.empty()) fail(ErrorCode::config, "export needs an output directory");
  const auto in = load_eval_inputs(cfg);
  for (const auto& te : load_train_task_embeddings(cfg)) {
    write_tensor(out_dir / ("train_" + te.task_name + ".emb.sspb"), to_tensor(te.rows));
  }
  auto put = [&](const std::string& split, const SplitData& s) {
    write_tensor(out_dir / (split + ".emb.sspb"), to_tensor(s.embeddings));
    write_tensor(out_dir / (split + ".logits.sspb"), to_tensor(s.logits));
    write_tensor(out_dir / (split + ".labels.sspb"), to_tensor(s.labels));
  };
  put("val", in.val);
  put("test", in.test);
  if (in.ood) {
    write_tensor(out_dir / "ood.emb.sspb", to_tensor(in.ood->embeddings));
    write_tensor(out_dir / "ood.logits.sspb", to_tensor(in.ood->logits));
  }
  Manifest m;
  for (const auto& task : cfg.tasks) m.set("probe." + task.name, task.spec_string());
  m.set("source", "synthetic run export");
  if (fs::exists(cfg.run_dir / "model.sspc")) m.set("model.hash", hex64(fnv1a_file(cfg.run_dir / "model.sspc")));
  m.save(out_dir / "manifest.txt");
  log_line(cfg, "export " + out_dir.string());
}

void run_command(const RunConfig& cfg, Command command, const fs::path& export_dir) {
  switch (command) {
    case Command::gen_data: cmd_gen_data(cfg); break;
    case Command::train: cmd_train(cfg); break;
    case Command::eval_misclass: cmd_eval_misclass(cfg); break;
    case Command::eval_ood: cmd_eval_ood(cfg); break;
    case Command::calibrate: cmd_calibrate(cfg); break;
    case Command::ablate: cmd_ablate(cfg); break;
    case Command::ingest: cmd_ingest(cfg); break;
    case Command::export_embeddings: cmd_export(cfg, export_dir); break;
    case Command::all:
      if (cfg.mode == Mode::ingest) {
        cmd_ingest(cfg);
        break;
      }
      cmd_gen_data(cfg);
      cmd_train(cfg);
      cmd_eval_misclass(cfg);
      cmd_eval_ood(cfg);
      cmd_calibrate(cfg);
      cmd_ablate(cfg);
      break;
  }
}

void write_golden_transforms(const fs::path& dir) {
  const transforms::ImageShape shape{1, 4, 4};
  std::vector<float> pattern(16);
  for (std::size_t i = 0; i < pattern.size(); ++i) pattern[i] = static_cast<float>(i) / 15.0f;
  auto put = [&](const std::string& name, const std::vector<float>& img) {
    write_tensor(dir / (name + ".sspb"), Tensor{{1, 1, 4, 4}, img});
  };
  put("pattern", pattern);
  std::string index;
  for (int k = 0; k < 4; ++k) {
    const auto name = "rotate_" + std::to_string(90 * k);
    put(name, transforms::rotate_quarter(pattern, shape, k));
    index += name + " = rotate " + std::to_string(90 * k) + "\n";
  }
  const std::pair<int, int> shifts[] = {{0, 0}, {1, 0}, {-1, 0}, {0, 1}, {0, -1}, {3, 0}, {-3, 0}, {2, -3}, {-2, 3}};
  for (auto [dx, dy] : shifts) {
    const auto name = "translate_" + std::to_string(dx) + "_" + std::to_string(dy);
    put(name, transforms::translate_reflect(pattern, shape, dx, dy));
    index += name + " = translate " + std::to_string(dx) + ":" + std::to_string(dy) + "\n";
  }
  write_text(dir / "golden.txt", index);
}

}  // namespace ssp::pipeline
