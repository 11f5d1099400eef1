#pragma once

// Pipeline stages. Stages share one run directory:
//
//   <run>/data/{train,val,test}.{images,labels}.sspb
//   <run>/data_ood/test.{images,labels}.sspb
//   <run>/model.sspc            backbone + classifier (synthetic mode)
//   <run>/heads.sspc            one probing head per task
//   <run>/manifest.txt          sorted key = value lines, rewritten by every stage
//   <run>/log.txt               timestamps (kept out of the manifest)
//   <run>/reports/*.csv|*.md
//
// An ingest directory holds externally extracted tensors:
//
//   train_<task>.emb.sspb       f32 (N*k) x D, sample-major over the task's transforms
//   {val,test}.emb.sspb         f32 N x D
//   {val,test}.logits.sspb      f32 N x K
//   {val,test}.labels.sspb      i32 N
//   ood.emb.sspb, ood.logits.sspb
//   manifest.txt                must contain probe.<task> = <transform list> for every task

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pipeline/config.hpp"
#include "pipeline/evaluate.hpp"

namespace ssp::pipeline {

enum class Command { gen_data, train, eval_misclass, eval_ood, calibrate, ablate, ingest, export_embeddings, all };

std::optional<Command> parse_command(const std::string& name);
const char* command_name(Command c);

/// Sorted key/value text file.
class Manifest {
 public:
  static Manifest load(const std::filesystem::path& path);
  void set(const std::string& key, const std::string& value);
  void set(const std::string& key, double value);
  std::optional<std::string> get(const std::string& key) const;
  std::string text() const;
  void save(const std::filesystem::path& path) const;
  const std::map<std::string, std::string>& entries() const noexcept { return entries_; }

 private:
  std::map<std::string, std::string> entries_;
};

Manifest parse_manifest(const std::string& text);

struct TrainSummary {
  double test_accuracy = 0.0;
  std::vector<double> epoch_loss;
  std::vector<probing::HeadTraining> heads;
};

void cmd_gen_data(const RunConfig& cfg);
TrainSummary cmd_train(const RunConfig& cfg);
MisclassResult cmd_eval_misclass(const RunConfig& cfg);
OodResult cmd_eval_ood(const RunConfig& cfg);
CalibrationResult cmd_calibrate(const RunConfig& cfg);
AblationResult cmd_ablate(const RunConfig& cfg);
/// Trains heads from the ingest directory, then runs every evaluation.
void cmd_ingest(const RunConfig& cfg);
/// Writes a synthetic run's embeddings and logits in the ingest layout.
void cmd_export(const RunConfig& cfg, const std::filesystem::path& out_dir);

void run_command(const RunConfig& cfg, Command command, const std::filesystem::path& export_dir = {});

// Artifact access shared by the stages.
EvalInputs load_eval_inputs(const RunConfig& cfg);
std::vector<probing::TaskEmbeddings> load_train_task_embeddings(const RunConfig& cfg);
std::vector<probing::ProbingHead> load_heads(const RunConfig& cfg);
std::vector<AblationRow> ablation_rows(const RunConfig& cfg, const std::vector<probing::TaskEmbeddings>& full);

/// Writes the 4x4 transform conformance pattern and its transformed versions.
void write_golden_transforms(const std::filesystem::path& dir);

}  // namespace ssp::pipeline
