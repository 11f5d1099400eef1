#pragma once

// Evaluation shared by synthetic and ingest runs. Everything here consumes embeddings and
// logits at 32-bit precision, exactly as they appear in SSPB files.

#include <optional>
#include <string>
#include <vector>

#include "calibration/calibration.hpp"
#include "metrics/report.hpp"
#include "probing/probing.hpp"
#include "scores/scores.hpp"

namespace ssp::pipeline {

struct SplitData {
  EmbeddingMatrix embeddings;
  LogitMatrix logits;
  LabelVector labels;
};

struct OodData {
  EmbeddingMatrix embeddings;
  LogitMatrix logits;
};

struct EvalInputs {
  SplitData val;
  SplitData test;
  std::optional<OodData> ood;
};

/// Throws invalid_input naming the offending split when shapes disagree.
void validate(const EvalInputs& inputs);

struct ProbeDiagnostics {
  std::string task;
  metrics::BinnedCorrelation curve;     // test probing confidence vs correctness
  double mean_conf_correct = 0.0;
  double mean_conf_error = 0.0;
  double point_biserial = 0.0;          // trained head
  double random_point_biserial = 0.0;   // untrained N(0,1) head
};

struct MisclassResult {
  metrics::ReportTable table;  // MSP, MSP+SSP, Entropy, Entropy+SSP
  scores::FusionConfig msp_fusion;
  scores::FusionConfig entropy_fusion;
  double val_aupr_err_msp = 0.0, val_aupr_err_msp_ssp = 0.0;
  double val_aupr_err_entropy = 0.0, val_aupr_err_entropy_ssp = 0.0;
  double test_accuracy = 0.0;
  std::vector<ProbeDiagnostics> probes;
};

MisclassResult evaluate_misclassification(const EvalInputs& in, const std::vector<probing::ProbingHead>& heads,
                                          const std::vector<double>& grid, std::uint64_t random_head_seed);

struct OodResult {
  metrics::ReportTable table;  // AUROC only
};

/// In-distribution test samples are the positive class.
OodResult evaluate_ood(const EvalInputs& in, const std::vector<probing::ProbingHead>& heads,
                       const scores::FusionConfig& msp_fusion, const scores::FusionConfig& entropy_fusion);

struct CalibrationResult {
  metrics::ReportTable table;  // uncalibrated, histogram binning, temperature scaling, scaling+SSP
  double temperature = 1.0;
  calibration::InputDependentFit input_dependent;
  double val_nll_temperature = 0.0;
  double val_nll_input_dependent = 0.0;
  std::vector<double> row_accuracy;  // argmax accuracy per table row
};

CalibrationResult evaluate_calibration(const EvalInputs& in, const std::vector<probing::ProbingHead>& heads,
                                       std::size_t bins);

struct AblationRow {
  std::string label;
  std::vector<probing::TaskEmbeddings> tasks;
};

struct AblationResult {
  metrics::ReportTable table;  // test AUROC of MSP+SSP per row
  std::vector<std::vector<double>> lambdas;
};

AblationResult evaluate_ablation(const EvalInputs& in, const std::vector<AblationRow>& rows,
                                 const model::TrainConfig& probe_cfg, const std::vector<double>& grid);

}  // namespace ssp::pipeline
