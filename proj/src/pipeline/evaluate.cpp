#include "pipeline/evaluate.hpp"

#include <algorithm>

#include "core/softmax.hpp"

namespace ssp::pipeline {
namespace {

using metrics::Column;

void check_split(const SplitData& s, const std::string& name, std::size_t dim, std::size_t classes) {
  const auto n = s.labels.size();
  require(n > 0, name + " split is empty");
  require(s.embeddings.rows() == n && s.logits.rows() == n,
          name + " split: expected " + std::to_string(n) + " embedding and logit rows, found " +
              std::to_string(s.embeddings.rows()) + " and " + std::to_string(s.logits.rows()));
  require(s.embeddings.cols() == dim, name + " split: expected embedding dim " + std::to_string(dim) + ", found " +
                                          std::to_string(s.embeddings.cols()));
  require(s.logits.cols() == classes, name + " split: expected " + std::to_string(classes) + " logit columns, found " +
                                          std::to_string(s.logits.cols()));
}

double mean_where(const ScoreVector& v, const metrics::Flags& f, bool value) {
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (static_cast<bool>(f[i]) == value) {
      sum += v[i];
      ++n;
    }
  }
  return n ? sum / static_cast<double>(n) : 0.0;
}

metrics::MetricReport auroc_only(const ScoreVector& s, const metrics::Flags& positive) {
  metrics::MetricReport r;
  r.auroc = metrics::auroc(s, positive);
  return r;
}

}  // namespace

void validate(const EvalInputs& in) {
  const auto dim = in.val.embeddings.cols();
  const auto classes = in.val.logits.cols();
  require(classes >= 2, "logits need at least two classes");
  check_split(in.val, "val", dim, classes);
  check_split(in.test, "test", dim, classes);
  if (in.ood) {
    require(in.ood->embeddings.rows() == in.ood->logits.rows() && in.ood->embeddings.rows() > 0,
            "ood: embedding and logit row counts differ");
    require(in.ood->embeddings.cols() == dim, "ood: expected embedding dim " + std::to_string(dim) + ", found " +
                                                   std::to_string(in.ood->embeddings.cols()));
    require(in.ood->logits.cols() == classes, "ood: expected " + std::to_string(classes) + " logit columns, found " +
                                                  std::to_string(in.ood->logits.cols()));
  }
}

MisclassResult evaluate_misclassification(const EvalInputs& in, const std::vector<probing::ProbingHead>& heads,
                                          const std::vector<double>& grid, std::uint64_t random_head_seed) {
  validate(in);
  MisclassResult r;
  const auto val_probs = softmax_rows(in.val.logits);
  const auto test_probs = softmax_rows(in.test.logits);
  const auto val_ok = metrics::correctness(in.val.logits, in.val.labels);
  const auto test_ok = metrics::correctness(in.test.logits, in.test.labels);
  r.test_accuracy = static_cast<double>(std::count(test_ok.begin(), test_ok.end(), 1)) / static_cast<double>(test_ok.size());

  const auto val_conf = probing::probing_confidences(heads, in.val.embeddings);
  const auto test_conf = probing::probing_confidences(heads, in.test.embeddings);

  const auto val_msp = scores::msp_score(val_probs), test_msp = scores::msp_score(test_probs);
  const auto val_ent = scores::entropy_score(val_probs), test_ent = scores::entropy_score(test_probs);

  r.msp_fusion = scores::search_lambda(val_msp, val_conf, val_ok, grid);
  r.entropy_fusion = scores::search_lambda(val_ent, val_conf, val_ok, grid);
  r.val_aupr_err_msp = metrics::aupr_err(val_msp, val_ok);
  r.val_aupr_err_msp_ssp = metrics::aupr_err(scores::fuse_ssp(val_msp, val_conf, r.msp_fusion.lambdas), val_ok);
  r.val_aupr_err_entropy = metrics::aupr_err(val_ent, val_ok);
  r.val_aupr_err_entropy_ssp =
      metrics::aupr_err(scores::fuse_ssp(val_ent, val_conf, r.entropy_fusion.lambdas), val_ok);

  r.table.title = "Misclassification detection";
  r.table.columns = {Column::fpr_at_95tpr, Column::aupr_err, Column::aupr_succ, Column::auroc};
  r.table.rows = {
      {"MSP", metrics::misclassification_report(test_msp, test_ok)},
      {"MSP+SSP", metrics::misclassification_report(scores::fuse_ssp(test_msp, test_conf, r.msp_fusion.lambdas), test_ok)},
      {"Entropy", metrics::misclassification_report(test_ent, test_ok)},
      {"Entropy+SSP",
       metrics::misclassification_report(scores::fuse_ssp(test_ent, test_conf, r.entropy_fusion.lambdas), test_ok)},
  };

  for (std::size_t t = 0; t < heads.size(); ++t) {
    ProbeDiagnostics d;
    d.task = heads[t].task_name;
    const auto& conf = test_conf.values[t];
    d.curve = metrics::binned_correlation(conf, test_ok, 10);
    d.mean_conf_correct = mean_where(conf, test_ok, true);
    d.mean_conf_error = mean_where(conf, test_ok, false);
    d.point_biserial = metrics::point_biserial(conf, test_ok);
    const auto random = probing::random_head(d.task, heads[t].transform_count(), heads[t].layer.in_dim(),
                                             random_head_seed + t);
    d.random_point_biserial = metrics::point_biserial(probing::probing_confidence(random, in.test.embeddings), test_ok);
    r.probes.push_back(std::move(d));
  }
  return r;
}

OodResult evaluate_ood(const EvalInputs& in, const std::vector<probing::ProbingHead>& heads,
                       const scores::FusionConfig& msp_fusion, const scores::FusionConfig& entropy_fusion) {
  validate(in);
  if (!in.ood) fail(ErrorCode::missing_input, "out-of-distribution data is missing");
  const auto id_probs = softmax_rows(in.test.logits);
  const auto ood_probs = softmax_rows(in.ood->logits);
  const auto id_conf = probing::probing_confidences(heads, in.test.embeddings);
  const auto ood_conf = probing::probing_confidences(heads, in.ood->embeddings);

  metrics::Flags positive(in.test.labels.size(), 1);
  positive.resize(positive.size() + in.ood->logits.rows(), 0);
  auto joined = [](ScoreVector a, const ScoreVector& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
  };

  const auto msp = joined(scores::msp_score(id_probs), scores::msp_score(ood_probs));
  const auto msp_ssp = joined(scores::fuse_ssp(scores::msp_score(id_probs), id_conf, msp_fusion.lambdas),
                              scores::fuse_ssp(scores::msp_score(ood_probs), ood_conf, msp_fusion.lambdas));
  const auto ent = joined(scores::entropy_score(id_probs), scores::entropy_score(ood_probs));
  const auto ent_ssp = joined(scores::fuse_ssp(scores::entropy_score(id_probs), id_conf, entropy_fusion.lambdas),
                              scores::fuse_ssp(scores::entropy_score(ood_probs), ood_conf, entropy_fusion.lambdas));

  OodResult r;
  r.table.title = "Out-of-distribution detection";
  r.table.columns = {Column::auroc};
  r.table.rows = {
      {"MSP", auroc_only(msp, positive)},
      {"MSP+SSP", auroc_only(msp_ssp, positive)},
      {"Entropy", auroc_only(ent, positive)},
      {"Entropy+SSP", auroc_only(ent_ssp, positive)},
  };
  return r;
}

CalibrationResult evaluate_calibration(const EvalInputs& in, const std::vector<probing::ProbingHead>& heads,
                                       std::size_t bins) {
  validate(in);
  CalibrationResult r;
  const auto val_probs = softmax_rows(in.val.logits);
  const auto test_probs = softmax_rows(in.test.logits);
  const auto val_ok = metrics::correctness(in.val.logits, in.val.labels);
  const auto test_ok = metrics::correctness(in.test.logits, in.test.labels);
  const auto val_conf = probing::probing_confidences(heads, in.val.embeddings);
  const auto test_conf = probing::probing_confidences(heads, in.test.embeddings);

  // Histogram binning only rewrites the top-label confidence; predictions stay those of the raw model.
  const auto binning = calibration::fit_histogram_binning(scores::msp_score(val_probs), val_ok, bins);
  const auto binned_conf = calibration::apply_binning(binning, scores::msp_score(test_probs));
  metrics::MetricReport binned;
  binned.ece = metrics::ece(binned_conf, test_ok, bins);
  binned.mce = metrics::mce(binned_conf, test_ok, bins);
  const auto binned_probs = calibration::binned_probabilities(binning, test_probs);
  binned.nll = metrics::nll(binned_probs, in.test.labels);
  binned.brier = metrics::brier(binned_probs, in.test.labels);

  r.temperature = calibration::fit_temperature(in.val.logits, in.val.labels);
  const auto ts_probs = calibration::apply_scalar_temperature(in.test.logits, r.temperature);
  r.input_dependent = calibration::fit_input_dependent(in.val.logits, val_conf, in.val.labels);
  const auto ssp_probs = calibration::apply_temperature(in.test.logits, test_conf, r.input_dependent.model);

  r.val_nll_temperature =
      calibration::scaled_nll(in.val.logits, in.val.labels, std::vector<double>(in.val.logits.rows(), r.temperature));
  r.val_nll_input_dependent = calibration::scaled_nll(
      in.val.logits, in.val.labels, calibration::temperatures(r.input_dependent.model, val_conf, in.val.logits.rows()));

  r.table.title = "Calibration";
  r.table.columns = {Column::ece, Column::mce, Column::nll, Column::brier};
  r.table.rows = {
      {"MSP (uncalibrated)", metrics::calibration_report(test_probs, in.test.labels, bins)},
      {"Hist. Binning", binned},
      {"Temp. Scaling", metrics::calibration_report(ts_probs, in.test.labels, bins)},
      {"Scaling+SSP", metrics::calibration_report(ssp_probs, in.test.labels, bins)},
  };
  auto acc = [](const metrics::Flags& f) {
    return static_cast<double>(std::count(f.begin(), f.end(), 1)) / static_cast<double>(f.size());
  };
  r.row_accuracy = {acc(test_ok), acc(test_ok), acc(metrics::correctness(ts_probs, in.test.labels)),
                    acc(metrics::correctness(ssp_probs, in.test.labels))};
  return r;
}

AblationResult evaluate_ablation(const EvalInputs& in, const std::vector<AblationRow>& rows,
                                 const model::TrainConfig& probe_cfg, const std::vector<double>& grid) {
  validate(in);
  const auto val_ok = metrics::correctness(in.val.logits, in.val.labels);
  const auto test_ok = metrics::correctness(in.test.logits, in.test.labels);
  const auto val_msp = scores::msp_score(softmax_rows(in.val.logits));
  const auto test_msp = scores::msp_score(softmax_rows(in.test.logits));

  AblationResult r;
  r.table.title = "Probing task ablation (MSP+SSP)";
  r.table.columns = {Column::auroc};
  for (const auto& row : rows) {
    std::vector<probing::ProbingHead> heads;
    for (auto& trained : probing::train_probing_heads(row.tasks, probe_cfg, true)) heads.push_back(std::move(trained.head));
    const auto val_conf = probing::probing_confidences(heads, in.val.embeddings);
    const auto test_conf = probing::probing_confidences(heads, in.test.embeddings);
    const auto fusion = scores::search_lambda(val_msp, val_conf, val_ok, grid);
    r.table.rows.push_back({row.label, auroc_only(scores::fuse_ssp(test_msp, test_conf, fusion.lambdas), test_ok)});
    r.lambdas.push_back(fusion.lambdas);
  }
  return r;
}

}  // namespace ssp::pipeline
