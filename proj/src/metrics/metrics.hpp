#pragma once

// Threshold-sweep detection metrics and calibration errors.
//
// Detection metrics take a score vector (higher = more affinity for the positive class) and a
// flag vector marking positives. Thresholds are swept only at observed score values, in
// descending order, with equal scores grouped into one step.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "core/types.hpp"

namespace ssp::metrics {

using Flags = std::vector<std::uint8_t>;

struct RocPoint {
  double fpr = 0.0, tpr = 0.0;
};

struct PrPoint {
  double recall = 0.0, precision = 1.0;
};

/// Starts at (0,0) and ends at (1,1). Throws undefined_metric without both classes.
std::vector<RocPoint> roc_curve(std::span<const double> scores, std::span<const std::uint8_t> positive);
/// Trapezoidal area under roc_curve.
double auroc(std::span<const double> scores, std::span<const std::uint8_t> positive);

/// One point per distinct threshold.
std::vector<PrPoint> pr_curve(std::span<const double> scores, std::span<const std::uint8_t> positive);
/// Average precision: sum over thresholds of (R_k - R_{k-1}) * P_k.
double aupr(std::span<const double> scores, std::span<const std::uint8_t> positive);

/// Errors as the positive class; low confidence counts as error affinity.
double aupr_err(std::span<const double> confidence, std::span<const std::uint8_t> correct);
/// Successes as the positive class.
double aupr_succ(std::span<const double> confidence, std::span<const std::uint8_t> correct);

/// FPR at the first threshold (descending) whose TPR reaches 0.95. No interpolation.
double fpr_at_95_tpr(std::span<const double> scores, std::span<const std::uint8_t> positive);

struct ReliabilityBin {
  std::size_t count = 0;
  double mean_confidence = 0.0;
  double accuracy = 0.0;
};

/// M equal-width, right-closed bins on (0,1]; confidence 0 lands in the first bin.
std::vector<ReliabilityBin> reliability_bins(std::span<const double> confidence, std::span<const std::uint8_t> correct,
                                             std::size_t bins = 15);
double ece(std::span<const double> confidence, std::span<const std::uint8_t> correct, std::size_t bins = 15);
double mce(std::span<const double> confidence, std::span<const std::uint8_t> correct, std::size_t bins = 15);

inline constexpr double kProbFloor = 1e-12;

/// Mean of -ln p[true], with p floored at 1e-12.
double nll(const ProbMatrix& probs, const LabelVector& labels);
/// Mean over samples of the squared distance to the one-hot label row.
double brier(const ProbMatrix& probs, const LabelVector& labels);

struct CorrelationBin {
  std::size_t index = 0;
  std::size_t count = 0;
  double mean_confidence = 0.0;
  double accuracy = 0.0;
};

struct BinnedCorrelation {
  std::vector<CorrelationBin> bins;  // non-empty bins only, ascending
  double spearman = 0.0;
};

/// Equal-width bins on [0,1]; Spearman correlation of (bin index, accuracy) over non-empty bins.
BinnedCorrelation binned_correlation(std::span<const double> confidence, std::span<const std::uint8_t> correct,
                                     std::size_t bins = 10);

/// Spearman rank correlation with average ranks for ties; 0 when either side is constant.
double spearman(std::span<const double> a, std::span<const double> b);

/// Pearson correlation between a score and a binary outcome.
double point_biserial(std::span<const double> score, std::span<const std::uint8_t> flag);

struct MetricReport {
  std::optional<double> fpr_at_95tpr, auroc, aupr_err, aupr_succ, ece, mce, nll, brier;
};

/// FPR@95%TPR, AUROC, AUPR-ERR and AUPR-SUCC of a confidence score; correct predictions are positives.
MetricReport misclassification_report(std::span<const double> confidence, std::span<const std::uint8_t> correct);

/// ECE/MCE on the top-label confidence, NLL and Brier on the full matrix.
MetricReport calibration_report(const ProbMatrix& probs, const LabelVector& labels, std::size_t bins = 15);

/// Per-row correctness of argmax predictions.
Flags correctness(const Matrix& probs_or_logits, const LabelVector& labels);

}  // namespace ssp::metrics
