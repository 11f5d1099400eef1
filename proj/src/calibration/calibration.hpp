#pragma once

#include <span>
#include <vector>

#include "core/types.hpp"
#include "probing/probing.hpp"

namespace ssp::calibration {

inline constexpr double kMinTemperature = 1e-2;

/// tau(x) = max(a0 + sum_i a[i] * p_i(x), kMinTemperature).
struct TemperatureModel {
  double a0 = 1.0;
  std::vector<double> a;

  double temperature(const probing::ProbingConfidence& confs, std::size_t sample) const;
};

/// Mean NLL of softmax(logits[i] / temps[i]) computed through log-sum-exp.
double scaled_nll(const LogitMatrix& logits, const LabelVector& labels, std::span<const double> temps);

/// Scalar temperature minimizing validation NLL: golden-section search on ln T over
/// [ln 0.05, ln 20], 200 iterations.
double fit_temperature(const LogitMatrix& val_logits, const LabelVector& val_labels);

struct InputDependentFit {
  TemperatureModel model;
  double initial_nll = 0.0;  // NLL of the classical solution the descent starts from
  double final_nll = 0.0;
  int iterations = 0;
  std::size_t clamped = 0;   // validation samples whose tau hit the floor
};

/// Starts from (a0 = fit_temperature, a = 0) and runs gradient descent with a halving
/// line search on the validation NLL (at most 500 iterations, stops once the step is below 1e-10).
InputDependentFit fit_input_dependent(const LogitMatrix& val_logits, const probing::ProbingConfidence& val_confs,
                                      const LabelVector& val_labels);

std::vector<double> temperatures(const TemperatureModel& model, const probing::ProbingConfidence& confs,
                                 std::size_t rows);

ProbMatrix apply_temperature(const LogitMatrix& logits, const probing::ProbingConfidence& confs,
                             const TemperatureModel& model);
ProbMatrix apply_scalar_temperature(const LogitMatrix& logits, double temperature);

/// Top-label histogram binning over equal-width bins [b/M, (b+1)/M), last bin closed.
struct BinningModel {
  std::vector<double> calibrated;  // per bin
  std::vector<std::size_t> counts;

  std::size_t bin_of(double confidence) const;
};

BinningModel fit_histogram_binning(std::span<const double> val_confidence, std::span<const std::uint8_t> val_correct,
                                   std::size_t bins = 15);
ScoreVector apply_binning(const BinningModel& model, std::span<const double> confidence);

/// Replaces each row's top probability by its binned value and rescales the other classes to
/// share the remainder in their original proportions. The argmax can only change when the
/// binned value falls below a runner-up, so report accuracy from the uncalibrated rows.
ProbMatrix binned_probabilities(const BinningModel& model, const ProbMatrix& probs);

}  // namespace ssp::calibration
