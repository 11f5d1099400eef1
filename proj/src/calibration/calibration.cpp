#include "calibration/calibration.hpp"

#include <algorithm>
#include <cmath>

#include "core/softmax.hpp"

namespace ssp::calibration {
namespace {

void check_aligned(const LogitMatrix& logits, const LabelVector& labels) {
  require(logits.rows() == labels.size() && logits.rows() > 0, "calibration: logits and labels must align and be non-empty");
  require(static_cast<int>(logits.cols()) == labels.num_classes, "calibration: logit columns do not match class count");
}

void check_confs(const probing::ProbingConfidence& confs, std::size_t rows, std::size_t coefficients) {
  require(confs.task_count() == coefficients, "temperature model needs one coefficient per probing task");
  for (const auto& v : confs.values) require(v.size() == rows, "probing confidence length differs from logits");
}

// NLL and its derivative with respect to each sample's temperature.
double nll_and_dtau(const LogitMatrix& logits, const LabelVector& labels, std::span<const double> temps,
                    std::vector<double>* dtau) {
  const std::size_t n = logits.rows(), K = logits.cols();
  std::vector<double> probs(K);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto z = logits.row(i);
    const double inv = 1.0 / temps[i];
    const double lse = softmax_into(z, probs, inv);
    const auto y = static_cast<std::size_t>(labels.labels[i]);
    total += lse - z[y] * inv;
    if (dtau) {
      double expected = 0.0;
      for (std::size_t k = 0; k < K; ++k) expected += probs[k] * z[k];
      (*dtau)[i] = (z[y] - expected) * inv * inv / static_cast<double>(n);
    }
  }
  return total / static_cast<double>(n);
}

}  // namespace

double TemperatureModel::temperature(const probing::ProbingConfidence& confs, std::size_t sample) const {
  double tau = a0;
  for (std::size_t t = 0; t < a.size(); ++t) tau += a[t] * confs.values[t][sample];
  return std::max(tau, kMinTemperature);
}

double scaled_nll(const LogitMatrix& logits, const LabelVector& labels, std::span<const double> temps) {
  check_aligned(logits, labels);
  require(temps.size() == logits.rows(), "scaled_nll: one temperature per row required");
  return nll_and_dtau(logits, labels, temps, nullptr);
}

double fit_temperature(const LogitMatrix& val_logits, const LabelVector& val_labels) {
  check_aligned(val_logits, val_labels);
  std::vector<double> temps(val_logits.rows());
  auto objective = [&](double log_t) {
    std::fill(temps.begin(), temps.end(), std::exp(log_t));
    return nll_and_dtau(val_logits, val_labels, temps, nullptr);
  };
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = std::log(0.05), hi = std::log(20.0);
  double x1 = hi - ratio * (hi - lo), x2 = lo + ratio * (hi - lo);
  double f1 = objective(x1), f2 = objective(x2);
  for (int it = 0; it < 200; ++it) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - ratio * (hi - lo);
      f1 = objective(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + ratio * (hi - lo);
      f2 = objective(x2);
    }
  }
  return std::exp(0.5 * (lo + hi));
}

std::vector<double> temperatures(const TemperatureModel& model, const probing::ProbingConfidence& confs,
                                 std::size_t rows) {
  check_confs(confs, rows, model.a.size());
  std::vector<double> temps(rows);
  for (std::size_t i = 0; i < rows; ++i) temps[i] = model.temperature(confs, i);
  return temps;
}

InputDependentFit fit_input_dependent(const LogitMatrix& val_logits, const probing::ProbingConfidence& val_confs,
                                      const LabelVector& val_labels) {
  check_aligned(val_logits, val_labels);
  const std::size_t n = val_logits.rows(), m = val_confs.task_count();
  check_confs(val_confs, n, m);

  InputDependentFit fit;
  fit.model.a0 = fit_temperature(val_logits, val_labels);
  fit.model.a.assign(m, 0.0);

  auto raw_tau = [&](const TemperatureModel& tm, std::size_t i) {
    double tau = tm.a0;
    for (std::size_t t = 0; t < m; ++t) tau += tm.a[t] * val_confs.values[t][i];
    return tau;
  };

  std::vector<double> dtau(n);
  auto temps = temperatures(fit.model, val_confs, n);
  double current = nll_and_dtau(val_logits, val_labels, temps, &dtau);
  fit.initial_nll = current;

  double step = 1.0;
  for (int it = 0; it < 500; ++it) {
    // Gradient with respect to (a0, a_1..a_m); clamped samples contribute nothing.
    std::vector<double> grad(m + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      if (raw_tau(fit.model, i) <= kMinTemperature) continue;
      grad[0] += dtau[i];
      for (std::size_t t = 0; t < m; ++t) grad[t + 1] += dtau[i] * val_confs.values[t][i];
    }
    bool moved = false;
    while (step >= 1e-10) {
      TemperatureModel trial = fit.model;
      trial.a0 -= step * grad[0];
      for (std::size_t t = 0; t < m; ++t) trial.a[t] -= step * grad[t + 1];
      const auto trial_temps = temperatures(trial, val_confs, n);
      std::vector<double> trial_dtau(n);
      const double value = nll_and_dtau(val_logits, val_labels, trial_temps, &trial_dtau);
      if (std::isfinite(value) && value < current) {
        fit.model = std::move(trial);
        current = value;
        dtau = std::move(trial_dtau);
        moved = true;
        step *= 2.0;
        break;
      }
      step *= 0.5;
    }
    fit.iterations = it + 1;
    if (!moved) break;
  }
  fit.final_nll = current;
  for (std::size_t i = 0; i < n; ++i) fit.clamped += raw_tau(fit.model, i) <= kMinTemperature;
  return fit;
}

ProbMatrix apply_temperature(const LogitMatrix& logits, const probing::ProbingConfidence& confs,
                             const TemperatureModel& model) {
  const auto temps = temperatures(model, confs, logits.rows());
  ProbMatrix probs(logits.rows(), logits.cols());
  for (std::size_t i = 0; i < logits.rows(); ++i) {
    const auto z = logits.row(i);
    for (double v : z) require(std::isfinite(v), "apply_temperature: non-finite logit");
    softmax_into(z, probs.row(i), 1.0 / temps[i]);
  }
  return probs;
}

ProbMatrix apply_scalar_temperature(const LogitMatrix& logits, double temperature) {
  TemperatureModel tm{temperature, {}};
  return apply_temperature(logits, probing::ProbingConfidence{}, tm);
}

std::size_t BinningModel::bin_of(double confidence) const {
  const auto m = calibrated.size();
  const auto b = static_cast<std::size_t>(std::max(0.0, confidence) * static_cast<double>(m));
  return std::min(b, m - 1);
}

BinningModel fit_histogram_binning(std::span<const double> val_confidence, std::span<const std::uint8_t> val_correct,
                                   std::size_t bins) {
  require(bins >= 1, "histogram binning needs at least one bin");
  require(val_confidence.size() == val_correct.size(), "confidence and correctness differ in length");
  BinningModel model{std::vector<double>(bins, 0.0), std::vector<std::size_t>(bins, 0)};
  std::vector<double> hits(bins, 0.0);
  for (std::size_t i = 0; i < val_confidence.size(); ++i) {
    const auto b = model.bin_of(val_confidence[i]);
    model.counts[b] += 1;
    hits[b] += val_correct[i] ? 1.0 : 0.0;
  }
  for (std::size_t b = 0; b < bins; ++b) {
    model.calibrated[b] = model.counts[b] ? hits[b] / static_cast<double>(model.counts[b])
                                          : (static_cast<double>(b) + 0.5) / static_cast<double>(bins);
  }
  return model;
}

ScoreVector apply_binning(const BinningModel& model, std::span<const double> confidence) {
  ScoreVector out(confidence.size());
  for (std::size_t i = 0; i < confidence.size(); ++i) out[i] = model.calibrated[model.bin_of(confidence[i])];
  return out;
}

}  // namespace ssp::calibration

namespace ssp::calibration {

ProbMatrix binned_probabilities(const BinningModel& model, const ProbMatrix& probs) {
  ProbMatrix out(probs.rows(), probs.cols());
  for (std::size_t i = 0; i < probs.rows(); ++i) {
    const auto row = probs.row(i);
    const auto top = argmax_row(row);
    const double cal = model.calibrated[model.bin_of(row[top])];
    const double rest = 1.0 - row[top];
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k == top) out(i, k) = cal;
      else if (rest > 0.0) out(i, k) = (1.0 - cal) * row[k] / rest;
      else out(i, k) = (1.0 - cal) / static_cast<double>(row.size() - 1);
    }
  }
  return out;
}

}  // namespace ssp::calibration
