#include "metrics/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "core/softmax.hpp"

namespace ssp::metrics {
namespace {

struct Step {
  std::size_t tp = 0, fp = 0;
};

struct Sweep {
  std::vector<Step> steps;  // cumulative counts after each distinct threshold
  std::size_t pos = 0, neg = 0;
};

Sweep sweep(std::span<const double> scores, std::span<const std::uint8_t> positive) {
  require(scores.size() == positive.size(), "scores and labels differ in length");
  for (double s : scores) require(std::isfinite(s), "detection scores must be finite");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return scores[a] > scores[b]; });
  Sweep s;
  Step cur;
  for (std::size_t i = 0; i < order.size(); ++i) {
    (positive[order[i]] ? cur.tp : cur.fp) += 1;
    if (i + 1 == order.size() || scores[order[i + 1]] != scores[order[i]]) s.steps.push_back(cur);
  }
  s.pos = cur.tp;
  s.neg = cur.fp;
  return s;
}

void require_both(const Sweep& s, const char* metric) {
  if (s.pos == 0 || s.neg == 0) {
    fail(ErrorCode::undefined_metric, std::string(metric) + " needs at least one positive and one negative");
  }
}

Flags negate(std::span<const std::uint8_t> f) {
  Flags out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = f[i] ? 0 : 1;
  return out;
}

std::vector<double> negate(std::span<const double> v) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = -v[i];
  return out;
}

std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = r;
    i = j + 1;
  }
  return ranks;
}

double pearson(std::span<const double> a, std::span<const double> b) {
  const auto n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (saa <= 0.0 || sbb <= 0.0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

void check_probs(const ProbMatrix& probs, const LabelVector& labels) {
  require(probs.rows() == labels.size() && probs.rows() > 0, "probability rows and labels differ in count");
  require(static_cast<int>(probs.cols()) == labels.num_classes, "probability columns do not match class count");
}

}  // namespace

std::vector<RocPoint> roc_curve(std::span<const double> scores, std::span<const std::uint8_t> positive) {
  const auto s = sweep(scores, positive);
  require_both(s, "AUROC");
  std::vector<RocPoint> curve{{0.0, 0.0}};
  for (const auto& st : s.steps) {
    curve.push_back({static_cast<double>(st.fp) / static_cast<double>(s.neg),
                     static_cast<double>(st.tp) / static_cast<double>(s.pos)});
  }
  return curve;
}

double auroc(std::span<const double> scores, std::span<const std::uint8_t> positive) {
  const auto curve = roc_curve(scores, positive);
  double area = 0.0;
  for (std::size_t i = 1; i < curve.size(); ++i) {
    area += (curve[i].fpr - curve[i - 1].fpr) * 0.5 * (curve[i].tpr + curve[i - 1].tpr);
  }
  return area;
}

std::vector<PrPoint> pr_curve(std::span<const double> scores, std::span<const std::uint8_t> positive) {
  const auto s = sweep(scores, positive);
  if (s.pos == 0) fail(ErrorCode::undefined_metric, "AUPR needs at least one positive");
  std::vector<PrPoint> curve;
  for (const auto& st : s.steps) {
    curve.push_back({static_cast<double>(st.tp) / static_cast<double>(s.pos),
                     static_cast<double>(st.tp) / static_cast<double>(st.tp + st.fp)});
  }
  return curve;
}

double aupr(std::span<const double> scores, std::span<const std::uint8_t> positive) {
  double area = 0.0, prev_recall = 0.0;
  for (const auto& p : pr_curve(scores, positive)) {
    area += (p.recall - prev_recall) * p.precision;
    prev_recall = p.recall;
  }
  return area;
}

double aupr_err(std::span<const double> confidence, std::span<const std::uint8_t> correct) {
  return aupr(negate(confidence), negate(correct));
}

double aupr_succ(std::span<const double> confidence, std::span<const std::uint8_t> correct) {
  return aupr(confidence, correct);
}

double fpr_at_95_tpr(std::span<const double> scores, std::span<const std::uint8_t> positive) {
  const auto s = sweep(scores, positive);
  require_both(s, "FPR@95%TPR");
  for (const auto& st : s.steps) {
    // Integer comparison of TP / P >= 0.95.
    if (20 * st.tp >= 19 * s.pos) return static_cast<double>(st.fp) / static_cast<double>(s.neg);
  }
  return 1.0;
}

std::vector<ReliabilityBin> reliability_bins(std::span<const double> confidence, std::span<const std::uint8_t> correct,
                                             std::size_t bins) {
  require(confidence.size() == correct.size(), "confidence and correctness differ in length");
  require(bins >= 1, "need at least one bin");
  std::vector<ReliabilityBin> out(bins);
  for (std::size_t i = 0; i < confidence.size(); ++i) {
    const double c = confidence[i];
    require(std::isfinite(c) && c >= 0.0 && c <= 1.0, "confidence must lie in [0,1]");
    const double scaled = std::ceil(c * static_cast<double>(bins)) - 1.0;
    const auto b = static_cast<std::size_t>(std::clamp(scaled, 0.0, static_cast<double>(bins - 1)));
    out[b].count += 1;
    out[b].mean_confidence += c;
    out[b].accuracy += correct[i] ? 1.0 : 0.0;
  }
  for (auto& b : out) {
    if (b.count == 0) continue;
    b.mean_confidence /= static_cast<double>(b.count);
    b.accuracy /= static_cast<double>(b.count);
  }
  return out;
}

double ece(std::span<const double> confidence, std::span<const std::uint8_t> correct, std::size_t bins) {
  const auto rb = reliability_bins(confidence, correct, bins);
  double total = 0.0, worst = 0.0;
  for (const auto& b : rb) {
    if (!b.count) continue;
    const double gap = std::abs(b.accuracy - b.mean_confidence);
    total += static_cast<double>(b.count) * gap;
    worst = std::max(worst, gap);
  }
  // A weighted mean never exceeds its largest term; the cap removes the last-ulp rounding excess.
  return confidence.empty() ? 0.0 : std::min(total / static_cast<double>(confidence.size()), worst);
}

double mce(std::span<const double> confidence, std::span<const std::uint8_t> correct, std::size_t bins) {
  double worst = 0.0;
  for (const auto& b : reliability_bins(confidence, correct, bins)) {
    if (b.count) worst = std::max(worst, std::abs(b.accuracy - b.mean_confidence));
  }
  return worst;
}

double nll(const ProbMatrix& probs, const LabelVector& labels) {
  check_probs(probs, labels);
  double total = 0.0;
  for (std::size_t i = 0; i < probs.rows(); ++i) {
    total += -std::log(std::max(probs(i, static_cast<std::size_t>(labels.labels[i])), kProbFloor));
  }
  return total / static_cast<double>(probs.rows());
}

double brier(const ProbMatrix& probs, const LabelVector& labels) {
  check_probs(probs, labels);
  double total = 0.0;
  for (std::size_t i = 0; i < probs.rows(); ++i) {
    for (std::size_t k = 0; k < probs.cols(); ++k) {
      const double target = static_cast<int>(k) == labels.labels[i] ? 1.0 : 0.0;
      total += (probs(i, k) - target) * (probs(i, k) - target);
    }
  }
  return total / static_cast<double>(probs.rows());
}

double spearman(std::span<const double> a, std::span<const double> b) {
  require(a.size() == b.size(), "spearman: length mismatch");
  if (a.size() < 2) return 0.0;
  const auto ra = average_ranks(a), rb = average_ranks(b);
  return pearson(ra, rb);
}

BinnedCorrelation binned_correlation(std::span<const double> confidence, std::span<const std::uint8_t> correct,
                                     std::size_t bins) {
  require(confidence.size() == correct.size(), "confidence and correctness differ in length");
  require(bins >= 1 && confidence.size() >= bins, "binned_correlation needs at least as many samples as bins");
  std::vector<CorrelationBin> all(bins);
  for (std::size_t b = 0; b < bins; ++b) all[b].index = b;
  for (std::size_t i = 0; i < confidence.size(); ++i) {
    const double c = confidence[i];
    require(std::isfinite(c) && c >= 0.0 && c <= 1.0, "confidence must lie in [0,1]");
    const auto b = std::min(static_cast<std::size_t>(c * static_cast<double>(bins)), bins - 1);
    all[b].count += 1;
    all[b].mean_confidence += c;
    all[b].accuracy += correct[i] ? 1.0 : 0.0;
  }
  BinnedCorrelation out;
  std::vector<double> idx, acc;
  for (auto& b : all) {
    if (!b.count) continue;
    b.mean_confidence /= static_cast<double>(b.count);
    b.accuracy /= static_cast<double>(b.count);
    out.bins.push_back(b);
    idx.push_back(static_cast<double>(b.index));
    acc.push_back(b.accuracy);
  }
  out.spearman = spearman(idx, acc);
  return out;
}

double point_biserial(std::span<const double> score, std::span<const std::uint8_t> flag) {
  require(score.size() == flag.size() && !score.empty(), "point_biserial: length mismatch");
  std::vector<double> f(flag.begin(), flag.end());
  return pearson(score, f);
}

MetricReport misclassification_report(std::span<const double> confidence, std::span<const std::uint8_t> correct) {
  MetricReport r;
  r.fpr_at_95tpr = fpr_at_95_tpr(confidence, correct);
  r.auroc = auroc(confidence, correct);
  r.aupr_err = aupr_err(confidence, correct);
  r.aupr_succ = aupr_succ(confidence, correct);
  return r;
}

MetricReport calibration_report(const ProbMatrix& probs, const LabelVector& labels, std::size_t bins) {
  check_probs(probs, labels);
  std::vector<double> top(probs.rows());
  for (std::size_t i = 0; i < probs.rows(); ++i) top[i] = probs(i, argmax_row(probs.row(i)));
  const auto ok = correctness(probs, labels);
  MetricReport r;
  r.ece = ece(top, ok, bins);
  r.mce = mce(top, ok, bins);
  r.nll = nll(probs, labels);
  r.brier = brier(probs, labels);
  return r;
}

Flags correctness(const Matrix& probs_or_logits, const LabelVector& labels) {
  require(probs_or_logits.rows() == labels.size(), "prediction rows and labels differ in count");
  Flags ok(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    ok[i] = static_cast<int>(argmax_row(probs_or_logits.row(i))) == labels.labels[i] ? 1 : 0;
  }
  return ok;
}

}  // namespace ssp::metrics
