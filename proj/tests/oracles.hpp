#pragma once

// Reference implementations used only by tests. They are deliberately naive (quadratic or
// exhaustive) and share no code with the library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <set>
#include <vector>

#include "core/rng.hpp"

namespace oracle {

struct Instance {
  std::vector<double> scores;
  std::vector<std::uint8_t> positive;
};

/// Random detection problem with heavy ties (scores drawn from a small set) and both classes present.
inline Instance random_instance(ssp::Rng& rng, std::size_t max_n = 200) {
  Instance in;
  const std::size_t n = 2 + rng.below(max_n - 1);
  const std::uint64_t levels = 1 + rng.below(20);
  for (std::size_t i = 0; i < n; ++i) {
    in.scores.push_back(static_cast<double>(rng.below(levels)) / 7.0 - 1.0);
    in.positive.push_back(rng.uniform() < 0.4 ? 1 : 0);
  }
  in.positive[0] = 1;
  in.positive[1] = 0;
  return in;
}

/// Probability that a random positive outranks a random negative, ties counted as one half.
inline double pairwise_auroc(const std::vector<double>& s, const std::vector<std::uint8_t>& pos) {
  double wins = 0.0;
  double pairs = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!pos[i]) continue;
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (pos[j]) continue;
      pairs += 1.0;
      if (s[i] > s[j]) wins += 1.0;
      else if (s[i] == s[j]) wins += 0.5;
    }
  }
  return wins / pairs;
}

struct Counts {
  double tp = 0, fp = 0;
};

/// Counts of samples predicted positive at threshold t (score >= t), by brute force.
inline Counts counts_at(const std::vector<double>& s, const std::vector<std::uint8_t>& pos, double t) {
  Counts c;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] >= t) (pos[i] ? c.tp : c.fp) += 1.0;
  }
  return c;
}

inline std::vector<double> thresholds_desc(const std::vector<double>& s) {
  std::set<double> uniq(s.begin(), s.end());
  return {uniq.rbegin(), uniq.rend()};
}

/// Average precision by enumerating every distinct threshold.
inline double enumerated_aupr(const std::vector<double>& s, const std::vector<std::uint8_t>& pos) {
  const double p = static_cast<double>(std::count(pos.begin(), pos.end(), 1));
  double area = 0.0, prev_recall = 0.0;
  for (double t : thresholds_desc(s)) {
    const auto c = counts_at(s, pos, t);
    const double recall = c.tp / p;
    area += (recall - prev_recall) * (c.tp / (c.tp + c.fp));
    prev_recall = recall;
  }
  return area;
}

/// FPR at the highest threshold whose TPR is at least 0.95.
inline double enumerated_fpr95(const std::vector<double>& s, const std::vector<std::uint8_t>& pos) {
  const double p = static_cast<double>(std::count(pos.begin(), pos.end(), 1));
  const double n = static_cast<double>(s.size()) - p;
  for (double t : thresholds_desc(s)) {
    const auto c = counts_at(s, pos, t);
    if (20.0 * c.tp >= 19.0 * p) return c.fp / n;
  }
  return 1.0;
}

/// Central finite difference of f along one coordinate.
inline double central_difference(const std::function<double()>& f, double& x, double h = 1e-4) {
  const double saved = x;
  x = saved + h;
  const double up = f();
  x = saved - h;
  const double down = f();
  x = saved;
  return (up - down) / (2.0 * h);
}

/// |a - b| / max(|a|, |b|, floor); the floor keeps near-zero gradients from dominating.
inline double relative_error(double a, double b, double floor = 1e-6) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

}  // namespace oracle
