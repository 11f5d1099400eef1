#include "scores/scores.hpp"

#include <algorithm>
#include <cmath>

namespace ssp::scores {

ScoreVector msp_score(const ProbMatrix& probs) {
  ScoreVector s(probs.rows());
  for (std::size_t i = 0; i < probs.rows(); ++i) {
    const auto row = probs.row(i);
    s[i] = *std::max_element(row.begin(), row.end());
  }
  return s;
}

ScoreVector entropy_score(const ProbMatrix& probs) {
  ScoreVector s(probs.rows());
  for (std::size_t i = 0; i < probs.rows(); ++i) {
    double h = 0.0;
    for (double p : probs.row(i)) {
      if (p > 0.0) h -= p * std::log(p);
    }
    s[i] = -h;
  }
  return s;
}

std::vector<double> default_lambda_grid() { return {0.0, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0}; }

ScoreVector fuse_ssp(std::span<const double> base, const probing::ProbingConfidence& confs,
                     std::span<const double> lambdas) {
  require(lambdas.size() == confs.task_count(), "fuse_ssp: need one lambda per probing task");
  for (const auto& v : confs.values) require(v.size() == base.size(), "fuse_ssp: confidence length differs from base");
  ScoreVector out(base.begin(), base.end());
  for (std::size_t t = 0; t < lambdas.size(); ++t) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += lambdas[t] * confs.values[t][i];
  }
  return out;
}

FusionConfig search_lambda(std::span<const double> base_val, const probing::ProbingConfidence& confs_val,
                           std::span<const std::uint8_t> correct_val, std::vector<double> grid) {
  require(!grid.empty(), "search_lambda: empty grid");
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  require(std::find(grid.begin(), grid.end(), 0.0) != grid.end(), "search_lambda: grid must contain 0");

  const std::size_t m = confs_val.task_count();
  std::vector<std::size_t> pick(m, 0);
  std::vector<double> lambdas(m);
  FusionConfig best{std::vector<double>(m, grid.front()), grid};
  double best_score = -1.0;
  while (true) {
    for (std::size_t t = 0; t < m; ++t) lambdas[t] = grid[pick[t]];
    const double score = metrics::aupr_err(fuse_ssp(base_val, confs_val, lambdas), correct_val);
    if (score > best_score) {
      best_score = score;
      best.lambdas = lambdas;
    }
    // Odometer increment, last axis fastest: lexicographic order.
    std::size_t axis = m;
    while (axis > 0 && ++pick[axis - 1] == grid.size()) pick[--axis] = 0;
    if (axis == 0) break;
  }
  return best;
}

}  // namespace ssp::scores
