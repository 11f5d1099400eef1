#include "core/softmax.hpp"

#include <algorithm>
#include <cmath>

namespace ssp {

double softmax_into(std::span<const double> logits, std::span<double> out, double inv_temperature) {
  double top = logits[0] * inv_temperature;
  for (double v : logits) top = std::max(top, v * inv_temperature);
  double sum = 0.0;
  for (std::size_t k = 0; k < logits.size(); ++k) {
    out[k] = std::exp(logits[k] * inv_temperature - top);
    sum += out[k];
  }
  for (double& v : out) v /= sum;
  return top + std::log(sum);
}

ProbMatrix softmax_rows(const LogitMatrix& logits) {
  for (double v : logits.values()) {
    require(std::isfinite(v), "softmax_rows: non-finite logit");
  }
  ProbMatrix probs(logits.rows(), logits.cols());
  for (std::size_t i = 0; i < logits.rows(); ++i) softmax_into(logits.row(i), probs.row(i));
  return probs;
}

std::size_t argmax_row(std::span<const double> row) {
  require(!row.empty(), "argmax_row: empty row");
  std::size_t best = 0;
  for (std::size_t k = 1; k < row.size(); ++k) {
    if (row[k] > row[best]) best = k;
  }
  return best;
}

}  // namespace ssp
