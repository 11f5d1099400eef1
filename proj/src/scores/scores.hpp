#pragma once

#include <span>
#include <vector>

#include "core/types.hpp"
#include "metrics/metrics.hpp"
#include "probing/probing.hpp"

namespace ssp::scores {

// All scores are oriented "higher = more trustworthy".

/// Maximum softmax probability per row.
ScoreVector msp_score(const ProbMatrix& probs);
/// Negated Shannon entropy (natural log, 0 ln 0 = 0) per row.
ScoreVector entropy_score(const ProbMatrix& probs);

struct FusionConfig {
  std::vector<double> lambdas;  // one per probing task
  std::vector<double> grid;     // candidates shared by every task axis
};

std::vector<double> default_lambda_grid();

/// base + sum_i lambdas[i] * confs.values[i].
ScoreVector fuse_ssp(std::span<const double> base, const probing::ProbingConfidence& confs,
                     std::span<const double> lambdas);

/// Exhaustive search over grid^M for the largest validation AUPR-ERR of the fused score. Candidates
/// are visited in lexicographic order of the sorted grid and only a strict improvement replaces the
/// incumbent, so ties resolve to the lexicographically smallest vector.
FusionConfig search_lambda(std::span<const double> base_val, const probing::ProbingConfidence& confs_val,
                           std::span<const std::uint8_t> correct_val, std::vector<double> grid);

}  // namespace ssp::scores
