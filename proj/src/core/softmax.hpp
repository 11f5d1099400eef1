#pragma once

#include <cstddef>
#include <span>

#include "core/types.hpp"

namespace ssp {

/// Row-wise softmax with the max-shift. Throws invalid_input on non-finite logits.
ProbMatrix softmax_rows(const LogitMatrix& logits);

/// Softmax of one row into `out` (same length). Returns log-sum-exp of the row.
double softmax_into(std::span<const double> logits, std::span<double> out, double inv_temperature = 1.0);

/// Index of the largest entry; lowest index wins ties.
std::size_t argmax_row(std::span<const double> row);

}  // namespace ssp
