#pragma once

#include <string>
#include <vector>

#include "metrics/metrics.hpp"

namespace ssp::metrics {

enum class Column { fpr_at_95tpr, auroc, aupr_err, aupr_succ, ece, mce, nll, brier };

struct ReportRow {
  std::string method;
  MetricReport values;
};

struct ReportTable {
  std::string title;
  std::vector<Column> columns;
  std::vector<ReportRow> rows;
};

const char* column_key(Column c);
std::optional<double> column_value(const MetricReport& r, Column c);

/// Header `method,<column keys>`; values printed with 10 decimals, missing values empty.
std::string to_csv(const ReportTable& table);
/// Aligned markdown table; rates shown in percent with two decimals, NLL and Brier raw.
std::string to_markdown(const ReportTable& table);

/// `mean_confidence,accuracy,count` rows for plotting.
std::string curve_csv(const BinnedCorrelation& curve);

}  // namespace ssp::metrics
