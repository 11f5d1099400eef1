#include "metrics/report.hpp"

#include <algorithm>
#include <cstdio>

namespace ssp::metrics {
namespace {

const char* column_title(Column c) {
  switch (c) {
    case Column::fpr_at_95tpr: return "FPR@95% (%)";
    case Column::auroc: return "AUROC (%)";
    case Column::aupr_err: return "AUPR-ERR (%)";
    case Column::aupr_succ: return "AUPR-SUCC (%)";
    case Column::ece: return "ECE (%)";
    case Column::mce: return "MCE (%)";
    case Column::nll: return "NLL";
    case Column::brier: return "Brier";
  }
  return "?";
}

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

}  // namespace

const char* column_key(Column c) {
  switch (c) {
    case Column::fpr_at_95tpr: return "fpr_at_95tpr";
    case Column::auroc: return "auroc";
    case Column::aupr_err: return "aupr_err";
    case Column::aupr_succ: return "aupr_succ";
    case Column::ece: return "ece";
    case Column::mce: return "mce";
    case Column::nll: return "nll";
    case Column::brier: return "brier";
  }
  return "?";
}

std::optional<double> column_value(const MetricReport& r, Column c) {
  switch (c) {
    case Column::fpr_at_95tpr: return r.fpr_at_95tpr;
    case Column::auroc: return r.auroc;
    case Column::aupr_err: return r.aupr_err;
    case Column::aupr_succ: return r.aupr_succ;
    case Column::ece: return r.ece;
    case Column::mce: return r.mce;
    case Column::nll: return r.nll;
    case Column::brier: return r.brier;
  }
  return std::nullopt;
}

std::string to_csv(const ReportTable& table) {
  std::string out = "method";
  for (auto c : table.columns) out += std::string(",") + column_key(c);
  out += '\n';
  for (const auto& row : table.rows) {
    out += row.method;
    for (auto c : table.columns) {
      out += ',';
      if (auto v = column_value(row.values, c)) out += fmt("%.10f", *v);
    }
    out += '\n';
  }
  return out;
}

std::string to_markdown(const ReportTable& table) {
  std::vector<std::vector<std::string>> cells;
  std::vector<std::string> header{"Method"};
  for (auto c : table.columns) header.emplace_back(column_title(c));
  cells.push_back(header);
  for (const auto& row : table.rows) {
    std::vector<std::string> line{row.method};
    for (auto c : table.columns) {
      const auto v = column_value(row.values, c);
      const bool raw = c == Column::nll || c == Column::brier;
      line.push_back(!v ? "-" : raw ? fmt("%.4f", *v) : fmt("%.2f", 100.0 * *v));
    }
    cells.push_back(line);
  }
  std::vector<std::size_t> width(header.size(), 0);
  for (const auto& line : cells) {
    for (std::size_t i = 0; i < line.size(); ++i) width[i] = std::max(width[i], line[i].size());
  }
  auto emit = [&](const std::vector<std::string>& line) {
    std::string s = "|";
    for (std::size_t i = 0; i < line.size(); ++i) {
      std::string cell = line[i];
      if (i == 0) cell.append(width[i] - cell.size(), ' ');
      else cell.insert(0, width[i] - cell.size(), ' ');
      s += " " + cell + " |";
    }
    return s + "\n";
  };
  std::string out;
  if (!table.title.empty()) out += "### " + table.title + "\n\n";
  out += emit(cells[0]);
  out += "|";
  for (std::size_t i = 0; i < width.size(); ++i) {
    out += i == 0 ? " " + std::string(width[i], '-') + " |" : " " + std::string(width[i] - 1, '-') + ": |";
  }
  out += "\n";
  for (std::size_t r = 1; r < cells.size(); ++r) out += emit(cells[r]);
  return out;
}

std::string curve_csv(const BinnedCorrelation& curve) {
  std::string out = "bin,mean_confidence,accuracy,count\n";
  for (const auto& b : curve.bins) {
    out += std::to_string(b.index) + "," + fmt("%.10f", b.mean_confidence) + "," + fmt("%.10f", b.accuracy) + "," +
           std::to_string(b.count) + "\n";
  }
  return out;
}

}  // namespace ssp::metrics
