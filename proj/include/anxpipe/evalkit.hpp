#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "anxpipe/prediction.hpp"

namespace anxpipe::eval {

/// Confusion counts with the positive class = 1. Every 0/0 quotient is 0.
struct Metrics {
  long tp = 0, fp = 0, fn = 0, tn = 0;
  double precision = 0, recall = 0, f1 = 0;

  static Metrics from_counts(long tp, long fp, long fn, long tn);
  double accuracy() const;
};

/// Harmonic mean; 0 when p + r == 0.
double harmonic_f1(double precision, double recall);

/// Throws DataError for a prediction whose post_id is not in `gold`.
Metrics compute_metrics(std::span<const Prediction> predictions, const std::map<std::string, int>& gold);

/// |harmonic(p, r) - f1| <= tol, all in percent.
bool consistency_check(double p_pct, double r_pct, double f1_pct, double tol);

struct ReportRow {
  std::string model;
  Metrics metrics;
};

/// Fixed-width table, columns F1 P R as percentages with two decimals.
std::string render_report(const std::vector<ReportRow>& rows);

/// Same rows with raw counts.
nlohmann::json report_json(const std::vector<ReportRow>& rows);

}  // namespace anxpipe::eval
