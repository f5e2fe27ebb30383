#include <algorithm>
#include <cmath>
#include <cstdio>

#include "anxpipe/error.hpp"
#include "anxpipe/evalkit.hpp"

namespace anxpipe::eval {

namespace {

double quotient(double a, double b) { return b == 0 ? 0.0 : a / b; }

}  // namespace

double harmonic_f1(double p, double r) { return p + r == 0 ? 0.0 : 2.0 * p * r / (p + r); }

Metrics Metrics::from_counts(long tp, long fp, long fn, long tn) {
  Metrics m{tp, fp, fn, tn};
  m.precision = quotient(static_cast<double>(tp), static_cast<double>(tp + fp));
  m.recall = quotient(static_cast<double>(tp), static_cast<double>(tp + fn));
  m.f1 = harmonic_f1(m.precision, m.recall);
  return m;
}

double Metrics::accuracy() const {
  return quotient(static_cast<double>(tp + tn), static_cast<double>(tp + fp + fn + tn));
}

Metrics compute_metrics(std::span<const Prediction> predictions, const std::map<std::string, int>& gold) {
  long tp = 0, fp = 0, fn = 0, tn = 0;
  for (const auto& p : predictions) {
    const auto it = gold.find(p.post_id);
    if (it == gold.end()) throw DataError("prediction for unknown post id: " + p.post_id);
    const bool truth = it->second == 1;
    const bool guess = p.label_hat == 1;
    tp += truth && guess;
    fp += !truth && guess;
    fn += truth && !guess;
    tn += !truth && !guess;
  }
  return Metrics::from_counts(tp, fp, fn, tn);
}

bool consistency_check(double p_pct, double r_pct, double f1_pct, double tol) {
  return std::abs(harmonic_f1(p_pct, r_pct) - f1_pct) <= tol;
}

std::string render_report(const std::vector<ReportRow>& rows) {
  std::size_t name_w = 5;
  for (const auto& r : rows) name_w = std::max(name_w, r.model.size());
  std::string out;
  char buf[64];
  auto line = [&](const std::string& name, const char* a, const char* b, const char* c) {
    out += name + std::string(name_w - name.size(), ' ');
    std::snprintf(buf, sizeof buf, " %8s %8s %8s\n", a, b, c);
    out += buf;
  };
  line("Model", "F1", "P", "R");
  out += std::string(name_w + 27, '-') + "\n";
  for (const auto& r : rows) {
    char f[16], p[16], rc[16];
    std::snprintf(f, sizeof f, "%.2f", 100.0 * r.metrics.f1);
    std::snprintf(p, sizeof p, "%.2f", 100.0 * r.metrics.precision);
    std::snprintf(rc, sizeof rc, "%.2f", 100.0 * r.metrics.recall);
    line(r.model, f, p, rc);
  }
  return out;
}

nlohmann::json report_json(const std::vector<ReportRow>& rows) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : rows) {
    const auto& m = r.metrics;
    out.push_back({{"model", r.model},
                   {"tp", m.tp},
                   {"fp", m.fp},
                   {"fn", m.fn},
                   {"tn", m.tn},
                   {"precision", m.precision},
                   {"recall", m.recall},
                   {"f1", m.f1}});
  }
  return out;
}

}  // namespace anxpipe::eval
