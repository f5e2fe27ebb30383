#include <charconv>
#include <cstdio>
#include <fstream>

#include "anxpipe/corpus.hpp"
#include "anxpipe/error.hpp"
#include "anxpipe/exchange.hpp"

namespace anxpipe::exchange {

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

}  // namespace

BasePredictionSet parse_predictions(std::istream& in, const std::string& source, const std::string& model_id) {
  BasePredictionSet set;
  set.model_id = model_id.empty() ? source : model_id;
  std::vector<std::string> fields;
  std::size_t line = 0, next_line = 1;
  auto where = [&] { return source + ":" + std::to_string(line) + ": "; };
  if (!corpus::read_csv_record(in, fields, line, next_line)) throw DataError(source + ": empty prediction file");
  std::ptrdiff_t id_col = -1, prob_col = -1;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (fields[i] == "post_id") id_col = static_cast<std::ptrdiff_t>(i);
    if (fields[i] == "prob_positive") prob_col = static_cast<std::ptrdiff_t>(i);
  }
  if (id_col < 0 || prob_col < 0) throw DataError(where() + "header must contain post_id and prob_positive");
  const auto need = static_cast<std::size_t>(std::max(id_col, prob_col));
  while (corpus::read_csv_record(in, fields, line, next_line)) {
    if (fields.size() == 1 && fields[0].empty()) continue;
    if (fields.size() <= need) throw DataError(where() + "too few columns");
    const std::string& id = fields[static_cast<std::size_t>(id_col)];
    const std::string& text = fields[static_cast<std::size_t>(prob_col)];
    double p = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), p);
    if (ec != std::errc() || ptr != text.data() + text.size()) throw DataError(where() + "bad probability \"" + text + "\"");
    if (!(p >= 0.0 && p <= 1.0)) throw DataError(where() + "probability " + text + " outside [0,1]");
    if (id.empty()) throw DataError(where() + "empty post_id");
    if (!set.entries.emplace(id, p).second) throw DataError(where() + "duplicate post_id " + id);
  }
  return set;
}

BasePredictionSet read_predictions(const std::filesystem::path& path, const std::string& model_id) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  return parse_predictions(in, path.string(), model_id.empty() ? path.stem().string() : model_id);
}

void write_predictions(std::ostream& out, std::span<const Prediction> preds) {
  out << "post_id,prob_positive,label_hat\n";
  char buf[40];
  for (const auto& p : preds) {
    std::snprintf(buf, sizeof buf, "%.17g", p.prob_positive);
    out << csv_field(p.post_id) << ',' << buf << ',' << p.label_hat << '\n';
  }
}

void write_predictions(const std::filesystem::path& path, std::span<const Prediction> preds) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  write_predictions(out, preds);
}

}  // namespace anxpipe::exchange
