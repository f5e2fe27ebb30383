#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "anxpipe/error.hpp"
#include "anxpipe/linguafeat/feature_matrix.hpp"

namespace anxpipe::feat {

namespace {

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::size_t parse_count(std::string_view s, const std::string& where) {
  std::size_t v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw DataError(where + "bad count \"" + std::string(s) + "\"");
  return v;
}

}  // namespace

void write_feature_matrix(std::ostream& out, const FeatureMatrix& m) {
  if (m.post_id.find('\n') != std::string::npos) throw DataError("post id contains a newline");
  if (static_cast<std::size_t>(m.width()) != m.feature_ids.size())
    throw DataError("feature id count does not match matrix width");
  out << "#CMFX v1 post_id=" << m.post_id << " n=" << m.windows() << " f=" << m.width() << '\n';
  out << nlohmann::json(m.feature_ids).dump() << '\n';
  for (Eigen::Index i = 0; i < m.rows.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.rows.cols(); ++j) {
      if (j) out << ' ';
      out << format_real(m.rows(i, j));
    }
    out << '\n';
  }
}

void write_feature_matrices(const std::filesystem::path& path, std::span<const FeatureMatrix> matrices) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  for (const auto& m : matrices) write_feature_matrix(out, m);
}

std::vector<FeatureMatrix> parse_feature_matrices(std::istream& in, const std::string& source) {
  std::vector<FeatureMatrix> out;
  std::string line;
  std::size_t line_no = 0;
  auto where = [&] { return source + ":" + std::to_string(line_no) + ": "; };
  auto next = [&]() -> bool {
    if (!std::getline(in, line)) return false;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  };
  while (next()) {
    if (line.empty()) continue;
    constexpr std::string_view kPrefix = "#CMFX v1 post_id=";
    if (line.rfind(kPrefix, 0) != 0) throw DataError(where() + "expected #CMFX v1 header");
    // n= and f= are the last two fields; the id may contain spaces
    const auto f_pos = line.rfind(" f=");
    const auto n_pos = f_pos == std::string::npos ? std::string::npos : line.rfind(" n=", f_pos - 1);
    if (n_pos == std::string::npos || n_pos < kPrefix.size()) throw DataError(where() + "malformed CMFX header");
    FeatureMatrix m;
    m.post_id = line.substr(kPrefix.size(), n_pos - kPrefix.size());
    const std::size_t n = parse_count(std::string_view(line).substr(n_pos + 3, f_pos - n_pos - 3), where());
    const std::size_t f = parse_count(std::string_view(line).substr(f_pos + 3), where());
    if (!next()) throw DataError(where() + "missing feature id line");
    try {
      m.feature_ids = nlohmann::json::parse(line).get<std::vector<std::string>>();
    } catch (const nlohmann::json::exception& e) {
      throw DataError(where() + "bad feature id array: " + e.what());
    }
    if (m.feature_ids.size() != f) throw DataError(where() + "feature id count does not match f");
    m.rows.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(f));
    for (std::size_t i = 0; i < n; ++i) {
      if (!next()) throw DataError(where() + "truncated matrix");
      const char* p = line.data();
      const char* end = line.data() + line.size();
      for (std::size_t j = 0; j < f; ++j) {
        while (p < end && *p == ' ') ++p;
        double v = 0;
        const auto [q, ec] = std::from_chars(p, end, v);
        if (ec != std::errc() || !std::isfinite(v)) throw DataError(where() + "bad value in column " + std::to_string(j));
        m.rows(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
        p = q;
      }
      while (p < end && *p == ' ') ++p;
      if (p != end) throw DataError(where() + "too many values in row");
    }
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<FeatureMatrix> read_feature_matrices(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  return parse_feature_matrices(in, path.string());
}

}  // namespace anxpipe::feat
