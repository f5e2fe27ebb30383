#include "anxpipe/linguafeat/rfe.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include <json.hpp>

#include "anxpipe/error.hpp"

namespace anxpipe::feat {

std::vector<bool> recursive_feature_elimination(const Eigen::MatrixXd& X, std::span<const int> y,
                                                std::size_t target_k, std::size_t step,
                                                const learn::LogisticConfig& config) {
  const auto F = static_cast<std::size_t>(X.cols());
  if (static_cast<std::size_t>(X.rows()) != y.size()) throw DataError("rfe: label count does not match rows");
  if (target_k == 0 || target_k >= F) throw DataError("rfe: target_k must be in [1, feature count)");
  if (step == 0) throw DataError("rfe: step must be >= 1");
  const auto positives = static_cast<std::size_t>(std::count(y.begin(), y.end(), 1));
  if (positives < 2 || y.size() - positives < 2) throw DataError("rfe: need at least two rows of each class");

  Eigen::MatrixXd Xz = X;
  for (Eigen::Index j = 0; j < Xz.cols(); ++j) {
    const double mu = Xz.col(j).mean();
    const double sd = std::sqrt((Xz.col(j).array() - mu).square().mean());
    Xz.col(j) = sd < 1e-12 ? Eigen::VectorXd::Zero(Xz.rows()) : Eigen::VectorXd((Xz.col(j).array() - mu) / sd);
  }
  Eigen::VectorXd yv(static_cast<Eigen::Index>(y.size()));
  for (std::size_t i = 0; i < y.size(); ++i) yv[static_cast<Eigen::Index>(i)] = y[i] == 1 ? 1.0 : 0.0;

  std::vector<std::size_t> alive(F);
  std::iota(alive.begin(), alive.end(), std::size_t{0});
  while (alive.size() > target_k) {
    Eigen::MatrixXd sub(Xz.rows(), static_cast<Eigen::Index>(alive.size()));
    for (std::size_t k = 0; k < alive.size(); ++k)
      sub.col(static_cast<Eigen::Index>(k)) = Xz.col(static_cast<Eigen::Index>(alive[k]));
    const auto model = learn::fit_logistic_standardized(sub, yv, config);
    std::vector<std::size_t> order(alive.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      const double wa = std::abs(model.weights[static_cast<Eigen::Index>(a)]);
      const double wb = std::abs(model.weights[static_cast<Eigen::Index>(b)]);
      if (wa != wb) return wa < wb;
      return alive[a] > alive[b];
    });
    const std::size_t drop = std::min(step, alive.size() - target_k);
    std::vector<bool> dropped(alive.size(), false);
    for (std::size_t k = 0; k < drop; ++k) dropped[order[k]] = true;
    std::vector<std::size_t> next;
    for (std::size_t k = 0; k < alive.size(); ++k)
      if (!dropped[k]) next.push_back(alive[k]);
    alive = std::move(next);
  }
  std::vector<bool> mask(F, false);
  for (auto j : alive) mask[j] = true;
  return mask;
}

void write_mask(const std::filesystem::path& path, const FeatureMask& mask) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  nlohmann::json j;
  j["registry"] = mask.registry_ids;
  j["selected"] = mask.selected_ids;
  j["target_k"] = mask.selected_ids.size();
  out << j.dump(1) << '\n';
}

FeatureMask read_mask(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  try {
    const auto j = nlohmann::json::parse(in);
    FeatureMask m;
    m.registry_ids = j.at("registry").get<std::vector<std::string>>();
    m.selected_ids = j.at("selected").get<std::vector<std::string>>();
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path.string() + ": bad mask file: " + e.what());
  }
}

}  // namespace anxpipe::feat
