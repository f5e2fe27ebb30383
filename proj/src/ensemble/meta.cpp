#include "anxpipe/ensemble/meta.hpp"

#include "anxpipe/error.hpp"

namespace anxpipe::learn {

MetaKind parse_meta_kind(const std::string& s) {
  if (s == "logistic" || s == "lr") return MetaKind::logistic;
  if (s == "ridge") return MetaKind::ridge;
  if (s == "linear_svm" || s == "svm" || s == "svc") return MetaKind::linear_svm;
  if (s == "gradient_boosting" || s == "gb" || s == "xgboost") return MetaKind::gradient_boosting;
  throw DataError("unknown meta-learner \"" + s + "\"");
}

std::string to_string(MetaKind k) {
  switch (k) {
    case MetaKind::logistic: return "logistic";
    case MetaKind::ridge: return "ridge";
    case MetaKind::linear_svm: return "linear_svm";
    case MetaKind::gradient_boosting: return "gradient_boosting";
  }
  return "?";
}

MetaHyper parse_meta_hyper(const nlohmann::json& j) {
  MetaHyper h;
  if (j.is_null()) return h;
  if (!j.is_object()) throw DataError("hyper must be an object");
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "logistic") {
        for (const auto& [k, x] : v.items()) {
          if (k == "l2") h.logistic.l2 = x.get<double>();
          else if (k == "epochs") h.logistic.epochs = x.get<int>();
          else if (k == "lr") h.logistic.lr = x.get<double>();
          else throw DataError("unknown hyper key logistic." + k);
        }
      } else if (key == "ridge") {
        for (const auto& [k, x] : v.items()) {
          if (k == "lambda") h.ridge.lambda = x.get<double>();
          else throw DataError("unknown hyper key ridge." + k);
        }
      } else if (key == "svm") {
        for (const auto& [k, x] : v.items()) {
          if (k == "l2") h.svm.l2 = x.get<double>();
          else if (k == "epochs") h.svm.epochs = x.get<int>();
          else if (k == "lr") h.svm.lr = x.get<double>();
          else throw DataError("unknown hyper key svm." + k);
        }
      } else if (key == "boosting") {
        for (const auto& [k, x] : v.items()) {
          if (k == "rounds") h.boosting.rounds = x.get<int>();
          else if (k == "shrinkage") h.boosting.shrinkage = x.get<double>();
          else throw DataError("unknown hyper key boosting." + k);
        }
      } else {
        throw DataError("unknown hyper section " + key);
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("bad hyper value: ") + e.what());
  }
  return h;
}

double MetaLearner::score(const Eigen::Ref<const Eigen::VectorXd>& z) const {
  if (z.size() != width)
    throw ShapeError("meta-learner expects " + std::to_string(width) + " base probabilities, got " +
                     std::to_string(z.size()));
  if (const auto* lin = std::get_if<LinearModel>(&model)) return lin->margin(z);
  return std::get<BoostedStumps>(model).score(z);
}

double MetaLearner::probability(const Eigen::Ref<const Eigen::VectorXd>& z) const { return sigmoid(score(z)); }

MetaLearner fit_meta(const Eigen::MatrixXd& Z, const Eigen::VectorXd& y, MetaKind kind, const MetaHyper& hyper) {
  if (Z.rows() != y.size()) throw DataError("meta: label count does not match rows");
  if (Z.rows() == 0 || Z.cols() == 0) throw DataError("meta: empty stacking matrix");
  Eigen::Index pos = 0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (y[i] != 0.0 && y[i] != 1.0) throw DataError("meta: labels must be 0 or 1");
    pos += y[i] == 1.0;
  }
  if (pos == 0 || pos == y.size()) throw DataError("meta: labels contain a single class");
  MetaLearner m;
  m.kind = kind;
  m.width = Z.cols();
  switch (kind) {
    case MetaKind::logistic: m.model = fit_logistic(Z, y, hyper.logistic); break;
    case MetaKind::ridge: m.model = fit_ridge(Z, y, hyper.ridge); break;
    case MetaKind::linear_svm: m.model = fit_linear_svm(Z, y, hyper.svm); break;
    case MetaKind::gradient_boosting: m.model = fit_boosted_stumps(Z, y, hyper.boosting); break;
  }
  return m;
}

nlohmann::json to_json(const MetaLearner& m) {
  nlohmann::json j;
  j["kind"] = to_string(m.kind);
  j["width"] = m.width;
  if (const auto* lin = std::get_if<LinearModel>(&m.model)) {
    j["weights"] = std::vector<double>(lin->weights.data(), lin->weights.data() + lin->weights.size());
    j["intercept"] = lin->intercept;
  } else {
    const auto& b = std::get<BoostedStumps>(m.model);
    j["base_score"] = b.base_score;
    j["shrinkage"] = b.shrinkage;
    auto& arr = j["stumps"] = nlohmann::json::array();
    for (const auto& s : b.stumps) arr.push_back({s.feature, s.threshold, s.left, s.right});
  }
  return j;
}

MetaLearner meta_from_json(const nlohmann::json& j) {
  try {
    MetaLearner m;
    m.kind = parse_meta_kind(j.at("kind").get<std::string>());
    m.width = j.at("width").get<Eigen::Index>();
    if (m.kind == MetaKind::gradient_boosting) {
      BoostedStumps b;
      b.base_score = j.at("base_score").get<double>();
      b.shrinkage = j.at("shrinkage").get<double>();
      for (const auto& s : j.at("stumps")) {
        Stump st{s.at(0).get<Eigen::Index>(), s.at(1).get<double>(), s.at(2).get<double>(), s.at(3).get<double>()};
        if (st.feature < 0 || st.feature >= m.width) throw DataError("meta: stump feature out of range");
        b.stumps.push_back(st);
      }
      m.model = std::move(b);
    } else {
      const auto w = j.at("weights").get<std::vector<double>>();
      if (static_cast<Eigen::Index>(w.size()) != m.width) throw DataError("meta: weight count differs from width");
      LinearModel lin;
      lin.weights = Eigen::Map<const Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size()));
      lin.intercept = j.at("intercept").get<double>();
      m.model = std::move(lin);
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("bad meta-learner file: ") + e.what());
  }
}

}  // namespace anxpipe::learn
