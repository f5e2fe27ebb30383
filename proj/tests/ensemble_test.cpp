#include <doctest.h>

#include <Eigen/Dense>
#include <set>

#include "anxpipe/ensemble/stacking.hpp"
#include "anxpipe/error.hpp"
#include "oracle/stacking_synth.hpp"
#include "test_util.hpp"

using namespace anxpipe;
using namespace anxpipe::learn;
using anxpipe::ensemble::BaseSource;

namespace {

constexpr MetaKind kAllKinds[] = {MetaKind::logistic, MetaKind::ridge, MetaKind::linear_svm,
                                  MetaKind::gradient_boosting};

std::string error_of(auto&& f) {
  try {
    f();
  } catch (const DataError& e) {
    return e.what();
  }
  return "";
}

double accuracy(const MetaLearner& m, const Eigen::MatrixXd& Z, const Eigen::VectorXd& y) {
  int right = 0;
  for (Eigen::Index i = 0; i < Z.rows(); ++i) right += m.label(Z.row(i).transpose()) == static_cast<int>(y[i]);
  return static_cast<double>(right) / static_cast<double>(Z.rows());
}

std::vector<std::string> ids_of(int n) {
  std::vector<std::string> ids;
  for (int i = 0; i < n; ++i) ids.push_back("post" + std::to_string(i));
  return ids;
}

// The separating direction is found by scanning angles, independent of any
// learner: some w with min_i t_i (w·x_i) > 0 exists.
bool separable_through_origin(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
  for (int a = 0; a < 3600; ++a) {
    const double th = a * 3.14159265358979323846 / 1800.0;
    double worst = INFINITY;
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
      const double m = std::cos(th) * X(i, 0) + std::sin(th) * X(i, 1);
      worst = std::min(worst, (2 * y[i] - 1) * m);
    }
    if (worst > 0) return true;
  }
  return false;
}

}  // namespace

// ---- ridge -------------------------------------------------------------

TEST_CASE("ridge on an identity design reproduces the targets") {
  const Eigen::MatrixXd Z = Eigen::MatrixXd::Identity(2, 2);
  const Eigen::VectorXd y = (Eigen::VectorXd(2) << 1, 0).finished();
  const auto m = fit_ridge(Z, y, {0.0});
  CHECK(m.margin(Z.row(0).transpose()) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(m.margin(Z.row(1).transpose()) == doctest::Approx(-1.0).epsilon(1e-12));

  const Eigen::MatrixXd Z3 = Eigen::MatrixXd::Identity(3, 3);
  const Eigen::VectorXd y3 = (Eigen::VectorXd(3) << 1, 0, 1).finished();
  const auto m3 = fit_ridge(Z3, y3, {0.0});
  for (Eigen::Index i = 0; i < 3; ++i) CHECK(m3.margin(Z3.row(i).transpose()) == doctest::Approx(2 * y3[i] - 1));
}

TEST_CASE("infinite shrinkage predicts the majority class") {
  Rng rng(5);
  Eigen::MatrixXd Z = Eigen::MatrixXd::NullaryExpr(40, 3, [&] { return rng.uniform(); });
  Eigen::VectorXd y(40);
  for (Eigen::Index i = 0; i < 40; ++i) y[i] = i < 27 ? 1 : 0;
  const auto m = fit_meta(Z, y, MetaKind::ridge, MetaHyper{.ridge = {1e9}});
  const auto& lin = std::get<LinearModel>(m.model);
  CHECK(lin.weights.norm() < 1e-6);
  for (Eigen::Index i = 0; i < 40; ++i) CHECK(m.label(Z.row(i).transpose()) == 1);
}

TEST_CASE("ridge satisfies its normal equations") {
  Rng rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    const auto n = 5 + static_cast<Eigen::Index>(rng.below(60));
    const auto k = 1 + static_cast<Eigen::Index>(rng.below(5));
    Eigen::MatrixXd Z = Eigen::MatrixXd::NullaryExpr(n, k, [&] { return rng.uniform(); });
    Eigen::VectorXd y = Eigen::VectorXd::NullaryExpr(n, [&] { return rng.bernoulli(0.4) ? 1.0 : 0.0; });
    const double lambda = trial % 4 == 0 ? 0.0 : rng.uniform(0.0, 10.0);
    const auto sol = solve_ridge(Z, y, {lambda});
    CHECK(sol.normal_equation_residual < 1e-8);
    // recompute the residual here rather than trusting the reported one
    const Eigen::MatrixXd Zc = Z.rowwise() - Z.colwise().mean();
    const Eigen::VectorXd t = (2 * y.array() - 1).matrix();
    const Eigen::VectorXd tc = t.array() - t.mean();
    const Eigen::VectorXd r =
        (Zc.transpose() * Zc + lambda * Eigen::MatrixXd::Identity(k, k)) * sol.model.weights - Zc.transpose() * tc;
    CHECK(r.cwiseAbs().maxCoeff() < 1e-8);
  }
}

// ---- other learners ----------------------------------------------------

TEST_CASE("logistic separates a separable set") {
  Rng rng(7);
  Eigen::MatrixXd X(60, 2);
  Eigen::VectorXd y(60);
  for (Eigen::Index i = 0; i < 60; ++i) {
    const int label = i % 2;
    const double along = rng.uniform(0.3, 2.0) * (label ? 1 : -1);
    const double across = rng.uniform(-3, 3);
    X(i, 0) = along + across;
    X(i, 1) = along - across;
    y[i] = label;
  }
  REQUIRE(separable_through_origin(X, y));
  const auto m = fit_meta(X, y, MetaKind::logistic, MetaHyper{.logistic = {1e-4, 2000, 0.5}});
  CHECK(accuracy(m, X, y) == 1.0);
}

TEST_CASE("boosting training loss never increases") {
  Rng rng(8);
  const auto s = oracle::synthetic_stack(rng, 300, 3, 0.75);
  const auto b = fit_boosted_stumps(s.Z, s.y, {150, 0.1});
  REQUIRE(b.train_loss.size() == 151);
  for (std::size_t r = 1; r < b.train_loss.size(); ++r) CHECK(b.train_loss[r] <= b.train_loss[r - 1] + 1e-15);
  CHECK(b.train_loss.back() < b.train_loss.front());

  // constant columns give single-leaf rounds that still descend
  const Eigen::MatrixXd flat = Eigen::MatrixXd::Constant(10, 2, 0.3);
  Eigen::VectorXd y(10);
  y << 1, 1, 1, 0, 0, 0, 0, 0, 0, 0;
  const auto c = fit_boosted_stumps(flat, y, {20, 0.1});
  for (std::size_t r = 1; r < c.train_loss.size(); ++r) CHECK(c.train_loss[r] <= c.train_loss[r - 1] + 1e-15);
}

TEST_CASE("every meta kind is near unanimous on agreeing bases") {
  Rng rng(9);
  const auto s = oracle::synthetic_stack(rng, 200, 3, 0.8);
  for (auto kind : kAllKinds) {
    CAPTURE(to_string(kind));
    const auto m = fit_meta(s.Z, s.y, kind);
    CHECK(m.label(Eigen::Vector3d::Constant(0.99)) == 1);
    CHECK(m.label(Eigen::Vector3d::Constant(0.01)) == 0);
    // in-sample consistency: a training row gets the label the learner assigned it
    for (Eigen::Index i = 0; i < 20; ++i) {
      const Eigen::VectorXd z = s.Z.row(i).transpose();
      CHECK(m.label(z) == (m.probability(z) >= 0.5 ? 1 : 0));
      CHECK(m.probability(z) == m.probability(Eigen::VectorXd(s.Z.row(i).transpose())));
    }
    const double p = m.probability(s.Z.row(0).transpose());
    CHECK(p >= 0.0);
    CHECK(p <= 1.0);
  }
}

TEST_CASE("stacking beats the individual bases on independent errors") {
  Rng rng(10);
  const auto train = oracle::synthetic_stack(rng, 1000, 3, 0.8);
  const auto test = oracle::synthetic_stack(rng, 1000, 3, 0.8);
  CHECK(oracle::majority_of_three(0.8) == doctest::Approx(0.896));
  for (auto kind : kAllKinds) {
    CAPTURE(to_string(kind));
    const auto m = fit_meta(train.Z, train.y, kind);
    CHECK(accuracy(m, test.Z, test.y) >= 0.85);
  }
}

TEST_CASE("meta learner input checks") {
  const Eigen::MatrixXd Z = Eigen::MatrixXd::Constant(4, 2, 0.5);
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(4);
  for (auto kind : kAllKinds) CHECK(error_of([&] { (void)fit_meta(Z, ones, kind); }).find("single class") != std::string::npos);
  CHECK_THROWS_AS(fit_meta(Z, Eigen::VectorXd::Ones(3), MetaKind::ridge), DataError);
  const Eigen::VectorXd y = (Eigen::VectorXd(4) << 1, 0, 2, 0).finished();
  CHECK_THROWS_AS(fit_meta(Z, y, MetaKind::ridge), DataError);

  const Eigen::VectorXd ok = (Eigen::VectorXd(4) << 1, 0, 1, 0).finished();
  const auto m = fit_meta(Z, ok, MetaKind::logistic);
  CHECK_THROWS_AS(m.score(Eigen::Vector3d::Zero()), ShapeError);
}

TEST_CASE("meta kind names and aliases") {
  CHECK(parse_meta_kind("xgboost") == MetaKind::gradient_boosting);
  CHECK(parse_meta_kind("gb") == MetaKind::gradient_boosting);
  CHECK(parse_meta_kind("svc") == MetaKind::linear_svm);
  CHECK(parse_meta_kind("svm") == MetaKind::linear_svm);
  for (auto kind : kAllKinds) CHECK(parse_meta_kind(to_string(kind)) == kind);
  CHECK_THROWS_AS(parse_meta_kind("forest"), DataError);

  const auto h = parse_meta_hyper(nlohmann::json::parse(R"({"ridge": {"lambda": 3}, "boosting": {"rounds": 7}})"));
  CHECK(h.ridge.lambda == 3.0);
  CHECK(h.boosting.rounds == 7);
  CHECK_THROWS_AS(parse_meta_hyper(nlohmann::json::parse(R"({"ridge": {"alpha": 3}})")), DataError);
  CHECK_THROWS_AS(parse_meta_hyper(nlohmann::json::parse(R"({"trees": {}})")), DataError);
}

TEST_CASE("meta learner JSON round trip keeps decisions") {
  Rng rng(11);
  const auto s = oracle::synthetic_stack(rng, 120, 3, 0.75);
  for (auto kind : kAllKinds) {
    CAPTURE(to_string(kind));
    const auto m = fit_meta(s.Z, s.y, kind);
    const auto back = meta_from_json(nlohmann::json::parse(to_json(m).dump()));
    for (Eigen::Index i = 0; i < s.Z.rows(); ++i)
      CHECK(back.probability(s.Z.row(i).transpose()) == m.probability(s.Z.row(i).transpose()));
  }
  auto j = to_json(fit_meta(s.Z, s.y, MetaKind::ridge));
  j["weights"].push_back(1.0);
  CHECK_THROWS_AS(meta_from_json(j), DataError);
  CHECK_THROWS_AS(meta_from_json(nlohmann::json::object()), DataError);
}

// ---- out-of-fold construction -----------------------------------------

TEST_CASE("fold assignment is stratified and seeded") {
  const auto ids = ids_of(103);
  std::vector<int> labels;
  for (int i = 0; i < 103; ++i) labels.push_back(i % 4 == 0 ? 1 : 0);
  const auto folds = ensemble::assign_folds(ids, labels, 5, 42);
  for (int cls : {0, 1}) {
    std::vector<int> count(5, 0);
    for (std::size_t i = 0; i < ids.size(); ++i)
      if (labels[i] == cls) ++count[static_cast<std::size_t>(folds[i])];
    CHECK(*std::max_element(count.begin(), count.end()) - *std::min_element(count.begin(), count.end()) <= 1);
  }
  CHECK(ensemble::assign_folds(ids, labels, 5, 42) == folds);
  CHECK(ensemble::assign_folds(ids, labels, 5, 43) != folds);

  // order of the input list does not change which fold a post lands in
  std::vector<std::string> rev(ids.rbegin(), ids.rend());
  std::vector<int> rev_labels(labels.rbegin(), labels.rend());
  const auto rf = ensemble::assign_folds(rev, rev_labels, 5, 42);
  for (std::size_t i = 0; i < ids.size(); ++i) CHECK(rf[ids.size() - 1 - i] == folds[i]);

  CHECK_THROWS_AS(ensemble::assign_folds(ids, labels, 1, 42), DataError);
  CHECK_THROWS_AS(ensemble::assign_folds(ids_of(3), std::vector<int>{1, 0, 1}, 5, 42), DataError);
  CHECK_THROWS_AS(ensemble::assign_folds(ids_of(3), std::vector<int>{1, 0, 7}, 2, 42), DataError);
}

TEST_CASE("out-of-fold predictions never come from a model trained on the post") {
  const auto ids = ids_of(4);
  const std::vector<int> labels{1, 0, 1, 0};
  // the trainer reports, for each held-out post, how many of the 4 posts it saw
  std::vector<std::set<std::size_t>> trained_on(4);
  ensemble::FitPredictFn fit = [&](std::span<const std::size_t> train, std::span<const std::size_t> predict) {
    std::vector<double> out;
    for (auto p : predict) {
      trained_on[p].insert(train.begin(), train.end());
      out.push_back(0.1 * static_cast<double>(train.size()));
    }
    return out;
  };
  const std::vector<BaseSource> bases{{"M4", nullptr, fit}};
  const auto ds = ensemble::build_oof_matrix(bases, ids, labels, 2, 42);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK_FALSE(trained_on[i].contains(i));
    CHECK(trained_on[i].size() == 2);
    for (auto t : trained_on[i]) CHECK(ds.fold_of[t] != ds.fold_of[i]);
    CHECK(ds.Z(static_cast<Eigen::Index>(i), 0) == doctest::Approx(0.2));
  }

  // larger random instance, several trainable bases
  const auto many = ids_of(57);
  std::vector<int> lab;
  for (int i = 0; i < 57; ++i) lab.push_back(i % 3 == 0);
  bool leaked = false;
  ensemble::FitPredictFn check = [&](std::span<const std::size_t> train, std::span<const std::size_t> predict) {
    std::set<std::size_t> t(train.begin(), train.end());
    for (auto p : predict) leaked |= t.contains(p);
    CHECK(train.size() + predict.size() == 57);
    return std::vector<double>(predict.size(), 0.5);
  };
  const std::vector<BaseSource> two{{"A", nullptr, check}, {"B", nullptr, check}};
  (void)ensemble::build_oof_matrix(two, many, lab, 5, 3);
  CHECK_FALSE(leaked);
}

TEST_CASE("stacking columns follow the base order") {
  const auto gold_ids = ids_of(0);
  const auto m1 = exchange::read_predictions(ANXPIPE_FIXTURE_DIR "/m1_predictions.csv", "M1");
  const auto m2 = exchange::read_predictions(ANXPIPE_FIXTURE_DIR "/m2_predictions.csv", "M2");
  std::vector<std::string> ids;
  std::vector<int> labels;
  for (int i = 0; i < 12; ++i) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "f%02d", i);
    ids.emplace_back(buf);
    labels.push_back(i % 3 == 0);
  }
  ensemble::FitPredictFn constant = [](std::span<const std::size_t>, std::span<const std::size_t> predict) {
    return std::vector<double>(predict.size(), 0.25);
  };
  const std::vector<BaseSource> hee{{"M1", &m1, {}}, {"M2", &m2, {}}, {"M4", nullptr, constant}};
  const auto ds = ensemble::build_oof_matrix(hee, ids, labels);
  CHECK(ds.base_ids == std::vector<std::string>{"M1", "M2", "M4"});
  REQUIRE(ds.Z.cols() == 3);
  for (Eigen::Index i = 0; i < 12; ++i) {
    CHECK(ds.Z(i, 0) == m1.entries.at(ids[static_cast<std::size_t>(i)]));
    CHECK(ds.Z(i, 1) == m2.entries.at(ids[static_cast<std::size_t>(i)]));
    CHECK(ds.Z(i, 2) == 0.25);
  }
  CHECK(((ds.Z.array() >= 0) && (ds.Z.array() <= 1)).all());

  const std::vector<BaseSource> swapped{{"M2", &m2, {}}, {"M1", &m1, {}}};
  const auto sw = ensemble::build_oof_matrix(swapped, ids, labels);
  CHECK(sw.Z.col(0) == ds.Z.col(1));
  CHECK(sw.Z.col(1) == ds.Z.col(0));

  // five seed variants of one model make five columns
  std::vector<BaseSource> hoe;
  for (int s = 0; s < 5; ++s) hoe.push_back({"M5-seed" + std::to_string(s), nullptr, constant});
  CHECK(ensemble::build_oof_matrix(hoe, ids, labels).Z.cols() == 5);
}

TEST_CASE("relabelling the bases does not change decisions") {
  Rng rng(12);
  const auto s = oracle::synthetic_stack(rng, 80, 3, 0.75);
  std::vector<exchange::BasePredictionSet> sets(3);
  std::vector<std::string> ids;
  std::vector<int> labels;
  for (Eigen::Index i = 0; i < 80; ++i) {
    ids.push_back("q" + std::to_string(i));
    labels.push_back(static_cast<int>(s.y[i]));
    for (int b = 0; b < 3; ++b) sets[static_cast<std::size_t>(b)].entries[ids.back()] = s.Z(i, b);
  }
  const std::vector<BaseSource> named{{"M1", &sets[0], {}}, {"M2", &sets[1], {}}, {"M3", &sets[2], {}}};
  const std::vector<BaseSource> renamed{{"zeta", &sets[0], {}}, {"alpha", &sets[1], {}}, {"M1", &sets[2], {}}};
  const auto a = ensemble::build_oof_matrix(named, ids, labels);
  const auto b = ensemble::build_oof_matrix(renamed, ids, labels);
  CHECK(a.Z == b.Z);
  for (auto kind : kAllKinds) {
    const auto ma = fit_meta(a.Z, a.y, kind), mb = fit_meta(b.Z, b.y, kind);
    for (Eigen::Index i = 0; i < 80; ++i) CHECK(ma.probability(a.Z.row(i).transpose()) == mb.probability(b.Z.row(i).transpose()));
  }
}

TEST_CASE("stacking input errors") {
  const auto m1 = exchange::read_predictions(ANXPIPE_FIXTURE_DIR "/m1_predictions.csv", "M1");
  const std::vector<std::string> ids{"f00", "f01", "f99", "f02"};
  const std::vector<int> labels{1, 0, 1, 0};
  const std::vector<BaseSource> bases{{"M1", &m1, {}}};
  const auto msg = error_of([&] { (void)ensemble::build_oof_matrix(bases, ids, labels, 2); });
  CHECK(msg.find("f99") != std::string::npos);
  CHECK(msg.find("M1") != std::string::npos);

  CHECK_THROWS_AS(ensemble::build_oof_matrix(std::vector<BaseSource>{}, ids, labels, 2), DataError);
  const std::vector<std::string> dup{"f00", "f00", "f01", "f02"};
  CHECK(error_of([&] { (void)ensemble::build_oof_matrix(bases, dup, labels, 2); }).find("duplicate") != std::string::npos);

  ensemble::FitPredictFn bad = [](std::span<const std::size_t>, std::span<const std::size_t> predict) {
    return std::vector<double>(predict.size(), 1.5);
  };
  const std::vector<std::string> ok{"f00", "f01", "f02", "f03"};
  CHECK_THROWS_AS(ensemble::build_oof_matrix(std::vector<BaseSource>{{"X", nullptr, bad}}, ok, labels, 2), DataError);
  CHECK_THROWS_AS(ensemble::build_oof_matrix(std::vector<BaseSource>{{"Y", nullptr, {}}}, ok, labels, 2), DataError);
}

TEST_CASE("trainable model base runs through the fold protocol") {
  Rng rng(13);
  std::vector<feat::FeatureMatrix> features;
  std::vector<std::string> ids;
  std::vector<int> labels;
  for (int i = 0; i < 12; ++i) {
    feat::FeatureMatrix m;
    m.post_id = "t" + std::to_string(i);
    m.rows = Eigen::MatrixXd::NullaryExpr(2, 4, [&] { return rng.normal(); });
    labels.push_back(i % 2);
    m.rows.col(0).array() += 2.0 * labels.back();
    m.feature_ids = {"a", "b", "c", "d"};
    ids.push_back(m.post_id);
    features.push_back(std::move(m));
  }
  models::TrainConfig cfg;
  cfg.epochs = 2;
  ensemble::ModelInputs inputs{&features, nullptr, labels};
  const std::vector<BaseSource> bases{
      {"M4", nullptr, ensemble::model_base(models::ModelKind::m4, models::Preset::desk, cfg, inputs)}};
  const auto a = ensemble::build_oof_matrix(bases, ids, labels, 3, 1);
  const auto b = ensemble::build_oof_matrix(bases, ids, labels, 3, 1);
  CHECK(a.Z == b.Z);
  CHECK(((a.Z.array() >= 0) && (a.Z.array() <= 1)).all());
  CHECK_THROWS_AS(ensemble::model_base(models::ModelKind::m5, models::Preset::desk, cfg, inputs), DataError);
}

// ---- spec file ---------------------------------------------------------

TEST_CASE("ensemble spec parsing") {
  const auto j = nlohmann::json::parse(R"({
    "bases": [{"type": "file", "path": "m1.csv", "id": "M1", "eval_path": "/abs/m1_test.csv"},
              {"type": "file", "path": "sub/m2.csv"},
              {"type": "train", "model": "m4", "seed": 7, "id": "M4"}],
    "meta": "xgboost", "folds": 3, "seed": 9, "preset": "desk", "train": {"epochs": 4}})");
  const auto spec = ensemble::parse_ensemble_spec(j, "/data/specs");
  REQUIRE(spec.bases.size() == 3);
  CHECK(spec.bases[0].path == std::filesystem::path("/data/specs/m1.csv"));
  CHECK(spec.bases[0].eval_path == std::filesystem::path("/abs/m1_test.csv"));
  CHECK(spec.bases[1].id == "m2");
  CHECK(spec.bases[2].type == ensemble::BaseSpec::Type::train);
  CHECK(spec.bases[2].seed == 7);
  CHECK(spec.meta == MetaKind::gradient_boosting);
  CHECK(spec.folds == 3);
  CHECK(spec.seed == 9);
  CHECK(spec.train.epochs == 4);

  auto bad = [](const char* text) {
    return error_of([&] { (void)ensemble::parse_ensemble_spec(nlohmann::json::parse(text), "."); });
  };
  CHECK_FALSE(bad(R"({"bases": []})").empty());
  CHECK_FALSE(bad(R"({"bases": [{"type": "file"}]})").empty());
  CHECK_FALSE(bad(R"({"bases": [{"type": "cloud", "path": "x"}]})").empty());
  CHECK_FALSE(bad(R"({"bases": [{"type": "train", "model": "m9"}]})").empty());
  CHECK_FALSE(bad(R"({"bases": [{"type": "file", "path": "a.csv"}], "folds": 1})").empty());
  CHECK_FALSE(bad(R"({"bases": [{"type": "file", "path": "a.csv"}], "colour": 1})").empty());
  CHECK_FALSE(bad(R"({"bases": [{"type": "file", "path": "a.csv"}], "meta": "forest"})").empty());
  CHECK(bad(R"({"bases": [{"type": "file", "path": "a/x.csv"}, {"type": "file", "path": "b/x.csv"}]})")
            .find("duplicate") != std::string::npos);
  CHECK_FALSE(bad("[1, 2]").empty());

  const auto path = anxpipe::testing::write_file("broken.json", "{\"bases\": [");
  CHECK(error_of([&] { (void)ensemble::read_ensemble_spec(path); }).find("broken.json") != std::string::npos);
}
