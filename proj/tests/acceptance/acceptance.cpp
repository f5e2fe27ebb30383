// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance              run every criterion
//   acceptance --only NAME  run one (exit status reflects that one)
//   acceptance --list       print the criterion names

#include <sys/wait.h>

#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include "anxpipe/corpus.hpp"
#include "anxpipe/ensemble/meta.hpp"
#include "anxpipe/error.hpp"
#include "anxpipe/evalkit.hpp"
#include "anxpipe/exchange.hpp"
#include "anxpipe/linguafeat/families.hpp"
#include "anxpipe/linguafeat/feature_matrix.hpp"
#include "anxpipe/linguafeat/rfe.hpp"
#include "anxpipe/models/models.hpp"
#include "anxpipe/nn/checkpoint.hpp"
#include "anxpipe/nn/gradcheck.hpp"
#include "anxpipe/nn/lstm.hpp"
#include "oracle/readability_oracle.hpp"
#include "oracle/stacking_synth.hpp"
#include "oracle/published_rows.hpp"
#include "test_util.hpp"

using namespace anxpipe;
namespace fs = std::filesystem;
using nn::Mat;
using nn::Vec;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  const char* name;
  const char* title;
  std::function<Outcome()> run;
};

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Mat<double> random_mat(Eigen::Index r, Eigen::Index c, Rng& rng, double scale = 1.0) {
  Mat<double> m(r, c);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.uniform(-scale, scale);
  return m;
}

feat::FeatureMatrix random_cm(const std::string& id, Eigen::Index n, Eigen::Index f, Rng& rng, double shift = 0.0) {
  feat::FeatureMatrix m;
  m.post_id = id;
  m.rows = random_mat(n, f, rng).array() + shift;
  for (Eigen::Index j = 0; j < f; ++j) m.feature_ids.push_back("x" + std::to_string(j));
  m.standardized = true;
  return m;
}

// ---- gradient fidelity ---------------------------------------------------

Outcome gradient_fidelity() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0;
  std::string where;
  auto note = [&](const nn::GradCheckResult& r, const char* what) {
    if (r.max_relative_error >= worst) {
      worst = r.max_relative_error;
      where = std::string(what) + ":" + r.worst_tensor;
    }
  };

  {  // BiLSTM H=8, L=2, N=4 through a fixed linear probe of outputs and final state
    Rng rng(13);
    auto p = nn::BiLstmParams<double>::init(5, 8, 2, rng);
    p.for_each([&](const std::string&, Mat<double>& t) { t += random_mat(t.rows(), t.cols(), rng, 0.3); });
    Mat<double> seq = random_mat(4, 5, rng);
    const Vec<double> w = random_mat(16, 1, rng);
    const Mat<double> V = random_mat(4, 16, rng, 0.5);
    auto probe = [&] {
      const auto out = nn::bilstm_forward(seq, p);
      return w.dot(out.final) + (V.array() * out.outputs.array()).sum();
    };
    const auto out = nn::bilstm_forward(seq, p);
    const auto g = nn::bilstm_backward<double>(w, out.cache, p, &V);
    note(nn::grad_check_params(p, g.params, probe, 1e-5, 400), "bilstm");
    note(nn::grad_check<double>({{"input", &seq}}, {&g.input}, probe), "bilstm");
  }
  {  // M4 head on top of a BiLSTM
    Rng rng(6);
    const models::M4Dims d{5, 4, 2, 6, 5};
    auto p = models::M4Params<double>::init(d, rng);
    const auto cm = random_cm("g", 3, 5, rng);
    for (int label : {0, 1}) {
      models::M4Trace<double> tr;
      const Vec<double> logits = models::m4_logits(cm.rows, p, &tr);
      const auto g = models::m4_backward<double>(nn::cross_entropy_grad(logits, label), tr, p);
      note(nn::grad_check_params(
               p, g, [&] { return nn::cross_entropy_logits<double>(models::m4_logits<double>(cm.rows, p), label); },
               1e-5, 400),
           "m4");
    }
  }
  {  // full tiny M5
    Rng rng(7);
    models::M5Dims d;
    d.input_dim = 4;
    d.hidden_tokens = 2;
    d.layers_tokens = 1;
    d.hidden_features = 3;
    d.layers_features = 2;
    d.fc1 = 3;
    d.fc2 = 4;
    d.fc3 = 5;
    auto p = models::M5Params<double>::init(d, rng);
    Mat<double> tokens(3, exchange::kEmbeddingDim);
    for (Eigen::Index i = 0; i < tokens.size(); ++i) tokens.data()[i] = static_cast<float>(rng.uniform(-1, 1));
    const auto cm = random_cm("g", 4, 4, rng, 0.5);
    models::M5Trace<double> tr;
    const Vec<double> logits = models::m5_logits(tokens, cm.rows, p, &tr);
    const auto g = models::m5_backward<double>(nn::cross_entropy_grad(logits, 1), tr, p);
    note(nn::grad_check_params(
             p, g, [&] { return nn::cross_entropy_logits<double>(models::m5_logits<double>(tokens, cm.rows, p), 1); },
             1e-5, 600),
         "m5");
  }
  const double secs = seconds_since(t0);
  return {worst < 1e-4 && secs < 30,
          fmt("max rel err %.3g (%s), %.1f s", worst, where.c_str(), secs)};
}

// ---- published results ---------------------------------------------------

Outcome published_f1_consistency() {
  std::string bad;
  double worst = 0;
  int ok = 0;
  for (const auto& row : oracle::kPublishedRows) {
    const double gap = std::abs(eval::harmonic_f1(row.p, row.r) - row.f1);
    worst = std::max(worst, gap);
    if (eval::consistency_check(row.p, row.r, row.f1, 0.02)) {
      ++ok;
    } else {
      bad += fmt(" %.*s(gap %.4f)", static_cast<int>(row.model.size()), row.model.data(), gap);
    }
  }
  const int total = static_cast<int>(std::size(oracle::kPublishedRows));
  return {ok == total, fmt("%d/%d rows within 0.02", ok, total) + (bad.empty() ? "" : ";" + bad)};
}

// ---- readability -----------------------------------------------------------

Outcome readability_oracle() {
  feat::ResourceBundle res;
  res.wordlists["dale_chall"] = {oracle::kDaleList.begin(), oracle::kDaleList.end()};
  res.wordlists["spache"] = {oracle::kSpacheList.begin(), oracle::kSpacheList.end()};
  double worst = 0;
  int compared = 0;
  for (const auto& row : oracle::kTable) {
    const auto sentences = feat::segment_sentences(row.text);
    const auto got = feat::readability_features(sentences, res);
    const auto want = oracle::readability_oracle(row);
    for (std::size_t i = 0; i < want.size(); ++i, ++compared) worst = std::max(worst, std::abs(got[i] - want[i]));
  }
  return {worst <= 1e-9 && compared == 140, fmt("%d values, max abs diff %.3g", compared, worst)};
}

// ---- overfit ---------------------------------------------------------------

Outcome m4_overfit() {
  const auto t0 = std::chrono::steady_clock::now();
  // 32 posts, 168 features, separable on the sign of a fixed direction
  Rng rng(2024);
  const Eigen::VectorXd dir = random_mat(168, 1, rng);
  std::vector<feat::FeatureMatrix> cms;
  for (int i = 0; i < 32; ++i) {
    const int label = i % 2;
    auto m = random_cm("o" + std::to_string(i), 1 + static_cast<Eigen::Index>(rng.below(4)), 168, rng);
    for (Eigen::Index w = 0; w < m.windows(); ++w) {
      const double s = m.rows.row(w).dot(dir) / dir.squaredNorm();
      m.rows.row(w) += ((label ? 1.0 : -1.0) - s) * dir.transpose();
    }
    cms.push_back(std::move(m));
  }
  std::vector<models::M4Example> train;
  for (int i = 0; i < 32; ++i) train.push_back({&cms[static_cast<std::size_t>(i)], i % 2});

  auto dims = models::m4_preset(models::Preset::desk, 168);
  dims.hidden = 32;
  dims.layers = 1;
  models::TrainConfig cfg;
  cfg.epochs = 200;
  cfg.early_stop_patience = 0;
  // selecting on the training set keeps the first epoch that fits it
  const auto res = models::train_m4(dims, train, train, cfg);
  int right = 0;
  for (const auto& ex : train) right += models::m4_forward(*ex.cm, res.model).label_hat == ex.label;
  const double secs = seconds_since(t0);
  int first_full = 0;
  for (const auto& e : res.history.epochs)
    if (!first_full && e.validation.accuracy() == 1.0) first_full = e.epoch;
  return {right == 32 && first_full > 0 && secs < 60,
          fmt("train accuracy %d/32, first perfect epoch %d, %.1f s", right, first_full, secs)};
}

// ---- stacking --------------------------------------------------------------

Outcome stacking_gain() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(42);
  const auto train = oracle::synthetic_stack(rng, 2000, 3, 0.8);
  const auto test = oracle::synthetic_stack(rng, 2000, 3, 0.8);
  std::string detail;
  bool pass = true;
  for (auto kind : {learn::MetaKind::logistic, learn::MetaKind::ridge, learn::MetaKind::linear_svm,
                    learn::MetaKind::gradient_boosting}) {
    const auto m = learn::fit_meta(train.Z, train.y, kind);
    int right = 0;
    for (Eigen::Index i = 0; i < test.Z.rows(); ++i) right += m.label(test.Z.row(i).transpose()) == test.y[i];
    const double acc = right / 2000.0;
    pass = pass && acc >= 0.87;
    detail += fmt("%s %.4f, ", learn::to_string(kind).c_str(), acc);
  }
  const double secs = seconds_since(t0);
  return {pass && secs < 60, detail + fmt("majority-vote ceiling %.3f, %.1f s", oracle::majority_of_three(0.8), secs)};
}

// ---- RFE -------------------------------------------------------------------

Outcome rfe_recovery() {
  int good_seeds = 0;
  std::string counts;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Rng rng(seed);
    Eigen::MatrixXd X(500, 50);
    std::vector<int> y(500);
    for (Eigen::Index i = 0; i < 500; ++i) {
      y[static_cast<std::size_t>(i)] = rng.bernoulli(0.5) ? 1 : 0;
      for (Eigen::Index j = 0; j < 50; ++j) X(i, j) = (j < 5 ? y[static_cast<std::size_t>(i)] : 0.0) + rng.normal();
    }
    const auto keep = feat::recursive_feature_elimination(X, y, 10, 1);
    const auto found = std::count(keep.begin(), keep.begin() + 5, true);
    good_seeds += found >= 4;
    counts += std::to_string(found);
  }
  return {good_seeds >= 8, fmt("%d/10 seeds keep >= 4 informative (per seed: ", good_seeds) + counts + ")"};
}

// ---- CLI determinism -------------------------------------------------------

int sh(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string q(const fs::path& p) { return "'" + p.string() + "'"; }

bool demo_pipeline(const fs::path& dir) {
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string bin = std::string("env -u ANXPIPE_SEED '") + ANXPIPE_BIN + "' --seed 42 ";
  const std::string quiet = " 2>>" + q(dir / "log.txt");
  const fs::path posts = fs::path(ANXPIPE_SAMPLE_DIR) / "posts.jsonl";
  const fs::path res = fs::path(ANXPIPE_SAMPLE_DIR) / "resources";
  auto ok = [&](const std::string& args) { return sh(bin + args + quiet) == 0; };
  if (!ok("clean --in " + q(posts) + " --out " + q(dir / "clean.jsonl"))) return false;
  if (!ok("split --in " + q(dir / "clean.jsonl") + " --out-dir " + q(dir))) return false;
  for (const char* part : {"train", "validation", "test"})
    if (!ok("extract --in " + q(dir / (std::string(part) + ".jsonl")) + " --resources " + q(res) + " --out " +
            q(dir / (std::string(part) + ".cmfx"))))
      return false;
  if (!ok("rfe --features " + q(dir / "train.cmfx") + " --posts " + q(dir / "train.jsonl") + " --out " +
          q(dir / "mask.json")))
    return false;
  if (!ok("train m4 --preset desk --epochs 4 --mask " + q(dir / "mask.json") + " --train-features " +
          q(dir / "train.cmfx") + " --train-posts " + q(dir / "train.jsonl") + " --val-features " +
          q(dir / "validation.cmfx") + " --val-posts " + q(dir / "validation.jsonl") + " --out " +
          q(dir / "m4.nnck") + " --history " + q(dir / "history.json")))
    return false;
  if (!ok("predict --model " + q(dir / "m4.nnck") + " --features " + q(dir / "test.cmfx") + " --out " +
          q(dir / "predictions.csv")))
    return false;
  return sh(bin + "eval --pred " + q(dir / "predictions.csv") + " --gold " + q(dir / "test.jsonl") + " --out " +
            q(dir / "report.txt") + " --json " + q(dir / "report.json") + " >" + q(dir / "stdout.txt") + quiet) == 0;
}

Outcome demo_determinism() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto a = testing::scratch_dir() / "demo_a", b = testing::scratch_dir() / "demo_b";
  if (!demo_pipeline(a)) return {false, "first run failed, see " + (a / "log.txt").string()};
  if (!demo_pipeline(b)) return {false, "second run failed, see " + (b / "log.txt").string()};
  int files = 0;
  std::string differing;
  for (const auto& entry : fs::directory_iterator(a)) {
    const auto name = entry.path().filename();
    if (name == "log.txt") continue;  // names the run directory
    ++files;
    if (testing::read_file(entry.path()) != testing::read_file(b / name)) differing += " " + name.string();
  }
  const auto report = testing::read_file(a / "stdout.txt");
  const bool printed_f1 = report.find("F1") != std::string::npos;
  return {differing.empty() && files >= 12 && printed_f1,
          fmt("%d artifacts compared, %.1f s", files, seconds_since(t0)) +
              (differing.empty() ? "" : "; differ:" + differing)};
}

// ---- binary formats --------------------------------------------------------

Outcome format_robustness() {
  Rng rng(99);
  int temb_ok = 0, nnck_ok = 0, trunc_cases = 0, trunc_clean = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<exchange::EmbeddingSequence> seqs;
    for (auto n = rng.below(3); n > 0; --n) {
      exchange::EmbeddingSequence s;
      s.post_id = testing::random_unicode_text(rng, 1 + rng.below(3));
      s.model_name = "m" + std::to_string(rng.below(10));
      s.vectors.resize(1 + static_cast<Eigen::Index>(rng.below(4)), exchange::kEmbeddingDim);
      for (Eigen::Index i = 0; i < s.vectors.size(); ++i)
        s.vectors.data()[i] = static_cast<float>(rng.normal() * std::pow(10.0, rng.uniform(-30, 30)));
      seqs.push_back(std::move(s));
    }
    const auto bytes = exchange::encode_embeddings(seqs);
    const auto back = exchange::decode_embeddings(bytes);
    bool same = back.size() == seqs.size();
    for (std::size_t i = 0; same && i < seqs.size(); ++i)
      same = back[i].post_id == seqs[i].post_id && back[i].model_name == seqs[i].model_name &&
             back[i].vectors.rows() == seqs[i].vectors.rows() && back[i].vectors.cwiseEqual(seqs[i].vectors).all();
    temb_ok += same;

    std::vector<nn::NamedTensor> tensors;
    for (auto n = rng.below(4); n > 0; --n) {
      nn::NamedTensor t;
      t.name = "t" + std::to_string(rng.below(1000));
      std::uint64_t total = 1;
      for (auto r = rng.below(4); r > 0; --r) {
        t.dims.push_back(rng.below(5));
        total *= t.dims.back();
      }
      for (std::uint64_t k = 0; k < total; ++k) {
        const auto bits = rng.below(~0ULL);
        double v = std::bit_cast<double>(bits);
        if (!std::isfinite(v)) v = rng.normal();
        t.data.push_back(v);
      }
      tensors.push_back(std::move(t));
    }
    std::string nnck;
    try {
      nnck = nn::encode_checkpoint(tensors);
      const auto nb = nn::decode_checkpoint(nnck);
      bool eq = nb.size() == tensors.size();
      for (std::size_t i = 0; eq && i < tensors.size(); ++i)
        eq = nb[i].name == tensors[i].name && nb[i].dims == tensors[i].dims &&
             std::memcmp(nb[i].data.data(), tensors[i].data.data(), 8 * tensors[i].data.size()) == 0;
      nnck_ok += eq;
    } catch (const std::exception&) {
    }

    // every proper prefix must be rejected with a DataError
    for (const std::string* file : {&bytes, static_cast<const std::string*>(&nnck)}) {
      if (file->empty()) continue;
      const auto cut = static_cast<std::size_t>(rng.below(file->size()));
      ++trunc_cases;
      try {
        if (file == &bytes) (void)exchange::decode_embeddings(file->substr(0, cut));
        else (void)nn::decode_checkpoint(file->substr(0, cut));
      } catch (const DataError&) {
        ++trunc_clean;
      } catch (...) {
      }
    }
  }
  // absurd declared lengths must fail before allocating
  int hostile = 0;
  for (const std::string& magic : {std::string("TEMB"), std::string("NNCK")}) {
    std::string h = magic + std::string("\x01\x00\x00\x00", 4) + std::string(8, '\xff');
    try {
      if (magic == "TEMB") (void)exchange::decode_embeddings(h);
      else (void)nn::decode_checkpoint(h);
    } catch (const DataError&) {
      ++hostile;
    }
  }
  return {temb_ok == 1000 && nnck_ok == 1000 && trunc_clean == trunc_cases && hostile == 2,
          fmt("TEMB %d/1000, NNCK %d/1000 exact; truncations rejected %d/%d; hostile headers %d/2", temb_ok, nnck_ok,
              trunc_clean, trunc_cases, hostile)};
}

// ---- feature totality ------------------------------------------------------

Outcome feature_totality() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto res = feat::ResourceBundle::load_directory(ANXPIPE_SAMPLE_DIR "/resources");
  const auto reg = feat::FeatureRegistry::build(res);
  Rng rng(10000);
  corpus::PostCollection posts;
  for (int i = 0; i < 10000; ++i) {
    corpus::Post p;
    p.id = "fz" + std::to_string(i);
    p.raw_text = testing::random_unicode_text(rng, rng.below(80));
    p.clean_text = corpus::clean_text(p.raw_text);
    posts.push_back(std::move(p));
  }
  int extracted = 0, empty = 0, other_errors = 0, non_finite = 0;
  std::string first_error;
  for (const auto& p : posts) {
    try {
      const auto m = feat::extract_feature_matrix(p, reg, res, {});
      ++extracted;
      non_finite += !m.rows.allFinite();
    } catch (const DataError& e) {
      if (std::string(e.what()) == "no sentences") {
        ++empty;
      } else {
        if (first_error.empty()) first_error = e.what();
        ++other_errors;
      }
    } catch (const std::exception& e) {
      if (first_error.empty()) first_error = e.what();
      ++other_errors;
    }
  }
  return {other_errors == 0 && non_finite == 0 && extracted + empty == 10000,
          fmt("%d extracted, %d empty, %d other errors, %d non-finite, %.1f s", extracted, empty, other_errors,
              non_finite, seconds_since(t0)) +
              (first_error.empty() ? "" : "; first error: " + first_error)};
}

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all{
      {"gradient_fidelity", "Gradient fidelity (BiLSTM, M4, tiny M5; < 1e-4, < 30 s)", gradient_fidelity},
      {"published_f1_consistency", "Published F1 consistency (harmonic mean of published P, R within 0.02)", published_f1_consistency},
      {"readability_oracle", "Readability oracle (14 indices x 10 texts, 1e-9)", readability_oracle},
      {"m4_overfit", "Overfit sanity (M4 H=32 L=1, 32 posts, 200 epochs, < 60 s)", m4_overfit},
      {"stacking_gain", "Stacking gain (3 bases at 80%, n=2000, every meta >= 87%, < 60 s)", stacking_gain},
      {"rfe_recovery", "RFE recovery (5 informative + 45 noise, top-10, >= 8/10 seeds)", rfe_recovery},
      {"demo_determinism", "Determinism (clean, extract, train, eval twice; byte-identical)", demo_determinism},
      {"format_robustness", "Format robustness (TEMB and NNCK round trips, truncation fuzz)", format_robustness},
      {"feature_totality", "Feature totality (10,000 random posts)", feature_totality},
  };
  return all;
}

}  // namespace

int main(int argc, char** argv) {
  std::string only;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--list") {
      for (const auto& c : criteria()) std::printf("%s\n", c.name);
      return 0;
    }
    if (a == "--only" && i + 1 < argc) {
      only = argv[++i];
    } else {
      std::fprintf(stderr, "usage: acceptance [--list | --only NAME]\n");
      return 1;
    }
  }
  int failed = 0, ran = 0;
  for (const auto& c : criteria()) {
    if (!only.empty() && only != c.name) continue;
    ++ran;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s  %-20s %s: %s\n", o.pass ? "PASS" : "FAIL", c.name, c.title, o.detail.c_str());
    std::fflush(stdout);
  }
  if (ran == 0) {
    std::fprintf(stderr, "unknown criterion %s\n", only.c_str());
    return 1;
  }
  return failed == 0 ? 0 : 1;
}
