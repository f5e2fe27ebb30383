#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <thread>

#include <json.hpp>

#include "anxpipe/corpus.hpp"
#include "anxpipe/ensemble/stacking.hpp"
#include "anxpipe/error.hpp"
#include "anxpipe/evalkit.hpp"
#include "anxpipe/exchange.hpp"
#include "anxpipe/linguafeat/feature_matrix.hpp"
#include "anxpipe/linguafeat/registry.hpp"
#include "anxpipe/linguafeat/resources.hpp"
#include "anxpipe/linguafeat/rfe.hpp"
#include "anxpipe/models/models.hpp"
#include "anxpipe/rng.hpp"
#include "config_file.hpp"

#ifndef ANXPIPE_VERSION
#define ANXPIPE_VERSION "dev"
#endif

namespace anxpipe::cli {

namespace fs = std::filesystem;

namespace {

std::string quoted(const std::string& s) {
  return nlohmann::json(s).dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

void log(const std::string& event, const std::vector<std::pair<std::string, std::string>>& fields = {}) {
  std::string line = "level=info event=" + event;
  for (const auto& [k, v] : fields) {
    const bool quote = v.find_first_of(" \"=") != std::string::npos || v.empty();
    line += " " + k + "=" + (quote ? quoted(v) : v);
  }
  std::cerr << line << '\n';
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void require_exists(const fs::path& p, const char* what) {
  if (p.empty()) throw UsageError(std::string("missing required ") + what);
  if (!fs::exists(p)) throw DataError(std::string(what) + " not found: " + p.string());
}

template <typename T>
T parse_value(const std::string& text, const std::string& key) {
  T v{};
  if (!CLI::detail::lexical_cast(text, v)) throw DataError("config value for " + key + " is not valid: " + text);
  return v;
}

// Flag > config > default.
template <typename T>
T pick(const CLI::Option* flag, const T& flag_value, const ConfigFile& cfg, const std::string& key, const T& fallback) {
  if (flag && flag->count() > 0) return flag_value;
  if (const auto v = cfg.get(key)) return parse_value<T>(*v, key);
  return fallback;
}

std::map<std::string, int> gold_labels(const fs::path& path) {
  require_exists(path, "labelled posts file");
  std::map<std::string, int> gold;
  for (const auto& p : corpus::load_posts(path, corpus::format_from_path(path))) {
    if (p.label) gold[p.id] = *p.label;
  }
  return gold;
}

std::vector<int> labels_for(const std::vector<feat::FeatureMatrix>& ms, const std::map<std::string, int>& gold,
                            const fs::path& source) {
  std::vector<int> y;
  for (const auto& m : ms) {
    const auto it = gold.find(m.post_id);
    if (it == gold.end()) throw DataError("post " + m.post_id + " has no label in " + source.string());
    y.push_back(it->second);
  }
  return y;
}

std::vector<const exchange::EmbeddingSequence*> align_embeddings(const std::vector<exchange::EmbeddingSequence>& emb,
                                                                 const std::vector<feat::FeatureMatrix>& ms) {
  std::map<std::string, const exchange::EmbeddingSequence*> by_id;
  for (const auto& e : emb)
    if (!by_id.emplace(e.post_id, &e).second) throw DataError("duplicate embedding record for post " + e.post_id);
  std::vector<const exchange::EmbeddingSequence*> out;
  for (const auto& m : ms) {
    const auto it = by_id.find(m.post_id);
    if (it == by_id.end()) throw DataError("post " + m.post_id + " has no token embeddings");
    out.push_back(it->second);
  }
  return out;
}

/// Runs f(i) for i in [0, n) on `jobs` threads, rethrowing the first error.
template <typename F>
void parallel_for(std::size_t n, unsigned jobs, F f) {
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  std::vector<std::exception_ptr> errors(jobs);
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < jobs; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = t; i < n; i += jobs) f(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

std::vector<feat::FeatureMatrix> read_features(const fs::path& p) {
  require_exists(p, "feature file");
  auto ms = feat::read_feature_matrices(p);
  if (ms.empty()) throw DataError(p.string() + ": no feature matrices");
  return ms;
}

void write_json(const fs::path& path, const nlohmann::json& j) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

nlohmann::json metrics_json(const eval::Metrics& m) {
  return {{"tp", m.tp}, {"fp", m.fp}, {"fn", m.fn}, {"tn", m.tn},
          {"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1}};
}

nlohmann::json history_json(const models::TrainHistory& h) {
  nlohmann::json j;
  j["best_epoch"] = h.best_epoch;
  auto& arr = j["epochs"] = nlohmann::json::array();
  for (const auto& e : h.epochs) arr.push_back({{"epoch", e.epoch}, {"train_loss", e.train_loss},
                                                {"validation", metrics_json(e.validation)}});
  return j;
}

std::vector<feat::FeatureMatrix> apply_mask(std::vector<feat::FeatureMatrix> ms, const fs::path& mask_path) {
  if (mask_path.empty()) return ms;
  require_exists(mask_path, "mask file");
  const auto mask = feat::read_mask(mask_path);
  for (auto& m : ms) m = feat::select_columns(m, mask.selected_ids);
  return ms;
}

const std::initializer_list<const char*> kConfigKeys = {
    "seed", "paths.corpus", "paths.resources", "paths.embeddings", "paths.predictions", "paths.output_dir",
    "features.window_len", "features.stride", "features.target_k", "model.preset", "train.epochs", "train.lr",
    "train.clip_norm", "train.early_stop_patience", "train.shuffle", "ensemble.spec"};

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"anxpipe: feature extraction, sequence classifiers and stacking for post classification"};
  app.set_version_flag("--version", ANXPIPE_VERSION);
  app.require_subcommand(1);

  std::string config_path;
  std::uint64_t seed_flag = 42;
  app.add_option("--config", config_path, "Key/value config file");
  auto* seed_opt = app.add_option("--seed", seed_flag, "Global seed (overrides ANXPIPE_SEED and config)");

  // clean
  auto* clean = app.add_subcommand("clean", "Apply the text-cleaning rules to a corpus");
  std::string clean_in, clean_out;
  auto* clean_in_opt = clean->add_option("--in", clean_in, "Input posts (.jsonl or .csv)");
  clean->add_option("--out", clean_out, "Output JSONL")->required();

  // split
  auto* split = app.add_subcommand("split", "Stratified train/validation/test split");
  std::string split_in, split_out;
  corpus::SplitSpec split_spec;
  auto* split_in_opt = split->add_option("--in", split_in, "Input posts");
  auto* split_out_opt = split->add_option("--out-dir", split_out, "Directory for train/validation/test.jsonl");
  split->add_option("--train-frac", split_spec.train_frac)->capture_default_str();
  split->add_option("--val-frac", split_spec.val_frac)->capture_default_str();
  split->add_option("--test-frac", split_spec.test_frac)->capture_default_str();

  // extract
  auto* extract = app.add_subcommand("extract", "Per-window feature matrices (CMFX)");
  std::string ex_in, ex_res, ex_out, ex_mask;
  std::size_t ex_window = 1, ex_stride = 1;
  unsigned ex_jobs = 1;
  auto* ex_in_opt = extract->add_option("--in", ex_in, "Input posts");
  auto* ex_res_opt = extract->add_option("--resources", ex_res, "Resource directory");
  extract->add_option("--out", ex_out, "Output CMFX file")->required();
  extract->add_option("--mask", ex_mask, "Feature mask JSON (from rfe)");
  auto* ex_window_opt = extract->add_option("--window-len", ex_window, "Sentences per window");
  auto* ex_stride_opt = extract->add_option("--stride", ex_stride, "Window stride in sentences");
  extract->add_option("--jobs", ex_jobs, "Worker threads")->check(CLI::Range(1u, 256u));

  // rfe
  auto* rfe = app.add_subcommand("rfe", "Recursive feature elimination to a feature mask");
  std::string rfe_features, rfe_posts, rfe_out;
  std::size_t rfe_k = feat::kDefaultTargetFeatures, rfe_step = 1;
  rfe->add_option("--features", rfe_features, "Training CMFX file")->required();
  rfe->add_option("--posts", rfe_posts, "Labelled posts for the same ids")->required();
  auto* rfe_k_opt = rfe->add_option("--target-k", rfe_k, "Features to keep");
  rfe->add_option("--step", rfe_step, "Features dropped per round");
  rfe->add_option("--out", rfe_out, "Mask JSON")->required();

  // train
  auto* train = app.add_subcommand("train", "Train an m4 or m5 classifier");
  std::string tr_kind, tr_train_f, tr_train_p, tr_val_f, tr_val_p, tr_train_e, tr_val_e, tr_mask, tr_out, tr_hist,
      tr_preset = "desk";
  long tr_hidden = 0, tr_layers = 0;
  models::TrainConfig tc;
  train->add_option("kind", tr_kind, "m4 or m5")->required()->check(CLI::IsMember({"m4", "m5"}));
  train->add_option("--train-features", tr_train_f)->required();
  train->add_option("--train-posts", tr_train_p, "Labels for the training posts")->required();
  train->add_option("--val-features", tr_val_f)->required();
  train->add_option("--val-posts", tr_val_p)->required();
  train->add_option("--train-embeddings", tr_train_e, "TEMB file (m5)");
  train->add_option("--val-embeddings", tr_val_e, "TEMB file (m5)");
  train->add_option("--mask", tr_mask, "Feature mask JSON");
  auto* tr_preset_opt = train->add_option("--preset", tr_preset, "paper or desk");
  train->add_option("--hidden", tr_hidden, "Override hidden size (m4 H, m5 H2)");
  train->add_option("--layers", tr_layers, "Override layer count (m4 L, m5 L2)");
  auto* tr_epochs_opt = train->add_option("--epochs", tc.epochs);
  auto* tr_lr_opt = train->add_option("--lr", tc.lr);
  auto* tr_clip_opt = train->add_option("--clip-norm", tc.clip_norm);
  auto* tr_pat_opt = train->add_option("--patience", tc.early_stop_patience, "Early-stop patience (0 = off)");
  bool tr_no_shuffle = false;
  auto* tr_shuffle_opt = train->add_flag("--no-shuffle", tr_no_shuffle);
  train->add_option("--out", tr_out, "Checkpoint path (NNCK)")->required();
  train->add_option("--history", tr_hist, "Per-epoch history JSON");

  // predict
  auto* predict = app.add_subcommand("predict", "Run a trained checkpoint over feature matrices");
  std::string pr_model, pr_features, pr_emb, pr_out;
  unsigned pr_jobs = 1;
  predict->add_option("--model", pr_model)->required();
  predict->add_option("--features", pr_features)->required();
  predict->add_option("--embeddings", pr_emb, "TEMB file (m5)");
  predict->add_option("--out", pr_out, "Prediction CSV")->required();
  predict->add_option("--jobs", pr_jobs)->check(CLI::Range(1u, 256u));

  // stack
  auto* stack = app.add_subcommand("stack", "Out-of-fold stacking ensemble");
  std::string st_spec, st_posts, st_features, st_emb, st_out, st_eval_f, st_eval_e;
  auto* st_spec_opt = stack->add_option("--spec", st_spec, "Ensemble spec JSON");
  stack->add_option("--posts", st_posts, "Labelled training posts")->required();
  stack->add_option("--features", st_features, "Training CMFX (needed by trainable bases)");
  stack->add_option("--embeddings", st_emb, "Training TEMB (m5 bases)");
  auto* st_out_opt = stack->add_option("--out-dir", st_out);
  stack->add_option("--eval-features", st_eval_f, "CMFX of posts to predict with the fitted ensemble");
  stack->add_option("--eval-embeddings", st_eval_e);

  // eval
  auto* evalc = app.add_subcommand("eval", "Metrics of one prediction file");
  std::string ev_pred, ev_gold, ev_name, ev_out, ev_json;
  evalc->add_option("--pred", ev_pred)->required();
  evalc->add_option("--gold", ev_gold, "Labelled posts")->required();
  evalc->add_option("--name", ev_name, "Row name");
  evalc->add_option("--out", ev_out, "Also write the table here");
  evalc->add_option("--json", ev_json, "Machine-readable report");

  // report
  auto* report = app.add_subcommand("report", "Table over several prediction files");
  std::vector<std::string> rp_preds, rp_names;
  std::string rp_gold, rp_out, rp_json;
  report->add_option("--pred", rp_preds)->required();
  report->add_option("--name", rp_names, "Row names, one per --pred");
  report->add_option("--gold", rp_gold)->required();
  report->add_option("--out", rp_out);
  report->add_option("--json", rp_json);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  ConfigFile cfg;
  if (!config_path.empty()) {
    require_exists(config_path, "config file");
    cfg = ConfigFile::load(config_path);
    cfg.require_known(kConfigKeys);
  }

  // seed: flag > ANXPIPE_SEED > config > 42
  std::uint64_t seed = 42;
  if (seed_opt->count() > 0) {
    seed = seed_flag;
  } else if (const char* env = std::getenv("ANXPIPE_SEED"); env && *env) {
    if (!CLI::detail::lexical_cast(std::string(env), seed)) throw UsageError("ANXPIPE_SEED is not an integer");
  } else if (const auto v = cfg.get("seed")) {
    seed = parse_value<std::uint64_t>(*v, "seed");
  }

  const std::string command = app.get_subcommands().front()->get_name();
  {
    std::uint64_t h = fnv1a64(command);
    for (const auto& [k, v] : cfg.values()) h = fnv1a64(k + "=" + v + "\n", h);
    for (int i = 2; i < argc; ++i) h = fnv1a64(std::string(argv[i]) + "\n", h);
    h = fnv1a64("seed=" + std::to_string(seed), h);
    std::cerr << "# anxpipe " << ANXPIPE_VERSION << " command=" << command << " seed=" << seed
              << " config_hash=" << hex64(h) << '\n';
  }

  if (command == "clean") {
    const fs::path in = pick<std::string>(clean_in_opt, clean_in, cfg, "paths.corpus", "");
    require_exists(in, "input corpus");
    auto posts = corpus::load_posts(in, corpus::format_from_path(in));
    corpus::clean_all(posts);
    corpus::save_posts_jsonl(posts, clean_out, true);
    log("clean", {{"posts", std::to_string(posts.size())}, {"out", clean_out}});
    return 0;
  }

  if (command == "split") {
    const fs::path in = pick<std::string>(split_in_opt, split_in, cfg, "paths.corpus", "");
    const fs::path out = pick<std::string>(split_out_opt, split_out, cfg, "paths.output_dir", "");
    require_exists(in, "input corpus");
    if (out.empty()) throw UsageError("split needs --out-dir or paths.output_dir");
    split_spec.seed = seed;
    const auto posts = corpus::load_posts(in, corpus::format_from_path(in));
    const auto s = corpus::split_dataset(posts, split_spec);
    fs::create_directories(out);
    corpus::save_posts_jsonl(s.train, out / "train.jsonl", false);
    corpus::save_posts_jsonl(s.validation, out / "validation.jsonl", false);
    corpus::save_posts_jsonl(s.test, out / "test.jsonl", false);
    log("split", {{"train", std::to_string(s.train.size())},
                  {"validation", std::to_string(s.validation.size())},
                  {"test", std::to_string(s.test.size())}});
    return 0;
  }

  if (command == "extract") {
    const fs::path in = pick<std::string>(ex_in_opt, ex_in, cfg, "paths.corpus", "");
    const fs::path res = pick<std::string>(ex_res_opt, ex_res, cfg, "paths.resources", "");
    require_exists(in, "input corpus");
    require_exists(res, "resource directory");
    feat::ExtractOptions opts;
    opts.window_len = pick<std::size_t>(ex_window_opt, ex_window, cfg, "features.window_len", 1);
    opts.stride = pick<std::size_t>(ex_stride_opt, ex_stride, cfg, "features.stride", 1);
    opts.seed = seed;
    if (opts.window_len < 1 || opts.stride < 1) throw DataError("window_len and stride must be >= 1");
    const auto resources = feat::ResourceBundle::load_directory(res);
    auto registry = feat::FeatureRegistry::build(resources);
    if (!ex_mask.empty()) {
      require_exists(ex_mask, "mask file");
      const auto mask = feat::read_mask(ex_mask);
      if (mask.registry_ids != registry.all_ids())
        throw DataError("mask " + ex_mask + " was built against a different feature registry");
      registry.select_ids(mask.selected_ids);
    }
    auto posts = corpus::load_posts(in, corpus::format_from_path(in));
    corpus::clean_all(posts);
    const auto matrices = feat::extract_all(posts, registry, resources, opts, ex_jobs);
    feat::write_feature_matrices(ex_out, matrices);
    log("extract", {{"posts", std::to_string(matrices.size())},
                    {"features", std::to_string(registry.selected_count())},
                    {"out", ex_out}});
    return 0;
  }

  if (command == "rfe") {
    const auto ms = read_features(rfe_features);
    const auto y = labels_for(ms, gold_labels(rfe_posts), rfe_posts);
    const std::size_t k = pick<std::size_t>(rfe_k_opt, rfe_k, cfg, "features.target_k", feat::kDefaultTargetFeatures);
    const Eigen::MatrixXd X = feat::post_level_design(ms);
    const auto keep = feat::recursive_feature_elimination(X, y, k, rfe_step);
    feat::FeatureMask mask;
    mask.registry_ids = ms.front().feature_ids;
    for (std::size_t j = 0; j < keep.size(); ++j)
      if (keep[j]) mask.selected_ids.push_back(mask.registry_ids[j]);
    feat::write_mask(rfe_out, mask);
    log("rfe", {{"features", std::to_string(keep.size())}, {"selected", std::to_string(mask.selected_ids.size())}});
    return 0;
  }

  if (command == "train") {
    const auto kind = models::parse_model_kind(tr_kind);
    tc.epochs = pick<int>(tr_epochs_opt, tc.epochs, cfg, "train.epochs", 30);
    tc.lr = pick<double>(tr_lr_opt, tc.lr, cfg, "train.lr", 1e-3);
    tc.clip_norm = pick<double>(tr_clip_opt, tc.clip_norm, cfg, "train.clip_norm", 5.0);
    tc.early_stop_patience = pick<int>(tr_pat_opt, tc.early_stop_patience, cfg, "train.early_stop_patience", 0);
    tc.shuffle = tr_shuffle_opt->count() > 0 ? !tr_no_shuffle : pick<bool>(nullptr, true, cfg, "train.shuffle", true);
    tc.seed = seed;
    tc.validate();
    const auto preset = models::parse_preset(pick<std::string>(tr_preset_opt, tr_preset, cfg, "model.preset", "desk"));

    auto train_raw = apply_mask(read_features(tr_train_f), tr_mask);
    auto val_raw = apply_mask(read_features(tr_val_f), tr_mask);
    const auto y_train = labels_for(train_raw, gold_labels(tr_train_p), tr_train_p);
    const auto y_val = labels_for(val_raw, gold_labels(tr_val_p), tr_val_p);
    const auto standardizer = feat::fit_standardizer(train_raw);
    std::vector<feat::FeatureMatrix> train_std, val_std;
    for (const auto& m : train_raw) train_std.push_back(feat::apply_standardizer(m, standardizer));
    for (const auto& m : val_raw) val_std.push_back(feat::apply_standardizer(m, standardizer));
    const auto width = static_cast<Eigen::Index>(standardizer.feature_ids.size());

    models::TrainHistory history;
    if (kind == models::ModelKind::m4) {
      auto dims = models::m4_preset(preset, width);
      if (tr_hidden > 0) dims.hidden = tr_hidden;
      if (tr_layers > 0) dims.layers = static_cast<std::size_t>(tr_layers);
      std::vector<models::M4Example> tr, va;
      for (std::size_t i = 0; i < train_std.size(); ++i) tr.push_back({&train_std[i], y_train[i]});
      for (std::size_t i = 0; i < val_std.size(); ++i) va.push_back({&val_std[i], y_val[i]});
      auto result = models::train_m4(dims, tr, va, tc);
      result.model.standardizer = standardizer;
      models::save_model(result.model, tr_out);
      history = std::move(result.history);
    } else {
      if (tr_train_e.empty() || tr_val_e.empty()) throw UsageError("train m5 needs --train-embeddings and --val-embeddings");
      require_exists(tr_train_e, "training embeddings");
      require_exists(tr_val_e, "validation embeddings");
      const auto emb_train = exchange::read_embeddings(tr_train_e);
      const auto emb_val = exchange::read_embeddings(tr_val_e);
      const auto a_train = align_embeddings(emb_train, train_std);
      const auto a_val = align_embeddings(emb_val, val_std);
      auto dims = models::m5_preset(preset, width);
      if (tr_hidden > 0) dims.hidden_features = tr_hidden;
      if (tr_layers > 0) dims.layers_features = static_cast<std::size_t>(tr_layers);
      std::vector<models::M5Example> tr, va;
      for (std::size_t i = 0; i < train_std.size(); ++i) tr.push_back({a_train[i], &train_std[i], y_train[i]});
      for (std::size_t i = 0; i < val_std.size(); ++i) va.push_back({a_val[i], &val_std[i], y_val[i]});
      auto result = models::train_m5(dims, tr, va, tc);
      result.model.standardizer = standardizer;
      models::save_model(result.model, tr_out);
      history = std::move(result.history);
    }
    if (!tr_hist.empty()) write_json(tr_hist, history_json(history));
    const double best_f1 = history.best_epoch > 0 ? history.epochs[history.best_epoch - 1].validation.f1 : 0.0;
    log("train", {{"model", tr_kind}, {"epochs", std::to_string(history.epochs.size())},
                  {"best_epoch", std::to_string(history.best_epoch)}, {"val_f1", num(best_f1)}, {"out", tr_out}});
    return 0;
  }

  if (command == "predict") {
    require_exists(pr_model, "model checkpoint");
    const auto model = models::load_model(pr_model);
    auto raw = read_features(pr_features);
    const auto& standardizer = std::visit([](const auto& m) -> const std::optional<feat::Standardizer>& {
      return m.standardizer;
    }, model);
    if (standardizer)
      for (auto& m : raw)
        if (m.feature_ids != standardizer->feature_ids) m = feat::select_columns(m, standardizer->feature_ids);
    std::vector<Prediction> preds(raw.size());
    std::vector<exchange::EmbeddingSequence> emb;
    std::vector<const exchange::EmbeddingSequence*> aligned;
    if (std::holds_alternative<models::M5Model>(model)) {
      if (pr_emb.empty()) throw UsageError("an m5 checkpoint needs --embeddings");
      require_exists(pr_emb, "embeddings");
      emb = exchange::read_embeddings(pr_emb);
      aligned = align_embeddings(emb, raw);
    }
    parallel_for(raw.size(), pr_jobs, [&](std::size_t i) {
      const auto cm = models::prepare_features(raw[i], standardizer);
      if (const auto* m4 = std::get_if<models::M4Model>(&model)) {
        preds[i] = models::m4_forward(cm, *m4);
      } else {
        preds[i] = models::m5_forward(*aligned[i], cm, std::get<models::M5Model>(model));
      }
    });
    exchange::write_predictions(fs::path(pr_out), preds);
    log("predict", {{"posts", std::to_string(preds.size())}, {"out", pr_out}});
    return 0;
  }

  if (command == "stack") {
    const fs::path spec_path = pick<std::string>(st_spec_opt, st_spec, cfg, "ensemble.spec", "");
    const fs::path out = pick<std::string>(st_out_opt, st_out, cfg, "paths.output_dir", "");
    require_exists(spec_path, "ensemble spec");
    if (out.empty()) throw UsageError("stack needs --out-dir or paths.output_dir");
    auto spec = ensemble::read_ensemble_spec(spec_path);
    const auto gold = gold_labels(st_posts);
    std::vector<std::string> ids;
    std::vector<int> y;
    for (const auto& [id, label] : gold) {
      ids.push_back(id);
      y.push_back(label);
    }

    bool any_train = false, any_m5 = false;
    for (const auto& b : spec.bases) {
      any_train = any_train || b.type == ensemble::BaseSpec::Type::train;
      any_m5 = any_m5 || (b.type == ensemble::BaseSpec::Type::train && b.model == models::ModelKind::m5);
    }
    std::vector<feat::FeatureMatrix> features;
    std::vector<exchange::EmbeddingSequence> emb;
    ensemble::ModelInputs inputs;
    if (any_train) {
      if (st_features.empty()) throw UsageError("trainable bases need --features");
      auto all = read_features(st_features);
      std::map<std::string, std::size_t> pos;
      for (std::size_t i = 0; i < all.size(); ++i) pos[all[i].post_id] = i;
      for (const auto& id : ids) {
        const auto it = pos.find(id);
        if (it == pos.end()) throw DataError("post " + id + " missing from " + st_features);
        features.push_back(all[it->second]);
      }
      inputs.features = &features;
      inputs.labels = y;
    }
    std::vector<const exchange::EmbeddingSequence*> aligned;
    if (any_m5) {
      if (st_emb.empty()) throw UsageError("m5 bases need --embeddings");
      require_exists(st_emb, "embeddings");
      emb = exchange::read_embeddings(st_emb);
      aligned = align_embeddings(emb, features);
      inputs.embeddings = &aligned;
    }
    std::vector<exchange::BasePredictionSet> files;
    files.reserve(spec.bases.size());
    std::vector<ensemble::BaseSource> sources;
    for (const auto& b : spec.bases) {
      ensemble::BaseSource src;
      src.id = b.id;
      if (b.type == ensemble::BaseSpec::Type::file) {
        require_exists(b.path, "base prediction file");
        files.push_back(exchange::read_predictions(b.path, b.id));
        src.file = &files.back();
      } else {
        auto c = spec.train;
        c.seed = b.seed;
        src.trainable = ensemble::model_base(b.model, spec.preset, c, inputs);
      }
      sources.push_back(std::move(src));
    }
    const auto ds = ensemble::build_oof_matrix(sources, ids, y, spec.folds, spec.seed);
    const auto meta = learn::fit_meta(ds.Z, ds.y, spec.meta, spec.hyper);

    fs::create_directories(out);
    {
      std::ofstream oof(out / "oof.csv", std::ios::binary | std::ios::trunc);
      oof << "post_id,fold,label";
      for (const auto& b : ds.base_ids) oof << ',' << b;
      oof << '\n';
      char buf[40];
      for (Eigen::Index i = 0; i < ds.Z.rows(); ++i) {
        oof << ds.post_ids[static_cast<std::size_t>(i)] << ',' << ds.fold_of[static_cast<std::size_t>(i)] << ','
            << static_cast<int>(ds.y[i]);
        for (Eigen::Index j = 0; j < ds.Z.cols(); ++j) {
          std::snprintf(buf, sizeof buf, "%.17g", ds.Z(i, j));
          oof << ',' << buf;
        }
        oof << '\n';
      }
    }
    auto meta_json = learn::to_json(meta);
    meta_json["base_ids"] = ds.base_ids;
    write_json(out / "meta.json", meta_json);
    std::vector<Prediction> in_sample;
    for (Eigen::Index i = 0; i < ds.Z.rows(); ++i)
      in_sample.push_back(Prediction::from_probability(ds.post_ids[static_cast<std::size_t>(i)],
                                                       meta.probability(ds.Z.row(i).transpose())));
    exchange::write_predictions(out / "predictions.csv", in_sample);
    const auto m = eval::compute_metrics(in_sample, gold);
    log("stack", {{"bases", std::to_string(ds.base_ids.size())}, {"meta", learn::to_string(spec.meta)},
                  {"posts", std::to_string(ds.post_ids.size())}, {"oof_meta_f1", num(m.f1)}});

    if (!st_eval_f.empty()) {
      // Refit trainable bases on every training post and score the new posts.
      auto eval_raw = read_features(st_eval_f);
      std::vector<feat::FeatureMatrix> joint = features;
      const std::size_t n_train = joint.size();
      for (const auto& e : eval_raw) joint.push_back(e);
      std::vector<exchange::EmbeddingSequence> eval_emb;
      std::vector<const exchange::EmbeddingSequence*> joint_emb = aligned;
      if (any_m5) {
        if (st_eval_e.empty()) throw UsageError("m5 bases need --eval-embeddings");
        require_exists(st_eval_e, "evaluation embeddings");
        eval_emb = exchange::read_embeddings(st_eval_e);
        for (auto* p : align_embeddings(eval_emb, eval_raw)) joint_emb.push_back(p);
      }
      ensemble::ModelInputs joint_inputs;
      joint_inputs.features = &joint;
      joint_inputs.embeddings = any_m5 ? &joint_emb : nullptr;
      joint_inputs.labels = y;
      joint_inputs.labels.resize(joint.size(), 0);
      std::vector<std::size_t> train_idx(n_train), eval_idx(eval_raw.size());
      for (std::size_t i = 0; i < n_train; ++i) train_idx[i] = i;
      for (std::size_t i = 0; i < eval_raw.size(); ++i) eval_idx[i] = n_train + i;
      Eigen::MatrixXd Zeval(static_cast<Eigen::Index>(eval_raw.size()), static_cast<Eigen::Index>(spec.bases.size()));
      for (std::size_t b = 0; b < spec.bases.size(); ++b) {
        const auto& bs = spec.bases[b];
        if (bs.type == ensemble::BaseSpec::Type::file) {
          if (bs.eval_path.empty()) throw DataError("file base " + bs.id + " has no eval_path for --eval-features");
          require_exists(bs.eval_path, "base evaluation predictions");
          const auto set = exchange::read_predictions(bs.eval_path, bs.id);
          for (std::size_t i = 0; i < eval_raw.size(); ++i) {
            const auto it = set.entries.find(eval_raw[i].post_id);
            if (it == set.entries.end())
              throw DataError("post " + eval_raw[i].post_id + " missing from predictions of model " + bs.id);
            Zeval(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(b)) = it->second;
          }
        } else {
          auto c = spec.train;
          c.seed = bs.seed;
          const auto probs = ensemble::model_base(bs.model, spec.preset, c, joint_inputs)(train_idx, eval_idx);
          for (std::size_t i = 0; i < probs.size(); ++i)
            Zeval(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(b)) = probs[i];
        }
      }
      std::vector<Prediction> eval_preds;
      for (std::size_t i = 0; i < eval_raw.size(); ++i)
        eval_preds.push_back(Prediction::from_probability(
            eval_raw[i].post_id, meta.probability(Zeval.row(static_cast<Eigen::Index>(i)).transpose())));
      exchange::write_predictions(out / "eval_predictions.csv", eval_preds);
      log("stack_eval", {{"posts", std::to_string(eval_preds.size())}});
    }
    return 0;
  }

  if (command == "eval" || command == "report") {
    std::vector<std::string> preds = command == "eval" ? std::vector<std::string>{ev_pred} : rp_preds;
    std::vector<std::string> names = command == "eval" ? std::vector<std::string>{} : rp_names;
    if (command == "eval" && !ev_name.empty()) names.push_back(ev_name);
    if (!names.empty() && names.size() != preds.size()) throw UsageError("give one --name per --pred");
    const fs::path gold_path = command == "eval" ? ev_gold : rp_gold;
    const std::string out = command == "eval" ? ev_out : rp_out;
    const std::string json = command == "eval" ? ev_json : rp_json;
    const auto gold = gold_labels(gold_path);
    std::vector<eval::ReportRow> rows;
    for (std::size_t i = 0; i < preds.size(); ++i) {
      require_exists(preds[i], "prediction file");
      const auto set = exchange::read_predictions(preds[i]);
      std::vector<Prediction> list;
      for (const auto& [id, p] : set.entries) list.push_back(Prediction::from_probability(id, p));
      rows.push_back({names.empty() ? fs::path(preds[i]).stem().string() : names[i],
                      eval::compute_metrics(list, gold)});
    }
    const std::string table = eval::render_report(rows);
    std::cout << table;
    if (!out.empty()) {
      std::ofstream f(out, std::ios::binary | std::ios::trunc);
      if (!f) throw DataError("cannot write " + out);
      f << table;
    }
    if (!json.empty()) write_json(json, eval::report_json(rows));
    return 0;
  }

  throw UsageError("unknown subcommand " + command);
}

}  // namespace anxpipe::cli

int main(int argc, char** argv) {
  try {
    return anxpipe::cli::run(argc, argv);
  } catch (const anxpipe::UsageError& e) {
    std::cerr << "level=error kind=usage msg=" << anxpipe::cli::quoted(e.what()) << '\n';
    return 1;
  } catch (const anxpipe::DataError& e) {
    std::cerr << "level=error kind=data msg=" << anxpipe::cli::quoted(e.what()) << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "level=error kind=data msg=" << anxpipe::cli::quoted(e.what()) << '\n';
    return 2;
  }
}
