#include <fstream>

#include "anxpipe/ensemble/stacking.hpp"
#include "anxpipe/error.hpp"

namespace anxpipe::ensemble {

namespace {

std::filesystem::path resolve(const std::filesystem::path& base_dir, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() ? path : base_dir / path;
}

models::TrainConfig parse_train(const nlohmann::json& j) {
  models::TrainConfig c;
  if (j.is_null()) return c;
  for (const auto& [k, v] : j.items()) {
    if (k == "epochs") c.epochs = v.get<int>();
    else if (k == "lr") c.lr = v.get<double>();
    else if (k == "clip_norm") c.clip_norm = v.get<double>();
    else if (k == "early_stop_patience") c.early_stop_patience = v.get<int>();
    else if (k == "shuffle") c.shuffle = v.get<bool>();
    else throw DataError("unknown train key " + k);
  }
  c.validate();
  return c;
}

}  // namespace

EnsembleSpec parse_ensemble_spec(const nlohmann::json& j, const std::filesystem::path& base_dir) {
  EnsembleSpec spec;
  try {
    if (!j.is_object()) throw DataError("ensemble spec must be a JSON object");
    for (const auto& [k, v] : j.items()) {
      if (k != "bases" && k != "meta" && k != "hyper" && k != "folds" && k != "seed" && k != "preset" && k != "train")
        throw DataError("unknown ensemble spec key " + k);
    }
    if (j.contains("meta")) spec.meta = learn::parse_meta_kind(j["meta"].get<std::string>());
    if (j.contains("hyper")) spec.hyper = learn::parse_meta_hyper(j["hyper"]);
    if (j.contains("folds")) spec.folds = j["folds"].get<int>();
    if (j.contains("seed")) spec.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("preset")) spec.preset = models::parse_preset(j["preset"].get<std::string>());
    if (j.contains("train")) spec.train = parse_train(j["train"]);
    if (spec.folds < 2) throw DataError("folds must be >= 2");
    const auto& bases = j.at("bases");
    if (!bases.is_array() || bases.empty()) throw DataError("bases must be a nonempty array");
    for (const auto& b : bases) {
      BaseSpec s;
      const auto type = b.at("type").get<std::string>();
      if (type == "file") {
        s.type = BaseSpec::Type::file;
        s.path = resolve(base_dir, b.at("path").get<std::string>());
        if (b.contains("eval_path")) s.eval_path = resolve(base_dir, b["eval_path"].get<std::string>());
        s.id = b.value("id", s.path.stem().string());
      } else if (type == "train") {
        s.type = BaseSpec::Type::train;
        s.model = models::parse_model_kind(b.at("model").get<std::string>());
        s.seed = b.value("seed", spec.seed);
        s.id = b.value("id", models::to_string(s.model) + "-seed" + std::to_string(s.seed));
      } else {
        throw DataError("base type must be \"file\" or \"train\", got \"" + type + "\"");
      }
      for (const auto& other : spec.bases)
        if (other.id == s.id) throw DataError("duplicate base id " + s.id);
      spec.bases.push_back(std::move(s));
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("bad ensemble spec: ") + e.what());
  }
  return spec;
}

EnsembleSpec read_ensemble_spec(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path.string() + ": " + e.what());
  }
  return parse_ensemble_spec(j, path.parent_path());
}

}  // namespace anxpipe::ensemble
