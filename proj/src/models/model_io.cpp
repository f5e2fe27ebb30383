#include <map>

#include "anxpipe/error.hpp"
#include "anxpipe/models/models.hpp"

namespace anxpipe::models {

namespace {

nn::NamedTensor vector_tensor(const std::string& name, const std::vector<double>& v) {
  return {name, {v.size()}, v};
}

nn::NamedTensor matrix_tensor(const std::string& name, const Mat<double>& m) {
  nn::NamedTensor t{name, {static_cast<std::uint64_t>(m.rows()), static_cast<std::uint64_t>(m.cols())}, {}};
  t.data.reserve(static_cast<std::size_t>(m.size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) t.data.push_back(m(i, j));
  return t;
}

template <typename Params>
void append_params(std::vector<nn::NamedTensor>& out, const Params& p) {
  p.for_each([&](const std::string& name, const Mat<double>& m) { out.push_back(matrix_tensor(name, m)); });
}

void append_standardizer(std::vector<nn::NamedTensor>& out, const std::optional<feat::Standardizer>& s) {
  if (!s) return;
  out.push_back(vector_tensor("std.mean", std::vector<double>(s->mean.data(), s->mean.data() + s->mean.size())));
  out.push_back(vector_tensor("std.scale", std::vector<double>(s->scale.data(), s->scale.data() + s->scale.size())));
  std::string joined;
  for (std::size_t i = 0; i < s->feature_ids.size(); ++i) {
    if (i) joined += '\n';
    joined += s->feature_ids[i];
  }
  std::vector<double> bytes;
  for (unsigned char c : joined) bytes.push_back(c);
  out.push_back(vector_tensor("std.feature_ids", bytes));
}

using TensorMap = std::map<std::string, const nn::NamedTensor*>;

const nn::NamedTensor& need(const TensorMap& m, const std::string& name) {
  const auto it = m.find(name);
  if (it == m.end()) throw DataError("checkpoint is missing tensor " + name);
  return *it->second;
}

std::size_t as_count(double v, const char* what) {
  if (!(v >= 0) || v > 1e9 || v != static_cast<double>(static_cast<std::size_t>(v)))
    throw DataError(std::string("checkpoint: bad ") + what);
  return static_cast<std::size_t>(v);
}

template <typename Params>
void fill_params(Params& p, const TensorMap& m) {
  p.for_each([&](const std::string& name, Mat<double>& dst) {
    const auto& t = need(m, name);
    if (t.dims.size() != 2 || t.dims[0] != static_cast<std::uint64_t>(dst.rows()) ||
        t.dims[1] != static_cast<std::uint64_t>(dst.cols()))
      throw ShapeError("checkpoint tensor " + name + " has a shape inconsistent with its config (shape mismatch)");
    for (Eigen::Index i = 0; i < dst.rows(); ++i)
      for (Eigen::Index j = 0; j < dst.cols(); ++j) dst(i, j) = t.data[static_cast<std::size_t>(i * dst.cols() + j)];
  });
}

std::optional<feat::Standardizer> read_standardizer(const TensorMap& m) {
  if (!m.count("std.mean")) return std::nullopt;
  const auto& mean = need(m, "std.mean");
  const auto& scale = need(m, "std.scale");
  const auto& ids = need(m, "std.feature_ids");
  if (mean.data.size() != scale.data.size()) throw ShapeError("checkpoint standardizer mean/scale sizes differ");
  feat::Standardizer s;
  s.mean = Eigen::Map<const Eigen::VectorXd>(mean.data.data(), static_cast<Eigen::Index>(mean.data.size()));
  s.scale = Eigen::Map<const Eigen::VectorXd>(scale.data.data(), static_cast<Eigen::Index>(scale.data.size()));
  std::string joined;
  for (double b : ids.data) {
    if (!(b >= 0 && b <= 255)) throw DataError("checkpoint: bad feature id byte");
    joined += static_cast<char>(static_cast<unsigned char>(b));
  }
  std::size_t start = 0;
  if (!joined.empty() || !mean.data.empty()) {
    while (true) {
      const auto nl = joined.find('\n', start);
      s.feature_ids.push_back(joined.substr(start, nl - start));
      if (nl == std::string::npos) break;
      start = nl + 1;
    }
  }
  if (s.feature_ids.size() != mean.data.size()) throw ShapeError("checkpoint standardizer id count differs");
  return s;
}

}  // namespace

std::vector<nn::NamedTensor> to_tensors(const AnyModel& model) {
  std::vector<nn::NamedTensor> out;
  if (const auto* m4 = std::get_if<M4Model>(&model)) {
    const auto& d = m4->dims;
    out.push_back(vector_tensor("meta.kind", {4}));
    out.push_back(vector_tensor("meta.config", {double(d.input_dim), double(d.hidden), double(d.layers),
                                                double(d.fc1), double(d.fc2)}));
    append_params(out, m4->params);
    append_standardizer(out, m4->standardizer);
  } else {
    const auto& m5 = std::get<M5Model>(model);
    const auto& d = m5.dims;
    out.push_back(vector_tensor("meta.kind", {5}));
    out.push_back(vector_tensor("meta.config",
                                {double(d.embed_dim), double(d.input_dim), double(d.hidden_tokens),
                                 double(d.layers_tokens), double(d.hidden_features), double(d.layers_features),
                                 double(d.fc1), double(d.fc2), double(d.fc3)}));
    append_params(out, m5.params);
    append_standardizer(out, m5.standardizer);
  }
  return out;
}

AnyModel from_tensors(const std::vector<nn::NamedTensor>& tensors) {
  TensorMap m;
  for (const auto& t : tensors)
    if (!m.emplace(t.name, &t).second) throw DataError("checkpoint has duplicate tensor " + t.name);
  const auto& kind = need(m, "meta.kind");
  const auto& cfg = need(m, "meta.config");
  if (kind.data.size() != 1) throw DataError("checkpoint: bad meta.kind");
  std::vector<std::size_t> c;
  for (double v : cfg.data) c.push_back(as_count(v, "meta.config entry"));
  if (kind.data[0] == 4) {
    if (c.size() != 5) throw ShapeError("checkpoint: m4 config has the wrong length");
    M4Dims d{Eigen::Index(c[0]), Eigen::Index(c[1]), c[2], Eigen::Index(c[3]), Eigen::Index(c[4])};
    validate(d);
    M4Model model{d, M4Params<double>::zeros(d), std::nullopt};
    fill_params(model.params, m);
    model.standardizer = read_standardizer(m);
    return model;
  }
  if (kind.data[0] == 5) {
    if (c.size() != 9) throw ShapeError("checkpoint: m5 config has the wrong length");
    M5Dims d{Eigen::Index(c[0]), Eigen::Index(c[1]), Eigen::Index(c[2]), c[3], Eigen::Index(c[4]), c[5],
             Eigen::Index(c[6]), Eigen::Index(c[7]), Eigen::Index(c[8])};
    validate(d);
    M5Model model{d, M5Params<double>::zeros(d), std::nullopt};
    fill_params(model.params, m);
    model.standardizer = read_standardizer(m);
    return model;
  }
  throw DataError("checkpoint: unknown model kind");
}

void save_model(const AnyModel& model, const std::filesystem::path& path) {
  nn::write_checkpoint(path, to_tensors(model));
}

AnyModel load_model(const std::filesystem::path& path) { return from_tensors(nn::read_checkpoint(path)); }

M4Model load_m4(const std::filesystem::path& path) {
  auto any = load_model(path);
  if (!std::holds_alternative<M4Model>(any))
    throw ShapeError("shape mismatch: " + path.string() + " holds an m5 model, expected m4");
  return std::get<M4Model>(std::move(any));
}

M5Model load_m5(const std::filesystem::path& path) {
  auto any = load_model(path);
  if (!std::holds_alternative<M5Model>(any))
    throw ShapeError("shape mismatch: " + path.string() + " holds an m4 model, expected m5");
  return std::get<M5Model>(std::move(any));
}

}  // namespace anxpipe::models
