#include "scone/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <tuple>

#include "json.hpp"
#include "scone/baselines.hpp"
#include "scone/error.hpp"
#include "scone/model.hpp"

#ifndef SCONE_VERSION_STRING
#define SCONE_VERSION_STRING "unknown"
#endif

namespace scone {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

const char* library_version() { return SCONE_VERSION_STRING; }

const char* to_string(DatasetKind k) {
  switch (k) {
    case DatasetKind::synthetic: return "synthetic";
    case DatasetKind::grid_map: return "grid-map";
    case DatasetKind::obstacle_grid: return "obstacle-grid";
    case DatasetKind::file: return "file";
  }
  return "?";
}

std::string DatasetSpec::label() const {
  switch (kind) {
    case DatasetKind::synthetic: return "synthetic";
    case DatasetKind::grid_map: return "grid:" + path.stem().string();
    case DatasetKind::obstacle_grid:
      return "obstacle-grid:" + std::to_string(rows) + "x" + std::to_string(cols) + "/" + std::to_string(blocks);
    case DatasetKind::file: return "file:" + path.stem().string();
  }
  return "?";
}

namespace {

constexpr std::array<std::pair<Method, std::string_view>, 10> kMethodNames{{
    {Method::scone_tanh, "scone-tanh"},
    {Method::scone_relu, "scone-relu"},
    {Method::scone_sigmoid, "scone-sigmoid"},
    {Method::scone_identity, "scone-identity"},
    {Method::scone_no_triangles, "scone-no-triangles"},
    {Method::markov, "markov"},
    {Method::hodge_kernel, "hodge-kernel"},
    {Method::boundary_kernel, "boundary-kernel"},
    {Method::scnn, "scnn"},
    {Method::s2ccnn, "s2ccnn"},
}};

}  // namespace

const char* to_string(Method m) {
  for (const auto& [k, name] : kMethodNames)
    if (k == m) return name.data();
  return "?";
}

Method method_from_string(std::string_view name) {
  for (const auto& [k, n] : kMethodNames)
    if (n == name) return k;
  throw InvalidInput("unknown method '" + std::string(name) + "'");
}

bool is_trained(Method m) {
  return m != Method::markov && m != Method::hodge_kernel && m != Method::boundary_kernel;
}

const TrainConfig& ExperimentConfig::train_for(Method m) const {
  const auto it = method_train.find(m);
  return it == method_train.end() ? train : it->second;
}

void ExperimentConfig::validate() const {
  if (methods.empty()) throw ConfigError("methods", "at least one method is required");
  const auto& d = dataset;
  switch (d.kind) {
    case DatasetKind::synthetic:
      try {
        d.synth.validate();
      } catch (const InvalidInput& e) {
        throw ConfigError("dataset", e.what());
      }
      break;
    case DatasetKind::grid_map:
      if (!std::filesystem::is_regular_file(d.path)) throw ConfigError("dataset.map", "file not found: " + d.path.string());
      break;
    case DatasetKind::file:
      if (!std::filesystem::is_regular_file(d.path)) throw ConfigError("dataset.path", "file not found: " + d.path.string());
      break;
    case DatasetKind::obstacle_grid:
      if (d.rows < 1) throw ConfigError("dataset.rows", "must be positive");
      if (d.cols < 1) throw ConfigError("dataset.cols", "must be positive");
      if (d.blocks < 0) throw ConfigError("dataset.blocks", "must be nonnegative");
      if (d.block_size < 1) throw ConfigError("dataset.block_size", "must be positive");
      break;
  }
  if (d.kind == DatasetKind::grid_map || d.kind == DatasetKind::obstacle_grid) {
    if (d.trajectory_count < 2) throw ConfigError("dataset.trajectories", "must be at least 2");
    if (!(d.train_fraction > 0.0 && d.train_fraction < 1.0))
      throw ConfigError("dataset.train_fraction", "must lie strictly between 0 and 1");
    for (auto m : manipulations)
      if (m == Manipulation::transfer) throw ConfigError("manipulation", "transfer needs waypoint regions");
  }
  if (model.layers < 1) throw ConfigError("model.layers", "must be positive");
  if (model.width < 1) throw ConfigError("model.width", "must be positive");
  if (model.degree < 0) throw ConfigError("model.degree", "must be nonnegative");
  auto check_train = [](const TrainConfig& t, const std::string& path) {
    try {
      t.validate();
    } catch (const InvalidInput& e) {
      throw ConfigError(path, e.what());
    }
  };
  check_train(train, "train");
  for (const auto& [m, t] : method_train) check_train(t, std::string("method_train.") + to_string(m));
}

namespace {

std::string join(const std::string& base, std::string_view key) {
  return base.empty() ? std::string(key) : base + "." + std::string(key);
}

void check_keys(const json& obj, const std::string& path, std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) throw ConfigError(path.empty() ? "(root)" : path, "expected an object");
  for (const auto& item : obj.items())
    if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end())
      throw ConfigError(join(path, item.key()), "unknown key");
}

const json* find(const json& obj, std::string_view key) {
  const auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

double get_number(const json& obj, const std::string& path, std::string_view key, double fallback) {
  const json* v = find(obj, key);
  if (!v) return fallback;
  if (!v->is_number()) throw ConfigError(join(path, key), "expected a number");
  return v->get<double>();
}

int get_int(const json& obj, const std::string& path, std::string_view key, int fallback) {
  const json* v = find(obj, key);
  if (!v) return fallback;
  if (!v->is_number_integer()) throw ConfigError(join(path, key), "expected an integer");
  const auto x = v->get<long long>();
  if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max())
    throw ConfigError(join(path, key), "integer out of range");
  return static_cast<int>(x);
}

std::uint64_t get_u64(const json& obj, const std::string& path, std::string_view key, std::uint64_t fallback) {
  const json* v = find(obj, key);
  if (!v) return fallback;
  if (!v->is_number_unsigned()) throw ConfigError(join(path, key), "expected a nonnegative integer");
  return v->get<std::uint64_t>();
}

std::string get_string(const json& obj, const std::string& path, std::string_view key, std::string fallback) {
  const json* v = find(obj, key);
  if (!v) return fallback;
  if (!v->is_string()) throw ConfigError(join(path, key), "expected a string");
  return v->get<std::string>();
}

Box get_box(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 4) throw ConfigError(path, "expected [x0, x1, y0, y1]");
  std::array<double, 4> b{};
  for (std::size_t i = 0; i < 4; ++i) {
    if (!v[i].is_number()) throw ConfigError(path + "[" + std::to_string(i) + "]", "expected a number");
    b[i] = v[i].get<double>();
  }
  return Box{b[0], b[1], b[2], b[3]};
}

template <std::size_t N>
std::array<Box, N> get_boxes(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != N) throw ConfigError(path, "expected " + std::to_string(N) + " boxes");
  std::array<Box, N> out;
  for (std::size_t i = 0; i < N; ++i) out[i] = get_box(v[i], path + "[" + std::to_string(i) + "]");
  return out;
}

DatasetSpec parse_dataset(const json& j, const std::string& path, const std::filesystem::path& base_dir) {
  DatasetSpec d;
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  const std::string kind = get_string(j, path, "kind", "synthetic");
  auto resolve = [&](const std::string& p) {
    std::filesystem::path f(p);
    return f.is_relative() && !base_dir.empty() ? base_dir / f : f;
  };
  if (kind == "synthetic") {
    check_keys(j, path, {"kind", "points", "trajectories", "train_fraction", "holes", "start", "middle", "end",
                         "max_attempts"});
    auto& s = d.synth;
    s.point_count = get_int(j, path, "points", s.point_count);
    s.trajectory_count = get_int(j, path, "trajectories", s.trajectory_count);
    s.train_fraction = get_number(j, path, "train_fraction", s.train_fraction);
    s.max_attempts = get_int(j, path, "max_attempts", s.max_attempts);
    if (const json* v = find(j, "holes")) s.holes = get_boxes<2>(*v, join(path, "holes"));
    if (const json* v = find(j, "start")) s.start = get_box(*v, join(path, "start"));
    if (const json* v = find(j, "middle")) s.middle = get_boxes<3>(*v, join(path, "middle"));
    if (const json* v = find(j, "end")) s.end = get_box(*v, join(path, "end"));
  } else if (kind == "grid-map") {
    check_keys(j, path, {"kind", "map", "trajectories", "train_fraction"});
    d.kind = DatasetKind::grid_map;
    const std::string map = get_string(j, path, "map", "");
    if (map.empty()) throw ConfigError(join(path, "map"), "a map file is required");
    d.path = resolve(map);
  } else if (kind == "obstacle-grid") {
    check_keys(j, path, {"kind", "rows", "cols", "blocks", "block_size", "trajectories", "train_fraction"});
    d.kind = DatasetKind::obstacle_grid;
    d.rows = get_int(j, path, "rows", d.rows);
    d.cols = get_int(j, path, "cols", d.cols);
    d.blocks = get_int(j, path, "blocks", d.blocks);
    d.block_size = get_int(j, path, "block_size", d.block_size);
  } else if (kind == "file") {
    check_keys(j, path, {"kind", "path"});
    d.kind = DatasetKind::file;
    const std::string p = get_string(j, path, "path", "");
    if (p.empty()) throw ConfigError(join(path, "path"), "a dataset file is required");
    d.path = resolve(p);
  } else {
    throw ConfigError(join(path, "kind"), "unknown dataset kind '" + kind + "'");
  }
  if (d.kind == DatasetKind::grid_map || d.kind == DatasetKind::obstacle_grid) {
    d.trajectory_count = get_int(j, path, "trajectories", d.trajectory_count);
    d.train_fraction = get_number(j, path, "train_fraction", d.train_fraction);
  }
  return d;
}

TrainConfig parse_train(const json& j, const std::string& path, TrainConfig t) {
  check_keys(j, path,
             {"learning_rate", "epochs", "weight_decay", "beta1", "beta2", "epsilon", "batch_size", "eval_every"});
  t.learning_rate = get_number(j, path, "learning_rate", t.learning_rate);
  t.epochs = get_int(j, path, "epochs", t.epochs);
  t.weight_decay = get_number(j, path, "weight_decay", t.weight_decay);
  t.beta1 = get_number(j, path, "beta1", t.beta1);
  t.beta2 = get_number(j, path, "beta2", t.beta2);
  t.epsilon = get_number(j, path, "epsilon", t.epsilon);
  t.batch_size = get_int(j, path, "batch_size", t.batch_size);
  t.eval_every = get_int(j, path, "eval_every", t.eval_every);
  return t;
}

std::vector<Manipulation> parse_manipulations(const json& v) {
  std::vector<std::string> names;
  if (v.is_string()) {
    std::stringstream ss(v.get<std::string>());
    for (std::string part; std::getline(ss, part, '+');) names.push_back(part);
  } else if (v.is_array()) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_string()) throw ConfigError("manipulation[" + std::to_string(i) + "]", "expected a string");
      names.push_back(v[i].get<std::string>());
    }
  } else {
    throw ConfigError("manipulation", "expected a string or an array of strings");
  }
  std::vector<Manipulation> out;
  for (const auto& n : names) {
    Manipulation m;
    try {
      m = manipulation_from_string(n);
    } catch (const InvalidInput& e) {
      throw ConfigError("manipulation", e.what());
    }
    if (m != Manipulation::standard) out.push_back(m);
  }
  return out;
}

ojson box_json(const Box& b) { return ojson::array({b.x0, b.x1, b.y0, b.y1}); }

ojson train_json(const TrainConfig& t) {
  ojson j;
  j["learning_rate"] = t.learning_rate;
  j["epochs"] = t.epochs;
  j["weight_decay"] = t.weight_decay;
  j["beta1"] = t.beta1;
  j["beta2"] = t.beta2;
  j["epsilon"] = t.epsilon;
  j["batch_size"] = t.batch_size;
  j["eval_every"] = t.eval_every;
  return j;
}

ojson config_json(const ExperimentConfig& cfg) {
  ojson j;
  j["name"] = cfg.name;
  j["seed"] = cfg.seed;
  ojson d;
  const auto& ds = cfg.dataset;
  d["kind"] = to_string(ds.kind);
  switch (ds.kind) {
    case DatasetKind::synthetic: {
      const auto& s = ds.synth;
      d["points"] = s.point_count;
      d["trajectories"] = s.trajectory_count;
      d["train_fraction"] = s.train_fraction;
      d["holes"] = ojson::array({box_json(s.holes[0]), box_json(s.holes[1])});
      d["start"] = box_json(s.start);
      d["middle"] = ojson::array({box_json(s.middle[0]), box_json(s.middle[1]), box_json(s.middle[2])});
      d["end"] = box_json(s.end);
      d["max_attempts"] = s.max_attempts;
      break;
    }
    case DatasetKind::grid_map:
      d["map"] = ds.path.generic_string();
      break;
    case DatasetKind::obstacle_grid:
      d["rows"] = ds.rows;
      d["cols"] = ds.cols;
      d["blocks"] = ds.blocks;
      d["block_size"] = ds.block_size;
      break;
    case DatasetKind::file:
      d["path"] = ds.path.generic_string();
      break;
  }
  if (ds.kind == DatasetKind::grid_map || ds.kind == DatasetKind::obstacle_grid) {
    d["trajectories"] = ds.trajectory_count;
    d["train_fraction"] = ds.train_fraction;
  }
  j["dataset"] = std::move(d);
  ojson manip = ojson::array();
  for (auto m : cfg.manipulations) manip.push_back(to_string(m));
  j["manipulation"] = std::move(manip);
  ojson methods = ojson::array();
  for (auto m : cfg.methods) methods.push_back(to_string(m));
  j["methods"] = std::move(methods);
  j["model"] = {{"layers", cfg.model.layers},
                {"width", cfg.model.width},
                {"degree", cfg.model.degree},
                {"variant_activation", to_string(cfg.model.variant_activation)}};
  j["train"] = train_json(cfg.train);
  ojson overrides = ojson::object();
  for (const auto& [m, t] : cfg.method_train) overrides[to_string(m)] = train_json(t);
  j["method_train"] = std::move(overrides);
  j["output"] = cfg.output.generic_string();
  return j;
}

}  // namespace

ExperimentConfig parse_experiment_config(std::string_view text, const std::filesystem::path& base_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("(root)", std::string("invalid JSON: ") + e.what());
  }
  check_keys(j, "",
             {"name", "seed", "dataset", "manipulation", "methods", "model", "train", "method_train", "output"});
  ExperimentConfig cfg;
  cfg.name = get_string(j, "", "name", cfg.name);
  cfg.seed = get_u64(j, "", "seed", cfg.seed);
  if (const json* v = find(j, "dataset")) cfg.dataset = parse_dataset(*v, "dataset", base_dir);
  if (const json* v = find(j, "manipulation")) cfg.manipulations = parse_manipulations(*v);
  const json* methods = find(j, "methods");
  if (!methods) throw ConfigError("methods", "at least one method is required");
  if (!methods->is_array()) throw ConfigError("methods", "expected an array of method names");
  for (std::size_t i = 0; i < methods->size(); ++i) {
    const std::string path = "methods[" + std::to_string(i) + "]";
    if (!(*methods)[i].is_string()) throw ConfigError(path, "expected a string");
    try {
      cfg.methods.push_back(method_from_string((*methods)[i].get<std::string>()));
    } catch (const InvalidInput& e) {
      throw ConfigError(path, e.what());
    }
  }
  if (const json* v = find(j, "model")) {
    check_keys(*v, "model", {"layers", "width", "degree", "variant_activation"});
    cfg.model.layers = get_int(*v, "model", "layers", cfg.model.layers);
    cfg.model.width = get_int(*v, "model", "width", cfg.model.width);
    cfg.model.degree = get_int(*v, "model", "degree", cfg.model.degree);
    const std::string act = get_string(*v, "model", "variant_activation", to_string(cfg.model.variant_activation));
    try {
      cfg.model.variant_activation = activation_from_string(act);
    } catch (const InvalidInput& e) {
      throw ConfigError("model.variant_activation", e.what());
    }
  }
  cfg.train.eval_every = 0;
  if (const json* v = find(j, "train")) cfg.train = parse_train(*v, "train", cfg.train);
  if (const json* v = find(j, "method_train")) {
    if (!v->is_object()) throw ConfigError("method_train", "expected an object");
    for (const auto& item : v->items()) {
      const std::string path = "method_train." + item.key();
      Method m;
      try {
        m = method_from_string(item.key());
      } catch (const InvalidInput& e) {
        throw ConfigError(path, e.what());
      }
      cfg.method_train[m] = parse_train(item.value(), path, cfg.train);
    }
  }
  const std::string out = get_string(j, "", "output", "");
  if (!out.empty()) {
    std::filesystem::path p(out);
    cfg.output = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("(file)", "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_experiment_config(ss.str(), path.parent_path());
}

std::string format_experiment_config(const ExperimentConfig& cfg) { return config_json(cfg).dump(2); }

DatasetSplit build_dataset(const ExperimentConfig& cfg) {
  const auto& d = cfg.dataset;
  DatasetSplit split;
  switch (d.kind) {
    case DatasetKind::synthetic: {
      SynthConfig s = d.synth;
      s.seed = cfg.seed;
      split = generate_synthetic(s);
      break;
    }
    case DatasetKind::grid_map:
      split = generate_grid_dataset(load_map(d.path), d.trajectory_count, cfg.seed, d.train_fraction);
      break;
    case DatasetKind::obstacle_grid:
      split = generate_grid_dataset(obstacle_grid(d.rows, d.cols, d.blocks, d.block_size, cfg.seed), d.trajectory_count,
                                    cfg.seed, d.train_fraction);
      break;
    case DatasetKind::file:
      split = load_split(d.path);
      break;
  }
  for (auto m : cfg.manipulations) split = manipulate(split, m);
  return split;
}

namespace {

Activation scone_activation(Method m) {
  switch (m) {
    case Method::scone_relu: return Activation::relu;
    case Method::scone_sigmoid: return Activation::sigmoid;
    case Method::scone_identity: return Activation::identity;
    default: return Activation::tanh;
  }
}

void fill_training(MetricsRow& row, const TrainResult& r) {
  for (const auto& h : r.history) row.loss_curve.push_back(h.loss);
  row.train_accuracy = r.history.back().train_accuracy;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write " + path.string());
  out << text;
  if (!out) throw InvalidInput("failed writing " + path.string());
}

std::filesystem::path with_suffix(const std::filesystem::path& p, const char* suffix) {
  return p.parent_path() / (p.filename().string() + suffix);
}

}  // namespace

MetricsTable run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const DatasetSplit split = build_dataset(cfg);
  MetricsTable table;
  table.library_version = library_version();
  table.config = format_experiment_config(cfg);

  for (const Method m : cfg.methods) {
    const auto start = std::chrono::steady_clock::now();
    MetricsRow row;
    row.dataset = cfg.dataset.label();
    row.manipulation = split.manipulation_tag();
    row.method = to_string(m);
    row.seed = cfg.seed;
    TrainConfig tcfg = cfg.train_for(m);
    tcfg.seed = cfg.seed;
    switch (m) {
      case Method::scone_tanh:
      case Method::scone_relu:
      case Method::scone_sigmoid:
      case Method::scone_identity:
      case Method::scone_no_triangles: {
        const OrientedComplex2 c = m == Method::scone_no_triangles ? split.complex.one_skeleton() : split.complex;
        const auto model = init_model(cfg.seed, cfg.model.layers, cfg.model.width, scone_activation(m));
        const auto r = train(model, c, split.train, split.test, tcfg);
        fill_training(row, r);
        row.accuracy = evaluate(r.model, c, split.test);
        break;
      }
      case Method::markov:
        row.accuracy = baseline_accuracy(BaselineMethod::markov, split.complex, split.train, split.test);
        break;
      case Method::hodge_kernel:
        row.accuracy = baseline_accuracy(BaselineMethod::hodge_kernel, split.complex, split.train, split.test);
        break;
      case Method::boundary_kernel:
        row.accuracy = baseline_accuracy(BaselineMethod::boundary_kernel, split.complex, split.train, split.test);
        break;
      case Method::scnn:
      case Method::s2ccnn: {
        const VariantConfig v{cfg.model.layers, cfg.model.width, cfg.model.degree, cfg.model.variant_activation,
                              cfg.seed};
        const auto r = variant_train(m == Method::scnn ? Family::scnn : Family::s2ccnn, v, split, tcfg);
        fill_training(row, r);
        row.accuracy = variant_evaluate(r.model, split.complex, split.test);
        break;
      }
    }
    row.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    table.rows.push_back(std::move(row));
  }

  if (!cfg.output.empty()) {
    write_text(with_suffix(cfg.output, ".json"), format_metrics_json(table));
    write_text(with_suffix(cfg.output, ".csv"), format_metrics_csv(table));
  }
  return table;
}

std::string format_metrics_json(const MetricsTable& t) {
  ojson j;
  j["schema_version"] = t.schema_version;
  j["library_version"] = t.library_version;
  j["config"] = t.config.empty() ? ojson::object() : ojson::parse(t.config);
  ojson rows = ojson::array();
  for (const auto& r : t.rows) {
    ojson row;
    row["dataset"] = r.dataset;
    row["manipulation"] = r.manipulation;
    row["method"] = r.method;
    row["seed"] = r.seed;
    row["accuracy"] = r.accuracy;
    row["train_accuracy"] = r.train_accuracy;
    row["loss_curve"] = r.loss_curve;
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  return j.dump(2) + "\n";
}

std::string format_metrics_csv(const MetricsTable& t) {
  std::ostringstream out;
  out << "dataset,manipulation,method,seed,accuracy,train_accuracy,final_loss,wall_seconds\n";
  char buf[64];
  auto num = [&](double x) {
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return std::string(buf);
  };
  for (const auto& r : t.rows) {
    out << r.dataset << ',' << r.manipulation << ',' << r.method << ',' << r.seed << ',' << num(r.accuracy) << ','
        << (r.train_accuracy < 0 ? "" : num(r.train_accuracy)) << ','
        << (r.loss_curve.empty() ? "" : num(r.loss_curve.back())) << ',' << num(r.wall_seconds) << '\n';
  }
  return out.str();
}

MetricsTable parse_metrics_json(std::string_view text) {
  ojson j;
  try {
    j = ojson::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidInput(std::string("metrics file is not valid JSON: ") + e.what());
  }
  try {
    MetricsTable t;
    t.schema_version = j.at("schema_version").get<int>();
    t.library_version = j.value("library_version", "");
    if (j.contains("config")) t.config = j.at("config").dump(2);
    for (const auto& r : j.at("rows")) {
      MetricsRow row;
      row.dataset = r.at("dataset").get<std::string>();
      row.manipulation = r.at("manipulation").get<std::string>();
      row.method = r.at("method").get<std::string>();
      row.seed = r.value("seed", std::uint64_t{0});
      row.accuracy = r.at("accuracy").get<double>();
      row.train_accuracy = r.value("train_accuracy", -1.0);
      row.loss_curve = r.value("loss_curve", std::vector<double>{});
      t.rows.push_back(std::move(row));
    }
    return t;
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("malformed metrics file: ") + e.what());
  }
}

MetricsTable load_metrics(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_metrics_json(ss.str());
}

std::vector<ReportRow> aggregate(std::span<const MetricsTable> tables) {
  if (tables.empty()) throw InvalidInput("report needs at least one metrics table");
  for (const auto& t : tables)
    if (t.schema_version != tables.front().schema_version)
      throw InvalidInput("metrics files use different schema versions (" + std::to_string(tables.front().schema_version) +
                         " and " + std::to_string(t.schema_version) + ")");
  if (tables.front().schema_version != kMetricsSchemaVersion)
    throw InvalidInput("unsupported metrics schema version " + std::to_string(tables.front().schema_version));

  std::map<std::tuple<std::string, std::string, std::string>, std::vector<double>> groups;
  for (const auto& t : tables)
    for (const auto& r : t.rows) groups[{r.dataset, r.manipulation, r.method}].push_back(r.accuracy);
  std::vector<ReportRow> out;
  for (const auto& [key, acc] : groups) {
    ReportRow row{std::get<0>(key), std::get<1>(key), std::get<2>(key), static_cast<int>(acc.size()), 0.0, acc.front(),
                  acc.front()};
    for (double a : acc) {
      row.mean += a;
      row.min = std::min(row.min, a);
      row.max = std::max(row.max, a);
    }
    row.mean /= static_cast<double>(acc.size());
    out.push_back(std::move(row));
  }
  return out;
}

std::string format_report(std::span<const ReportRow> rows) {
  std::size_t wd = 7, wm = 12, wt = 6;
  for (const auto& r : rows) {
    wd = std::max(wd, r.dataset.size());
    wm = std::max(wm, r.manipulation.size());
    wt = std::max(wt, r.method.size());
  }
  std::ostringstream out;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-*s  %-*s  %-*s  %4s  %6s  %6s  %6s  %6s\n", static_cast<int>(wd), "dataset",
                static_cast<int>(wm), "manipulation", static_cast<int>(wt), "method", "runs", "mean", "+-", "min", "max");
  out << buf;
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%-*s  %-*s  %-*s  %4d  %6.3f  %6.3f  %6.3f  %6.3f\n", static_cast<int>(wd),
                  r.dataset.c_str(), static_cast<int>(wm), r.manipulation.c_str(), static_cast<int>(wt),
                  r.method.c_str(), r.runs, r.mean, 0.5 * (r.max - r.min), r.min, r.max);
    out << buf;
  }
  return out.str();
}

namespace {

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

}  // namespace

std::string report_svg(std::span<const ReportRow> rows) {
  constexpr int label_w = 320, bar_w = 400, row_h = 22, top = 30;
  const int height = top + row_h * static_cast<int>(rows.size()) + 30;
  const int width = label_w + bar_w + 80;
  std::ostringstream out;
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" height=\"%d\" font-family=\"sans-serif\" "
                "font-size=\"12\">\n",
                width, height);
  out << buf;
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (int tick = 0; tick <= 10; tick += 2) {
    const double x = label_w + bar_w * tick / 10.0;
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%.1f\" y1=\"%d\" x2=\"%.1f\" y2=\"%d\" stroke=\"#ddd\"/>"
                  "<text x=\"%.1f\" y=\"%d\" text-anchor=\"middle\">%.1f</text>\n",
                  x, top - 5, x, height - 25, x, height - 10, tick / 10.0);
    out << buf;
  }
  int y = top;
  for (const auto& r : rows) {
    const std::string label = r.dataset + " / " + r.manipulation + " / " + r.method;
    std::snprintf(buf, sizeof buf, "<text x=\"%d\" y=\"%d\" text-anchor=\"end\">%s</text>\n", label_w - 8, y + 15,
                  xml_escape(label).c_str());
    out << buf;
    std::snprintf(buf, sizeof buf, "<rect x=\"%d\" y=\"%d\" width=\"%.1f\" height=\"%d\" fill=\"#4878a8\"/>\n", label_w,
                  y + 4, bar_w * r.mean, row_h - 8);
    out << buf;
    if (r.runs > 1) {
      std::snprintf(buf, sizeof buf,
                    "<line x1=\"%.1f\" y1=\"%d\" x2=\"%.1f\" y2=\"%d\" stroke=\"black\" stroke-width=\"1.5\"/>\n",
                    label_w + bar_w * r.min, y + row_h / 2, label_w + bar_w * r.max, y + row_h / 2);
      out << buf;
    }
    std::snprintf(buf, sizeof buf, "<text x=\"%.1f\" y=\"%d\">%.3f</text>\n", label_w + bar_w * r.max + 6, y + 15,
                  r.mean);
    out << buf;
    y += row_h;
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace scone
