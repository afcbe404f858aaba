// Command-line front end for the scone library.

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "json.hpp"
#include "scone/admissibility.hpp"
#include "scone/baselines.hpp"
#include "scone/complex_io.hpp"
#include "scone/datasets.hpp"
#include "scone/error.hpp"
#include "scone/experiment.hpp"
#include "scone/hodge.hpp"
#include "scone/model.hpp"
#include "scone/train.hpp"

namespace {

using namespace scone;
using ojson = nlohmann::ordered_json;

enum Exit { kOk = 0, kFailure = 1, kConfig = 2, kNumeric = 3 };

std::optional<std::uint64_t> env_seed() {
  const char* s = std::getenv("SCONE_SEED");
  if (!s || !*s) return std::nullopt;
  try {
    std::size_t pos = 0;
    const auto v = std::stoull(s, &pos);
    if (pos != std::string(s).size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("SCONE_SEED", std::string("not an unsigned integer: '") + s + "'");
  }
}

std::uint64_t resolve_seed(std::uint64_t flag) { return env_seed().value_or(flag); }

void write_file(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write " + path);
  out << text;
}

std::string round_trip(double x) { return ojson(x).dump(); }

struct GenSynthetic {
  std::uint64_t seed = 1;
  int points = 400;
  int trajectories = 1000;
  std::vector<std::string> manipulations;
  std::string out;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("gen-synthetic", "Generate the two-hole synthetic trajectory dataset");
    c->add_option("--seed", seed, "RNG seed");
    c->add_option("--points", points, "Number of random points");
    c->add_option("--trajectories", trajectories, "Number of walks");
    c->add_option("--manipulation", manipulations, "reversed, transfer or manual_orientation (repeatable)");
    c->add_option("--out", out, "Dataset file")->required();
    c->callback([this] { run(); });
  }
  void run() {
    SynthConfig cfg;
    cfg.seed = resolve_seed(seed);
    cfg.point_count = points;
    cfg.trajectory_count = trajectories;
    auto split = generate_synthetic(cfg);
    for (const auto& m : manipulations) split = manipulate(split, manipulation_from_string(m));
    save_split(split, out);
  }
};

struct GenGrid {
  std::string map;
  int rows = 30, cols = 30, blocks = 3, block_size = 5;
  int trajectories = 1000;
  std::uint64_t seed = 1;
  std::vector<std::string> manipulations;
  std::string out;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("gen-grid", "Shortest paths on a grid map's cubical complex");
    c->add_option("--map", map, "Map file; an obstacle grid is generated when omitted");
    c->add_option("--rows", rows, "Generated grid rows");
    c->add_option("--cols", cols, "Generated grid columns");
    c->add_option("--blocks", blocks, "Generated square obstacles");
    c->add_option("--block-size", block_size, "Side of each obstacle");
    c->add_option("--trajectories", trajectories, "Number of walks");
    c->add_option("--seed", seed, "RNG seed");
    c->add_option("--manipulation", manipulations, "reversed or manual_orientation (repeatable)");
    c->add_option("--out", out, "Dataset file")->required();
    c->callback([this] { run(); });
  }
  void run() {
    const auto s = resolve_seed(seed);
    const GridMap grid = map.empty() ? obstacle_grid(rows, cols, blocks, block_size, s) : load_map(map);
    auto split = generate_grid_dataset(grid, trajectories, s);
    for (const auto& m : manipulations) split = manipulate(split, manipulation_from_string(m));
    save_split(split, out);
  }
};

struct Train {
  std::string data, out, activation = "tanh";
  double lr = 0.001;
  int epochs = 500, layers = 3, width = 16, batch_size = 0;
  double weight_decay = 5e-5;
  std::uint64_t seed = 1;
  bool no_triangles = false;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("train", "Train a SCoNe model");
    c->add_option("--data", data, "Dataset file")->required()->check(CLI::ExistingFile);
    c->add_option("--activation", activation, "tanh, relu, sigmoid or identity");
    c->add_option("--lr", lr, "Adam learning rate");
    c->add_option("--epochs", epochs, "Training epochs");
    c->add_option("--layers", layers, "Hidden layers");
    c->add_option("--width", width, "Hidden width");
    c->add_option("--batch-size", batch_size, "Minibatch size, 0 for full batch");
    c->add_option("--weight-decay", weight_decay, "L2 penalty");
    c->add_option("--seed", seed, "Initialization and shuffling seed");
    c->add_flag("--no-triangles", no_triangles, "Train on the 1-skeleton");
    c->add_option("--out", out, "Model file")->required();
    c->callback([this] { run(); });
  }
  void run() {
    const auto split = load_split(data);
    const auto s = resolve_seed(seed);
    TrainConfig cfg;
    cfg.learning_rate = lr;
    cfg.epochs = epochs;
    cfg.weight_decay = weight_decay;
    cfg.batch_size = batch_size;
    cfg.seed = s;
    cfg.eval_every = 0;
    const OrientedComplex2 c = no_triangles ? split.complex.one_skeleton() : split.complex;
    const auto r = train(init_model(s, layers, width, activation_from_string(activation)), c, split.train, split.test, cfg);
    save_network(r.model, out);
    const auto& last = r.history.back();
    std::cout << "loss " << last.loss << " train_accuracy " << last.train_accuracy;
    if (!split.test.empty()) std::cout << " test_accuracy " << evaluate(r.model, c, split.test);
    std::cout << '\n';
  }
};

struct Eval {
  std::string model, data;
  bool no_triangles = false;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("eval", "Test accuracy of a saved model");
    c->add_option("--model", model, "Model file")->required()->check(CLI::ExistingFile);
    c->add_option("--data", data, "Dataset file")->required()->check(CLI::ExistingFile);
    c->add_flag("--no-triangles", no_triangles, "Evaluate on the 1-skeleton");
    c->callback([this] { run(); });
  }
  void run() {
    const auto net = load_network(model);
    const auto split = load_split(data);
    const OrientedComplex2 c = no_triangles ? split.complex.one_skeleton() : split.complex;
    ojson j;
    j["manipulation"] = split.manipulation_tag();
    j["test_size"] = split.test.size();
    j["accuracy"] = evaluate(net, c, split.test);
    std::cout << j.dump(2) << '\n';
  }
};

struct Baseline {
  std::string method, data, out;
  int epochs = 500, layers = 3, width = 16, degree = 2;
  double lr = 0.001;
  std::string activation = "relu";
  std::uint64_t seed = 1;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("baseline", "Fit and score a baseline predictor");
    c->add_option("--method", method, "markov, hodge-kernel, boundary-kernel, scnn or s2ccnn")->required();
    c->add_option("--data", data, "Dataset file")->required()->check(CLI::ExistingFile);
    c->add_option("--epochs", epochs, "Training epochs (scnn, s2ccnn)");
    c->add_option("--lr", lr, "Learning rate (scnn, s2ccnn)");
    c->add_option("--layers", layers, "Layers (scnn, s2ccnn)");
    c->add_option("--width", width, "Width (scnn, s2ccnn)");
    c->add_option("--degree", degree, "Polynomial degree (scnn)");
    c->add_option("--activation", activation, "Activation (scnn, s2ccnn)");
    c->add_option("--seed", seed, "Initialization seed");
    c->add_option("--out", out, "Metrics file, stdout when omitted");
    c->callback([this] { run(); });
  }
  void run() {
    const auto m = baseline_method_from_string(method);
    const auto split = load_split(data);
    const auto s = resolve_seed(seed);
    ojson j;
    j["method"] = method;
    j["manipulation"] = split.manipulation_tag();
    if (m == BaselineMethod::scnn || m == BaselineMethod::s2ccnn) {
      TrainConfig cfg;
      cfg.learning_rate = lr;
      cfg.epochs = epochs;
      cfg.seed = s;
      cfg.eval_every = 0;
      const VariantConfig v{layers, width, degree, activation_from_string(activation), s};
      const auto r = variant_train(m == BaselineMethod::scnn ? Family::scnn : Family::s2ccnn, v, split, cfg);
      j["seed"] = s;
      j["train_accuracy"] = r.history.back().train_accuracy;
      j["accuracy"] = variant_evaluate(r.model, split.complex, split.test);
    } else {
      j["accuracy"] = baseline_accuracy(m, split.complex, split.train, split.test);
    }
    write_file(out, j.dump(2) + "\n");
  }
};

struct Decompose {
  std::string complex_path, chain_path, out;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("decompose", "Hodge decomposition of an edge flow");
    c->add_option("--complex", complex_path, "Complex file")->required()->check(CLI::ExistingFile);
    c->add_option("--chain", chain_path, "Edge chain file")->required()->check(CLI::ExistingFile);
    c->add_option("--out", out, "Output prefix: <out>.{gradient,curl,harmonic}.chain and <out>.json")->required();
    c->callback([this] { run(); });
  }
  void run() {
    const auto c = load_complex(complex_path);
    const auto x = load_chain(chain_path, c.edge_count());
    const auto parts = hodge_decompose(c, x);
    save_chain(parts.gradient, out + ".gradient.chain");
    save_chain(parts.curl, out + ".curl.chain");
    save_chain(parts.harmonic, out + ".harmonic.chain");
    ojson j;
    j["norms"] = {{"input", x.norm()},
                  {"gradient", parts.gradient.norm()},
                  {"curl", parts.curl.norm()},
                  {"harmonic", parts.harmonic.norm()}};
    j["betti"] = {betti(c, 0), betti(c, 1), betti(c, 2)};
    j["reconstruction_residual"] = (parts.gradient + parts.curl + parts.harmonic - x).norm();
    write_file(out + ".json", j.dump(2) + "\n");
  }
};

struct CheckAdmissibility {
  std::string model, data, out;
  int trials = 100;
  double tol = 1e-10;
  std::uint64_t seed = 1;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("check-admissibility", "Equivariance and awareness checks for a model");
    c->add_option("--model", model, "Model file")->required()->check(CLI::ExistingFile);
    c->add_option("--data", data, "Dataset or complex file")->required()->check(CLI::ExistingFile);
    c->add_option("--trials", trials, "Random trials per property");
    c->add_option("--tol", tol, "Tolerance");
    c->add_option("--seed", seed, "Trial seed");
    c->add_option("--out", out, "Report file, stdout when omitted");
    c->callback([this] { run(); });
  }
  OrientedComplex2 load_complex_or_split() const {
    std::ifstream in(data);
    in >> std::ws;
    return in.peek() == '{' ? load_split(data).complex : load_complex(data);
  }
  void run() {
    const auto net = load_network(model);
    const auto c = load_complex_or_split();
    const auto s = resolve_seed(seed);
    const auto f = network_chain_map(net);
    const ChainMapBuilder build = [arch = net.arch](std::uint64_t ws) {
      return network_chain_map(Network::init(arch, ws));
    };
    const CheckReport reports[] = {
        check_permutation_equivariance(f, c, trials, tol, s),
        check_orientation_equivariance(f, c, trials, tol, s),
        check_simplicial_awareness(build, c, c.one_skeleton(), trials, tol, s),
    };
    ojson j = ojson::array();
    for (const auto& r : reports) j.push_back(ojson::parse(r.to_json()));
    write_file(out, j.dump(2) + "\n");
  }
};

struct Run {
  std::string config, out;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("run", "Run an experiment config end to end");
    c->add_option("--config", config, "Experiment JSON")->required()->check(CLI::ExistingFile);
    c->add_option("--out", out, "Output prefix, overrides the config");
    c->callback([this] { run(); });
  }
  void run() {
    auto cfg = load_experiment_config(config);
    if (auto s = env_seed()) cfg.seed = *s;
    if (!out.empty()) cfg.output = out;
    const auto table = run_experiment(cfg);
    for (const auto& r : table.rows)
      std::cout << r.dataset << ' ' << r.manipulation << ' ' << r.method << ' ' << round_trip(r.accuracy) << '\n';
  }
};

struct Report {
  std::vector<std::string> inputs;
  std::string svg, out;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("report", "Merge metrics files into one comparison table");
    c->add_option("metrics", inputs, "Metrics JSON files")->required()->check(CLI::ExistingFile);
    c->add_option("--svg", svg, "Write a bar chart");
    c->add_option("--out", out, "Table file, stdout when omitted");
    c->callback([this] { run(); });
  }
  void run() {
    std::vector<MetricsTable> tables;
    for (const auto& p : inputs) tables.push_back(load_metrics(p));
    const auto rows = aggregate(tables);
    write_file(out, format_report(rows));
    if (!svg.empty()) write_file(svg, report_svg(rows));
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simplicial convolutional networks for trajectory prediction"};
  app.require_subcommand(1);
  app.set_version_flag("--version", scone::library_version());

  GenSynthetic gen_synthetic;
  GenGrid gen_grid;
  Train train_cmd;
  Eval eval_cmd;
  Baseline baseline;
  Decompose decompose;
  CheckAdmissibility check;
  Run run;
  Report report;
  gen_synthetic.add(app);
  gen_grid.add(app);
  train_cmd.add(app);
  eval_cmd.add(app);
  baseline.add(app);
  decompose.add(app);
  check.add(app);
  run.add(app);
  report.add(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  } catch (const scone::NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kNumeric;
  } catch (const scone::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const scone::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kConfig;
  } catch (const scone::InvalidInput& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kOk;
}
