#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scone/datasets.hpp"
#include "scone/network.hpp"
#include "scone/train.hpp"

namespace scone {

const char* library_version();

enum class DatasetKind { synthetic, grid_map, obstacle_grid, file };
const char* to_string(DatasetKind k);

struct DatasetSpec {
  DatasetKind kind = DatasetKind::synthetic;
  SynthConfig synth;               // synthetic; its seed is replaced by the experiment seed
  std::filesystem::path path;      // grid_map: .map file, file: dataset JSON
  int rows = 30, cols = 30;        // obstacle_grid
  int blocks = 3, block_size = 5;  // obstacle_grid
  int trajectory_count = 1000;     // grid kinds
  double train_fraction = 0.8;     // grid kinds

  /// Short name used as the dataset key in metrics tables.
  std::string label() const;
};

enum class Method {
  scone_tanh,
  scone_relu,
  scone_sigmoid,
  scone_identity,
  scone_no_triangles,
  markov,
  hodge_kernel,
  boundary_kernel,
  scnn,
  s2ccnn
};
const char* to_string(Method m);
Method method_from_string(std::string_view name);
bool is_trained(Method m);

struct ModelConfig {
  int layers = 3;
  int width = 16;
  int degree = 2;                               // scnn polynomial degree
  Activation variant_activation = Activation::relu;  // scnn and s2ccnn
};

struct ExperimentConfig {
  std::string name = "experiment";
  DatasetSpec dataset;
  std::vector<Manipulation> manipulations;  // applied in order
  std::vector<Method> methods;
  ModelConfig model;
  TrainConfig train;
  std::map<Method, TrainConfig> method_train;  // per-method overrides of `train`
  std::filesystem::path output;                // writes <output>.json and <output>.csv when set
  std::uint64_t seed = 1;

  const TrainConfig& train_for(Method m) const;
  /// Throws ConfigError naming the offending field.
  void validate() const;
};

/// Relative paths are resolved against `base_dir`. Unknown keys are errors.
ExperimentConfig parse_experiment_config(std::string_view json, const std::filesystem::path& base_dir = {});
ExperimentConfig load_experiment_config(const std::filesystem::path& path);
/// Fully resolved config, every default spelled out.
std::string format_experiment_config(const ExperimentConfig& cfg);

/// Generates or loads the dataset and applies the manipulations.
DatasetSplit build_dataset(const ExperimentConfig& cfg);

struct MetricsRow {
  std::string dataset;
  std::string manipulation;
  std::string method;
  std::uint64_t seed = 0;
  double accuracy = 0.0;
  double train_accuracy = -1.0;     // -1 for untrained methods
  std::vector<double> loss_curve;   // one training loss per history row
  double wall_seconds = 0.0;
};

inline constexpr int kMetricsSchemaVersion = 1;

struct MetricsTable {
  int schema_version = kMetricsSchemaVersion;
  std::string library_version;
  std::string config;  // resolved config JSON
  std::vector<MetricsRow> rows;
};

/// Runs every method in order on one dataset and writes the metrics files
/// when an output path is configured.
MetricsTable run_experiment(const ExperimentConfig& cfg);

/// Deterministic JSON: wall times are left out so reruns are byte-identical.
std::string format_metrics_json(const MetricsTable& t);
/// One row per method, wall time included.
std::string format_metrics_csv(const MetricsTable& t);
MetricsTable parse_metrics_json(std::string_view text);
MetricsTable load_metrics(const std::filesystem::path& path);

struct ReportRow {
  std::string dataset;
  std::string manipulation;
  std::string method;
  int runs = 0;
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
};

/// Rows merged by (dataset, manipulation, method), sorted by that key.
/// Throws InvalidInput when schema versions differ or are unsupported.
std::vector<ReportRow> aggregate(std::span<const MetricsTable> tables);
std::string format_report(std::span<const ReportRow> rows);
/// Horizontal bar chart of mean accuracy with min-max whiskers.
std::string report_svg(std::span<const ReportRow> rows);

}  // namespace scone
