#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

#include "scone/datasets.hpp"
#include "scone/network.hpp"

namespace scone {

struct TrainConfig {
  double learning_rate = 0.001;
  int epochs = 500;
  double weight_decay = 5e-5;
  double beta1 = 0.9;
  double beta2 = 0.99;
  double epsilon = 1e-8;
  std::uint64_t seed = 1;
  int batch_size = 0;   // 0 trains on the full set every step
  int eval_every = 1;   // epochs between test evaluations, 0 disables them

  void validate() const;
};

/// Adam moments, one pair per weight matrix.
struct AdamState {
  std::vector<Eigen::MatrixXd> m;
  std::vector<Eigen::MatrixXd> v;
  long step = 0;

  static AdamState for_network(const Network& net);
  /// One bias-corrected Adam step. `grads` must already contain the decay term.
  void update(Network& net, const std::vector<Eigen::MatrixXd>& grads, const TrainConfig& cfg);
};

struct LossAndGrads {
  double loss = 0.0;  // mean cross-entropy plus (lambda/2) sum ||W||^2
  double accuracy = 0.0;
  std::vector<Eigen::MatrixXd> grads;
};

std::vector<PreparedSample> prepare_samples(StencilCache& cache, const OrientedComplex2& c,
                                            std::span<const Trajectory> ts);

LossAndGrads loss_and_grads(const Network& net, StencilCache& cache, std::span<const PreparedSample> batch,
                            double weight_decay);
LossAndGrads loss_and_grads(const Network& net, const OrientedComplex2& c, std::span<const Trajectory> batch,
                            double weight_decay);

/// Fraction of samples whose prediction equals the target.
double accuracy(const Network& net, StencilCache& cache, std::span<const PreparedSample> samples);
double evaluate(const Network& net, const OrientedComplex2& c, std::span<const Trajectory> ts);
std::vector<int> predict(const Network& net, const OrientedComplex2& c, std::span<const Trajectory> ts);

struct EpochMetrics {
  int epoch = 0;
  double loss = 0.0;
  double train_accuracy = 0.0;
  double test_accuracy = -1.0;  // -1 when not evaluated
};

struct TrainResult {
  Network model;
  /// Row e describes the weights entering epoch e; the last row (epoch ==
  /// epochs) describes the returned model.
  std::vector<EpochMetrics> history;
};

TrainResult train(Network model, const OrientedComplex2& c, std::span<const Trajectory> train_set,
                  std::span<const Trajectory> test_set, const TrainConfig& cfg);
TrainResult train(Network model, const DatasetSplit& split, const TrainConfig& cfg);

}  // namespace scone
