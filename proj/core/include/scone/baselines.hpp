#pragma once

#include <Eigen/Dense>
#include <map>
#include <span>
#include <vector>

#include "scone/datasets.hpp"
#include "scone/hodge.hpp"
#include "scone/network.hpp"
#include "scone/train.hpp"

namespace scone {

/// Empirical successor counts.
struct MarkovModel {
  std::map<int, std::map<int, int>> successors;  // node -> (next node -> count)
  std::map<std::pair<int, int>, int> edge_frequency;  // undirected, key (low, high)
};

/// Counts every consecutive pair of every walk, the hop into the target included.
MarkovModel markov_fit(std::span<const Trajectory> trajectories);

/// Most frequent successor among N(last). Unvisited nodes fall back to the
/// most used incident edge, then to the lowest neighbor id.
int markov_predict(const MarkovModel& model, const OrientedComplex2& c, const Trajectory& t);

/// Lift, project onto the chosen kernel, then follow the incident edge with
/// the largest outgoing coefficient (arrival edge included, lowest id on ties).
int projection_predict(const OrientedComplex2& c, const Trajectory& t, KernelKind which);
int projection_predict(const KernelProjector& projector, const OrientedComplex2& c, const Trajectory& t);

/// phi(sum_j Delta_1^j x W_j), j = 0..weights.size() - 1.
Eigen::MatrixXd scnn_layer(const OrientedComplex2& c, const Eigen::MatrixXd& x, std::span<const Eigen::MatrixXd> weights,
                           Activation activation);

struct LevelChains {
  Eigen::MatrixXd x0, x1, x2;
};

/// One three-level layer with unnormalized operators:
///   x0' = phi(b1 x1 W[0] + L0 x0 W[1])
///   x1' = phi(b2 x2 W[2] + L1 x1 W[3] + b1^T x0 W[4])
///   x2' = phi(L2 x2 W[5] + b2^T x1 W[6])
LevelChains s2ccnn_layer(const OrientedComplex2& c, const LevelChains& x, std::span<const Eigen::MatrixXd> weights,
                         Activation activation);

/// Node readout b1 x1^L W through the layer functions above.
Eigen::VectorXd variant_readout(const Network& net, const OrientedComplex2& c, const Eigen::VectorXd& x);

enum class BaselineMethod { markov, hodge_kernel, boundary_kernel, scnn, s2ccnn };
const char* to_string(BaselineMethod m);
BaselineMethod baseline_method_from_string(std::string_view name);

struct VariantConfig {
  int layers = 3;
  int width = 16;
  int degree = 2;
  Activation activation = Activation::relu;
  std::uint64_t seed = 1;
};

Network init_variant(Family family, const VariantConfig& cfg);

/// Accuracy of a non-trained method on `test` after fitting on `train`.
double baseline_accuracy(BaselineMethod method, const OrientedComplex2& c, std::span<const Trajectory> train,
                         std::span<const Trajectory> test);

TrainResult variant_train(Family family, const VariantConfig& vcfg, const DatasetSplit& split, const TrainConfig& tcfg);
double variant_evaluate(const Network& net, const OrientedComplex2& c, std::span<const Trajectory> ts);

}  // namespace scone
