#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "scone/complex.hpp"
#include "scone/datasets.hpp"
#include "scone/network.hpp"

namespace scone {

/// A SCoNe network: weight 3l+k is W_k of layer l (k = 0 lower, 1 identity,
/// 2 upper) and the last weight is the F_L x 1 readout.
using SconeModel = Network;

SconeModel init_model(std::uint64_t seed, int layers = 3, int width = 16, Activation activation = Activation::tanh);

/// Parenthesizations of B^T(B x W) for one Laplacian term.
///   weight_first    B^T(B(xW))
///   middle          B^T((B x)W)
///   operator_first  (B^T(B x))W
enum class EvalOrder { weight_first, middle, operator_first };

struct LayerPlan {
  EvalOrder lower = EvalOrder::operator_first;
  EvalOrder upper = EvalOrder::operator_first;
};

/// Cheapest order for each term by multiply-add count, given the level sizes.
LayerPlan plan_layer(const OrientedComplex2& c, int f_in, int f_out);

/// phi(B2 B2^T x W2 + x W1 + B1^T B1 x W0).
Eigen::MatrixXd scone_layer(const OrientedComplex2& c, const Eigen::MatrixXd& x, const Eigen::MatrixXd& w0,
                            const Eigen::MatrixXd& w1, const Eigen::MatrixXd& w2, Activation activation,
                            std::optional<LayerPlan> plan = std::nullopt);

struct ForwardTrace {
  std::vector<Eigen::MatrixXd> pre;     // pre[l]: pre-activation of layer l + 1
  std::vector<Eigen::MatrixXd> chains;  // chains[l] = c_1^l, l = 0..L
  Eigen::VectorXd readout;              // c_0^{L+1} on every node
  std::vector<int> candidates;          // N(last node)
  Eigen::VectorXd logits;               // readout restricted to candidates
  Eigen::VectorXd z;                    // softmax of logits
  int prediction = -1;
};

/// Node readout b1 c_1^L W for an input 1-chain, computed on the whole complex.
Eigen::VectorXd scone_readout(const SconeModel& model, const OrientedComplex2& c, const Eigen::VectorXd& x);

/// Full-complex forward pass of any architecture family.
Eigen::VectorXd network_readout(const Network& net, const OrientedComplex2& c, const Eigen::VectorXd& x);

ForwardTrace forward(const SconeModel& model, const OrientedComplex2& c, const Trajectory& t);

/// JSON checkpoint; weights are stored row-major with round-trip precision.
std::string format_network(const Network& net);
Network parse_network(std::string_view text);
void save_network(const Network& net, const std::filesystem::path& path);
Network load_network(const std::filesystem::path& path);

}  // namespace scone
