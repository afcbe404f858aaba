#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "scone/complex.hpp"

namespace scone {

enum class Activation { tanh, relu, sigmoid, identity };

const char* to_string(Activation a);
Activation activation_from_string(std::string_view name);

double activate(Activation a, double x);
/// Derivative given both the pre-activation and the activation value.
/// relu'(0) is 0.
double activate_derivative(Activation a, double pre, double post);
void activate_inplace(Activation a, Eigen::Ref<Eigen::MatrixXd> x);

/// Linear operators between chain levels (0 nodes, 1 edges, 2 faces).
enum class Operator {
  identity,   // k -> k
  lower1,     // b1^T b1        1 -> 1
  upper1,     // b2 b2^T        1 -> 1
  hodge1,     // Delta_1        1 -> 1 (raised to Term::power)
  hodge0,     // b1 b1^T        0 -> 0
  hodge2,     // b2^T b2        2 -> 2
  boundary1,  // b1             1 -> 0
  coboundary1,// b1^T           0 -> 1
  boundary2,  // b2             2 -> 1
  coboundary2 // b2^T           1 -> 2
};

/// One summand of a layer: Op * X[src] * W[weight] contributes to level dst.
struct Term {
  int dst = 1;
  int src = 1;
  Operator op = Operator::identity;
  int power = 1;  // only used by hodge1; power 0 is the identity
  int weight = 0;
};

enum class Family { scone, scnn, s2ccnn };
const char* to_string(Family f);
Family family_from_string(std::string_view name);

/// Layer structure shared by SCoNe and the baseline variants. Every layer maps
/// chains of width widths[l] to widths[l+1] on each level it produces; the
/// network output is the node readout b1 * X1^L * W_readout.
struct Architecture {
  Family family = Family::scone;
  Activation activation = Activation::tanh;
  std::vector<int> widths;  // F_0 .. F_L, F_0 == 1
  int degree = 0;           // polynomial degree for scnn
  std::vector<std::vector<Term>> layers;
  int readout_weight = 0;

  int layer_count() const { return static_cast<int>(layers.size()); }
  int weight_count() const { return readout_weight + 1; }
  /// (rows, cols) of weight w.
  std::pair<int, int> weight_shape(int w) const;
};

Architecture scone_architecture(int layers, int width, Activation activation);
Architecture scnn_architecture(int layers, int width, int degree, Activation activation);
Architecture s2ccnn_architecture(int layers, int width, Activation activation);
Architecture make_architecture(Family family, std::vector<int> widths, Activation activation, int degree = 0);

/// Trainable state: an architecture plus one dense matrix per weight slot.
struct Network {
  Architecture arch;
  std::vector<Eigen::MatrixXd> weights;

  /// Glorot-uniform weights in [-s, s], s = sqrt(6 / (rows + cols)), drawn
  /// from one SplitMix64 stream in weight-index order.
  static Network init(Architecture arch, std::uint64_t seed);
  static Network zeros(Architecture arch);

  void check_shapes() const;
  bool operator==(const Network& other) const;
};

using RowSparse = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Global sparse operators of one complex, built on demand.
class OperatorBank {
 public:
  explicit OperatorBank(const OrientedComplex2& c);

  const OrientedComplex2& complex() const noexcept { return *complex_; }
  const RowSparse& get(Operator op, int level, int power = 1);
  static int source_level(Operator op, int level);
  static int target_level(Operator op, int level);

 private:
  const OrientedComplex2* complex_;
  std::map<std::tuple<int, int, int>, RowSparse> cache_;
};

/// Restriction of a network to the cells that can reach the logits of one
/// prediction node. Rows of every local operator are complete, so the
/// logits and all weight gradients equal the full-complex computation.
struct Stencil {
  int node = -1;
  std::vector<int> candidates;                       // N(node), ascending
  std::vector<std::array<std::vector<int>, 3>> cells;  // cells[l][level]: sorted global ids
  std::vector<std::vector<RowSparse>> ops;           // ops[l][term]: rows cells[l+1][dst], cols cells[l][src]
  RowSparse readout;                                 // |candidates| x |cells[L][1]|
};

/// Stencil builder with a per-node cache. Not thread-safe.
class StencilCache {
 public:
  StencilCache(const OrientedComplex2& c, const Architecture& arch, bool full = false);

  const Stencil& get(int node);
  const OrientedComplex2& complex() const noexcept { return bank_.complex(); }

 private:
  Stencil build(int node);

  OperatorBank bank_;
  Architecture arch_;
  bool full_;
  std::vector<std::unique_ptr<Stencil>> stencils_;
};

/// A trajectory prepared against its stencil: the lifted chain restricted
/// to the stencil's input cells and the position of the target.
struct PreparedSample {
  int node = -1;
  int target_slot = -1;  // index into Stencil::candidates, -1 when unknown
  std::vector<std::pair<int, double>> input;  // (local row, coefficient)
};

PreparedSample prepare_sample(StencilCache& cache, const Eigen::SparseVector<double>& lifted, int last_node,
                              std::optional<int> target);

struct SampleResult {
  Eigen::VectorXd logits;
  int prediction = -1;  // global node id
  double loss = 0.0;    // cross-entropy when the target is known
};

/// Forward pass on a stencil. When `grads` is given, adds the gradient of the
/// sample's cross-entropy scaled by `grad_scale`.
SampleResult run_sample(const Network& net, const Stencil& st, const PreparedSample& sample,
                        std::vector<Eigen::MatrixXd>* grads = nullptr, double grad_scale = 1.0);

/// Full-complex readout b1 X1^L W on every node for the input 1-chain `x`.
Eigen::VectorXd full_readout(const Network& net, OperatorBank& bank, const Eigen::VectorXd& x);

/// Index of the largest entry, first wins on ties.
Eigen::Index argmax_first(const Eigen::VectorXd& v);

/// Numerically stable softmax.
Eigen::VectorXd softmax(const Eigen::VectorXd& logits);

}  // namespace scone
