#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "scone/complex.hpp"
#include "scone/network.hpp"

namespace scone {

/// Chain-in / chain-out predictor: maps a complex and a 1-chain on it to a
/// value on every node (pre-softmax readout).
using ChainMap = std::function<Eigen::VectorXd(const OrientedComplex2&, const Eigen::VectorXd&)>;

/// Builds a chain map from a weight seed.
using ChainMapBuilder = std::function<ChainMap(std::uint64_t)>;

/// Wraps a network as a chain map via the full-complex readout.
ChainMap network_chain_map(Network net);

struct CheckReport {
  std::string property;  // "permutation-equivariance", "orientation-equivariance", "simplicial-awareness"
  int trials = 0;
  double tolerance = 0.0;
  double max_deviation = 0.0;
  bool pass = false;
  std::uint64_t seed = 0;

  // Inputs of the worst trial.
  int worst_trial = -1;
  Eigen::VectorXd chain;
  std::optional<PermutationSet> permutation;
  std::optional<OrientationFlip> flip;
  std::optional<std::uint64_t> weight_seed;

  std::string to_json() const;
};

/// ||f_c(x) - P0^-1 f_{Pc}(P1 x)||_inf.
double permutation_deviation(const ChainMap& f, const OrientedComplex2& c, const Eigen::VectorXd& x,
                             const PermutationSet& p);
/// ||f_c(x) - f_{Dc}(D1 x)||_inf. Nodes are never flipped, so the readout is compared directly.
double orientation_deviation(const ChainMap& f, const OrientedComplex2& c, const Eigen::VectorXd& x,
                             const OrientationFlip& d);
/// ||f_with(x) - f_without(x)||_inf for the map built from `weight_seed`.
double awareness_deviation(const ChainMapBuilder& build, const OrientedComplex2& with, const OrientedComplex2& without,
                           std::uint64_t weight_seed, const Eigen::VectorXd& x);

/// Random relabelings and chains; passes when every deviation is <= tol.
CheckReport check_permutation_equivariance(const ChainMap& f, const OrientedComplex2& c, int trials, double tol,
                                           std::uint64_t seed = 1);

/// Random sign flips (each edge and 2-cell with probability 1/2) and chains.
CheckReport check_orientation_equivariance(const ChainMap& f, const OrientedComplex2& c, int trials, double tol,
                                           std::uint64_t seed = 1);

/// Random weights and chains on two complexes sharing nodes and edges.
/// Passes (the map is aware of 2-cells) when some difference exceeds tol.
CheckReport check_simplicial_awareness(const ChainMapBuilder& build, const OrientedComplex2& with,
                                       const OrientedComplex2& without, int trials, double tol,
                                       std::uint64_t seed = 1);

/// Recomputes the deviation stored in a report from its witness.
double replay(const CheckReport& report, const ChainMap& f, const OrientedComplex2& c);
double replay(const CheckReport& report, const ChainMapBuilder& build, const OrientedComplex2& with,
              const OrientedComplex2& without);

}  // namespace scone
