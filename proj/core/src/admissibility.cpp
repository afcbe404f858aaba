#include "scone/admissibility.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"
#include "scone/error.hpp"
#include "scone/model.hpp"
#include "scone/rng.hpp"

namespace scone {

using Eigen::Index;

namespace {

Eigen::VectorXd random_chain(Index n, Rng& rng) {
  Eigen::VectorXd x(n);
  for (Index i = 0; i < n; ++i) x[i] = rng.uniform(-1.0, 1.0);
  return x;
}

void require_trials(int trials, double tol) {
  if (trials < 1) throw InvalidInput("trials must be at least 1");
  if (!(tol >= 0.0)) throw InvalidInput("tolerance must be nonnegative");
}

void require_edges(const OrientedComplex2& c, const Eigen::VectorXd& x) {
  if (x.size() != c.edge_count()) throw InvalidInput("chain length does not match the edge count");
}

CheckReport make_report(std::string property, int trials, double tol, std::uint64_t seed) {
  CheckReport r;
  r.property = std::move(property);
  r.trials = trials;
  r.tolerance = tol;
  r.seed = seed;
  return r;
}

}  // namespace

ChainMap network_chain_map(Network net) {
  net.check_shapes();
  return [net = std::move(net)](const OrientedComplex2& c, const Eigen::VectorXd& x) {
    return network_readout(net, c, x);
  };
}

double permutation_deviation(const ChainMap& f, const OrientedComplex2& c, const Eigen::VectorXd& x,
                             const PermutationSet& p) {
  require_edges(c, x);
  const OrientedComplex2 pc = apply_permutation(c, p);
  Eigen::VectorXd px(x.size());
  for (Index e = 0; e < x.size(); ++e) px[p.p1[static_cast<std::size_t>(e)]] = x[e];
  const Eigen::VectorXd y = f(c, x);
  const Eigen::VectorXd py = f(pc, px);
  if (y.size() != c.node_count() || py.size() != c.node_count())
    throw InvalidInput("chain map must return one value per node");
  double dev = 0.0;
  for (Index i = 0; i < y.size(); ++i)
    dev = std::max(dev, std::abs(y[i] - py[p.p0[static_cast<std::size_t>(i)]]));
  return dev;
}

double orientation_deviation(const ChainMap& f, const OrientedComplex2& c, const Eigen::VectorXd& x,
                             const OrientationFlip& d) {
  require_edges(c, x);
  const OrientedComplex2 dc = apply_orientation_flip(c, d);
  Eigen::VectorXd dx = x;
  for (Index e = 0; e < x.size(); ++e) dx[e] *= d.d1[static_cast<std::size_t>(e)];
  const Eigen::VectorXd y = f(c, x);
  const Eigen::VectorXd dy = f(dc, dx);
  if (y.size() != c.node_count() || dy.size() != c.node_count())
    throw InvalidInput("chain map must return one value per node");
  return (y - dy).lpNorm<Eigen::Infinity>();
}

double awareness_deviation(const ChainMapBuilder& build, const OrientedComplex2& with, const OrientedComplex2& without,
                           std::uint64_t weight_seed, const Eigen::VectorXd& x) {
  require_edges(with, x);
  const ChainMap f = build(weight_seed);
  return (f(with, x) - f(without, x)).lpNorm<Eigen::Infinity>();
}

CheckReport check_permutation_equivariance(const ChainMap& f, const OrientedComplex2& c, int trials, double tol,
                                           std::uint64_t seed) {
  require_trials(trials, tol);
  CheckReport r = make_report("permutation-equivariance", trials, tol, seed);
  Rng master(seed);
  for (int t = 0; t < trials; ++t) {
    Rng rng = master.split();
    auto p = PermutationSet::random(c, rng);
    auto x = random_chain(c.edge_count(), rng);
    const double dev = permutation_deviation(f, c, x, p);
    if (r.worst_trial < 0 || dev > r.max_deviation) {
      r.max_deviation = dev;
      r.worst_trial = t;
      r.chain = std::move(x);
      r.permutation = std::move(p);
    }
  }
  r.pass = r.max_deviation <= tol;
  return r;
}

CheckReport check_orientation_equivariance(const ChainMap& f, const OrientedComplex2& c, int trials, double tol,
                                           std::uint64_t seed) {
  require_trials(trials, tol);
  CheckReport r = make_report("orientation-equivariance", trials, tol, seed);
  Rng master(seed);
  for (int t = 0; t < trials; ++t) {
    Rng rng = master.split();
    auto d = OrientationFlip::random(c, rng);
    auto x = random_chain(c.edge_count(), rng);
    const double dev = orientation_deviation(f, c, x, d);
    if (r.worst_trial < 0 || dev > r.max_deviation) {
      r.max_deviation = dev;
      r.worst_trial = t;
      r.chain = std::move(x);
      r.flip = std::move(d);
    }
  }
  r.pass = r.max_deviation <= tol;
  return r;
}

CheckReport check_simplicial_awareness(const ChainMapBuilder& build, const OrientedComplex2& with,
                                       const OrientedComplex2& without, int trials, double tol,
                                       std::uint64_t seed) {
  require_trials(trials, tol);
  if (with.node_count() != without.node_count() || with.edges() != without.edges())
    throw InvalidInput("awareness check needs complexes with the same nodes and edges");
  CheckReport r = make_report("simplicial-awareness", trials, tol, seed);
  Rng master(seed);
  for (int t = 0; t < trials; ++t) {
    Rng rng = master.split();
    const std::uint64_t ws = rng.next();
    auto x = random_chain(with.edge_count(), rng);
    const double dev = awareness_deviation(build, with, without, ws, x);
    if (r.worst_trial < 0 || dev > r.max_deviation) {
      r.max_deviation = dev;
      r.worst_trial = t;
      r.chain = std::move(x);
      r.weight_seed = ws;
    }
  }
  r.pass = r.max_deviation > tol;
  return r;
}

double replay(const CheckReport& report, const ChainMap& f, const OrientedComplex2& c) {
  if (report.permutation) return permutation_deviation(f, c, report.chain, *report.permutation);
  if (report.flip) return orientation_deviation(f, c, report.chain, *report.flip);
  throw InvalidInput("report has no equivariance witness");
}

double replay(const CheckReport& report, const ChainMapBuilder& build, const OrientedComplex2& with,
              const OrientedComplex2& without) {
  if (!report.weight_seed) throw InvalidInput("report has no awareness witness");
  return awareness_deviation(build, with, without, *report.weight_seed, report.chain);
}

std::string CheckReport::to_json() const {
  nlohmann::ordered_json j;
  j["property"] = property;
  j["trials"] = trials;
  j["seed"] = seed;
  j["tolerance"] = tolerance;
  j["max_deviation"] = max_deviation;
  j["pass"] = pass;
  auto& w = j["witness"];
  w["trial"] = worst_trial;
  w["chain"] = std::vector<double>(chain.data(), chain.data() + chain.size());
  if (permutation) {
    w["p0"] = permutation->p0;
    w["p1"] = permutation->p1;
    w["p2"] = permutation->p2;
  }
  if (flip) {
    w["d1"] = flip->d1;
    w["d2"] = flip->d2;
  }
  if (weight_seed) w["weight_seed"] = *weight_seed;
  return j.dump(2);
}

}  // namespace scone
