#include "scone/baselines.hpp"

#include <string>

#include "scone/error.hpp"

namespace scone {

MarkovModel markov_fit(std::span<const Trajectory> trajectories) {
  MarkovModel m;
  for (const auto& t : trajectories) {
    auto hop = [&](int a, int b) {
      ++m.successors[a][b];
      ++m.edge_frequency[{std::min(a, b), std::max(a, b)}];
    };
    for (std::size_t i = 0; i + 1 < t.nodes.size(); ++i) hop(t.nodes[i], t.nodes[i + 1]);
    if (!t.nodes.empty() && t.target >= 0) hop(t.last(), t.target);
  }
  return m;
}

int markov_predict(const MarkovModel& model, const OrientedComplex2& c, const Trajectory& t) {
  if (t.nodes.empty()) throw InvalidInput("trajectory has no nodes");
  const int u = t.last();
  const auto nb = c.neighbors(u);
  if (nb.empty()) throw InvalidInput("node " + std::to_string(u) + " has no neighbors");
  auto best_by = [&](auto&& score) {
    int best = nb.front(), best_score = score(nb.front());
    for (int j : nb)
      if (score(j) > best_score) {
        best = j;
        best_score = score(j);
      }
    return std::pair{best, best_score};
  };
  if (const auto it = model.successors.find(u); it != model.successors.end()) {
    const auto [best, count] = best_by([&](int j) {
      const auto k = it->second.find(j);
      return k == it->second.end() ? 0 : k->second;
    });
    if (count > 0) return best;
  }
  return best_by([&](int j) {
           const auto k = model.edge_frequency.find({std::min(u, j), std::max(u, j)});
           return k == model.edge_frequency.end() ? 0 : k->second;
         })
      .first;
}

int projection_predict(const KernelProjector& projector, const OrientedComplex2& c, const Trajectory& t) {
  validate_trajectory(c, t);
  const Eigen::VectorXd y = projector.project(Eigen::VectorXd(lift_path(c, t.nodes)));
  const int u = t.last();
  int best = -1;
  double best_flow = 0.0;
  for (int e : c.incident_edges(u)) {
    const auto& edge = c.edges()[static_cast<std::size_t>(e)];
    const int j = edge.tail == u ? edge.head : edge.tail;
    const double out = y[e] * c.edge_sign(e, u, j);
    if (best < 0 || out > best_flow) {
      best = j;
      best_flow = out;
    }
  }
  if (best < 0) throw InvalidInput("node " + std::to_string(u) + " has no neighbors");
  return best;
}

int projection_predict(const OrientedComplex2& c, const Trajectory& t, KernelKind which) {
  return projection_predict(KernelProjector(c, which), c, t);
}

Eigen::MatrixXd scnn_layer(const OrientedComplex2& c, const Eigen::MatrixXd& x, std::span<const Eigen::MatrixXd> weights,
                           Activation activation) {
  if (weights.empty()) throw InvalidInput("polynomial layer needs at least one weight");
  if (x.rows() != c.edge_count()) throw InvalidInput("layer input has the wrong number of edges");
  for (const auto& w : weights)
    if (w.rows() != x.cols() || w.cols() != weights[0].cols()) throw InvalidInput("layer weight shapes do not match");
  const RealSparse lap = hodge_laplacian_sparse(c, 1);
  Eigen::MatrixXd power = x;
  Eigen::MatrixXd out = x * weights[0];
  for (std::size_t j = 1; j < weights.size(); ++j) {
    power = lap * power;
    out += power * weights[j];
  }
  activate_inplace(activation, out);
  return out;
}

LevelChains s2ccnn_layer(const OrientedComplex2& c, const LevelChains& x, std::span<const Eigen::MatrixXd> w,
                         Activation activation) {
  if (w.size() != 7) throw InvalidInput("three-level layer needs seven weights");
  if (x.x0.rows() != c.node_count() || x.x1.rows() != c.edge_count() || x.x2.rows() != c.face_count())
    throw InvalidInput("layer inputs do not match the complex");
  const std::array<const Eigen::MatrixXd*, 7> src{&x.x1, &x.x0, &x.x2, &x.x1, &x.x0, &x.x2, &x.x1};
  for (std::size_t i = 0; i < 7; ++i)
    if (w[i].rows() != src[i]->cols() || w[i].cols() != w[0].cols()) throw InvalidInput("layer weight shapes do not match");
  const auto& b1 = c.b1_real();
  const auto& b2 = c.b2_real();
  const RealSparse l0 = hodge_laplacian_sparse(c, 0);
  const RealSparse l1 = hodge_laplacian_sparse(c, 1);
  const RealSparse l2 = hodge_laplacian_sparse(c, 2);
  LevelChains out;
  out.x0 = b1 * (x.x1 * w[0]) + l0 * (x.x0 * w[1]);
  out.x1 = b2 * (x.x2 * w[2]) + l1 * (x.x1 * w[3]) + b1.transpose() * (x.x0 * w[4]);
  out.x2 = l2 * (x.x2 * w[5]) + b2.transpose() * (x.x1 * w[6]);
  activate_inplace(activation, out.x0);
  activate_inplace(activation, out.x1);
  activate_inplace(activation, out.x2);
  return out;
}

Eigen::VectorXd variant_readout(const Network& net, const OrientedComplex2& c, const Eigen::VectorXd& x) {
  net.check_shapes();
  const auto& arch = net.arch;
  const std::span<const Eigen::MatrixXd> all(net.weights);
  std::size_t offset = 0;
  switch (arch.family) {
    case Family::scone:
      throw InvalidInput("variant_readout expects an SCNN or S2CCNN network");
    case Family::scnn: {
      Eigen::MatrixXd h = x;
      const auto per = static_cast<std::size_t>(arch.degree) + 1;
      for (int l = 0; l < arch.layer_count(); ++l, offset += per) h = scnn_layer(c, h, all.subspan(offset, per), arch.activation);
      return c.b1_real() * (h * net.weights.back());
    }
    case Family::s2ccnn: {
      LevelChains h{Eigen::MatrixXd::Zero(c.node_count(), 1), x, Eigen::MatrixXd::Zero(c.face_count(), 1)};
      for (int l = 0; l < arch.layer_count(); ++l, offset += 7) h = s2ccnn_layer(c, h, all.subspan(offset, 7), arch.activation);
      return c.b1_real() * (h.x1 * net.weights.back());
    }
  }
  return {};
}

const char* to_string(BaselineMethod m) {
  switch (m) {
    case BaselineMethod::markov: return "markov";
    case BaselineMethod::hodge_kernel: return "hodge-kernel";
    case BaselineMethod::boundary_kernel: return "boundary-kernel";
    case BaselineMethod::scnn: return "scnn";
    case BaselineMethod::s2ccnn: return "s2ccnn";
  }
  return "?";
}

BaselineMethod baseline_method_from_string(std::string_view name) {
  if (name == "markov") return BaselineMethod::markov;
  if (name == "hodge-kernel") return BaselineMethod::hodge_kernel;
  if (name == "boundary-kernel") return BaselineMethod::boundary_kernel;
  if (name == "scnn") return BaselineMethod::scnn;
  if (name == "s2ccnn") return BaselineMethod::s2ccnn;
  throw InvalidInput("unknown baseline method '" + std::string(name) + "'");
}

Network init_variant(Family family, const VariantConfig& cfg) {
  switch (family) {
    case Family::scnn: return Network::init(scnn_architecture(cfg.layers, cfg.width, cfg.degree, cfg.activation), cfg.seed);
    case Family::s2ccnn: return Network::init(s2ccnn_architecture(cfg.layers, cfg.width, cfg.activation), cfg.seed);
    case Family::scone: break;
  }
  throw InvalidInput("init_variant expects the scnn or s2ccnn family");
}

double baseline_accuracy(BaselineMethod method, const OrientedComplex2& c, std::span<const Trajectory> train,
                         std::span<const Trajectory> test) {
  if (test.empty()) throw InvalidInput("test set is empty");
  int correct = 0;
  switch (method) {
    case BaselineMethod::markov: {
      const auto model = markov_fit(train);
      for (const auto& t : test) correct += markov_predict(model, c, t) == t.target;
      break;
    }
    case BaselineMethod::hodge_kernel:
    case BaselineMethod::boundary_kernel: {
      const KernelProjector projector(
          c, method == BaselineMethod::hodge_kernel ? KernelKind::hodge_kernel : KernelKind::boundary_kernel);
      for (const auto& t : test) correct += projection_predict(projector, c, t) == t.target;
      break;
    }
    case BaselineMethod::scnn:
    case BaselineMethod::s2ccnn:
      throw InvalidInput("trained variants go through variant_train");
  }
  return static_cast<double>(correct) / static_cast<double>(test.size());
}

TrainResult variant_train(Family family, const VariantConfig& vcfg, const DatasetSplit& split, const TrainConfig& tcfg) {
  return train(init_variant(family, vcfg), split, tcfg);
}

double variant_evaluate(const Network& net, const OrientedComplex2& c, std::span<const Trajectory> ts) {
  return evaluate(net, c, ts);
}

}  // namespace scone
