#include "scone/network.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "scone/error.hpp"
#include "scone/rng.hpp"

namespace scone {

const char* to_string(Activation a) {
  switch (a) {
    case Activation::tanh: return "tanh";
    case Activation::relu: return "relu";
    case Activation::sigmoid: return "sigmoid";
    case Activation::identity: return "identity";
  }
  return "?";
}

Activation activation_from_string(std::string_view name) {
  if (name == "tanh") return Activation::tanh;
  if (name == "relu") return Activation::relu;
  if (name == "sigmoid") return Activation::sigmoid;
  if (name == "identity" || name == "id") return Activation::identity;
  throw InvalidInput("unknown activation '" + std::string(name) + "'");
}

double activate(Activation a, double x) {
  switch (a) {
    case Activation::tanh: return std::tanh(x);
    case Activation::relu: return x > 0.0 ? x : 0.0;
    case Activation::sigmoid: return 1.0 / (1.0 + std::exp(-x));
    case Activation::identity: return x;
  }
  return x;
}

double activate_derivative(Activation a, double pre, double post) {
  switch (a) {
    case Activation::tanh: return 1.0 - post * post;
    case Activation::relu: return pre > 0.0 ? 1.0 : 0.0;
    case Activation::sigmoid: return post * (1.0 - post);
    case Activation::identity: return 1.0;
  }
  return 1.0;
}

void activate_inplace(Activation a, Eigen::Ref<Eigen::MatrixXd> x) {
  switch (a) {
    case Activation::tanh: x = x.array().tanh().matrix(); break;
    case Activation::relu: x = x.cwiseMax(0.0); break;
    case Activation::sigmoid: x = (1.0 / (1.0 + (-x.array()).exp())).matrix(); break;
    case Activation::identity: break;
  }
}

const char* to_string(Family f) {
  switch (f) {
    case Family::scone: return "scone";
    case Family::scnn: return "scnn";
    case Family::s2ccnn: return "s2ccnn";
  }
  return "?";
}

Family family_from_string(std::string_view name) {
  if (name == "scone") return Family::scone;
  if (name == "scnn") return Family::scnn;
  if (name == "s2ccnn") return Family::s2ccnn;
  throw InvalidInput("unknown architecture family '" + std::string(name) + "'");
}

std::pair<int, int> Architecture::weight_shape(int w) const {
  if (w == readout_weight) return {widths.back(), 1};
  for (std::size_t l = 0; l < layers.size(); ++l)
    for (const auto& t : layers[l])
      if (t.weight == w) return {widths[l], widths[l + 1]};
  throw InvalidInput("weight index " + std::to_string(w) + " out of range");
}

Architecture make_architecture(Family family, std::vector<int> widths, Activation activation, int degree) {
  if (widths.size() < 2 || widths.front() != 1)
    throw InvalidInput("widths must start with 1 and describe at least one layer");
  for (int w : widths)
    if (w <= 0) throw InvalidInput("layer widths must be positive");
  if (family == Family::scnn && degree < 0) throw InvalidInput("polynomial degree must be nonnegative");

  Architecture a;
  a.family = family;
  a.activation = activation;
  a.widths = std::move(widths);
  a.degree = family == Family::scnn ? degree : 0;
  const int layers = static_cast<int>(a.widths.size()) - 1;
  int w = 0;
  for (int l = 0; l < layers; ++l) {
    std::vector<Term> terms;
    switch (family) {
      case Family::scone:
        terms.push_back({1, 1, Operator::lower1, 1, w++});
        terms.push_back({1, 1, Operator::identity, 1, w++});
        terms.push_back({1, 1, Operator::upper1, 1, w++});
        break;
      case Family::scnn:
        for (int j = 0; j <= a.degree; ++j) terms.push_back({1, 1, Operator::hodge1, j, w++});
        break;
      case Family::s2ccnn:
        terms.push_back({0, 1, Operator::boundary1, 1, w++});
        terms.push_back({0, 0, Operator::hodge0, 1, w++});
        terms.push_back({1, 2, Operator::boundary2, 1, w++});
        terms.push_back({1, 1, Operator::hodge1, 1, w++});
        terms.push_back({1, 0, Operator::coboundary1, 1, w++});
        terms.push_back({2, 2, Operator::hodge2, 1, w++});
        terms.push_back({2, 1, Operator::coboundary2, 1, w++});
        break;
    }
    a.layers.push_back(std::move(terms));
  }
  a.readout_weight = w;
  return a;
}

namespace {
std::vector<int> uniform_widths(int layers, int width) {
  if (layers < 1) throw InvalidInput("layer count must be at least 1");
  std::vector<int> widths(static_cast<std::size_t>(layers) + 1, width);
  widths[0] = 1;
  return widths;
}
}  // namespace

Architecture scone_architecture(int layers, int width, Activation activation) {
  return make_architecture(Family::scone, uniform_widths(layers, width), activation);
}

Architecture scnn_architecture(int layers, int width, int degree, Activation activation) {
  return make_architecture(Family::scnn, uniform_widths(layers, width), activation, degree);
}

Architecture s2ccnn_architecture(int layers, int width, Activation activation) {
  return make_architecture(Family::s2ccnn, uniform_widths(layers, width), activation);
}

Network Network::init(Architecture arch, std::uint64_t seed) {
  Network net;
  net.arch = std::move(arch);
  Rng rng(seed);
  for (int w = 0; w < net.arch.weight_count(); ++w) {
    const auto [rows, cols] = net.arch.weight_shape(w);
    const double s = std::sqrt(6.0 / static_cast<double>(rows + cols));
    Eigen::MatrixXd m(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) m(i, j) = rng.uniform(-s, s);
    net.weights.push_back(std::move(m));
  }
  return net;
}

Network Network::zeros(Architecture arch) {
  Network net;
  net.arch = std::move(arch);
  for (int w = 0; w < net.arch.weight_count(); ++w) {
    const auto [rows, cols] = net.arch.weight_shape(w);
    net.weights.push_back(Eigen::MatrixXd::Zero(rows, cols));
  }
  return net;
}

void Network::check_shapes() const {
  if (static_cast<int>(weights.size()) != arch.weight_count())
    throw InvalidInput("network has " + std::to_string(weights.size()) + " weight matrices, expected " +
                       std::to_string(arch.weight_count()));
  for (int w = 0; w < arch.weight_count(); ++w) {
    const auto [rows, cols] = arch.weight_shape(w);
    const auto& m = weights[static_cast<std::size_t>(w)];
    if (m.rows() != rows || m.cols() != cols)
      throw InvalidInput("weight " + std::to_string(w) + " has shape " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()) + ", expected " + std::to_string(rows) + "x" + std::to_string(cols));
    if (!m.allFinite()) throw NumericError("weight " + std::to_string(w) + " is not finite");
  }
}

bool Network::operator==(const Network& other) const {
  if (arch.family != other.arch.family || arch.activation != other.arch.activation ||
      arch.widths != other.arch.widths || arch.degree != other.arch.degree || weights.size() != other.weights.size())
    return false;
  for (std::size_t i = 0; i < weights.size(); ++i)
    if (weights[i].rows() != other.weights[i].rows() || weights[i].cols() != other.weights[i].cols() ||
        weights[i] != other.weights[i])
      return false;
  return true;
}

// ---------------------------------------------------------------------------

OperatorBank::OperatorBank(const OrientedComplex2& c) : complex_(&c) {}

int OperatorBank::source_level(Operator op, int level) {
  switch (op) {
    case Operator::identity: return level;
    case Operator::lower1:
    case Operator::upper1:
    case Operator::hodge1:
    case Operator::boundary1:
    case Operator::coboundary2: return 1;
    case Operator::hodge0:
    case Operator::coboundary1: return 0;
    case Operator::hodge2:
    case Operator::boundary2: return 2;
  }
  return level;
}

int OperatorBank::target_level(Operator op, int level) {
  switch (op) {
    case Operator::identity: return level;
    case Operator::lower1:
    case Operator::upper1:
    case Operator::hodge1:
    case Operator::coboundary1:
    case Operator::boundary2: return 1;
    case Operator::hodge0:
    case Operator::boundary1: return 0;
    case Operator::hodge2:
    case Operator::coboundary2: return 2;
  }
  return level;
}

const RowSparse& OperatorBank::get(Operator op, int level, int power) {
  if (op != Operator::hodge1) power = 1;
  const auto key = std::make_tuple(static_cast<int>(op), op == Operator::identity ? level : 0, power);
  if (auto it = cache_.find(key); it != cache_.end()) return it->second;

  const auto& b1 = complex_->b1_real();
  const auto& b2 = complex_->b2_real();
  RowSparse m;
  switch (op) {
    case Operator::identity: {
      const int n = complex_->cell_count(level);
      m.resize(n, n);
      m.setIdentity();
      break;
    }
    case Operator::lower1: m = RealSparse(b1.transpose() * b1); break;
    case Operator::upper1: m = RealSparse(b2 * b2.transpose()); break;
    case Operator::hodge1: {
      const RowSparse& base = get(Operator::lower1, 1);
      const RowSparse lap = RowSparse(base + get(Operator::upper1, 1));
      m.resize(lap.rows(), lap.cols());
      m.setIdentity();
      for (int j = 0; j < power; ++j) m = RowSparse(m * lap);
      break;
    }
    case Operator::hodge0: m = RealSparse(b1 * b1.transpose()); break;
    case Operator::hodge2: m = RealSparse(b2.transpose() * b2); break;
    case Operator::boundary1: m = b1; break;
    case Operator::coboundary1: m = RealSparse(b1.transpose()); break;
    case Operator::boundary2: m = b2; break;
    case Operator::coboundary2: m = RealSparse(b2.transpose()); break;
  }
  m.makeCompressed();
  return cache_.emplace(key, std::move(m)).first->second;
}

// ---------------------------------------------------------------------------

StencilCache::StencilCache(const OrientedComplex2& c, const Architecture& arch, bool full)
    : bank_(c), arch_(arch), full_(full), stencils_(static_cast<std::size_t>(c.node_count())) {
  for (std::size_t l = 0; l < arch_.layers.size(); ++l)
    for (const auto& t : arch_.layers[l])
      if (OperatorBank::source_level(t.op, t.src) != t.src || OperatorBank::target_level(t.op, t.src) != t.dst)
        throw InvalidInput("architecture term has inconsistent levels");
}

const Stencil& StencilCache::get(int node) {
  if (node < 0 || node >= complex().node_count()) throw InvalidInput("node id " + std::to_string(node) + " out of range");
  auto& slot = stencils_[static_cast<std::size_t>(node)];
  if (!slot) slot = std::make_unique<Stencil>(build(node));
  return *slot;
}

namespace {

int local_index(const std::vector<int>& cells, int global) {
  const auto it = std::lower_bound(cells.begin(), cells.end(), global);
  if (it == cells.end() || *it != global) return -1;
  return static_cast<int>(it - cells.begin());
}

RowSparse restrict_rows(const RowSparse& global, const std::vector<int>& rows, const std::vector<int>& cols) {
  std::vector<Eigen::Triplet<double>> triplets;
  for (int i = 0; i < static_cast<int>(rows.size()); ++i)
    for (RowSparse::InnerIterator it(global, rows[static_cast<std::size_t>(i)]); it; ++it) {
      const int j = local_index(cols, static_cast<int>(it.col()));
      if (j < 0) throw std::logic_error("stencil row is not closed over its columns");
      triplets.emplace_back(i, j, it.value());
    }
  RowSparse local(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  local.setFromTriplets(triplets.begin(), triplets.end());
  local.makeCompressed();
  return local;
}

std::vector<int> all_cells(int n) {
  std::vector<int> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = i;
  return v;
}

}  // namespace

Stencil StencilCache::build(int node) {
  const auto& c = complex();
  const int L = arch_.layer_count();
  Stencil st;
  st.node = node;
  const auto nb = c.neighbors(node);
  st.candidates.assign(nb.begin(), nb.end());
  st.cells.resize(static_cast<std::size_t>(L) + 1);
  st.ops.resize(static_cast<std::size_t>(L));

  const RowSparse& b1 = bank_.get(Operator::boundary1, 1);
  {
    std::set<int> top;
    for (int j : st.candidates)
      for (RowSparse::InnerIterator it(b1, j); it; ++it) top.insert(static_cast<int>(it.col()));
    st.cells[static_cast<std::size_t>(L)][1] = full_ ? all_cells(c.edge_count()) : std::vector<int>(top.begin(), top.end());
  }

  for (int l = L - 1; l >= 0; --l) {
    std::array<std::set<int>, 3> needed;
    std::array<bool, 3> used{false, false, false};
    const auto& out = st.cells[static_cast<std::size_t>(l) + 1];
    for (const auto& t : arch_.layers[static_cast<std::size_t>(l)]) {
      const auto& rows = out[static_cast<std::size_t>(t.dst)];
      if (rows.empty()) continue;
      used[static_cast<std::size_t>(t.src)] = true;
      const RowSparse& op = bank_.get(t.op, t.src, t.power);
      for (int r : rows)
        for (RowSparse::InnerIterator it(op, r); it; ++it) needed[static_cast<std::size_t>(t.src)].insert(static_cast<int>(it.col()));
    }
    for (int k = 0; k < 3; ++k) {
      auto& dst = st.cells[static_cast<std::size_t>(l)][static_cast<std::size_t>(k)];
      if (full_ && used[static_cast<std::size_t>(k)])
        dst = all_cells(c.cell_count(k));
      else
        dst.assign(needed[static_cast<std::size_t>(k)].begin(), needed[static_cast<std::size_t>(k)].end());
    }
  }

  for (int l = 0; l < L; ++l) {
    for (const auto& t : arch_.layers[static_cast<std::size_t>(l)]) {
      const auto& rows = st.cells[static_cast<std::size_t>(l) + 1][static_cast<std::size_t>(t.dst)];
      const auto& cols = st.cells[static_cast<std::size_t>(l)][static_cast<std::size_t>(t.src)];
      st.ops[static_cast<std::size_t>(l)].push_back(restrict_rows(bank_.get(t.op, t.src, t.power), rows, cols));
    }
  }
  st.readout = restrict_rows(b1, st.candidates, st.cells[static_cast<std::size_t>(L)][1]);
  return st;
}

PreparedSample prepare_sample(StencilCache& cache, const Eigen::SparseVector<double>& lifted, int last_node,
                              std::optional<int> target) {
  const Stencil& st = cache.get(last_node);
  PreparedSample s;
  s.node = last_node;
  if (target) {
    const auto it = std::lower_bound(st.candidates.begin(), st.candidates.end(), *target);
    if (it == st.candidates.end() || *it != *target)
      throw InvalidInput("target node " + std::to_string(*target) + " is not a neighbor of node " +
                         std::to_string(last_node));
    s.target_slot = static_cast<int>(it - st.candidates.begin());
  }
  const auto& inputs = st.cells.front()[1];
  for (Eigen::SparseVector<double>::InnerIterator it(lifted); it; ++it) {
    const int j = local_index(inputs, static_cast<int>(it.index()));
    if (j >= 0 && it.value() != 0.0) s.input.emplace_back(j, it.value());
  }
  return s;
}

Eigen::Index argmax_first(const Eigen::VectorXd& v) {
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i)
    if (v[i] > v[best]) best = i;
  return best;
}

Eigen::VectorXd softmax(const Eigen::VectorXd& logits) {
  if (logits.size() == 0) return logits;
  const double mx = logits.maxCoeff();
  Eigen::VectorXd z = (logits.array() - mx).exp().matrix();
  return z / z.sum();
}

SampleResult run_sample(const Network& net, const Stencil& st, const PreparedSample& sample,
                        std::vector<Eigen::MatrixXd>* grads, double grad_scale) {
  const auto& arch = net.arch;
  const int L = arch.layer_count();
  if (st.candidates.empty()) throw InvalidInput("node " + std::to_string(st.node) + " has no neighbors");

  // X[l][k]: activations; P[l][k]: pre-activations; Z[l][t]: op * X for term t of layer l-1.
  std::vector<std::array<Eigen::MatrixXd, 3>> X(static_cast<std::size_t>(L) + 1);
  std::vector<std::array<Eigen::MatrixXd, 3>> P(static_cast<std::size_t>(L) + 1);
  std::vector<std::vector<Eigen::MatrixXd>> Z(static_cast<std::size_t>(L));

  for (int k = 0; k < 3; ++k)
    X[0][static_cast<std::size_t>(k)] =
        Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(st.cells[0][static_cast<std::size_t>(k)].size()), 1);
  for (const auto& [row, value] : sample.input) X[0][1](row, 0) += value;

  for (int l = 0; l < L; ++l) {
    const auto lu = static_cast<std::size_t>(l);
    const auto& terms = arch.layers[lu];
    const int fout = arch.widths[lu + 1];
    for (int k = 0; k < 3; ++k)
      P[lu + 1][static_cast<std::size_t>(k)] =
          Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(st.cells[lu + 1][static_cast<std::size_t>(k)].size()), fout);
    Z[lu].resize(terms.size());
    for (std::size_t t = 0; t < terms.size(); ++t) {
      const auto& term = terms[t];
      auto& pre = P[lu + 1][static_cast<std::size_t>(term.dst)];
      if (pre.rows() == 0) continue;
      Z[lu][t] = st.ops[lu][t] * X[lu][static_cast<std::size_t>(term.src)];
      pre.noalias() += Z[lu][t] * net.weights[static_cast<std::size_t>(term.weight)];
    }
    for (int k = 0; k < 3; ++k) {
      X[lu + 1][static_cast<std::size_t>(k)] = P[lu + 1][static_cast<std::size_t>(k)];
      activate_inplace(arch.activation, X[lu + 1][static_cast<std::size_t>(k)]);
    }
  }

  const auto Lu = static_cast<std::size_t>(L);
  const Eigen::MatrixXd rx = st.readout * X[Lu][1];
  const auto& w_out = net.weights[static_cast<std::size_t>(arch.readout_weight)];
  SampleResult res;
  res.logits = rx * w_out;
  res.prediction = st.candidates[static_cast<std::size_t>(argmax_first(res.logits))];
  if (sample.target_slot < 0) return res;

  const Eigen::VectorXd z = softmax(res.logits);
  const double mx = res.logits.maxCoeff();
  const double log_norm = mx + std::log((res.logits.array() - mx).exp().sum());
  res.loss = log_norm - res.logits[sample.target_slot];
  if (!grads) return res;

  Eigen::VectorXd g = z;
  g[sample.target_slot] -= 1.0;
  g *= grad_scale;
  (*grads)[static_cast<std::size_t>(arch.readout_weight)].noalias() += rx.transpose() * g;

  std::vector<std::array<Eigen::MatrixXd, 3>> dX(static_cast<std::size_t>(L) + 1);
  dX[Lu][1] = st.readout.transpose() * (g * w_out.transpose());

  for (int l = L - 1; l >= 0; --l) {
    const auto lu = static_cast<std::size_t>(l);
    const auto& terms = arch.layers[lu];
    std::array<Eigen::MatrixXd, 3> dpre;
    for (int k = 0; k < 3; ++k) {
      const auto ku = static_cast<std::size_t>(k);
      if (dX[lu + 1][ku].size() == 0) continue;
      const auto& pre = P[lu + 1][ku];
      const auto& post = X[lu + 1][ku];
      dpre[ku] = dX[lu + 1][ku];
      for (Eigen::Index j = 0; j < pre.cols(); ++j)
        for (Eigen::Index i = 0; i < pre.rows(); ++i)
          dpre[ku](i, j) *= activate_derivative(arch.activation, pre(i, j), post(i, j));
    }
    for (std::size_t t = 0; t < terms.size(); ++t) {
      const auto& term = terms[t];
      const auto& dp = dpre[static_cast<std::size_t>(term.dst)];
      if (dp.size() == 0) continue;
      const auto& w = net.weights[static_cast<std::size_t>(term.weight)];
      (*grads)[static_cast<std::size_t>(term.weight)].noalias() += Z[lu][t].transpose() * dp;
      if (l == 0) continue;
      auto& dx = dX[lu][static_cast<std::size_t>(term.src)];
      const Eigen::MatrixXd back = st.ops[lu][t].transpose() * (dp * w.transpose());
      if (dx.size() == 0)
        dx = back;
      else
        dx += back;
    }
  }
  return res;
}

Eigen::VectorXd full_readout(const Network& net, OperatorBank& bank, const Eigen::VectorXd& x) {
  const auto& c = bank.complex();
  const auto& arch = net.arch;
  if (x.size() != c.edge_count()) throw InvalidInput("input chain length does not match the edge count");
  std::array<Eigen::MatrixXd, 3> cur;
  cur[0] = Eigen::MatrixXd::Zero(c.node_count(), 1);
  cur[1] = x;
  cur[2] = Eigen::MatrixXd::Zero(c.face_count(), 1);
  for (int l = 0; l < arch.layer_count(); ++l) {
    const int fout = arch.widths[static_cast<std::size_t>(l) + 1];
    std::array<Eigen::MatrixXd, 3> next;
    std::array<bool, 3> produced{false, false, false};
    for (int k = 0; k < 3; ++k) next[static_cast<std::size_t>(k)] = Eigen::MatrixXd::Zero(c.cell_count(k), fout);
    for (const auto& t : arch.layers[static_cast<std::size_t>(l)]) {
      const RowSparse& op = bank.get(t.op, t.src, t.power);
      next[static_cast<std::size_t>(t.dst)] +=
          op * (cur[static_cast<std::size_t>(t.src)] * net.weights[static_cast<std::size_t>(t.weight)]);
      produced[static_cast<std::size_t>(t.dst)] = true;
    }
    for (int k = 0; k < 3; ++k)
      if (produced[static_cast<std::size_t>(k)]) activate_inplace(arch.activation, next[static_cast<std::size_t>(k)]);
    cur = std::move(next);
  }
  return c.b1_real() * (cur[1] * net.weights[static_cast<std::size_t>(arch.readout_weight)]);
}

}  // namespace scone
