#pragma once

// Independent reference implementations used only by the tests. Nothing here
// calls into the library's matrix builders, projectors or path finders.

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <functional>
#include <limits>
#include <set>
#include <vector>

#include "scone/complex.hpp"
#include "scone/network.hpp"
#include "scone/rng.hpp"

namespace oracle {

using scone::OrientedComplex2;

// Signed position of the oriented pair (u, v) in the edge list, by linear scan.
inline std::pair<int, int> edge_of(const OrientedComplex2& c, int u, int v) {
  const auto& es = c.edges();
  for (std::size_t e = 0; e < es.size(); ++e) {
    if (es[e].tail == u && es[e].head == v) return {static_cast<int>(e), 1};
    if (es[e].tail == v && es[e].head == u) return {static_cast<int>(e), -1};
  }
  return {-1, 0};
}

inline Eigen::MatrixXi dense_b1(const OrientedComplex2& c) {
  Eigen::MatrixXi b = Eigen::MatrixXi::Zero(c.node_count(), c.edge_count());
  for (int e = 0; e < c.edge_count(); ++e) {
    b(c.edges()[static_cast<std::size_t>(e)].tail, e) -= 1;
    b(c.edges()[static_cast<std::size_t>(e)].head, e) += 1;
  }
  return b;
}

// Triangles: [v1,v2] - [v0,v2] + [v0,v1]. Squares: [v0,v1] + [v1,v2] + [v2,v3] - [v0,v3].
inline Eigen::MatrixXi dense_b2(const OrientedComplex2& c) {
  Eigen::MatrixXi b = Eigen::MatrixXi::Zero(c.edge_count(), c.face_count());
  for (int f = 0; f < c.face_count(); ++f) {
    const auto& v = c.faces()[static_cast<std::size_t>(f)].v;
    auto add = [&](int a, int bb, int sign) {
      const auto [e, s] = edge_of(c, a, bb);
      if (e < 0) throw std::logic_error("face boundary edge missing");
      b(e, f) += sign * s;
    };
    if (c.faces()[static_cast<std::size_t>(f)].size == 3) {
      add(v[1], v[2], 1);
      add(v[0], v[2], -1);
      add(v[0], v[1], 1);
    } else {
      add(v[0], v[1], 1);
      add(v[1], v[2], 1);
      add(v[2], v[3], 1);
      add(v[0], v[3], -1);
    }
  }
  return b;
}

inline Eigen::MatrixXd to_real(const Eigen::MatrixXi& m) { return m.cast<double>(); }

// Fraction-free Gaussian elimination over arbitrary-precision integers.
inline int exact_rank(const Eigen::MatrixXi& m) {
  using boost::multiprecision::cpp_int;
  const int rows = static_cast<int>(m.rows()), cols = static_cast<int>(m.cols());
  std::vector<std::vector<cpp_int>> a(static_cast<std::size_t>(rows), std::vector<cpp_int>(static_cast<std::size_t>(cols)));
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) a[i][j] = m(i, j);
  cpp_int prev = 1;
  int rank = 0;
  for (int col = 0; col < cols && rank < rows; ++col) {
    int pivot = -1;
    for (int i = rank; i < rows; ++i)
      if (a[i][col] != 0) {
        pivot = i;
        break;
      }
    if (pivot < 0) continue;
    std::swap(a[rank], a[pivot]);
    for (int i = rank + 1; i < rows; ++i) {
      for (int j = col + 1; j < cols; ++j) a[i][j] = (a[rank][col] * a[i][j] - a[i][col] * a[rank][j]) / prev;
      a[i][col] = 0;
    }
    prev = a[rank][col];
    ++rank;
  }
  return rank;
}

// beta_k = |X_k| - rank(b_k) - rank(b_{k+1}).
inline int exact_betti(const OrientedComplex2& c, int k) {
  const int r1 = c.edge_count() ? exact_rank(dense_b1(c)) : 0;
  const int r2 = c.face_count() ? exact_rank(dense_b2(c)) : 0;
  switch (k) {
    case 0: return c.node_count() - r1;
    case 1: return c.edge_count() - r1 - r2;
    default: return c.face_count() - r2;
  }
}

// Orthogonal projector onto the null space of a symmetric PSD matrix,
// assembled from its eigenvectors.
inline Eigen::MatrixXd null_projector(const Eigen::MatrixXd& sym, double tol = 1e-8) {
  if (sym.rows() == 0) return sym;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(sym.rows(), sym.cols());
  for (Eigen::Index i = 0; i < sym.rows(); ++i)
    if (std::abs(es.eigenvalues()[i]) < tol) p += es.eigenvectors().col(i) * es.eigenvectors().col(i).transpose();
  return p;
}

inline Eigen::MatrixXd dense_hodge1(const OrientedComplex2& c) {
  const Eigen::MatrixXd b1 = to_real(dense_b1(c)), b2 = to_real(dense_b2(c));
  return b1.transpose() * b1 + b2 * b2.transpose();
}

inline std::vector<int> brute_neighbors(const OrientedComplex2& c, int i) {
  std::set<int> out;
  for (const auto& e : c.edges()) {
    if (e.tail == i) out.insert(e.head);
    if (e.head == i) out.insert(e.tail);
  }
  return {out.begin(), out.end()};
}

// Single-source distances by Bellman-Ford relaxation over every edge.
inline std::vector<double> bellman_ford(const OrientedComplex2& c, int source, bool euclidean) {
  std::vector<double> d(static_cast<std::size_t>(c.node_count()), std::numeric_limits<double>::infinity());
  d[static_cast<std::size_t>(source)] = 0.0;
  auto w = [&](const scone::Edge& e) {
    if (!euclidean) return 1.0;
    const auto& a = c.coords()[static_cast<std::size_t>(e.tail)];
    const auto& b = c.coords()[static_cast<std::size_t>(e.head)];
    return std::hypot(a.x - b.x, a.y - b.y);
  };
  for (int round = 0; round < c.node_count(); ++round) {
    bool changed = false;
    for (const auto& e : c.edges()) {
      const double we = w(e);
      auto& dt = d[static_cast<std::size_t>(e.tail)];
      auto& dh = d[static_cast<std::size_t>(e.head)];
      if (dt + we < dh) dh = dt + we, changed = true;
      if (dh + we < dt) dt = dh + we, changed = true;
    }
    if (!changed) break;
  }
  return d;
}

inline double path_length(const OrientedComplex2& c, const std::vector<int>& path, bool euclidean) {
  double len = 0.0;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    if (!euclidean) {
      len += 1.0;
      continue;
    }
    const auto& a = c.coords()[static_cast<std::size_t>(path[i])];
    const auto& b = c.coords()[static_cast<std::size_t>(path[i + 1])];
    len += std::hypot(a.x - b.x, a.y - b.y);
  }
  return len;
}

// Jarvis march; returns hull vertex indices counter-clockwise, collinear points dropped.
inline std::vector<int> gift_wrap(const std::vector<scone::Point2>& p) {
  const int n = static_cast<int>(p.size());
  int start = 0;
  for (int i = 1; i < n; ++i)
    if (p[i].x < p[start].x || (p[i].x == p[start].x && p[i].y < p[start].y)) start = i;
  auto cross = [&](int o, int a, int b) {
    return (p[a].x - p[o].x) * (p[b].y - p[o].y) - (p[a].y - p[o].y) * (p[b].x - p[o].x);
  };
  auto dist2 = [&](int a, int b) { return std::pow(p[a].x - p[b].x, 2) + std::pow(p[a].y - p[b].y, 2); };
  std::vector<int> hull;
  int cur = start;
  do {
    hull.push_back(cur);
    int next = (cur + 1) % n;
    for (int i = 0; i < n; ++i) {
      if (i == cur) continue;
      const double cr = cross(cur, next, i);
      if (cr < 0 || (cr == 0 && dist2(cur, i) > dist2(cur, next))) next = i;
    }
    cur = next;
  } while (cur != start && hull.size() <= p.size());
  return hull;
}

// Random simplicial complex: Erdos-Renyi edges, then each 3-clique filled with probability `fill`.
inline OrientedComplex2 random_simplicial(scone::Rng& rng, int max_nodes = 30, double edge_p = 0.3, double fill = 0.5) {
  const int n = 3 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_nodes - 2)));
  std::set<std::array<int, 2>> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rng.uniform() < edge_p) edges.insert({i, j});
  std::vector<std::array<int, 3>> tris;
  for (const auto& [i, j] : edges)
    for (int k = j + 1; k < n; ++k)
      if (edges.count({i, k}) && edges.count({j, k}) && rng.uniform() < fill) tris.push_back({i, j, k});
  std::vector<std::array<int, 2>> ev(edges.begin(), edges.end());
  return scone::build_simplicial(n, tris, ev);
}

// Random grid with scattered blocked cells.
inline scone::GridMap random_grid(scone::Rng& rng, int max_side = 12, double blocked = 0.2) {
  const int rows = 2 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_side - 1)));
  const int cols = 2 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_side - 1)));
  scone::GridMap g(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      if (rng.uniform() < blocked) g.set_passable(r, c, false);
  return g;
}

// Dense forward pass of a SCoNe network for one lifted chain; logits on `candidates`.
inline Eigen::VectorXd dense_scone_logits(const scone::Network& net, const OrientedComplex2& c, const Eigen::VectorXd& x,
                                          const std::vector<int>& candidates) {
  const Eigen::MatrixXd b1 = to_real(dense_b1(c)), b2 = to_real(dense_b2(c));
  const Eigen::MatrixXd lower = b1.transpose() * b1, upper = b2 * b2.transpose();
  Eigen::MatrixXd h = x;
  for (int l = 0; l < net.arch.layer_count(); ++l) {
    const auto& w = net.weights;
    Eigen::MatrixXd pre = lower * h * w[3 * l] + h * w[3 * l + 1] + upper * h * w[3 * l + 2];
    for (Eigen::Index i = 0; i < pre.size(); ++i) pre.data()[i] = scone::activate(net.arch.activation, pre.data()[i]);
    h = pre;
  }
  const Eigen::VectorXd out = b1 * h * net.weights.back();
  Eigen::VectorXd logits(static_cast<Eigen::Index>(candidates.size()));
  for (std::size_t i = 0; i < candidates.size(); ++i) logits[static_cast<Eigen::Index>(i)] = out[candidates[i]];
  return logits;
}

// Central differences of `f` with respect to every weight entry.
inline std::vector<Eigen::MatrixXd> finite_difference(scone::Network net, const std::function<double(const scone::Network&)>& f,
                                                      double step = 1e-5) {
  std::vector<Eigen::MatrixXd> g;
  for (std::size_t w = 0; w < net.weights.size(); ++w) {
    g.push_back(Eigen::MatrixXd::Zero(net.weights[w].rows(), net.weights[w].cols()));
    for (Eigen::Index i = 0; i < net.weights[w].size(); ++i) {
      double& x = net.weights[w].data()[i];
      const double x0 = x;
      x = x0 + step;
      const double up = f(net);
      x = x0 - step;
      const double down = f(net);
      x = x0;
      g[w].data()[i] = (up - down) / (2 * step);
    }
  }
  return g;
}

// max |a - b| / max(1, |a|, |b|) over all entries.
inline double max_relative_error(const std::vector<Eigen::MatrixXd>& a, const std::vector<Eigen::MatrixXd>& b) {
  double worst = 0.0;
  for (std::size_t w = 0; w < a.size(); ++w)
    for (Eigen::Index i = 0; i < a[w].size(); ++i) {
      const double x = a[w].data()[i], y = b[w].data()[i];
      worst = std::max(worst, std::abs(x - y) / std::max({1.0, std::abs(x), std::abs(y)}));
    }
  return worst;
}

// The seven-node example: triangles [0,1,6] and [0,4,5], ten edges.
inline OrientedComplex2 hodge_example_complex() {
  const std::array<std::array<int, 3>, 2> tris{{{0, 1, 6}, {0, 4, 5}}};
  const std::array<std::array<int, 2>, 10> edges{
      {{0, 1}, {0, 3}, {0, 4}, {0, 5}, {0, 6}, {1, 2}, {1, 6}, {2, 3}, {3, 4}, {4, 5}}};
  return scone::build_simplicial(7, tris, edges);
}

struct PrintedFlow {
  int tail, head;
  double flow, gradient, curl, harmonic;
};

// Printed values of the worked decomposition example.
inline const std::array<PrintedFlow, 10>& hodge_example_values() {
  static const std::array<PrintedFlow, 10> v{{
      {0, 1, 3.0, 1.0, 1.0, 1.0},
      {0, 3, -1.5, 3.0, 0.0, -4.5},
      {0, 4, 8.0, 4.0, 2.0, 2.0},
      {0, 5, 4.0, 5.0, -2.0, 1.0},
      {0, 6, 5.5, 6.0, -1.0, 0.5},
      {1, 2, 2.5, 1.0, 0.0, 1.5},
      {1, 6, 5.5, 5.0, 1.0, -0.5},
      {2, 3, 1.5, 1.0, 0.0, 1.5},
      {3, 4, -2.0, 1.0, 0.0, -3.0},
      {4, 5, 2.0, 1.0, 2.0, -1.0},
  }};
  return v;
}

}  // namespace oracle
