#include "scone/datasets.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <queue>
#include <string>

#include "scone/delaunay.hpp"
#include "scone/error.hpp"
#include "scone/rng.hpp"

namespace scone {

const char* to_string(Manipulation m) {
  switch (m) {
    case Manipulation::standard: return "standard";
    case Manipulation::reversed: return "reversed";
    case Manipulation::transfer: return "transfer";
    case Manipulation::manual_orientation: return "manual_orientation";
  }
  return "?";
}

Manipulation manipulation_from_string(std::string_view name) {
  if (name == "standard") return Manipulation::standard;
  if (name == "reversed") return Manipulation::reversed;
  if (name == "transfer") return Manipulation::transfer;
  if (name == "manual_orientation") return Manipulation::manual_orientation;
  throw InvalidInput("unknown manipulation '" + std::string(name) + "'");
}

std::string DatasetSplit::manipulation_tag() const {
  if (manipulations.empty()) return "standard";
  std::string tag;
  for (auto m : manipulations) {
    if (!tag.empty()) tag += '+';
    tag += to_string(m);
  }
  return tag;
}

void SynthConfig::validate() const {
  if (point_count < 3) throw InvalidInput("point_count must be at least 3");
  if (trajectory_count < 1) throw InvalidInput("trajectory_count must be positive");
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) throw InvalidInput("train_fraction must lie in (0, 1)");
  if (max_attempts < 1) throw InvalidInput("max_attempts must be positive");
  auto inside_unit = [](const Box& b) { return b.x0 >= 0 && b.x1 <= 1 && b.y0 >= 0 && b.y1 <= 1 && b.x0 < b.x1 && b.y0 < b.y1; };
  auto covers = [](const Box& h, const Box& r) { return h.x0 <= r.x0 && r.x1 <= h.x1 && h.y0 <= r.y0 && r.y1 <= h.y1; };
  std::vector<Box> regions{start, middle[0], middle[1], middle[2], end};
  for (const auto& h : holes) {
    if (!inside_unit(h)) throw InvalidInput("hole boxes must lie inside the unit square");
    for (const auto& r : regions)
      if (covers(h, r)) throw InvalidInput("a waypoint box lies entirely inside a hole");
  }
  for (const auto& r : regions)
    if (!inside_unit(r)) throw InvalidInput("waypoint boxes must lie inside the unit square");
}

Eigen::SparseVector<double> lift_path(const OrientedComplex2& c, std::span<const int> nodes) {
  Eigen::SparseVector<double> x(c.edge_count());
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    const int a = nodes[i], b = nodes[i + 1];
    const auto e = c.find_edge(a, b);
    if (!e) throw InvalidInput("nodes " + std::to_string(a) + " and " + std::to_string(b) + " are not adjacent");
    x.coeffRef(*e) += c.edge_sign(*e, a, b);
  }
  return x;
}

Chain lift_trajectory(const OrientedComplex2& c, const Trajectory& t) {
  return Chain::from_vector(1, Eigen::VectorXd(lift_path(c, t.nodes)));
}

void validate_trajectory(const OrientedComplex2& c, const Trajectory& t) {
  if (t.nodes.size() < 2) throw InvalidInput("trajectory needs at least two nodes");
  for (int v : t.nodes)
    if (v < 0 || v >= c.node_count()) throw InvalidInput("trajectory node " + std::to_string(v) + " out of range");
  for (std::size_t i = 0; i + 1 < t.nodes.size(); ++i)
    if (!c.find_edge(t.nodes[i], t.nodes[i + 1]))
      throw InvalidInput("hop " + std::to_string(t.nodes[i]) + " -> " + std::to_string(t.nodes[i + 1]) +
                         " is not an edge");
  if (t.target < 0 || t.target >= c.node_count() || !c.find_edge(t.last(), t.target))
    throw InvalidInput("target " + std::to_string(t.target) + " is not a neighbor of node " + std::to_string(t.last()));
}

void validate_split(const DatasetSplit& split) {
  auto check = [&](const std::vector<Trajectory>& ts, const char* name) {
    for (std::size_t i = 0; i < ts.size(); ++i) {
      try {
        validate_trajectory(split.complex, ts[i]);
      } catch (const InvalidInput& e) {
        throw InvalidInput(std::string(name) + "[" + std::to_string(i) + "]: " + e.what());
      }
    }
  };
  check(split.train, "train");
  check(split.test, "test");
}

namespace {

double edge_length(const OrientedComplex2& c, int a, int b) {
  const auto& p = c.coords()[static_cast<std::size_t>(a)];
  const auto& q = c.coords()[static_cast<std::size_t>(b)];
  return std::hypot(p.x - q.x, p.y - q.y);
}

std::vector<int> unwind(const std::vector<int>& parent, int from, int to) {
  std::vector<int> path;
  for (int v = to; v != -1; v = parent[static_cast<std::size_t>(v)]) path.push_back(v);
  std::reverse(path.begin(), path.end());
  if (path.front() != from) throw InvalidInput("no path from " + std::to_string(from) + " to " + std::to_string(to));
  return path;
}

/// Component label per node, labels numbered by their lowest node.
std::vector<int> components(const OrientedComplex2& c, int* count) {
  std::vector<int> label(static_cast<std::size_t>(c.node_count()), -1);
  int next = 0;
  for (int s = 0; s < c.node_count(); ++s) {
    if (label[static_cast<std::size_t>(s)] >= 0) continue;
    std::deque<int> queue{s};
    label[static_cast<std::size_t>(s)] = next;
    while (!queue.empty()) {
      const int v = queue.front();
      queue.pop_front();
      for (int w : c.neighbors(v))
        if (label[static_cast<std::size_t>(w)] < 0) {
          label[static_cast<std::size_t>(w)] = next;
          queue.push_back(w);
        }
    }
    ++next;
  }
  if (count) *count = next;
  return label;
}

std::vector<int> nodes_in(const OrientedComplex2& c, const Box& b) {
  std::vector<int> out;
  for (int i = 0; i < c.node_count(); ++i)
    if (b.contains(c.coords()[static_cast<std::size_t>(i)])) out.push_back(i);
  return out;
}

int pick(const std::vector<int>& v, Rng& rng) { return v[static_cast<std::size_t>(rng.below(v.size()))]; }

Trajectory split_target(std::vector<int> walk, int region) {
  Trajectory t;
  t.target = walk.back();
  walk.pop_back();
  t.nodes = std::move(walk);
  t.region = region;
  return t;
}

void shuffle_into(DatasetSplit& split, std::vector<Trajectory> all, double train_fraction, Rng& rng) {
  rng.shuffle(std::span<Trajectory>(all));
  const auto n_train = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(all.size())));
  split.train.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(n_train));
  split.test.assign(all.begin() + static_cast<std::ptrdiff_t>(n_train), all.end());
}

}  // namespace

std::vector<int> dijkstra_path(const OrientedComplex2& c, int from, int to) {
  if (!c.has_coords()) throw InvalidInput("Euclidean shortest paths need node coordinates");
  c.neighbors(from);
  c.neighbors(to);
  const auto n = static_cast<std::size_t>(c.node_count());
  std::vector<double> dist(n, std::numeric_limits<double>::infinity());
  std::vector<int> parent(n, -1);
  std::vector<char> done(n, 0);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[static_cast<std::size_t>(from)] = 0.0;
  heap.emplace(0.0, from);
  while (!heap.empty()) {
    const auto [d, v] = heap.top();
    heap.pop();
    if (done[static_cast<std::size_t>(v)]) continue;
    done[static_cast<std::size_t>(v)] = 1;
    if (v == to) break;
    for (int w : c.neighbors(v)) {
      const double nd = d + edge_length(c, v, w);
      if (nd < dist[static_cast<std::size_t>(w)]) {
        dist[static_cast<std::size_t>(w)] = nd;
        parent[static_cast<std::size_t>(w)] = v;
        heap.emplace(nd, w);
      }
    }
  }
  return unwind(parent, from, to);
}

std::vector<int> bfs_path(const OrientedComplex2& c, int from, int to) {
  c.neighbors(from);
  c.neighbors(to);
  std::vector<int> parent(static_cast<std::size_t>(c.node_count()), -1);
  std::vector<char> seen(static_cast<std::size_t>(c.node_count()), 0);
  std::deque<int> queue{from};
  seen[static_cast<std::size_t>(from)] = 1;
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    if (v == to) break;
    for (int w : c.neighbors(v))
      if (!seen[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = 1;
        parent[static_cast<std::size_t>(w)] = v;
        queue.push_back(w);
      }
  }
  return unwind(parent, from, to);
}

OrientedComplex2 synthetic_complex(const SynthConfig& cfg, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Point2> points(static_cast<std::size_t>(cfg.point_count));
  for (auto& p : points) {
    p.x = rng.uniform();
    p.y = rng.uniform();
  }
  const auto triangles = delaunay(points);

  std::vector<int> new_id(points.size(), -1);
  std::vector<Point2> kept;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (cfg.holes[0].contains(points[i]) || cfg.holes[1].contains(points[i])) continue;
    new_id[i] = static_cast<int>(kept.size());
    kept.push_back(points[i]);
  }
  std::vector<std::array<int, 3>> tris;
  std::vector<std::array<int, 2>> edges;
  for (const auto& t : triangles) {
    const std::array<int, 3> m{new_id[static_cast<std::size_t>(t[0])], new_id[static_cast<std::size_t>(t[1])],
                               new_id[static_cast<std::size_t>(t[2])]};
    for (int k = 0; k < 3; ++k)
      if (m[static_cast<std::size_t>(k)] >= 0 && m[static_cast<std::size_t>((k + 1) % 3)] >= 0)
        edges.push_back({m[static_cast<std::size_t>(k)], m[static_cast<std::size_t>((k + 1) % 3)]});
    if (m[0] >= 0 && m[1] >= 0 && m[2] >= 0) tris.push_back(m);
  }
  const int n = static_cast<int>(kept.size());
  return build_simplicial(n, tris, edges, std::move(kept));
}

DatasetSplit generate_synthetic(const SynthConfig& cfg) {
  cfg.validate();
  for (int attempt = 0; attempt < cfg.max_attempts; ++attempt) {
    Rng master(cfg.seed + static_cast<std::uint64_t>(attempt));
    DatasetSplit split;
    split.seed = cfg.seed;
    split.complex = synthetic_complex(cfg, master.next());
    const auto& c = split.complex;

    // Planar complex: beta_2 = 0, so beta_1 follows from the Euler characteristic.
    int beta0 = 0;
    components(c, &beta0);
    const int beta1 = beta0 - c.node_count() + c.edge_count() - c.face_count();
    if (beta0 != 1 || beta1 != 2) continue;

    const auto starts = nodes_in(c, cfg.start);
    const auto ends = nodes_in(c, cfg.end);
    std::array<std::vector<int>, 3> mids;
    for (int r = 0; r < 3; ++r) mids[static_cast<std::size_t>(r)] = nodes_in(c, cfg.middle[static_cast<std::size_t>(r)]);
    if (starts.empty() || ends.empty() || mids[0].empty() || mids[1].empty() || mids[2].empty()) continue;

    Rng rng = master.split();
    std::vector<Trajectory> all;
    all.reserve(static_cast<std::size_t>(cfg.trajectory_count));
    while (static_cast<int>(all.size()) < cfg.trajectory_count) {
      const int s = pick(starts, rng);
      const int region = static_cast<int>(rng.below(3));
      const int m = pick(mids[static_cast<std::size_t>(region)], rng);
      const int e = pick(ends, rng);
      auto walk = dijkstra_path(c, s, m);
      const auto tail = dijkstra_path(c, m, e);
      walk.insert(walk.end(), tail.begin() + 1, tail.end());
      if (walk.size() < 3) continue;
      all.push_back(split_target(std::move(walk), region));
    }
    shuffle_into(split, std::move(all), cfg.train_fraction, rng);
    return split;
  }
  throw InvalidInput("no point set with one component, two holes and populated waypoint boxes after " +
                     std::to_string(cfg.max_attempts) + " attempts");
}

Trajectory reverse_trajectory(const Trajectory& t) {
  std::vector<int> walk = t.nodes;
  walk.push_back(t.target);
  std::reverse(walk.begin(), walk.end());
  return split_target(std::move(walk), t.region);
}

DatasetSplit manipulate(const DatasetSplit& split, Manipulation mode) {
  DatasetSplit out = split;
  switch (mode) {
    case Manipulation::standard: return out;
    case Manipulation::reversed:
      for (auto& t : out.test) {
        if (t.nodes.size() < 2) throw InvalidInput("reversed trajectory shorter than two hops");
        t = reverse_trajectory(t);
      }
      break;
    case Manipulation::transfer: {
      std::vector<Trajectory> all = split.train;
      all.insert(all.end(), split.test.begin(), split.test.end());
      out.train.clear();
      out.test.clear();
      for (auto& t : all) {
        if (t.region == 0) out.train.push_back(t);
        if (t.region == 2) out.test.push_back(t);
      }
      if (out.train.empty() || out.test.empty())
        throw InvalidInput("transfer split needs trajectories tagged with regions 0 and 2");
      break;
    }
    case Manipulation::manual_orientation: {
      const auto& c = split.complex;
      if (!c.has_coords()) throw InvalidInput("manual orientation needs node coordinates");
      auto flip = OrientationFlip::identity(c);
      for (int e = 0; e < c.edge_count(); ++e) {
        const auto& edge = c.edges()[static_cast<std::size_t>(e)];
        const auto& p = c.coords()[static_cast<std::size_t>(edge.tail)];
        const auto& q = c.coords()[static_cast<std::size_t>(edge.head)];
        if (p.x + p.y > q.x + q.y) flip.d1[static_cast<std::size_t>(e)] = -1;
      }
      out.complex = apply_orientation_flip(c, flip);
      break;
    }
  }
  out.manipulations.push_back(mode);
  return out;
}

GridMap obstacle_grid(int rows, int cols, int blocks, int block_size, std::uint64_t seed) {
  if (rows < 1 || cols < 1 || blocks < 0 || block_size < 1) throw InvalidInput("invalid obstacle grid parameters");
  const int lo = 2, hi_r = rows - 2 - block_size, hi_c = cols - 2 - block_size;
  if (blocks > 0 && (hi_r < lo || hi_c < lo)) throw InvalidInput("grid too small for its obstacle blocks");
  GridMap grid(rows, cols, true);
  Rng rng(seed);
  std::vector<std::array<int, 2>> placed;
  int tries = 0;
  while (static_cast<int>(placed.size()) < blocks) {
    if (++tries > 100000) throw InvalidInput("could not place obstacle blocks apart from each other");
    const int r = lo + static_cast<int>(rng.below(static_cast<std::uint64_t>(hi_r - lo + 1)));
    const int c = lo + static_cast<int>(rng.below(static_cast<std::uint64_t>(hi_c - lo + 1)));
    const bool clear = std::all_of(placed.begin(), placed.end(), [&](const auto& b) {
      return r >= b[0] + block_size + 2 || b[0] >= r + block_size + 2 || c >= b[1] + block_size + 2 ||
             b[1] >= c + block_size + 2;
    });
    if (!clear) continue;
    placed.push_back({r, c});
    grid.fill_block(r, c, block_size, block_size, false);
  }
  return grid;
}

DatasetSplit generate_grid_dataset(const GridMap& grid, int trajectory_count, std::uint64_t seed,
                                   double train_fraction) {
  if (trajectory_count < 1) throw InvalidInput("trajectory_count must be positive");
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) throw InvalidInput("train_fraction must lie in (0, 1)");
  DatasetSplit split;
  split.seed = seed;
  split.complex = build_cubical_from_grid(grid);
  const auto& c = split.complex;

  int count = 0;
  const auto label = components(c, &count);
  std::vector<int> sizes(static_cast<std::size_t>(count), 0);
  for (int l : label) ++sizes[static_cast<std::size_t>(l)];
  if (count == 0) throw InvalidInput("grid has no passable cells");
  const int largest = static_cast<int>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
  std::vector<int> pool;
  for (int i = 0; i < c.node_count(); ++i)
    if (label[static_cast<std::size_t>(i)] == largest) pool.push_back(i);
  if (pool.size() < 3) throw InvalidInput("largest connected component has fewer than three cells");

  Rng rng(seed);
  std::vector<Trajectory> all;
  const long max_draws = 1000L * trajectory_count;
  for (long draws = 0; static_cast<int>(all.size()) < trajectory_count; ++draws) {
    if (draws >= max_draws) throw InvalidInput("too many short paths; grid component is too small");
    const int a = pick(pool, rng);
    const int b = pick(pool, rng);
    if (a == b) continue;
    auto walk = bfs_path(c, a, b);
    if (walk.size() < 3) continue;
    all.push_back(split_target(std::move(walk), -1));
  }
  shuffle_into(split, std::move(all), train_fraction, rng);
  return split;
}

}  // namespace scone
