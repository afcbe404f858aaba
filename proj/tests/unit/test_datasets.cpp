#include <gtest/gtest.h>

#include "oracles.hpp"
#include "scone/datasets.hpp"
#include "scone/error.hpp"
#include "scone/hodge.hpp"
#include "scone/rng.hpp"

using namespace scone;

namespace {

OrientedComplex2 filled_triangle() {
  const std::array<std::array<int, 3>, 1> t{{{0, 1, 2}}};
  return build_simplicial(3, t);
}

const DatasetSplit& default_split() {
  static const DatasetSplit split = generate_synthetic(SynthConfig{});
  return split;
}

std::vector<int> full_walk(const Trajectory& t) {
  auto w = t.nodes;
  w.push_back(t.target);
  return w;
}

}  // namespace

TEST(Lift, SmallPaths) {
  const auto c = filled_triangle();
  const std::vector<int> fwd{0, 1}, back{1, 0}, loop{0, 1, 2, 0};
  EXPECT_EQ(Eigen::VectorXd(lift_path(c, fwd)), Eigen::Vector3d(1, 0, 0));
  EXPECT_EQ(Eigen::VectorXd(lift_path(c, back)), Eigen::Vector3d(-1, 0, 0));
  EXPECT_EQ(Eigen::VectorXd(lift_path(c, loop)), Eigen::Vector3d(1, -1, 1));
  const std::vector<int> twice{0, 1, 0, 1};
  EXPECT_EQ(Eigen::VectorXd(lift_path(c, twice)), Eigen::Vector3d(1, 0, 0));
  const auto chain = lift_trajectory(c, Trajectory{{0, 1}, 2});
  EXPECT_EQ(chain.order, 1);
  EXPECT_EQ(chain.coeffs.col(0), Eigen::Vector3d(1, 0, 0));
}

TEST(Lift, RejectsNonAdjacentHops) {
  const std::array<std::array<int, 2>, 2> e{{{0, 1}, {1, 2}}};
  const auto c = build_simplicial(3, {}, e);
  const std::vector<int> bad{0, 2};
  EXPECT_THROW(lift_path(c, bad), InvalidInput);
}

TEST(ValidateTrajectory, Errors) {
  const auto c = filled_triangle();
  EXPECT_NO_THROW(validate_trajectory(c, Trajectory{{0, 1}, 2}));
  EXPECT_THROW(validate_trajectory(c, Trajectory{{0}, 1}), InvalidInput);
  EXPECT_THROW(validate_trajectory(c, Trajectory{{0, 1}, 1}), InvalidInput);
  EXPECT_THROW(validate_trajectory(c, Trajectory{{0, 7}, 1}), InvalidInput);
}

TEST(ShortestPaths, MatchBellmanFord) {
  const auto& c = default_split().complex;
  Rng rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    const int a = static_cast<int>(rng.below(static_cast<std::uint64_t>(c.node_count())));
    const int b = static_cast<int>(rng.below(static_cast<std::uint64_t>(c.node_count())));
    const auto path = dijkstra_path(c, a, b);
    ASSERT_EQ(path.front(), a);
    ASSERT_EQ(path.back(), b);
    EXPECT_NO_THROW(lift_path(c, path));
    const auto dist = oracle::bellman_ford(c, a, true);
    EXPECT_NEAR(oracle::path_length(c, path, true), dist[static_cast<std::size_t>(b)], 1e-12);
    const auto hops = bfs_path(c, a, b);
    EXPECT_NO_THROW(lift_path(c, hops));
    EXPECT_EQ(static_cast<double>(hops.size() - 1), oracle::bellman_ford(c, a, false)[static_cast<std::size_t>(b)]);
  }
}

TEST(ShortestPaths, DisconnectedPairThrows) {
  const std::array<std::array<int, 2>, 1> e{{{0, 1}}};
  const auto c = build_simplicial(3, {}, e, {{0, 0}, {1, 0}, {2, 0}});
  EXPECT_THROW(bfs_path(c, 0, 2), InvalidInput);
  EXPECT_THROW(dijkstra_path(c, 0, 2), InvalidInput);
}

TEST(Synthetic, DefaultConfig) {
  const auto& split = default_split();
  EXPECT_EQ(betti(split.complex, 1), 2);
  EXPECT_EQ(betti(split.complex, 0), 1);
  EXPECT_EQ(split.train.size(), 800u);
  EXPECT_EQ(split.test.size(), 200u);
  EXPECT_NO_THROW(validate_split(split));
  const SynthConfig cfg;
  for (const auto* set : {&split.train, &split.test})
    for (const auto& t : *set) {
      EXPECT_TRUE(cfg.start.contains(split.complex.coords()[static_cast<std::size_t>(t.nodes.front())]));
      EXPECT_TRUE(cfg.end.contains(split.complex.coords()[static_cast<std::size_t>(t.target)]));
      EXPECT_GE(t.region, 0);
      EXPECT_LE(t.region, 2);
    }
}

TEST(Synthetic, HoleNodesRemoved) {
  const auto& c = default_split().complex;
  const SynthConfig cfg;
  for (const auto& p : c.coords()) {
    EXPECT_FALSE(cfg.holes[0].contains(p));
    EXPECT_FALSE(cfg.holes[1].contains(p));
  }
}

TEST(Synthetic, Deterministic) {
  SynthConfig cfg;
  cfg.seed = 5;
  cfg.trajectory_count = 50;
  EXPECT_EQ(generate_synthetic(cfg), generate_synthetic(cfg));
  auto other = cfg;
  other.seed = 6;
  EXPECT_FALSE(generate_synthetic(cfg) == generate_synthetic(other));
}

TEST(Synthetic, SeveralSeedsHaveTwoHoles) {
  for (std::uint64_t seed = 2; seed <= 4; ++seed) {
    SynthConfig cfg;
    cfg.seed = seed;
    cfg.trajectory_count = 10;
    EXPECT_EQ(betti(generate_synthetic(cfg).complex, 1), 2) << "seed " << seed;
  }
}

TEST(Synthetic, ConfigValidation) {
  SynthConfig cfg;
  cfg.point_count = 2;
  EXPECT_THROW(generate_synthetic(cfg), InvalidInput);
  cfg = SynthConfig{};
  cfg.start = Box{0.25, 0.35, 0.45, 0.6};
  EXPECT_THROW(cfg.validate(), InvalidInput);
  cfg = SynthConfig{};
  cfg.holes[0] = Box{0.5, 1.5, 0.0, 0.1};
  EXPECT_THROW(cfg.validate(), InvalidInput);
}

TEST(Manipulate, ReversedIsAnInvolutionOnTheTestSet) {
  const auto& split = default_split();
  const auto rev = manipulate(split, Manipulation::reversed);
  EXPECT_EQ(rev.train, split.train);
  EXPECT_EQ(rev.manipulation_tag(), "reversed");
  EXPECT_NO_THROW(validate_split(rev));
  for (std::size_t i = 0; i < split.test.size(); ++i) {
    EXPECT_EQ(rev.test[i].target, split.test[i].nodes.front());
    EXPECT_EQ(rev.test[i].nodes.front(), split.test[i].target);
  }
  EXPECT_EQ(manipulate(rev, Manipulation::reversed).test, split.test);
}

TEST(Manipulate, ReversalNegatesTheLift) {
  const auto& split = default_split();
  for (const auto& t : split.test) {
    const auto r = reverse_trajectory(t);
    const Eigen::VectorXd a = Eigen::VectorXd(lift_path(split.complex, full_walk(t)));
    const Eigen::VectorXd b = Eigen::VectorXd(lift_path(split.complex, full_walk(r)));
    EXPECT_EQ(a, -b);
  }
}

TEST(Manipulate, TransferUsesOuterRegions) {
  const auto tr = manipulate(default_split(), Manipulation::transfer);
  EXPECT_NEAR(static_cast<double>(tr.train.size()), 333.0, 60.0);
  EXPECT_NEAR(static_cast<double>(tr.test.size()), 333.0, 60.0);
  for (const auto& t : tr.train) EXPECT_EQ(t.region, 0);
  for (const auto& t : tr.test) EXPECT_EQ(t.region, 2);
}

TEST(Manipulate, ManualOrientationMakesFlowsNonnegative) {
  const auto& split = default_split();
  const auto m = manipulate(split, Manipulation::manual_orientation);
  EXPECT_EQ(m.train, split.train);
  const auto& c = m.complex;
  for (const auto& e : c.edges()) {
    const auto& p = c.coords()[static_cast<std::size_t>(e.tail)];
    const auto& q = c.coords()[static_cast<std::size_t>(e.head)];
    EXPECT_LE(p.x + p.y, q.x + q.y);
  }
  long nonneg = 0, total = 0;
  for (const auto& t : m.train) {
    const auto x = lift_path(c, t.nodes);
    for (Eigen::SparseVector<double>::InnerIterator it(x); it; ++it) {
      ++total;
      nonneg += it.value() >= 0;
    }
  }
  EXPECT_GE(static_cast<double>(nonneg), 0.95 * static_cast<double>(total));
  EXPECT_EQ(betti(c, 1), 2);
}

TEST(Grid, OpenGridPaths) {
  const auto split = generate_grid_dataset(GridMap(10, 10), 100, 3);
  EXPECT_EQ(split.train.size(), 80u);
  EXPECT_EQ(split.test.size(), 20u);
  EXPECT_NO_THROW(validate_split(split));
  const auto& c = split.complex;
  for (const auto& t : split.train) {
    const auto walk = full_walk(t);
    const auto dist = oracle::bellman_ford(c, walk.front(), false);
    EXPECT_EQ(static_cast<double>(walk.size() - 1), dist[static_cast<std::size_t>(walk.back())]);
  }
}

TEST(Grid, ObstacleGridHoles) {
  const auto g = obstacle_grid(30, 30, 3, 5, 1);
  int blocked = 0;
  for (int r = 0; r < 30; ++r)
    for (int c = 0; c < 30; ++c) blocked += !g.passable(r, c);
  EXPECT_EQ(blocked, 75);
  EXPECT_EQ(betti(build_cubical_from_grid(g), 1), 3);
  EXPECT_EQ(obstacle_grid(30, 30, 3, 5, 1), g);
  EXPECT_THROW(obstacle_grid(5, 5, 3, 5, 1), InvalidInput);
}

TEST(Grid, UsesLargestComponent) {
  GridMap g(5, 7);
  for (int r = 0; r < 5; ++r) g.set_passable(r, 2, false);
  const auto split = generate_grid_dataset(g, 40, 2);
  const auto ids = grid_node_ids(g);
  for (const auto& t : split.train)
    for (int v : full_walk(t))
      for (int r = 0; r < 5; ++r)
        for (int col = 0; col < 2; ++col) EXPECT_NE(v, ids[static_cast<std::size_t>(r * 7 + col)]);
}

TEST(DatasetIo, RoundTrip) {
  SynthConfig cfg;
  cfg.trajectory_count = 40;
  const auto split = manipulate(generate_synthetic(cfg), Manipulation::reversed);
  EXPECT_EQ(parse_split(format_split(split)), split);
  const auto grid = generate_grid_dataset(GridMap(6, 6), 20, 4);
  EXPECT_EQ(parse_split(format_split(grid)), grid);
}

TEST(DatasetIo, TruncatedFileNamesTheLine) {
  SynthConfig cfg;
  cfg.trajectory_count = 20;
  const std::string text = format_split(generate_synthetic(cfg));
  const std::string cut = text.substr(0, text.size() / 2);
  const auto lines = static_cast<std::size_t>(std::count(cut.begin(), cut.end(), '\n'));
  try {
    parse_split(cut);
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_GE(e.line(), lines);
    EXPECT_LE(e.line(), lines + 1);
  }
}

TEST(DatasetIo, RejectsInvalidTrajectories) {
  SynthConfig cfg;
  cfg.trajectory_count = 20;
  auto split = generate_synthetic(cfg);
  int far = 0;
  const int first = split.train[0].nodes.front();
  while (far == first || split.complex.find_edge(first, far)) ++far;
  split.train[0].nodes.insert(split.train[0].nodes.begin() + 1, far);
  try {
    parse_split(format_split(split));
    FAIL() << "expected a validation error";
  } catch (const InvalidInput& e) {
    EXPECT_NE(std::string(e.what()).find("train[0]"), std::string::npos) << e.what();
  }
}
