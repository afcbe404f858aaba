#include <gtest/gtest.h>

#include <set>

#include "oracles.hpp"
#include "scone/delaunay.hpp"
#include "scone/error.hpp"
#include "scone/rng.hpp"

using namespace scone;

namespace {

std::vector<Point2> random_points(int n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Point2> p(static_cast<std::size_t>(n));
  for (auto& q : p) q = {rng.uniform(), rng.uniform()};
  return p;
}

// Brute force: no input point strictly inside any circumcircle.
void expect_empty_circumcircles(const std::vector<Point2>& p, const std::vector<std::array<int, 3>>& tris) {
  for (const auto& t : tris) {
    const auto& a = p[static_cast<std::size_t>(t[0])];
    const auto& b = p[static_cast<std::size_t>(t[1])];
    const auto& c = p[static_cast<std::size_t>(t[2])];
    ASSERT_GT(orient2d(a, b, c), 0.0);
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (static_cast<int>(i) == t[0] || static_cast<int>(i) == t[1] || static_cast<int>(i) == t[2]) continue;
      EXPECT_LE(incircle(a, b, c, p[i]), 1e-10);
    }
  }
}

}  // namespace

TEST(Delaunay, SingleTriangle) {
  const std::vector<Point2> p{{0, 0}, {1, 0}, {0, 1}};
  const auto tris = delaunay(p);
  ASSERT_EQ(tris.size(), 1u);
  std::array<int, 3> t = tris[0];
  std::sort(t.begin(), t.end());
  EXPECT_EQ(t, (std::array<int, 3>{0, 1, 2}));
}

TEST(Delaunay, UnitSquareHasTwoTriangles) {
  const std::vector<Point2> p{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  const auto tris = delaunay(p);
  ASSERT_EQ(tris.size(), 2u);
  // Either diagonal is Delaunay for cocircular points; both triangles share it.
  std::set<std::pair<int, int>> edges;
  int shared = 0;
  for (const auto& t : tris)
    for (int k = 0; k < 3; ++k) {
      auto e = std::minmax(t[static_cast<std::size_t>(k)], t[static_cast<std::size_t>((k + 1) % 3)]);
      if (!edges.insert(e).second) ++shared;
    }
  EXPECT_EQ(shared, 1);
  expect_empty_circumcircles(p, tris);
}

TEST(Delaunay, RandomPointsSatisfyEulerAndEmptyCircles) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto p = random_points(50, seed);
    const auto tris = delaunay(p);
    const auto hull = oracle::gift_wrap(p);
    EXPECT_EQ(tris.size(), 2 * p.size() - 2 - hull.size());
    expect_empty_circumcircles(p, tris);
  }
}

TEST(Delaunay, CoversTheHull) {
  const auto p = random_points(200, 9);
  const auto tris = delaunay(p);
  double area = 0.0;
  for (const auto& t : tris)
    area += 0.5 * orient2d(p[static_cast<std::size_t>(t[0])], p[static_cast<std::size_t>(t[1])],
                           p[static_cast<std::size_t>(t[2])]);
  const auto hull = oracle::gift_wrap(p);
  double hull_area = 0.0;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const auto& a = p[static_cast<std::size_t>(hull[i])];
    const auto& b = p[static_cast<std::size_t>(hull[(i + 1) % hull.size()])];
    hull_area += 0.5 * (a.x * b.y - a.y * b.x);
  }
  EXPECT_NEAR(area, hull_area, 1e-12);
}

TEST(Delaunay, RejectsDegenerateInput) {
  EXPECT_THROW(delaunay(std::vector<Point2>{{0, 0}, {1, 1}}), InvalidInput);
  EXPECT_THROW(delaunay(std::vector<Point2>{{0, 0}, {1, 1}, {2, 2}, {3, 3}}), InvalidInput);
  EXPECT_THROW(delaunay(std::vector<Point2>{{0, 0}, {1, 0}, {0, 0}}), InvalidInput);
}
