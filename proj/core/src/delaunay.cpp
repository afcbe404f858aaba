#include "scone/delaunay.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "scone/error.hpp"

namespace scone {

double orient2d(const Point2& a, const Point2& b, const Point2& c) {
  return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

double incircle(const Point2& a, const Point2& b, const Point2& c, const Point2& d) {
  const double adx = a.x - d.x, ady = a.y - d.y;
  const double bdx = b.x - d.x, bdy = b.y - d.y;
  const double cdx = c.x - d.x, cdy = c.y - d.y;
  const double alift = adx * adx + ady * ady;
  const double blift = bdx * bdx + bdy * bdy;
  const double clift = cdx * cdx + cdy * cdy;
  return alift * (bdx * cdy - bdy * cdx) - blift * (adx * cdy - ady * cdx) + clift * (adx * bdy - ady * bdx);
}

namespace {

constexpr double kInCircleTol = 1e-12;

using Tri = std::array<int, 3>;

std::pair<int, int> undirected(int a, int b) { return {std::min(a, b), std::max(a, b)}; }

bool strictly_inside(const std::vector<Point2>& pts, const Tri& t, int q) {
  const auto& a = pts[static_cast<std::size_t>(t[0])];
  const auto& b = pts[static_cast<std::size_t>(t[1])];
  const auto& c = pts[static_cast<std::size_t>(t[2])];
  const auto& p = pts[static_cast<std::size_t>(q)];
  return orient2d(a, b, p) > 0 && orient2d(b, c, p) > 0 && orient2d(c, a, p) > 0;
}

// Boundary edges (used by one triangle), directed so the triangle lies on the left.
std::map<int, int> boundary_successor(const std::vector<Tri>& tris) {
  std::map<std::pair<int, int>, int> count;
  for (const auto& t : tris)
    for (int k = 0; k < 3; ++k) ++count[undirected(t[static_cast<std::size_t>(k)], t[static_cast<std::size_t>((k + 1) % 3)])];
  std::map<int, int> next;
  for (const auto& t : tris)
    for (int k = 0; k < 3; ++k) {
      const int a = t[static_cast<std::size_t>(k)], b = t[static_cast<std::size_t>((k + 1) % 3)];
      if (count[undirected(a, b)] == 1) next[a] = b;
    }
  return next;
}

// Adds counter-clockwise ears wherever the boundary turns right.
void fill_hull_notches(const std::vector<Point2>& pts, std::vector<Tri>& tris) {
  for (bool changed = true; changed;) {
    changed = false;
    const auto next = boundary_successor(tris);
    for (const auto& [a, b] : next) {
      const auto it = next.find(b);
      if (it == next.end()) continue;
      const int c = it->second;
      if (c == a) continue;
      const auto& pa = pts[static_cast<std::size_t>(a)];
      const auto& pb = pts[static_cast<std::size_t>(b)];
      const auto& pc = pts[static_cast<std::size_t>(c)];
      if (orient2d(pa, pb, pc) >= -1e-14) continue;
      const Tri ear{a, c, b};
      bool empty = true;
      for (int q = 0; q < static_cast<int>(pts.size()) && empty; ++q)
        if (q != a && q != b && q != c && strictly_inside(pts, ear, q)) empty = false;
      if (!empty) continue;
      tris.push_back(ear);
      changed = true;
      break;
    }
  }
}

// Lawson flips until every interior edge is locally Delaunay.
void legalize(const std::vector<Point2>& pts, std::vector<Tri>& tris) {
  for (bool flipped = true; flipped;) {
    flipped = false;
    std::map<std::pair<int, int>, std::vector<int>> owners;
    for (int i = 0; i < static_cast<int>(tris.size()); ++i)
      for (int k = 0; k < 3; ++k)
        owners[undirected(tris[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)],
                          tris[static_cast<std::size_t>(i)][static_cast<std::size_t>((k + 1) % 3)])]
            .push_back(i);
    for (const auto& [edge, ts] : owners) {
      if (ts.size() != 2) continue;
      auto& t1 = tris[static_cast<std::size_t>(ts[0])];
      auto& t2 = tris[static_cast<std::size_t>(ts[1])];
      auto opposite = [&](const Tri& t) {
        for (int v : t)
          if (v != edge.first && v != edge.second) return v;
        return -1;
      };
      const int d = opposite(t2);
      const auto& P = [&](int v) -> const Point2& { return pts[static_cast<std::size_t>(v)]; };
      if (incircle(P(t1[0]), P(t1[1]), P(t1[2]), P(d)) <= kInCircleTol) continue;
      const int c = opposite(t1);
      // t1 = (a, b, c) counter-clockwise with edge (a, b); rebuild as (c, a, d) and (c, d, b).
      int a = -1, b = -1;
      for (int k = 0; k < 3; ++k)
        if (t1[static_cast<std::size_t>(k)] == c) {
          a = t1[static_cast<std::size_t>((k + 1) % 3)];
          b = t1[static_cast<std::size_t>((k + 2) % 3)];
        }
      if (orient2d(P(c), P(a), P(d)) <= 0 || orient2d(P(c), P(d), P(b)) <= 0) continue;
      t1 = {c, a, d};
      t2 = {c, d, b};
      flipped = true;
      break;
    }
  }
}

}  // namespace

std::vector<std::array<int, 3>> delaunay(std::span<const Point2> points) {
  const int n = static_cast<int>(points.size());
  if (n < 3) throw InvalidInput("delaunay needs at least 3 points");
  {
    std::set<std::pair<double, double>> seen;
    for (const auto& p : points)
      if (!seen.emplace(p.x, p.y).second) throw InvalidInput("delaunay input contains repeated points");
  }
  double min_x = points[0].x, max_x = min_x, min_y = points[0].y, max_y = min_y;
  for (const auto& p : points) {
    min_x = std::min(min_x, p.x);
    max_x = std::max(max_x, p.x);
    min_y = std::min(min_y, p.y);
    max_y = std::max(max_y, p.y);
  }
  const double extent = std::max(max_x - min_x, max_y - min_y);
  bool collinear = true;
  for (int i = 2; i < n && collinear; ++i)
    if (std::abs(orient2d(points[0], points[1], points[static_cast<std::size_t>(i)])) > 1e-12 * extent * extent)
      collinear = false;
  if (collinear) throw InvalidInput("delaunay input points are all collinear");

  std::vector<Point2> pts(points.begin(), points.end());
  const double cx = 0.5 * (min_x + max_x), cy = 0.5 * (min_y + max_y);
  const double r = 20.0 * extent;
  pts.push_back({cx - 2 * r, cy - r});
  pts.push_back({cx + 2 * r, cy - r});
  pts.push_back({cx, cy + 2 * r});

  std::vector<Tri> tris{{n, n + 1, n + 2}};
  for (int p = 0; p < n; ++p) {
    const auto& q = pts[static_cast<std::size_t>(p)];
    std::vector<Tri> kept;
    std::map<std::pair<int, int>, int> edge_use;
    std::vector<std::pair<int, int>> directed;
    kept.reserve(tris.size() + 2);
    for (const auto& t : tris) {
      const auto& a = pts[static_cast<std::size_t>(t[0])];
      const auto& b = pts[static_cast<std::size_t>(t[1])];
      const auto& c = pts[static_cast<std::size_t>(t[2])];
      if (incircle(a, b, c, q) > 0) {
        for (int k = 0; k < 3; ++k) {
          const int u = t[static_cast<std::size_t>(k)], v = t[static_cast<std::size_t>((k + 1) % 3)];
          ++edge_use[undirected(u, v)];
          directed.emplace_back(u, v);
        }
      } else {
        kept.push_back(t);
      }
    }
    for (const auto& [u, v] : directed)
      if (edge_use[undirected(u, v)] == 1) kept.push_back({u, v, p});
    tris = std::move(kept);
  }

  std::vector<Tri> result;
  for (const auto& t : tris)
    if (t[0] < n && t[1] < n && t[2] < n) result.push_back(t);
  pts.resize(static_cast<std::size_t>(n));
  fill_hull_notches(pts, result);
  legalize(pts, result);
  std::sort(result.begin(), result.end());
  return result;
}

}  // namespace scone
