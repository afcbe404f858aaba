#pragma once

#include <array>
#include <set>
#include <vector>

#include "scone/complex.hpp"
#include "scone/datasets.hpp"
#include "scone/rng.hpp"

namespace fixture {

using scone::OrientedComplex2;
using scone::Rng;
using scone::Trajectory;

inline OrientedComplex2 filled_triangle() {
  const std::array<std::array<int, 3>, 1> t{{{0, 1, 2}}};
  return scone::build_simplicial(3, t);
}

inline OrientedComplex2 hollow_triangle() {
  const std::array<std::array<int, 2>, 3> e{{{0, 1}, {0, 2}, {1, 2}}};
  return scone::build_simplicial(3, {}, e);
}

// Connected complex on exactly `n` nodes: a spanning path plus random chords and triangles.
inline OrientedComplex2 connected_complex(int n, Rng& rng, double chord_p = 0.35, double fill = 0.6) {
  std::set<std::array<int, 2>> edges;
  for (int i = 0; i + 1 < n; ++i) edges.insert({i, i + 1});
  for (int i = 0; i < n; ++i)
    for (int j = i + 2; j < n; ++j)
      if (rng.uniform() < chord_p) edges.insert({i, j});
  std::vector<std::array<int, 3>> tris;
  for (const auto& [i, j] : edges)
    for (int k = j + 1; k < n; ++k)
      if (edges.count({i, k}) && edges.count({j, k}) && rng.uniform() < fill) tris.push_back({i, j, k});
  std::vector<std::array<int, 2>> ev(edges.begin(), edges.end());
  return scone::build_simplicial(n, tris, ev);
}

// Random walks of 3..6 hops; the final hop becomes the target.
inline std::vector<Trajectory> random_walks(const OrientedComplex2& c, int count, Rng& rng) {
  std::vector<Trajectory> out;
  while (static_cast<int>(out.size()) < count) {
    std::vector<int> walk{static_cast<int>(rng.below(static_cast<std::uint64_t>(c.node_count())))};
    const int len = 3 + static_cast<int>(rng.below(4));
    for (int s = 0; s < len; ++s) {
      const auto nb = c.neighbors(walk.back());
      walk.push_back(nb[rng.below(nb.size())]);
    }
    const int target = walk.back();
    walk.pop_back();
    out.push_back(Trajectory{walk, target});
  }
  return out;
}

}  // namespace fixture
