#pragma once

#include <Eigen/SparseCore>
#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "scone/complex.hpp"
#include "scone/grid_map.hpp"
#include "scone/hodge.hpp"

namespace scone {

/// Input walk plus the held-out next node.
struct Trajectory {
  std::vector<int> nodes;
  int target = -1;
  int region = -1;  // index of the middle waypoint box, -1 when not applicable

  int last() const { return nodes.back(); }
  bool operator==(const Trajectory&) const = default;
};

enum class Manipulation { standard, reversed, transfer, manual_orientation };

const char* to_string(Manipulation m);
Manipulation manipulation_from_string(std::string_view name);

struct DatasetSplit {
  OrientedComplex2 complex;
  std::vector<Trajectory> train;
  std::vector<Trajectory> test;
  std::vector<Manipulation> manipulations;  // applied in order; empty means standard
  std::uint64_t seed = 0;

  /// "standard", or the applied manipulations joined by '+'.
  std::string manipulation_tag() const;
  bool operator==(const DatasetSplit&) const = default;
};

struct Box {
  double x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;
  bool contains(const Point2& p) const { return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1; }
  bool operator==(const Box&) const = default;
};

struct SynthConfig {
  int point_count = 400;
  std::array<Box, 2> holes{Box{0.2, 0.4, 0.4, 0.7}, Box{0.55, 0.8, 0.2, 0.45}};
  Box start{0.0, 0.15, 0.0, 0.15};
  std::array<Box, 3> middle{Box{0.0, 0.25, 0.75, 1.0}, Box{0.4, 0.6, 0.4, 0.6}, Box{0.75, 1.0, 0.0, 0.25}};
  Box end{0.85, 1.0, 0.85, 1.0};
  int trajectory_count = 1000;
  double train_fraction = 0.8;
  std::uint64_t seed = 1;
  int max_attempts = 50;  // point sets drawn until the complex has one component and two holes

  void validate() const;
};

/// Indicator sum of the oriented edges walked by `nodes`: +1 forward, -1 backward.
Eigen::SparseVector<double> lift_path(const OrientedComplex2& c, std::span<const int> nodes);
Chain lift_trajectory(const OrientedComplex2& c, const Trajectory& t);

/// Throws InvalidInput when a hop is not an edge, the target is not a
/// neighbor of the last node, or the walk has fewer than two nodes.
void validate_trajectory(const OrientedComplex2& c, const Trajectory& t);
void validate_split(const DatasetSplit& split);

/// Euclidean-weight shortest path; among equal distances the lowest node id
/// is settled first and earlier predecessors are kept.
std::vector<int> dijkstra_path(const OrientedComplex2& c, int from, int to);
/// Hop-count shortest path, neighbors expanded in ascending id order.
std::vector<int> bfs_path(const OrientedComplex2& c, int from, int to);

/// Random points, triangulated, with every node inside a hole removed
/// together with its incident simplices. Nodes keep their relative order.
OrientedComplex2 synthetic_complex(const SynthConfig& cfg, std::uint64_t seed);

DatasetSplit generate_synthetic(const SynthConfig& cfg);

/// Returns a copy with one more manipulation applied.
///   reversed            test walks run backwards; the old start becomes the target
///   transfer            train = region 0 walks, test = region 2 walks, from both sets
///   manual_orientation  edges point toward increasing x + y
DatasetSplit manipulate(const DatasetSplit& split, Manipulation mode);

/// Reverses the full walk (nodes and target).
Trajectory reverse_trajectory(const Trajectory& t);

/// Open grid with `blocks` square obstacles of side `block_size`, placed at
/// random and kept two cells away from each other and from the border.
GridMap obstacle_grid(int rows, int cols, int blocks, int block_size, std::uint64_t seed);

/// Shortest paths between random distinct nodes of the largest connected
/// component of the grid's cubical complex. Paths with fewer than three
/// nodes are redrawn.
DatasetSplit generate_grid_dataset(const GridMap& grid, int trajectory_count, std::uint64_t seed,
                                   double train_fraction = 0.8);

/// JSON dataset file, one complex cell or trajectory per line. Trajectories
/// are stored as node arrays with the target last.
std::string format_split(const DatasetSplit& split);
DatasetSplit parse_split(std::string_view text);
void save_split(const DatasetSplit& split, const std::filesystem::path& path);
DatasetSplit load_split(const std::filesystem::path& path);

}  // namespace scone
