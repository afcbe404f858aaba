#pragma once

#include <Eigen/SparseCore>
#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "scone/grid_map.hpp"

namespace scone {

class Rng;

enum class ComplexKind { simplicial, cubical };

const char* to_string(ComplexKind kind);
ComplexKind complex_kind_from_string(std::string_view name);

/// Integer boundary matrix, compressed-column storage.
using IntSparse = Eigen::SparseMatrix<int, Eigen::ColMajor>;
using RealSparse = Eigen::SparseMatrix<double, Eigen::ColMajor>;

struct Point2 {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Point2&) const = default;
};

/// An oriented 1-cell: the basis element [tail, head].
struct Edge {
  int tail = 0;
  int head = 0;
  bool operator==(const Edge&) const = default;
};

/// An oriented 2-cell. Triangles use the first three slots, squares all four.
/// For squares the vertices are listed in cyclic order.
struct Face {
  std::array<int, 4> v{-1, -1, -1, -1};
  int size = 0;

  static Face triangle(int a, int b, int c) { return Face{{a, b, c, -1}, 3}; }
  static Face square(int a, int b, int c, int d) { return Face{{a, b, c, d}, 4}; }
  std::span<const int> vertices() const { return {v.data(), static_cast<std::size_t>(size)}; }
  bool operator==(const Face&) const = default;
};

/// A 2-dimensional simplicial or cubical complex with a fixed oriented basis
/// on every level and its integer boundary matrices.
///
/// Immutable once built. All constructors go through `from_cells`, which
/// validates closure under restriction, the column structure of both boundary
/// matrices and b1 * b2 == 0.
class OrientedComplex2 {
 public:
  OrientedComplex2() = default;

  /// Builds from explicitly oriented cells; cell order is the basis order.
  static OrientedComplex2 from_cells(ComplexKind kind, int node_count, std::vector<Edge> edges,
                                     std::vector<Face> faces, std::vector<Point2> coords = {});

  ComplexKind kind() const noexcept { return kind_; }
  int node_count() const noexcept { return node_count_; }
  int edge_count() const noexcept { return static_cast<int>(edges_.size()); }
  int face_count() const noexcept { return static_cast<int>(faces_.size()); }
  /// |X_k| for k in {0, 1, 2}.
  int cell_count(int k) const;

  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const std::vector<Face>& faces() const noexcept { return faces_; }
  const std::vector<Point2>& coords() const noexcept { return coords_; }
  bool has_coords() const noexcept { return !coords_.empty(); }

  const IntSparse& b1() const noexcept { return b1_; }
  const IntSparse& b2() const noexcept { return b2_; }
  const RealSparse& b1_real() const noexcept { return b1_real_; }
  const RealSparse& b2_real() const noexcept { return b2_real_; }

  /// Index of the edge joining a and b, regardless of its stored orientation.
  std::optional<int> find_edge(int a, int b) const;
  /// +1 when the stored basis element is [a, b], -1 when it is [b, a].
  int edge_sign(int edge, int a, int b) const;

  /// Ascending neighbor ids of node i.
  std::span<const int> neighbors(int i) const;
  /// Edge indices incident to node i, ordered by the far endpoint id.
  std::span<const int> incident_edges(int i) const;

  /// Same nodes and edges, no 2-cells.
  OrientedComplex2 one_skeleton() const;

  /// Entrywise equality of cells, orientation and coordinates.
  bool operator==(const OrientedComplex2& other) const;

 private:
  void build_lookup();
  void build_matrices();
  void validate() const;

  ComplexKind kind_ = ComplexKind::simplicial;
  int node_count_ = 0;
  std::vector<Edge> edges_;
  std::vector<Face> faces_;
  std::vector<Point2> coords_;
  IntSparse b1_;
  IntSparse b2_;
  RealSparse b1_real_;
  RealSparse b2_real_;
  std::unordered_map<std::uint64_t, int> edge_index_;
  std::vector<std::vector<int>> neighbors_;
  std::vector<std::vector<int>> incident_;
};

/// Simplicial complex from triangles plus any extra edges. Simplices are
/// oriented by increasing node label and sorted lexicographically.
OrientedComplex2 build_simplicial(int node_count, std::span<const std::array<int, 3>> triangles,
                                  std::span<const std::array<int, 2>> extra_edges = {},
                                  std::vector<Point2> coords = {});

/// Cubical complex of a grid map. Nodes are passable cells numbered row-major,
/// edges join 4-adjacent passable cells, and every fully passable 2x2 block
/// becomes a square oriented counter-clockwise (rows drawn top to bottom)
/// starting from its lowest-id corner: [top-left, bottom-left, bottom-right, top-right].
/// Coordinates are (column, rows - 1 - row).
OrientedComplex2 build_cubical_from_grid(const GridMap& grid);

/// Node ids of passable cells in row-major order, -1 for blocked cells.
std::vector<int> grid_node_ids(const GridMap& grid);

/// N(i): ascending ids of nodes sharing an edge with i.
std::vector<int> neighborhood(const OrientedComplex2& c, int i);

/// Relabelings of nodes, edges and 2-cells. `p_k[old] = new`.
struct PermutationSet {
  std::vector<int> p0, p1, p2;

  static PermutationSet identity(const OrientedComplex2& c);
  static PermutationSet random(const OrientedComplex2& c, Rng& rng);
  PermutationSet inverse() const;
};

/// Orientation changes of edges and 2-cells. Nodes are never flipped.
struct OrientationFlip {
  std::vector<int> d1, d2;

  static OrientationFlip identity(const OrientedComplex2& c);
  static OrientationFlip random(const OrientedComplex2& c, Rng& rng);
};

/// b1' = P0 b1 P1^T, b2' = P1 b2 P2^T; cells and coordinates move with their labels.
OrientedComplex2 apply_permutation(const OrientedComplex2& c, const PermutationSet& p);

/// b1' = b1 D1, b2' = D1 b2 D2; flipped cells are stored reversed.
OrientedComplex2 apply_orientation_flip(const OrientedComplex2& c, const OrientationFlip& d);

/// Orientation-preserving reversal of a 2-cell's vertex list.
Face reversed(const Face& f);

}  // namespace scone
