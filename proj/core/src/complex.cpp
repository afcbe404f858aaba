#include "scone/complex.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <string>

#include "scone/error.hpp"
#include "scone/rng.hpp"

namespace scone {

const char* to_string(ComplexKind kind) {
  return kind == ComplexKind::simplicial ? "simplicial" : "cubical";
}

ComplexKind complex_kind_from_string(std::string_view name) {
  if (name == "simplicial") return ComplexKind::simplicial;
  if (name == "cubical") return ComplexKind::cubical;
  throw InvalidInput("unknown complex kind '" + std::string(name) + "'");
}

namespace {

std::uint64_t pair_key(int a, int b) {
  const auto lo = static_cast<std::uint64_t>(std::min(a, b));
  const auto hi = static_cast<std::uint64_t>(std::max(a, b));
  return (lo << 32) | hi;
}

// Signed edge terms of the boundary of a 2-cell.
template <typename Emit>
void face_boundary_terms(const Face& f, Emit&& emit) {
  const auto& v = f.v;
  if (f.size == 3) {
    emit(v[1], v[2], +1);
    emit(v[0], v[2], -1);
    emit(v[0], v[1], +1);
  } else {
    emit(v[0], v[1], +1);
    emit(v[1], v[2], +1);
    emit(v[2], v[3], +1);
    emit(v[0], v[3], -1);
  }
}

}  // namespace

int OrientedComplex2::cell_count(int k) const {
  switch (k) {
    case 0: return node_count_;
    case 1: return edge_count();
    case 2: return face_count();
    default: throw InvalidInput("cell order must be 0, 1 or 2, got " + std::to_string(k));
  }
}

OrientedComplex2 OrientedComplex2::from_cells(ComplexKind kind, int node_count, std::vector<Edge> edges,
                                              std::vector<Face> faces, std::vector<Point2> coords) {
  if (node_count < 0) throw InvalidInput("node count must be nonnegative");
  if (!coords.empty() && static_cast<int>(coords.size()) != node_count)
    throw InvalidInput("coordinate count " + std::to_string(coords.size()) + " does not match node count " +
                       std::to_string(node_count));
  const int face_size = kind == ComplexKind::simplicial ? 3 : 4;
  for (const auto& e : edges) {
    if (e.tail < 0 || e.head < 0 || e.tail >= node_count || e.head >= node_count)
      throw InvalidInput("edge [" + std::to_string(e.tail) + "," + std::to_string(e.head) + "] has an invalid node id");
    if (e.tail == e.head) throw InvalidInput("degenerate edge on node " + std::to_string(e.tail));
  }
  for (const auto& f : faces) {
    if (f.size != face_size)
      throw InvalidInput(std::string(to_string(kind)) + " 2-cells need " + std::to_string(face_size) + " vertices");
    for (int x : f.vertices())
      if (x < 0 || x >= node_count) throw InvalidInput("2-cell has an invalid node id " + std::to_string(x));
    std::array<int, 4> s = f.v;
    std::sort(s.begin(), s.begin() + f.size);
    if (std::adjacent_find(s.begin(), s.begin() + f.size) != s.begin() + f.size)
      throw InvalidInput("degenerate 2-cell with a repeated vertex");
  }

  OrientedComplex2 c;
  c.kind_ = kind;
  c.node_count_ = node_count;
  c.edges_ = std::move(edges);
  c.faces_ = std::move(faces);
  c.coords_ = std::move(coords);
  c.build_lookup();
  c.build_matrices();
  c.validate();
  return c;
}

void OrientedComplex2::build_lookup() {
  edge_index_.clear();
  edge_index_.reserve(edges_.size() * 2);
  neighbors_.assign(static_cast<std::size_t>(node_count_), {});
  incident_.assign(static_cast<std::size_t>(node_count_), {});
  for (int e = 0; e < edge_count(); ++e) {
    const auto& edge = edges_[static_cast<std::size_t>(e)];
    if (!edge_index_.emplace(pair_key(edge.tail, edge.head), e).second)
      throw InvalidInput("duplicate edge {" + std::to_string(edge.tail) + "," + std::to_string(edge.head) + "}");
    neighbors_[static_cast<std::size_t>(edge.tail)].push_back(edge.head);
    neighbors_[static_cast<std::size_t>(edge.head)].push_back(edge.tail);
  }
  for (int i = 0; i < node_count_; ++i) {
    auto& nb = neighbors_[static_cast<std::size_t>(i)];
    std::sort(nb.begin(), nb.end());
    auto& inc = incident_[static_cast<std::size_t>(i)];
    inc.reserve(nb.size());
    for (int j : nb) inc.push_back(edge_index_.at(pair_key(i, j)));
  }

  std::set<std::array<int, 4>> seen;
  for (const auto& f : faces_) {
    std::array<int, 4> key = f.v;
    std::sort(key.begin(), key.begin() + f.size);
    if (!seen.insert(key).second) throw InvalidInput("duplicate 2-cell");
  }
}

void OrientedComplex2::build_matrices() {
  const int m = edge_count();
  const int p = face_count();

  std::vector<Eigen::Triplet<int>> t1;
  t1.reserve(static_cast<std::size_t>(2 * m));
  for (int e = 0; e < m; ++e) {
    t1.emplace_back(edges_[static_cast<std::size_t>(e)].tail, e, -1);
    t1.emplace_back(edges_[static_cast<std::size_t>(e)].head, e, +1);
  }
  b1_.resize(node_count_, m);
  b1_.setFromTriplets(t1.begin(), t1.end());

  std::vector<Eigen::Triplet<int>> t2;
  t2.reserve(static_cast<std::size_t>(4 * p));
  for (int f = 0; f < p; ++f) {
    face_boundary_terms(faces_[static_cast<std::size_t>(f)], [&](int a, int b, int sign) {
      const auto e = find_edge(a, b);
      if (!e)
        throw InvalidInput("closure violated: 2-cell " + std::to_string(f) + " has no edge {" + std::to_string(a) +
                           "," + std::to_string(b) + "}");
      t2.emplace_back(*e, f, sign * edge_sign(*e, a, b));
    });
  }
  b2_.resize(m, p);
  b2_.setFromTriplets(t2.begin(), t2.end());

  b1_real_ = b1_.cast<double>();
  b2_real_ = b2_.cast<double>();
}

void OrientedComplex2::validate() const {
  const int expected = kind_ == ComplexKind::simplicial ? 3 : 4;
  for (int f = 0; f < face_count(); ++f) {
    int nnz = 0;
    for (IntSparse::InnerIterator it(b2_, f); it; ++it)
      if (it.value() != 0) {
        if (std::abs(it.value()) != 1) throw InvalidInput("2-cell " + std::to_string(f) + " repeats an edge");
        ++nnz;
      }
    if (nnz != expected) throw InvalidInput("2-cell " + std::to_string(f) + " has a malformed boundary");
  }
  IntSparse product = b1_ * b2_;
  product.prune(0);
  if (product.nonZeros() != 0) throw InvalidInput("boundary matrices do not compose to zero");
}

std::optional<int> OrientedComplex2::find_edge(int a, int b) const {
  const auto it = edge_index_.find(pair_key(a, b));
  if (it == edge_index_.end()) return std::nullopt;
  return it->second;
}

int OrientedComplex2::edge_sign(int edge, int a, int b) const {
  const auto& e = edges_.at(static_cast<std::size_t>(edge));
  if (e.tail == a && e.head == b) return +1;
  if (e.tail == b && e.head == a) return -1;
  throw InvalidInput("edge " + std::to_string(edge) + " does not join " + std::to_string(a) + " and " +
                     std::to_string(b));
}

std::span<const int> OrientedComplex2::neighbors(int i) const {
  if (i < 0 || i >= node_count_) throw InvalidInput("node id " + std::to_string(i) + " out of range");
  return neighbors_[static_cast<std::size_t>(i)];
}

std::span<const int> OrientedComplex2::incident_edges(int i) const {
  if (i < 0 || i >= node_count_) throw InvalidInput("node id " + std::to_string(i) + " out of range");
  return incident_[static_cast<std::size_t>(i)];
}

OrientedComplex2 OrientedComplex2::one_skeleton() const {
  return from_cells(kind_, node_count_, edges_, {}, coords_);
}

bool OrientedComplex2::operator==(const OrientedComplex2& other) const {
  return kind_ == other.kind_ && node_count_ == other.node_count_ && edges_ == other.edges_ &&
         faces_ == other.faces_ && coords_ == other.coords_;
}

OrientedComplex2 build_simplicial(int node_count, std::span<const std::array<int, 3>> triangles,
                                  std::span<const std::array<int, 2>> extra_edges, std::vector<Point2> coords) {
  auto check = [&](int x) {
    if (x < 0 || x >= node_count) throw InvalidInput("invalid node id " + std::to_string(x));
  };
  std::set<std::array<int, 2>> edge_set;
  std::set<std::array<int, 3>> tri_set;
  for (auto t : triangles) {
    for (int x : t) check(x);
    std::sort(t.begin(), t.end());
    if (t[0] == t[1] || t[1] == t[2]) throw InvalidInput("degenerate triangle with a repeated vertex");
    tri_set.insert(t);
    edge_set.insert({t[0], t[1]});
    edge_set.insert({t[0], t[2]});
    edge_set.insert({t[1], t[2]});
  }
  for (auto e : extra_edges) {
    check(e[0]);
    check(e[1]);
    if (e[0] == e[1]) throw InvalidInput("degenerate edge with a repeated vertex");
    if (e[0] > e[1]) std::swap(e[0], e[1]);
    edge_set.insert(e);
  }
  std::vector<Edge> edges;
  edges.reserve(edge_set.size());
  for (const auto& e : edge_set) edges.push_back({e[0], e[1]});
  std::vector<Face> faces;
  faces.reserve(tri_set.size());
  for (const auto& t : tri_set) faces.push_back(Face::triangle(t[0], t[1], t[2]));
  return OrientedComplex2::from_cells(ComplexKind::simplicial, node_count, std::move(edges), std::move(faces),
                                      std::move(coords));
}

std::vector<int> grid_node_ids(const GridMap& grid) {
  std::vector<int> ids(static_cast<std::size_t>(grid.rows()) * grid.cols(), -1);
  int next = 0;
  for (int r = 0; r < grid.rows(); ++r)
    for (int c = 0; c < grid.cols(); ++c)
      if (grid.passable(r, c)) ids[static_cast<std::size_t>(r) * grid.cols() + c] = next++;
  return ids;
}

OrientedComplex2 build_cubical_from_grid(const GridMap& grid) {
  if (grid.rows() <= 0 || grid.cols() <= 0) throw InvalidInput("grid must be nonempty");
  const auto ids = grid_node_ids(grid);
  auto id = [&](int r, int c) { return ids[static_cast<std::size_t>(r) * grid.cols() + c]; };

  std::vector<Point2> coords;
  std::vector<std::array<int, 2>> pairs;
  for (int r = 0; r < grid.rows(); ++r)
    for (int c = 0; c < grid.cols(); ++c) {
      if (id(r, c) < 0) continue;
      coords.push_back({static_cast<double>(c), static_cast<double>(grid.rows() - 1 - r)});
      if (c + 1 < grid.cols() && id(r, c + 1) >= 0) pairs.push_back({id(r, c), id(r, c + 1)});
      if (r + 1 < grid.rows() && id(r + 1, c) >= 0) pairs.push_back({id(r, c), id(r + 1, c)});
    }
  std::sort(pairs.begin(), pairs.end());
  std::vector<Edge> edges;
  edges.reserve(pairs.size());
  for (const auto& p : pairs) edges.push_back({p[0], p[1]});

  // A 2x2 block with four passable corners always has its four boundary edges.
  std::vector<Face> faces;
  for (int r = 0; r + 1 < grid.rows(); ++r)
    for (int c = 0; c + 1 < grid.cols(); ++c) {
      const int tl = id(r, c), tr = id(r, c + 1), bl = id(r + 1, c), br = id(r + 1, c + 1);
      if (tl < 0 || tr < 0 || bl < 0 || br < 0) continue;
      faces.push_back(Face::square(tl, bl, br, tr));
    }
  const int n = static_cast<int>(coords.size());
  return OrientedComplex2::from_cells(ComplexKind::cubical, n, std::move(edges), std::move(faces), std::move(coords));
}

std::vector<int> neighborhood(const OrientedComplex2& c, int i) {
  const auto nb = c.neighbors(i);
  return {nb.begin(), nb.end()};
}

namespace {

std::vector<int> iota_vec(int n) {
  std::vector<int> v(static_cast<std::size_t>(n));
  std::iota(v.begin(), v.end(), 0);
  return v;
}

std::vector<int> random_perm(int n, Rng& rng) {
  auto v = iota_vec(n);
  rng.shuffle(std::span<int>(v));
  return v;
}

std::vector<int> invert(const std::vector<int>& p) {
  std::vector<int> inv(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) inv[static_cast<std::size_t>(p[i])] = static_cast<int>(i);
  return inv;
}

void check_bijection(const std::vector<int>& p, int n, const char* name) {
  if (static_cast<int>(p.size()) != n)
    throw InvalidInput(std::string(name) + " has size " + std::to_string(p.size()) + ", expected " + std::to_string(n));
  std::vector<char> hit(static_cast<std::size_t>(n), 0);
  for (int x : p) {
    if (x < 0 || x >= n || hit[static_cast<std::size_t>(x)]) throw InvalidInput(std::string(name) + " is not a bijection");
    hit[static_cast<std::size_t>(x)] = 1;
  }
}

std::vector<int> random_signs(int n, Rng& rng) {
  std::vector<int> d(static_cast<std::size_t>(n));
  for (auto& x : d) x = (rng.next() >> 63) ? -1 : 1;
  return d;
}

}  // namespace

PermutationSet PermutationSet::identity(const OrientedComplex2& c) {
  return {iota_vec(c.node_count()), iota_vec(c.edge_count()), iota_vec(c.face_count())};
}

PermutationSet PermutationSet::random(const OrientedComplex2& c, Rng& rng) {
  PermutationSet p;
  p.p0 = random_perm(c.node_count(), rng);
  p.p1 = random_perm(c.edge_count(), rng);
  p.p2 = random_perm(c.face_count(), rng);
  return p;
}

PermutationSet PermutationSet::inverse() const { return {invert(p0), invert(p1), invert(p2)}; }

OrientationFlip OrientationFlip::identity(const OrientedComplex2& c) {
  return {std::vector<int>(static_cast<std::size_t>(c.edge_count()), 1),
          std::vector<int>(static_cast<std::size_t>(c.face_count()), 1)};
}

OrientationFlip OrientationFlip::random(const OrientedComplex2& c, Rng& rng) {
  return {random_signs(c.edge_count(), rng), random_signs(c.face_count(), rng)};
}

OrientedComplex2 apply_permutation(const OrientedComplex2& c, const PermutationSet& p) {
  check_bijection(p.p0, c.node_count(), "p0");
  check_bijection(p.p1, c.edge_count(), "p1");
  check_bijection(p.p2, c.face_count(), "p2");
  auto node = [&](int i) { return p.p0[static_cast<std::size_t>(i)]; };

  std::vector<Edge> edges(c.edges().size());
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto& old = c.edges()[e];
    edges[static_cast<std::size_t>(p.p1[e])] = {node(old.tail), node(old.head)};
  }
  std::vector<Face> faces(c.faces().size());
  for (std::size_t f = 0; f < faces.size(); ++f) {
    Face nf = c.faces()[f];
    for (int k = 0; k < nf.size; ++k) nf.v[static_cast<std::size_t>(k)] = node(nf.v[static_cast<std::size_t>(k)]);
    faces[static_cast<std::size_t>(p.p2[f])] = nf;
  }
  std::vector<Point2> coords;
  if (c.has_coords()) {
    coords.resize(c.coords().size());
    for (std::size_t i = 0; i < coords.size(); ++i) coords[static_cast<std::size_t>(p.p0[i])] = c.coords()[i];
  }
  return OrientedComplex2::from_cells(c.kind(), c.node_count(), std::move(edges), std::move(faces), std::move(coords));
}

Face reversed(const Face& f) {
  Face r = f;
  std::reverse(r.v.begin(), r.v.begin() + r.size);
  return r;
}

OrientedComplex2 apply_orientation_flip(const OrientedComplex2& c, const OrientationFlip& d) {
  if (static_cast<int>(d.d1.size()) != c.edge_count() || static_cast<int>(d.d2.size()) != c.face_count())
    throw InvalidInput("orientation flip size does not match the complex");
  auto check_sign = [](int s) {
    if (s != 1 && s != -1) throw InvalidInput("orientation flip entries must be +1 or -1");
  };
  std::vector<Edge> edges = c.edges();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    check_sign(d.d1[e]);
    if (d.d1[e] < 0) std::swap(edges[e].tail, edges[e].head);
  }
  std::vector<Face> faces = c.faces();
  for (std::size_t f = 0; f < faces.size(); ++f) {
    check_sign(d.d2[f]);
    if (d.d2[f] < 0) faces[f] = reversed(faces[f]);
  }
  return OrientedComplex2::from_cells(c.kind(), c.node_count(), std::move(edges), std::move(faces), c.coords());
}

}  // namespace scone
