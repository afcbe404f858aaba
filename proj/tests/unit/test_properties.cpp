#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "scone/admissibility.hpp"
#include "scone/baselines.hpp"
#include "scone/hodge.hpp"
#include "scone/model.hpp"

using namespace scone;

namespace {

std::vector<OrientedComplex2> sample_complexes(int count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<OrientedComplex2> out;
  for (int i = 0; i < count; ++i) {
    out.push_back(oracle::random_simplicial(rng, 20));
    out.push_back(build_cubical_from_grid(oracle::random_grid(rng, 6)));
  }
  return out;
}

}  // namespace

TEST(Property, BoundaryOfBoundaryIsZero) {
  for (const auto& c : sample_complexes(25, 1)) {
    const Eigen::MatrixXi b1 = oracle::dense_b1(c), b2 = oracle::dense_b2(c);
    if (c.face_count() > 0) EXPECT_TRUE((b1 * b2).isZero());
    for (Eigen::Index e = 0; e < b1.cols(); ++e) {
      EXPECT_EQ(b1.col(e).sum(), 0);
      EXPECT_EQ(b1.col(e).cwiseAbs().sum(), 2);
    }
    for (Eigen::Index f = 0; f < b2.cols(); ++f)
      EXPECT_EQ(b2.col(f).cwiseAbs().sum(), c.faces()[static_cast<std::size_t>(f)].size);
  }
}

TEST(Property, NeighborhoodsMatchBruteForce) {
  for (const auto& c : sample_complexes(25, 2))
    for (int i = 0; i < c.node_count(); ++i) EXPECT_EQ(neighborhood(c, i), oracle::brute_neighbors(c, i));
}

TEST(Property, RelabelingCommutesWithConstruction) {
  Rng rng(3);
  for (const auto& c : sample_complexes(15, 3)) {
    const auto p = PermutationSet::random(c, rng);
    std::vector<Edge> edges(c.edges().size());
    for (std::size_t e = 0; e < edges.size(); ++e) {
      const auto& old = c.edges()[e];
      edges[static_cast<std::size_t>(p.p1[e])] = {p.p0[static_cast<std::size_t>(old.tail)],
                                                  p.p0[static_cast<std::size_t>(old.head)]};
    }
    std::vector<Face> faces(c.faces().size());
    for (std::size_t f = 0; f < faces.size(); ++f) {
      Face nf = c.faces()[f];
      for (int k = 0; k < nf.size; ++k)
        nf.v[static_cast<std::size_t>(k)] = p.p0[static_cast<std::size_t>(nf.v[static_cast<std::size_t>(k)])];
      faces[static_cast<std::size_t>(p.p2[f])] = nf;
    }
    std::vector<Point2> coords(c.coords().size());
    for (std::size_t i = 0; i < coords.size(); ++i) coords[static_cast<std::size_t>(p.p0[i])] = c.coords()[i];
    const auto scratch = OrientedComplex2::from_cells(c.kind(), c.node_count(), edges, faces, coords);
    EXPECT_TRUE(scratch == apply_permutation(c, p));
  }
}

TEST(Property, ReorientingCommutesWithConstruction) {
  Rng rng(4);
  for (const auto& c : sample_complexes(15, 4)) {
    const auto d = OrientationFlip::random(c, rng);
    auto edges = c.edges();
    for (std::size_t e = 0; e < edges.size(); ++e)
      if (d.d1[e] < 0) std::swap(edges[e].tail, edges[e].head);
    auto faces = c.faces();
    for (std::size_t f = 0; f < faces.size(); ++f)
      if (d.d2[f] < 0) faces[f] = reversed(faces[f]);
    const auto scratch = OrientedComplex2::from_cells(c.kind(), c.node_count(), edges, faces, c.coords());
    const auto flipped = apply_orientation_flip(c, d);
    EXPECT_TRUE(scratch == flipped);
    const Eigen::MatrixXi b1 = oracle::dense_b1(c), fb1 = oracle::dense_b1(flipped);
    for (Eigen::Index e = 0; e < b1.cols(); ++e) EXPECT_EQ(fb1.col(e), d.d1[static_cast<std::size_t>(e)] * b1.col(e));
  }
}

TEST(Property, DecompositionOverThousandChains) {
  Rng rng(5);
  int chains = 0;
  while (chains < 1000) {
    const auto c = oracle::random_simplicial(rng, 30);
    if (c.edge_count() == 0) continue;
    for (int k = 0; k < 10; ++k, ++chains) {
      Eigen::VectorXd x(c.edge_count());
      for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = rng.uniform(-3, 3);
      const auto p = hodge_decompose(c, x);
      const double sq = x.squaredNorm();
      EXPECT_LE((p.gradient + p.curl + p.harmonic - x).lpNorm<Eigen::Infinity>(),
                1e-8 * (1 + x.lpNorm<Eigen::Infinity>()));
      EXPECT_LE(std::abs(p.gradient.dot(p.curl)), 1e-6 * sq);
      EXPECT_LE(std::abs(p.gradient.dot(p.harmonic)), 1e-6 * sq);
      EXPECT_LE(std::abs(p.curl.dot(p.harmonic)), 1e-6 * sq);
    }
  }
}

TEST(Property, IdentityActivationIsOrientationEquivariant) {
  Rng rng(6);
  const auto c = fixture::connected_complex(14, rng, 0.4, 0.7);
  const auto r = check_orientation_equivariance(network_chain_map(init_model(2, 3, 8, Activation::identity)), c, 30, 1e-10);
  EXPECT_TRUE(r.pass) << r.max_deviation;
}

TEST(Property, OrientationDoesNotChangeTanhPredictions) {
  Rng rng(7);
  const auto c = fixture::connected_complex(14, rng, 0.4, 0.7);
  const auto net = init_model(9, 3, 8);
  for (const auto& t : fixture::random_walks(c, 20, rng)) {
    const auto fc = apply_orientation_flip(c, OrientationFlip::random(c, rng));
    EXPECT_EQ(forward(net, c, t).prediction, forward(net, fc, t).prediction);
  }
}

TEST(Property, MarkovFitCommutesWithRelabeling) {
  SynthConfig cfg;
  cfg.trajectory_count = 200;
  const auto split = generate_synthetic(cfg);
  Rng rng(8);
  const auto p = PermutationSet::random(split.complex, rng);
  const auto map = [&](int v) { return p.p0[static_cast<std::size_t>(v)]; };
  std::vector<Trajectory> relabeled;
  for (auto t : split.train) {
    for (int& v : t.nodes) v = map(v);
    t.target = map(t.target);
    relabeled.push_back(t);
  }
  const auto fitted = markov_fit(split.train);
  MarkovModel expect;
  for (const auto& [u, next] : fitted.successors)
    for (const auto& [v, n] : next) expect.successors[map(u)][map(v)] = n;
  for (const auto& [e, n] : fitted.edge_frequency)
    expect.edge_frequency[std::minmax(map(e.first), map(e.second))] = n;
  const auto got = markov_fit(relabeled);
  EXPECT_EQ(got.successors, expect.successors);
  EXPECT_EQ(got.edge_frequency, expect.edge_frequency);
}
