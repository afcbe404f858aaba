#include <benchmark/benchmark.h>

#include "scone/datasets.hpp"
#include "scone/delaunay.hpp"
#include "scone/model.hpp"
#include "scone/rng.hpp"
#include "scone/train.hpp"

namespace {

using namespace scone;

// Delaunay mesh of `points` random points keeping the first `faces` triangles.
// Every triangle edge stays, so node and edge counts do not depend on `faces`.
OrientedComplex2 mesh(int points, int faces) {
  Rng rng(7);
  std::vector<Point2> pts(static_cast<std::size_t>(points));
  for (auto& p : pts) p = {rng.uniform(), rng.uniform()};
  const auto tris = delaunay(pts);
  std::vector<std::array<int, 2>> edges;
  for (const auto& t : tris)
    for (int k = 0; k < 3; ++k) edges.push_back({t[static_cast<std::size_t>(k)], t[static_cast<std::size_t>((k + 1) % 3)]});
  const auto kept = std::span(tris).first(std::min<std::size_t>(tris.size(), static_cast<std::size_t>(faces)));
  return build_simplicial(points, kept, edges, pts);
}

void BM_SconeLayerFaces(benchmark::State& state) {
  const auto c = mesh(2000, static_cast<int>(state.range(0)));
  Rng rng(3);
  Eigen::MatrixXd x(c.edge_count(), 16);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = rng.uniform(-1, 1);
  const Eigen::MatrixXd w = Eigen::MatrixXd::Constant(16, 16, 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(scone_layer(c, x, w, w, w, Activation::tanh));
  state.counters["faces"] = c.face_count();
  state.counters["edges"] = c.edge_count();
}
BENCHMARK(BM_SconeLayerFaces)->Arg(500)->Arg(1000)->Arg(2000)->Arg(4000)->Unit(benchmark::kMicrosecond);

void BM_SconeLayerPoints(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto c = mesh(n, 4 * n);
  Eigen::MatrixXd x = Eigen::MatrixXd::Ones(c.edge_count(), 16);
  const Eigen::MatrixXd w = Eigen::MatrixXd::Constant(16, 16, 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(scone_layer(c, x, w, w, w, Activation::tanh));
  state.SetComplexityN(c.edge_count());
}
BENCHMARK(BM_SconeLayerPoints)->RangeMultiplier(2)->Range(250, 4000)->Complexity()->Unit(benchmark::kMicrosecond);

void BM_TrainEpoch(benchmark::State& state) {
  SynthConfig cfg;
  cfg.trajectory_count = static_cast<int>(state.range(0));
  const auto split = generate_synthetic(cfg);
  TrainConfig tcfg;
  tcfg.epochs = 1;
  tcfg.eval_every = 0;
  for (auto _ : state) benchmark::DoNotOptimize(train(init_model(1), split.complex, split.train, {}, tcfg));
}
BENCHMARK(BM_TrainEpoch)->Arg(250)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_Delaunay(benchmark::State& state) {
  Rng rng(5);
  std::vector<Point2> pts(static_cast<std::size_t>(state.range(0)));
  for (auto& p : pts) p = {rng.uniform(), rng.uniform()};
  for (auto _ : state) benchmark::DoNotOptimize(delaunay(pts));
}
BENCHMARK(BM_Delaunay)->Arg(400)->Arg(1600)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
