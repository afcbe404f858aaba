#include "scone/train.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "scone/error.hpp"
#include "scone/rng.hpp"

namespace scone {

void TrainConfig::validate() const {
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) throw InvalidInput("learning_rate must be nonnegative");
  if (epochs < 1) throw InvalidInput("epochs must be at least 1");
  if (!(weight_decay >= 0.0)) throw InvalidInput("weight_decay must be nonnegative");
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) throw InvalidInput("Adam betas must lie in [0, 1)");
  if (!(epsilon > 0.0)) throw InvalidInput("epsilon must be positive");
  if (batch_size < 0) throw InvalidInput("batch_size must be nonnegative");
  if (eval_every < 0) throw InvalidInput("eval_every must be nonnegative");
}

AdamState AdamState::for_network(const Network& net) {
  AdamState s;
  for (const auto& w : net.weights) {
    s.m.push_back(Eigen::MatrixXd::Zero(w.rows(), w.cols()));
    s.v.push_back(Eigen::MatrixXd::Zero(w.rows(), w.cols()));
  }
  return s;
}

void AdamState::update(Network& net, const std::vector<Eigen::MatrixXd>& grads, const TrainConfig& cfg) {
  ++step;
  const double c1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(step));
  const double c2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(step));
  for (std::size_t i = 0; i < net.weights.size(); ++i) {
    m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * grads[i];
    v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * grads[i].cwiseProduct(grads[i]);
    net.weights[i].array() -=
        cfg.learning_rate * (m[i].array() / c1) / ((v[i].array() / c2).sqrt() + cfg.epsilon);
  }
}

std::vector<PreparedSample> prepare_samples(StencilCache& cache, const OrientedComplex2& c,
                                            std::span<const Trajectory> ts) {
  std::vector<PreparedSample> out;
  out.reserve(ts.size());
  for (const auto& t : ts) {
    validate_trajectory(c, t);
    out.push_back(prepare_sample(cache, lift_path(c, t.nodes), t.last(), t.target));
  }
  return out;
}

LossAndGrads loss_and_grads(const Network& net, StencilCache& cache, std::span<const PreparedSample> batch,
                            double weight_decay) {
  if (batch.empty()) throw InvalidInput("loss needs a nonempty batch");
  LossAndGrads out;
  for (const auto& w : net.weights) out.grads.push_back(Eigen::MatrixXd::Zero(w.rows(), w.cols()));
  const double scale = 1.0 / static_cast<double>(batch.size());
  int correct = 0;
  for (const auto& s : batch) {
    if (s.target_slot < 0) throw InvalidInput("sample has no target");
    const Stencil& st = cache.get(s.node);
    const auto r = run_sample(net, st, s, &out.grads, scale);
    out.loss += r.loss;
    correct += st.candidates[static_cast<std::size_t>(s.target_slot)] == r.prediction;
  }
  out.loss *= scale;
  out.accuracy = correct * scale;
  double norm = 0.0;
  for (std::size_t i = 0; i < net.weights.size(); ++i) {
    norm += net.weights[i].squaredNorm();
    out.grads[i] += weight_decay * net.weights[i];
  }
  out.loss += 0.5 * weight_decay * norm;
  return out;
}

LossAndGrads loss_and_grads(const Network& net, const OrientedComplex2& c, std::span<const Trajectory> batch,
                            double weight_decay) {
  net.check_shapes();
  StencilCache cache(c, net.arch);
  const auto samples = prepare_samples(cache, c, batch);
  return loss_and_grads(net, cache, samples, weight_decay);
}

double accuracy(const Network& net, StencilCache& cache, std::span<const PreparedSample> samples) {
  if (samples.empty()) throw InvalidInput("accuracy needs at least one sample");
  int correct = 0;
  for (const auto& s : samples) {
    const Stencil& st = cache.get(s.node);
    const auto r = run_sample(net, st, s);
    correct += s.target_slot >= 0 && st.candidates[static_cast<std::size_t>(s.target_slot)] == r.prediction;
  }
  return static_cast<double>(correct) / static_cast<double>(samples.size());
}

double evaluate(const Network& net, const OrientedComplex2& c, std::span<const Trajectory> ts) {
  net.check_shapes();
  StencilCache cache(c, net.arch);
  return accuracy(net, cache, prepare_samples(cache, c, ts));
}

std::vector<int> predict(const Network& net, const OrientedComplex2& c, std::span<const Trajectory> ts) {
  net.check_shapes();
  StencilCache cache(c, net.arch);
  std::vector<int> out;
  for (const auto& t : ts) {
    validate_trajectory(c, t);
    const auto s = prepare_sample(cache, lift_path(c, t.nodes), t.last(), std::nullopt);
    out.push_back(run_sample(net, cache.get(s.node), s).prediction);
  }
  return out;
}

TrainResult train(Network model, const OrientedComplex2& c, std::span<const Trajectory> train_set,
                  std::span<const Trajectory> test_set, const TrainConfig& cfg) {
  cfg.validate();
  model.check_shapes();
  if (train_set.empty()) throw InvalidInput("training set is empty");
  StencilCache cache(c, model.arch);
  const auto train_samples = prepare_samples(cache, c, train_set);
  const auto test_samples = prepare_samples(cache, c, test_set);

  const std::size_t n = train_samples.size();
  const std::size_t batch = cfg.batch_size == 0 ? n : std::min<std::size_t>(static_cast<std::size_t>(cfg.batch_size), n);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<PreparedSample> scratch;
  Rng rng(cfg.seed);

  TrainResult result;
  AdamState adam = AdamState::for_network(model);
  auto record = [&](int epoch, double loss, double train_acc) {
    EpochMetrics m{epoch, loss, train_acc, -1.0};
    const bool last = epoch == cfg.epochs;
    if (!test_samples.empty() && cfg.eval_every > 0 && (last || epoch % cfg.eval_every == 0))
      m.test_accuracy = accuracy(model, cache, test_samples);
    result.history.push_back(m);
  };

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    if (batch == n) {
      const auto lg = loss_and_grads(model, cache, train_samples, cfg.weight_decay);
      if (!std::isfinite(lg.loss))
        throw NumericError("non-finite training loss at epoch " + std::to_string(epoch));
      record(epoch, lg.loss, lg.accuracy);
      adam.update(model, lg.grads, cfg);
      continue;
    }
    rng.shuffle(std::span<std::size_t>(order));
    double loss = 0.0, acc = 0.0;
    for (std::size_t start = 0; start < n; start += batch) {
      const std::size_t stop = std::min(n, start + batch);
      scratch.clear();
      for (std::size_t i = start; i < stop; ++i) scratch.push_back(train_samples[order[i]]);
      const auto lg = loss_and_grads(model, cache, scratch, cfg.weight_decay);
      if (!std::isfinite(lg.loss))
        throw NumericError("non-finite training loss at epoch " + std::to_string(epoch));
      const double w = static_cast<double>(stop - start) / static_cast<double>(n);
      loss += w * lg.loss;
      acc += w * lg.accuracy;
      adam.update(model, lg.grads, cfg);
    }
    record(epoch, loss, acc);
  }

  const auto final_lg = loss_and_grads(model, cache, train_samples, cfg.weight_decay);
  if (!std::isfinite(final_lg.loss)) throw NumericError("non-finite training loss after the last epoch");
  record(cfg.epochs, final_lg.loss, final_lg.accuracy);
  result.model = std::move(model);
  return result;
}

TrainResult train(Network model, const DatasetSplit& split, const TrainConfig& cfg) {
  return train(std::move(model), split.complex, split.train, split.test, cfg);
}

}  // namespace scone
