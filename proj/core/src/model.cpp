#include "scone/model.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "scone/error.hpp"

namespace scone {

SconeModel init_model(std::uint64_t seed, int layers, int width, Activation activation) {
  return Network::init(scone_architecture(layers, width, activation), seed);
}

namespace {

// Multiply-add counts of the three orders for a term B^T B x W, where B has
// nnz entries and maps the outer level onto the inner one.
std::array<double, 3> term_costs(double nnz, double inner, double outer, double fin, double fout) {
  return {outer * fin * fout + 2.0 * nnz * fout,           // weight_first
          nnz * fin + inner * fin * fout + nnz * fout,     // middle
          2.0 * nnz * fin + outer * fin * fout};           // operator_first
}

EvalOrder cheapest(const std::array<double, 3>& cost) {
  int best = 0;
  for (int i = 1; i < 3; ++i)
    if (cost[static_cast<std::size_t>(i)] < cost[static_cast<std::size_t>(best)]) best = i;
  return static_cast<EvalOrder>(best);
}

Eigen::MatrixXd lower_term(const RealSparse& b1, const Eigen::MatrixXd& x, const Eigen::MatrixXd& w, EvalOrder order) {
  switch (order) {
    case EvalOrder::weight_first: return b1.transpose() * (b1 * (x * w));
    case EvalOrder::middle: return b1.transpose() * (Eigen::MatrixXd(b1 * x) * w);
    case EvalOrder::operator_first: return Eigen::MatrixXd(b1.transpose() * (b1 * x)) * w;
  }
  return {};
}

Eigen::MatrixXd upper_term(const RealSparse& b2, const Eigen::MatrixXd& x, const Eigen::MatrixXd& w, EvalOrder order) {
  switch (order) {
    case EvalOrder::weight_first: return b2 * (b2.transpose() * (x * w));
    case EvalOrder::middle: return b2 * (Eigen::MatrixXd(b2.transpose() * x) * w);
    case EvalOrder::operator_first: return Eigen::MatrixXd(b2 * (b2.transpose() * x)) * w;
  }
  return {};
}

}  // namespace

LayerPlan plan_layer(const OrientedComplex2& c, int f_in, int f_out) {
  const double m = c.edge_count();
  LayerPlan plan;
  plan.lower = cheapest(term_costs(static_cast<double>(c.b1().nonZeros()), c.node_count(), m, f_in, f_out));
  plan.upper = cheapest(term_costs(static_cast<double>(c.b2().nonZeros()), c.face_count(), m, f_in, f_out));
  return plan;
}

Eigen::MatrixXd scone_layer(const OrientedComplex2& c, const Eigen::MatrixXd& x, const Eigen::MatrixXd& w0,
                            const Eigen::MatrixXd& w1, const Eigen::MatrixXd& w2, Activation activation,
                            std::optional<LayerPlan> plan) {
  if (x.rows() != c.edge_count()) throw InvalidInput("layer input has the wrong number of edges");
  for (const auto* w : {&w0, &w1, &w2})
    if (w->rows() != x.cols() || w->cols() != w1.cols()) throw InvalidInput("layer weight shapes do not match the input");
  const LayerPlan p = plan.value_or(plan_layer(c, static_cast<int>(w1.rows()), static_cast<int>(w1.cols())));
  Eigen::MatrixXd out = x * w1;
  out += lower_term(c.b1_real(), x, w0, p.lower);
  if (c.face_count() > 0) out += upper_term(c.b2_real(), x, w2, p.upper);
  activate_inplace(activation, out);
  return out;
}

namespace {

void require_scone(const Network& net) {
  if (net.arch.family != Family::scone) throw InvalidInput("expected a SCoNe network");
  net.check_shapes();
}

}  // namespace

Eigen::VectorXd scone_readout(const SconeModel& model, const OrientedComplex2& c, const Eigen::VectorXd& x) {
  require_scone(model);
  Eigen::MatrixXd h = x;
  for (int l = 0; l < model.arch.layer_count(); ++l) {
    const auto base = static_cast<std::size_t>(3 * l);
    h = scone_layer(c, h, model.weights[base], model.weights[base + 1], model.weights[base + 2], model.arch.activation);
  }
  return c.b1_real() * (h * model.weights.back());
}

Eigen::VectorXd network_readout(const Network& net, const OrientedComplex2& c, const Eigen::VectorXd& x) {
  if (net.arch.family == Family::scone) return scone_readout(net, c, x);
  net.check_shapes();
  OperatorBank bank(c);
  return full_readout(net, bank, x);
}

ForwardTrace forward(const SconeModel& model, const OrientedComplex2& c, const Trajectory& t) {
  require_scone(model);
  validate_trajectory(c, t);
  ForwardTrace tr;
  tr.chains.push_back(lift_trajectory(c, t).coeffs);
  for (int l = 0; l < model.arch.layer_count(); ++l) {
    const auto base = static_cast<std::size_t>(3 * l);
    Eigen::MatrixXd pre = scone_layer(c, tr.chains.back(), model.weights[base], model.weights[base + 1],
                                      model.weights[base + 2], Activation::identity);
    Eigen::MatrixXd post = pre;
    activate_inplace(model.arch.activation, post);
    tr.pre.push_back(std::move(pre));
    tr.chains.push_back(std::move(post));
  }
  tr.readout = c.b1_real() * (tr.chains.back() * model.weights.back());
  const auto nb = c.neighbors(t.last());
  if (nb.empty()) throw InvalidInput("last node has no neighbors");
  tr.candidates.assign(nb.begin(), nb.end());
  tr.logits.resize(static_cast<Eigen::Index>(nb.size()));
  for (std::size_t i = 0; i < nb.size(); ++i) tr.logits[static_cast<Eigen::Index>(i)] = tr.readout[nb[i]];
  tr.z = softmax(tr.logits);
  tr.prediction = tr.candidates[static_cast<std::size_t>(argmax_first(tr.logits))];
  return tr;
}

namespace {
using nlohmann::json;
constexpr const char* kModelFormat = "scone-model";
constexpr int kModelVersion = 1;
}  // namespace

std::string format_network(const Network& net) {
  net.check_shapes();
  json doc;
  doc["format"] = kModelFormat;
  doc["version"] = kModelVersion;
  doc["family"] = to_string(net.arch.family);
  doc["activation"] = to_string(net.arch.activation);
  doc["widths"] = net.arch.widths;
  doc["degree"] = net.arch.degree;
  json weights = json::array();
  for (const auto& w : net.weights) {
    json entry;
    entry["rows"] = w.rows();
    entry["cols"] = w.cols();
    std::vector<double> data;
    for (Eigen::Index i = 0; i < w.rows(); ++i)
      for (Eigen::Index j = 0; j < w.cols(); ++j) data.push_back(w(i, j));
    entry["data"] = std::move(data);
    weights.push_back(std::move(entry));
  }
  doc["weights"] = std::move(weights);
  return doc.dump(1) + "\n";
}

Network parse_network(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const std::size_t upto = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    const auto line = 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n'));
    throw ParseError(line, "malformed model JSON");
  }
  try {
    if (doc.at("format") != kModelFormat) throw InvalidInput(".format: not a model checkpoint");
    if (doc.at("version") != kModelVersion) throw InvalidInput(".version: unsupported version");
    const auto arch = make_architecture(family_from_string(doc.at("family").get<std::string>()),
                                        doc.at("widths").get<std::vector<int>>(),
                                        activation_from_string(doc.at("activation").get<std::string>()),
                                        doc.at("degree").get<int>());
    Network net;
    net.arch = arch;
    for (const auto& entry : doc.at("weights")) {
      const auto rows = entry.at("rows").get<Eigen::Index>();
      const auto cols = entry.at("cols").get<Eigen::Index>();
      const auto data = entry.at("data").get<std::vector<double>>();
      if (rows < 0 || cols < 0 || static_cast<Eigen::Index>(data.size()) != rows * cols)
        throw InvalidInput(".weights: data length does not match rows x cols");
      Eigen::MatrixXd w(rows, cols);
      for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) w(i, j) = data[static_cast<std::size_t>(i * cols + j)];
      net.weights.push_back(std::move(w));
    }
    net.check_shapes();
    return net;
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("model checkpoint: ") + e.what());
  }
}

void save_network(const Network& net, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot open " + path.string() + " for writing");
  out << format_network(net);
  if (!out) throw InvalidInput("failed writing " + path.string());
}

Network load_network(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_network(buf.str());
}

}  // namespace scone
