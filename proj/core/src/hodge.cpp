#include "scone/hodge.hpp"

#include <Eigen/Eigenvalues>
#include <string>

#include "scone/error.hpp"

namespace scone {

Chain Chain::zeros(const OrientedComplex2& c, int order, int channels) {
  return {order, Eigen::MatrixXd::Zero(c.cell_count(order), channels)};
}

Chain Chain::from_vector(int order, Eigen::VectorXd v) {
  Chain ch;
  ch.order = order;
  ch.coeffs = std::move(v);
  return ch;
}

namespace {

void check_order(int k) {
  if (k < 0 || k > 2) throw InvalidInput("Hodge Laplacian order must be 0, 1 or 2, got " + std::to_string(k));
}

const Eigen::VectorXd& single_edge_chain(const OrientedComplex2& c, const Chain& x, Eigen::VectorXd& storage) {
  if (x.order != 1) throw InvalidInput("expected a 1-chain, got order " + std::to_string(x.order));
  if (x.coeffs.rows() != c.edge_count())
    throw InvalidInput("chain has " + std::to_string(x.coeffs.rows()) + " rows but the complex has " +
                       std::to_string(c.edge_count()) + " edges");
  if (x.coeffs.cols() != 1) throw InvalidInput("expected a single-channel chain");
  storage = x.coeffs.col(0);
  return storage;
}

// Moore-Penrose pseudo-inverse of a symmetric PSD matrix.
Eigen::MatrixXd psd_pinv(const Eigen::MatrixXd& a) {
  if (a.rows() == 0) return a;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a);
  const Eigen::VectorXd& lambda = eig.eigenvalues();
  const double cutoff = 1e-10 * std::max(1.0, lambda.cwiseAbs().maxCoeff()) * static_cast<double>(a.rows());
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(lambda.size());
  for (Eigen::Index i = 0; i < lambda.size(); ++i)
    if (lambda[i] > cutoff) inv[i] = 1.0 / lambda[i];
  return eig.eigenvectors() * inv.asDiagonal() * eig.eigenvectors().transpose();
}

}  // namespace

RealSparse hodge_laplacian_sparse(const OrientedComplex2& c, int k) {
  check_order(k);
  const int n = c.cell_count(k);
  RealSparse lap(n, n);
  if (k == 1) lap += RealSparse(c.b1_real().transpose() * c.b1_real());
  if (k == 2) lap += RealSparse(c.b2_real().transpose() * c.b2_real());
  if (k == 0) lap += RealSparse(c.b1_real() * c.b1_real().transpose());
  if (k == 1) lap += RealSparse(c.b2_real() * c.b2_real().transpose());
  return lap;
}

Eigen::MatrixXd hodge_laplacian(const OrientedComplex2& c, int k) { return Eigen::MatrixXd(hodge_laplacian_sparse(c, k)); }

HodgeParts hodge_decompose(const OrientedComplex2& c, const Chain& x) {
  Eigen::VectorXd storage;
  return hodge_decompose(c, single_edge_chain(c, x, storage));
}

HodgeParts hodge_decompose(const OrientedComplex2& c, const Eigen::VectorXd& x) {
  if (x.size() != c.edge_count()) throw InvalidInput("chain length does not match the edge count");
  HodgeParts parts;
  if (c.node_count() > 0 && c.edge_count() > 0) {
    const Eigen::MatrixXd grad_basis = Eigen::MatrixXd(c.b1_real()).transpose();
    const Eigen::VectorXd w = grad_basis.completeOrthogonalDecomposition().solve(x);
    parts.gradient = grad_basis * w;
  } else {
    parts.gradient = Eigen::VectorXd::Zero(x.size());
  }
  if (c.face_count() > 0) {
    const Eigen::MatrixXd curl_basis(c.b2_real());
    const Eigen::VectorXd y = curl_basis.completeOrthogonalDecomposition().solve(x);
    parts.curl = curl_basis * y;
  } else {
    parts.curl = Eigen::VectorXd::Zero(x.size());
  }
  parts.harmonic = x - parts.gradient - parts.curl;
  return parts;
}

KernelProjector::KernelProjector(const OrientedComplex2& c, KernelKind which)
    : which_(which), b1_(c.b1_real()), b2_(c.b2_real()) {
  node_pinv_ = psd_pinv(Eigen::MatrixXd(b1_ * b1_.transpose()));
  if (which_ == KernelKind::hodge_kernel) face_pinv_ = psd_pinv(Eigen::MatrixXd(b2_.transpose() * b2_));
}

Eigen::VectorXd KernelProjector::project(const Eigen::VectorXd& x) const {
  if (x.size() != b1_.cols()) throw InvalidInput("chain length does not match the edge count");
  Eigen::VectorXd out = x;
  if (b1_.rows() > 0) {
    const Eigen::VectorXd div = b1_ * x;
    out -= b1_.transpose() * (node_pinv_ * div);
  }
  if (which_ == KernelKind::hodge_kernel && b2_.cols() > 0) {
    const Eigen::VectorXd circ = b2_.transpose() * x;
    out -= b2_ * (face_pinv_ * circ);
  }
  return out;
}

Chain project_kernel(const OrientedComplex2& c, const Chain& x, KernelKind which) {
  Eigen::VectorXd storage;
  const auto& v = single_edge_chain(c, x, storage);
  return Chain::from_vector(1, KernelProjector(c, which).project(v));
}

int betti(const OrientedComplex2& c, int k) {
  check_order(k);
  const Eigen::MatrixXd lap = hodge_laplacian(c, k);
  const auto dim = lap.rows();
  if (dim == 0) return 0;
  const double max_diag = std::max(1.0, lap.diagonal().maxCoeff());
  const double threshold = 1e-8 * static_cast<double>(dim) * max_diag;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(lap, Eigen::EigenvaluesOnly);
  int count = 0;
  for (Eigen::Index i = 0; i < dim; ++i)
    if (eig.eigenvalues()[i] < threshold) ++count;
  return count;
}

}  // namespace scone
