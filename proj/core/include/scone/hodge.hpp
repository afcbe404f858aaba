#pragma once

#include <Eigen/Dense>

#include "scone/complex.hpp"

namespace scone {

/// Real coefficients on the oriented k-cells of a complex, one column per channel.
struct Chain {
  int order = 1;
  Eigen::MatrixXd coeffs;

  static Chain zeros(const OrientedComplex2& c, int order, int channels = 1);
  static Chain from_vector(int order, Eigen::VectorXd v);
  Eigen::Index channels() const { return coeffs.cols(); }
};

/// gradient in im(b1^T), curl in im(b2), harmonic in ker(Delta_1).
struct HodgeParts {
  Eigen::VectorXd gradient;
  Eigen::VectorXd curl;
  Eigen::VectorXd harmonic;
};

enum class KernelKind { hodge_kernel, boundary_kernel };

/// Delta_k = b_k^T b_k + b_{k+1} b_{k+1}^T with b_0 and b_3 taken as zero.
RealSparse hodge_laplacian_sparse(const OrientedComplex2& c, int k);
Eigen::MatrixXd hodge_laplacian(const OrientedComplex2& c, int k);

/// Orthogonal decomposition of a single-channel 1-chain by two dense
/// least-squares solves (complete orthogonal decomposition).
HodgeParts hodge_decompose(const OrientedComplex2& c, const Chain& x);
HodgeParts hodge_decompose(const OrientedComplex2& c, const Eigen::VectorXd& x);

/// Projector onto ker(Delta_1) or ker(b1), factored once for repeated use.
///
/// Both are written as x minus the gradient part, and ker(Delta_1) also drops
/// the curl part; the pseudo-inverses of b1 b1^T and b2^T b2 are held densely.
class KernelProjector {
 public:
  KernelProjector(const OrientedComplex2& c, KernelKind which);

  Eigen::VectorXd project(const Eigen::VectorXd& x) const;
  KernelKind kind() const noexcept { return which_; }

 private:
  KernelKind which_;
  RealSparse b1_;
  RealSparse b2_;
  Eigen::MatrixXd node_pinv_;
  Eigen::MatrixXd face_pinv_;
};

Chain project_kernel(const OrientedComplex2& c, const Chain& x, KernelKind which);

/// dim ker(Delta_k): eigenvalues below 1e-8 * dim * max(max diagonal, 1).
int betti(const OrientedComplex2& c, int k);

}  // namespace scone
