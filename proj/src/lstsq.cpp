#include "opwlab/lstsq.hpp"

#include <Eigen/SVD>

#include "opwlab/error.hpp"

namespace opwlab {

TikhonovSvd::TikhonovSvd(const Eigen::MatrixXd& G, const Eigen::VectorXd& w) {
  if (G.rows() != w.size()) {
    fail(Errc::invalid_argument, "TikhonovSvd: weight/row count mismatch");
  }
  sqrt_w_ = w.array().sqrt();
  Eigen::MatrixXd Gw = sqrt_w_.asDiagonal() * G;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      Gw, Eigen::ComputeThinU | Eigen::ComputeThinV);
  U_ = svd.matrixU();
  V_ = svd.matrixV();
  svals_ = svd.singularValues();
}

Eigen::VectorXcd TikhonovSvd::solve(const Eigen::VectorXcd& y,
                                    double lambda) const {
  if (y.size() != U_.rows()) {
    fail(Errc::invalid_argument, "TikhonovSvd::solve: data length mismatch");
  }
  if (lambda < 0.0) {
    fail(Errc::invalid_argument, "TikhonovSvd::solve: lambda must be >= 0");
  }
  Eigen::VectorXcd yw = sqrt_w_.array() * y.array();
  // Filtered inversion: s/(s^2 + lambda) per singular direction. At
  // lambda = 0 directions with s == 0 are dropped (pseudo-inverse).
  Eigen::VectorXd filt(svals_.size());
  for (Eigen::Index i = 0; i < svals_.size(); ++i) {
    const double s = svals_[i];
    const double denom = s * s + lambda;
    filt[i] = denom > 0.0 ? s / denom : 0.0;
  }
  Eigen::VectorXcd proj = U_.adjoint() * yw;
  Eigen::VectorXcd c = V_ * (filt.array() * proj.array()).matrix();
  if (!c.allFinite()) {
    fail(Errc::numerical_failure, "TikhonovSvd::solve: non-finite solution");
  }
  return c;
}

Eigen::VectorXcd solve_tikhonov_svd(const Eigen::MatrixXd& G,
                                    const Eigen::VectorXd& w,
                                    const Eigen::VectorXcd& y, double lambda) {
  return TikhonovSvd(G, w).solve(y, lambda);
}

Eigen::VectorXcd solve_tikhonov_normal(const Eigen::MatrixXd& G,
                                       const Eigen::VectorXd& w,
                                       const Eigen::VectorXcd& y,
                                       double lambda) {
  if (G.rows() != w.size() || G.rows() != y.size()) {
    fail(Errc::invalid_argument, "solve_tikhonov_normal: size mismatch");
  }
  Eigen::MatrixXd Gw = w.asDiagonal() * G;  // W G
  Eigen::MatrixXd A = G.transpose() * Gw;   // G^T W G
  A.diagonal().array() += lambda;
  Eigen::VectorXcd b = Gw.transpose().cast<std::complex<double>>() * y;  // G^T W y
  Eigen::LDLT<Eigen::MatrixXd> ldlt(A);
  if (ldlt.info() != Eigen::Success) {
    fail(Errc::numerical_failure, "solve_tikhonov_normal: LDLT failed");
  }
  Eigen::VectorXcd c(G.cols());
  Eigen::VectorXd re = ldlt.solve(b.real());
  Eigen::VectorXd im = ldlt.solve(b.imag());
  c.real() = re;
  c.imag() = im;
  if (!c.allFinite()) {
    fail(Errc::numerical_failure, "solve_tikhonov_normal: non-finite solution");
  }
  return c;
}

}  // namespace opwlab
