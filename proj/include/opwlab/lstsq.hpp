#pragma once

#include <Eigen/Dense>
#include <complex>

namespace opwlab {

// Weighted Tikhonov least squares:
//   minimize  sum_j w_j |(G c)_j - y_j|^2 + lambda ||c||^2
// with a real design matrix G (the sinc basis is real-valued) and complex
// data y; real and imaginary parts decouple.

// SVD-filtered solve: c = V diag(s/(s^2+lambda)) U^T (sqrt(w) .* y). The
// decomposition of diag(sqrt(w)) G is computed once and reused across
// lambda values (the pipelines walk a lambda schedule).
class TikhonovSvd {
public:
  TikhonovSvd(const Eigen::MatrixXd& G, const Eigen::VectorXd& w);

  Eigen::VectorXcd solve(const Eigen::VectorXcd& y, double lambda) const;

  const Eigen::VectorXd& singular_values() const { return svals_; }

private:
  Eigen::MatrixXd U_, V_;
  Eigen::VectorXd svals_;
  Eigen::VectorXd sqrt_w_;
};

// One-shot wrapper around TikhonovSvd.
Eigen::VectorXcd solve_tikhonov_svd(const Eigen::MatrixXd& G,
                                    const Eigen::VectorXd& w,
                                    const Eigen::VectorXcd& y, double lambda);

// Explicit normal-equations oracle: assemble A = G^T W G + lambda I,
// b = G^T W y, solve with LDLT. Stable only at benign lambda; kept as the
// independent reference the fast solve is checked against.
Eigen::VectorXcd solve_tikhonov_normal(const Eigen::MatrixXd& G,
                                       const Eigen::VectorXd& w,
                                       const Eigen::VectorXcd& y,
                                       double lambda);

}  // namespace opwlab
