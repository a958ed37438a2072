#pragma once

#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "curveband/errors.hpp"
#include "curveband/point_set.hpp"

namespace curveband {

struct IrlsConfig {
  double lambda = 3e-3;  // rank penalty weight
  double sigma = 0.1;    // Gaussian kernel width
  double gamma0 = 1e-2;  // initial regularizer of (K + gamma I)^(-1/2)
  double eta = 1.5;      // gamma is divided by eta every iteration
  int max_iters = 100;
  double rel_tol = 1e-5;

  /// Throws ContractViolation when a field is out of range.
  void validate() const;
};

struct IterationRecord {
  int iter = 0;
  /// |X_m - Y|^2 + lambda tr(K(X_m) P_{m-1}).
  double cost = 0.0;
  /// The same surrogate evaluated at the previous iterate X_{m-1}.
  double cost_before = 0.0;
  double gamma = 0.0;
  double rel_change = 0.0;
};

struct DenoiseTrace {
  std::vector<IterationRecord> iterations;
  std::vector<Eigen::MatrixXd> snapshots;
  bool converged = false;
};

struct IrlsWeights {
  Eigen::MatrixXd p;  // (K + gamma I)^(-1/2)
  Eigen::MatrixXd w;  // -(1/sigma^2) K .* P
};

struct DenoiseResult {
  PointSet points;
  DenoiseTrace trace;
};

/// Raised when the iteration produces a non-finite cost; carries the trace so far.
class IrlsDiverged : public NumericalError {
 public:
  IrlsDiverged(const std::string& what, DenoiseTrace trace)
      : NumericalError(what), trace_(std::move(trace)) {}
  const DenoiseTrace& trace() const noexcept { return trace_; }

 private:
  DenoiseTrace trace_;
};

IrlsWeights irls_weights(const PointSet& x, double sigma, double gamma);

/// L = D - W with D_ii = sum_j W_ij.
Eigen::MatrixXd graph_laplacian(const Eigen::MatrixXd& w);

/// argmin_X |X - Y|_F^2 + lambda tr(X L X^T) = Y (I + lambda sym(L))^{-1}.
Eigen::MatrixXd solve_quadratic(const Eigen::MatrixXd& y, const Eigen::MatrixXd& l, double lambda);

/// Kernel low-rank denoising by iteratively reweighted least squares,
/// starting from X = Y.
DenoiseResult klr_denoise(const PointSet& y, const IrlsConfig& cfg, bool keep_snapshots = false);

/// Symmetric nearest-neighbour mean squared error with 1/2 weights.
double point_cloud_mse(const PointSet& truth, const PointSet& pred);

/// 10 log10(mean |pred_i|^2 / MSE) in dB; +infinity when MSE is zero.
double point_cloud_snr(const PointSet& truth, const PointSet& pred);

}  // namespace curveband
