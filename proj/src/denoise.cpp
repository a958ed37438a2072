#include "curveband/denoise.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "curveband/lifting.hpp"

namespace curveband {

void IrlsConfig::validate() const {
  detail::require(lambda > 0.0 && std::isfinite(lambda), "IrlsConfig: lambda must be positive");
  detail::require(sigma > 0.0 && std::isfinite(sigma), "IrlsConfig: sigma must be positive");
  detail::require(gamma0 > 0.0 && std::isfinite(gamma0), "IrlsConfig: gamma0 must be positive");
  detail::require(eta > 1.0 && std::isfinite(eta), "IrlsConfig: eta must exceed 1");
  detail::require(max_iters >= 1, "IrlsConfig: max_iters must be at least 1");
  detail::require(rel_tol >= 0.0, "IrlsConfig: rel_tol must be non-negative");
}

IrlsWeights irls_weights(const PointSet& x, double sigma, double gamma) {
  detail::require(gamma > 0.0, "irls_weights: gamma must be positive");
  const Eigen::MatrixXd k = gaussian_kernel(x, sigma).data;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(k);
  if (eig.info() != Eigen::Success) {
    throw NumericalError("irls_weights: eigendecomposition of the " + std::to_string(k.rows()) + "x" +
                         std::to_string(k.cols()) + " kernel failed");
  }
  const Eigen::VectorXd scale =
      (eig.eigenvalues().array().max(0.0) + gamma).rsqrt().matrix();
  const Eigen::MatrixXd& v = eig.eigenvectors();
  IrlsWeights out;
  out.p = v * scale.asDiagonal() * v.transpose();
  out.w = -(1.0 / (sigma * sigma)) * k.cwiseProduct(out.p);
  return out;
}

Eigen::MatrixXd graph_laplacian(const Eigen::MatrixXd& w) {
  detail::require(w.rows() == w.cols(), "graph_laplacian: weight matrix must be square");
  Eigen::MatrixXd l = -w;
  l.diagonal() += w.rowwise().sum();
  return l;
}

Eigen::MatrixXd solve_quadratic(const Eigen::MatrixXd& y, const Eigen::MatrixXd& l, double lambda) {
  detail::require(l.rows() == l.cols() && l.rows() == y.cols(),
                  "solve_quadratic: L must be N x N for N points");
  detail::require(lambda >= 0.0, "solve_quadratic: lambda must be non-negative");
  const auto n = l.rows();
  const Eigen::MatrixXd a =
      Eigen::MatrixXd::Identity(n, n) + lambda * 0.5 * (l + l.transpose());
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
  if (!(lu.rcond() > 1e-14)) {
    throw NumericalError("solve_quadratic: system I + lambda sym(L) is singular");
  }
  // A is symmetric, so X A = Y  <=>  A X^T = Y^T.
  return lu.solve(y.transpose()).transpose();
}

namespace {

double surrogate(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, const Eigen::MatrixXd& p,
                 double sigma, double lambda) {
  const Eigen::MatrixXd k = gaussian_kernel(PointSet(x), sigma).data;
  return (x - y).squaredNorm() + lambda * k.cwiseProduct(p).sum();
}

}  // namespace

DenoiseResult klr_denoise(const PointSet& y, const IrlsConfig& cfg, bool keep_snapshots) {
  cfg.validate();
  detail::require(y.size() >= 2, "klr_denoise: need at least two points");
  const Eigen::MatrixXd& ym = y.coords();
  Eigen::MatrixXd x = ym;
  double gamma = cfg.gamma0;
  DenoiseTrace trace;
  for (int m = 1; m <= cfg.max_iters; ++m) {
    const IrlsWeights wts = irls_weights(PointSet(x), cfg.sigma, gamma);
    const Eigen::MatrixXd l = graph_laplacian(wts.w);
    Eigen::MatrixXd next = solve_quadratic(ym, l, cfg.lambda);

    IterationRecord rec;
    rec.iter = m;
    rec.gamma = gamma;
    rec.cost_before = surrogate(x, ym, wts.p, cfg.sigma, cfg.lambda);
    rec.cost = next.allFinite() ? surrogate(next, ym, wts.p, cfg.sigma, cfg.lambda)
                                : std::numeric_limits<double>::quiet_NaN();
    const double denom = x.norm();
    rec.rel_change = denom > 0.0 ? (next - x).norm() / denom : (next - x).norm();
    trace.iterations.push_back(rec);
    if (!std::isfinite(rec.cost)) {
      throw IrlsDiverged("klr_denoise: non-finite cost at iteration " + std::to_string(m), std::move(trace));
    }
    if (keep_snapshots) trace.snapshots.push_back(next);
    x = std::move(next);
    gamma /= cfg.eta;
    if (rec.rel_change < cfg.rel_tol) {
      trace.converged = true;
      break;
    }
  }
  return {PointSet(std::move(x)), std::move(trace)};
}

double point_cloud_mse(const PointSet& truth, const PointSet& pred) {
  detail::require(!truth.empty() && !pred.empty(), "point_cloud_mse: point sets must be non-empty");
  detail::require(truth.dim() == pred.dim(), "point_cloud_mse: dimension mismatch");
  auto directed = [](const Eigen::MatrixXd& from, const Eigen::MatrixXd& to) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < from.cols(); ++i) {
      sum += (to.colwise() - from.col(i)).colwise().squaredNorm().minCoeff();
    }
    return sum / (2.0 * static_cast<double>(from.cols()));
  };
  return directed(truth.coords(), pred.coords()) + directed(pred.coords(), truth.coords());
}

double point_cloud_snr(const PointSet& truth, const PointSet& pred) {
  const double mse = point_cloud_mse(truth, pred);
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  const double power = pred.coords().colwise().squaredNorm().mean();
  return 10.0 * std::log10(power / mse);
}

}  // namespace curveband
