#include "curveband/segmentation.hpp"

#include <cmath>
#include <algorithm>
#include <array>
#include <complex>
#include <mutex>
#include <numbers>

#include <fftw3.h>

#include <Eigen/Eigenvalues>

#include "curveband/errors.hpp"
#include "curveband/marching_squares.hpp"

namespace curveband {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// Unitary 2-D DFT in natural (uncentred) frequency order; in(r, c) -> out(k2, k1).
Eigen::MatrixXcd dft2(const Eigen::MatrixXcd& in, bool forward) {
  const int h = static_cast<int>(in.rows());
  const int w = static_cast<int>(in.cols());
  std::vector<std::complex<double>> buf(static_cast<std::size_t>(h) * static_cast<std::size_t>(w));
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) buf[static_cast<std::size_t>(r * w + c)] = in(r, c);
  auto* data = reinterpret_cast<fftw_complex*>(buf.data());
  fftw_plan plan = nullptr;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan = fftw_plan_dft_2d(h, w, data, data, forward ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  if (plan == nullptr) throw NumericalError("dft2: FFTW could not create a plan");
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(h) * static_cast<double>(w));
  Eigen::MatrixXcd out(h, w);
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) out(r, c) = scale * buf[static_cast<std::size_t>(r * w + c)];
  return out;
}

int lo_of(Eigen::Index n) { return -static_cast<int>(n / 2); }

Eigen::MatrixXcd centre(const Eigen::MatrixXcd& natural) {
  const Eigen::Index h = natural.rows();
  const Eigen::Index w = natural.cols();
  Eigen::MatrixXcd out(h, w);
  for (Eigen::Index r = 0; r < h; ++r) {
    const Eigen::Index sr = ((r + lo_of(h)) % h + h) % h;
    for (Eigen::Index c = 0; c < w; ++c) {
      const Eigen::Index sc = ((c + lo_of(w)) % w + w) % w;
      out(r, c) = natural(sr, sc);
    }
  }
  return out;
}

Eigen::MatrixXd diff_h(const Eigen::MatrixXd& f) {
  const Eigen::Index w = f.cols();
  Eigen::MatrixXd g(f.rows(), w);
  for (Eigen::Index c = 0; c < w; ++c) g.col(c) = f.col((c + 1) % w) - f.col(c);
  return g;
}

Eigen::MatrixXd diff_v(const Eigen::MatrixXd& f) {
  const Eigen::Index h = f.rows();
  Eigen::MatrixXd g(h, f.cols());
  for (Eigen::Index r = 0; r < h; ++r) g.row(r) = f.row((r + 1) % h) - f.row(r);
  return g;
}

Eigen::MatrixXd diff_h_adjoint(const Eigen::MatrixXd& g) {
  const Eigen::Index w = g.cols();
  Eigen::MatrixXd f(g.rows(), w);
  for (Eigen::Index c = 0; c < w; ++c) f.col(c) = g.col((c + w - 1) % w) - g.col(c);
  return f;
}

Eigen::MatrixXd diff_v_adjoint(const Eigen::MatrixXd& g) {
  const Eigen::Index h = g.rows();
  Eigen::MatrixXd f(h, g.cols());
  for (Eigen::Index r = 0; r < h; ++r) f.row(r) = g.row((r + h - 1) % h) - g.row(r);
  return f;
}

}  // namespace

GrayImage::GrayImage(Eigen::MatrixXd pixels) : pixels_(std::move(pixels)) {
  detail::require(pixels_.rows() >= 16 && pixels_.cols() >= 16, "GrayImage: dimensions must be at least 16");
  detail::require(pixels_.allFinite(), "GrayImage: pixels must be finite");
}

GradientSpectra gradient_spectrum(const GrayImage& img) {
  const Eigen::MatrixXd& f = img.pixels();
  return {centre(dft2(diff_h(f).cast<cdouble>(), true)), centre(dft2(diff_v(f).cast<cdouble>(), true))};
}

GradientSpectra gradient_spectrum_multiplier(const GrayImage& img) {
  const Eigen::MatrixXcd spec = centre(dft2(img.pixels().cast<cdouble>(), true));
  const Eigen::Index h = spec.rows();
  const Eigen::Index w = spec.cols();
  GradientSpectra out{Eigen::MatrixXcd(h, w), Eigen::MatrixXcd(h, w)};
  for (Eigen::Index r = 0; r < h; ++r) {
    const double k2 = static_cast<double>(r + lo_of(h));
    const cdouble mv = std::polar(1.0, kTwoPi * k2 / static_cast<double>(h)) - 1.0;
    for (Eigen::Index c = 0; c < w; ++c) {
      const double k1 = static_cast<double>(c + lo_of(w));
      const cdouble mh = std::polar(1.0, kTwoPi * k1 / static_cast<double>(w)) - 1.0;
      out.horizontal(r, c) = mh * spec(r, c);
      out.vertical(r, c) = mv * spec(r, c);
    }
  }
  return out;
}

ToeplitzLift::ToeplitzLift(GradientSpectra spectra, FrequencySupport support)
    : spectra_(std::move(spectra)), support_(support) {
  detail::require(spectra_.horizontal.rows() == spectra_.vertical.rows() &&
                      spectra_.horizontal.cols() == spectra_.vertical.cols(),
                  "ToeplitzLift: channel sizes differ");
  out_k1_ = spectra_.horizontal.cols() - support_.k1() + 1;
  out_k2_ = spectra_.horizontal.rows() - support_.k2() + 1;
  detail::require(out_k1_ >= 1 && out_k2_ >= 1, "ToeplitzLift: filter larger than the spectrum");
}

Eigen::VectorXcd ToeplitzLift::apply(const Eigen::VectorXcd& c) const {
  detail::require(c.size() == cols(), "toeplitz_apply: filter length does not match the support");
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(rows());
  const Eigen::Index per_channel = out_k1_ * out_k2_;
  // Output (k1, k2) reads spectrum entries (k - l); in centred array
  // coordinates the valid outputs start at offset (hi1, hi2).
  const std::array<const Eigen::MatrixXcd*, 2> ch{&spectra_.horizontal, &spectra_.vertical};
  for (std::size_t f = 0; f < support_.size(); ++f) {
    const cdouble v = c(static_cast<Eigen::Index>(f));
    if (v == 0.0) continue;
    const FreqIndex l = support_.index(f);
    const Eigen::Index row0 = support_.hi2() - l.k2;
    const Eigen::Index col0 = support_.hi1() - l.k1;
    for (std::size_t k = 0; k < 2; ++k) {
      const Eigen::MatrixXcd& s = *ch[k];
      for (Eigen::Index r = 0; r < out_k2_; ++r) {
        for (Eigen::Index q = 0; q < out_k1_; ++q) {
          out(static_cast<Eigen::Index>(k) * per_channel + r * out_k1_ + q) += v * s(row0 + r, col0 + q);
        }
      }
    }
  }
  return out;
}

Eigen::MatrixXcd ToeplitzLift::gram() const {
  const auto n = cols();
  // Columns of T are shifted crops of each channel.
  Eigen::MatrixXcd t(rows(), n);
  for (Eigen::Index f = 0; f < n; ++f) {
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(n);
    e(f) = 1.0;
    t.col(f) = apply(e);
  }
  return t.adjoint() * t;
}

Eigen::VectorXcd toeplitz_apply(const ToeplitzLift& lift, const Eigen::VectorXcd& c) { return lift.apply(c); }

namespace {

struct TrailingSubspace {
  Eigen::MatrixXcd vectors;
  double energy = 0.0;
};

TrailingSubspace trailing_subspace(const ToeplitzLift& lift, int rank) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(lift.gram());
  if (eig.info() != Eigen::Success) throw NumericalError("segment: eigendecomposition of the lift Gram failed");
  const Eigen::Index q = lift.cols() - rank;
  TrailingSubspace ts;
  ts.vectors = eig.eigenvectors().leftCols(q);
  ts.energy = eig.eigenvalues().head(q).cwiseMax(0.0).sum();
  return ts;
}

void check_rank(const ToeplitzLift& lift, int rank) {
  detail::require(rank >= 0, "segment: rank must be non-negative");
  detail::require(rank < lift.cols() && rank < lift.rows(),
                  "segment: rank must be below the smaller dimension of the lift");
}

SosPolynomial sos_of(const FrequencySupport& support, const Eigen::MatrixXcd& vectors) {
  std::vector<TrigPolynomial> terms;
  for (Eigen::Index i = 0; i < vectors.cols(); ++i) terms.emplace_back(support, vectors.col(i));
  return SosPolynomial(std::move(terms));
}

// gamma on the image layout (height x width).
Eigen::MatrixXd sos_image(const SosPolynomial& sos, int width, int height) {
  return sos.evaluate_grid(width, height).transpose();
}

// Solves (I + lambda (Dh^T G Dh + Dv^T G Dv)) f = h by conjugate gradients
// preconditioned with the constant-weight operator, diagonal in frequency.
Eigen::MatrixXd weighted_smooth(const Eigen::MatrixXd& h, const Eigen::MatrixXd& weight, double lambda,
                                const Eigen::MatrixXd& start, int max_iters, double tol) {
  const Eigen::Index rows = h.rows();
  const Eigen::Index cols = h.cols();
  auto apply = [&](const Eigen::MatrixXd& f) -> Eigen::MatrixXd {
    return f + lambda * (diff_h_adjoint(weight.cwiseProduct(diff_h(f))) +
                         diff_v_adjoint(weight.cwiseProduct(diff_v(f))));
  };
  const double mean_weight = weight.mean();
  Eigen::MatrixXd symbol(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const double sv = std::norm(std::polar(1.0, kTwoPi * static_cast<double>(r) / static_cast<double>(rows)) - 1.0);
    for (Eigen::Index c = 0; c < cols; ++c) {
      const double sh =
          std::norm(std::polar(1.0, kTwoPi * static_cast<double>(c) / static_cast<double>(cols)) - 1.0);
      symbol(r, c) = 1.0 + lambda * mean_weight * (sh + sv);
    }
  }
  auto precondition = [&](const Eigen::MatrixXd& r) -> Eigen::MatrixXd {
    Eigen::MatrixXcd s = dft2(r.cast<cdouble>(), true);
    s.array() /= symbol.array();
    return dft2(s, false).real();
  };

  Eigen::MatrixXd f = start;
  Eigen::MatrixXd res = h - apply(f);
  const double h_norm = std::max(h.norm(), 1e-300);
  if (res.norm() <= tol * h_norm) return f;
  Eigen::MatrixXd z = precondition(res);
  Eigen::MatrixXd p = z;
  double rz = res.cwiseProduct(z).sum();
  for (int it = 0; it < max_iters; ++it) {
    const Eigen::MatrixXd ap = apply(p);
    const double denom = p.cwiseProduct(ap).sum();
    if (!(denom > 0.0)) break;
    const double alpha = rz / denom;
    f += alpha * p;
    res -= alpha * ap;
    if (res.norm() <= tol * h_norm) break;
    z = precondition(res);
    const double rz_next = res.cwiseProduct(z).sum();
    p = z + (rz_next / rz) * p;
    rz = rz_next;
  }
  return f;
}

}  // namespace

double trailing_energy(const ToeplitzLift& lift, int rank) {
  check_rank(lift, rank);
  return trailing_subspace(lift, rank).energy;
}

SegmentationResult segment(const GrayImage& h, const SegmentationConfig& cfg) {
  detail::require(cfg.lambda > 0.0, "segment: lambda must be positive");
  detail::require(cfg.max_iters >= 1, "segment: max_iters must be at least 1");
  const int width = h.width();
  const int height = h.height();
  const Eigen::MatrixXd& target = h.pixels();

  const ToeplitzLift initial(gradient_spectrum(h), cfg.filter);
  check_rank(initial, cfg.rank);
  TrailingSubspace ts = trailing_subspace(initial, cfg.rank);
  const double initial_energy = ts.energy;

  Eigen::MatrixXd f = target;
  std::vector<double> objective{cfg.lambda * ts.energy};
  Eigen::MatrixXd best_f = f;
  TrailingSubspace best_ts = ts;
  double best_obj = objective.back();
  int iterations = 0;
  bool converged = false;
  for (int it = 1; it <= cfg.max_iters; ++it) {
    const Eigen::MatrixXd weight = sos_image(sos_of(cfg.filter, ts.vectors), width, height);
    Eigen::MatrixXd next = weighted_smooth(target, weight, cfg.lambda, f, cfg.cg_max_iters, cfg.cg_tol);
    if (!next.allFinite()) throw NumericalError("segment: image update produced non-finite values");
    const double change = (next - f).norm() / std::max(f.norm(), 1e-300);
    f = std::move(next);
    iterations = it;
    ts = trailing_subspace(ToeplitzLift(gradient_spectrum(GrayImage(f)), cfg.filter), cfg.rank);
    objective.push_back((f - target).squaredNorm() + cfg.lambda * ts.energy);
    if (objective.back() < best_obj) {
      best_obj = objective.back();
      best_f = f;
      best_ts = ts;
    }
    if (change < cfg.rel_tol) {
      converged = true;
      break;
    }
  }

  // The best iterate by objective, which is the last one in the usual case.
  const SosPolynomial sos = sos_of(cfg.filter, best_ts.vectors);
  Eigen::MatrixXd edge_sos = sos_image(sos, width, height);
  const double peak = edge_sos.maxCoeff();
  GrayImage edge_map(peak > 0.0 ? Eigen::MatrixXd(edge_sos / peak) : edge_sos);
  return SegmentationResult{GrayImage(std::move(best_f)),
                            std::move(edge_map),
                            std::move(edge_sos),
                            std::move(best_ts.vectors),
                            initial_energy,
                            best_ts.energy,
                            std::move(objective),
                            iterations,
                            converged,
                            cfg.filter};
}

SosPolynomial edge_polynomial(const SegmentationResult& result) {
  detail::require(result.annihilators.cols() >= 1, "edge_polynomial: no annihilators");
  detail::require(result.annihilators.rows() == static_cast<Eigen::Index>(result.filter.size()),
                  "edge_polynomial: annihilators do not match the filter support");
  return sos_of(result.filter, result.annihilators);
}

Polyline edge_contours(const SegmentationResult& result, double offset_px) {
  detail::require(offset_px > 0.0, "edge_contours: offset must be positive");
  const SosPolynomial sos = edge_polynomial(result);
  const int width = result.fstar.width();
  const int height = result.fstar.height();
  const double level = offset_px / static_cast<double>(std::min(width, height));
  return contour_periodic(-sos.distance_proxy_grid(width, height), -level);
}

}  // namespace curveband
