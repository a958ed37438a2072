#pragma once

#include <vector>

#include <Eigen/Core>

#include "curveband/frequency_support.hpp"
#include "curveband/polyline.hpp"
#include "curveband/recovery.hpp"

namespace curveband {

/// Row-major grayscale image with values in [0, 1]; pixels(r, c) lives at
/// x = (c / width, r / height) on the unit torus.
class GrayImage {
 public:
  explicit GrayImage(Eigen::MatrixXd pixels);

  int width() const noexcept { return static_cast<int>(pixels_.cols()); }
  int height() const noexcept { return static_cast<int>(pixels_.rows()); }
  const Eigen::MatrixXd& pixels() const noexcept { return pixels_; }

 private:
  Eigen::MatrixXd pixels_;
};

/// Centred, unitary DFTs of the periodic forward-difference gradients.
/// Entry (r, c) holds frequency (k1, k2) = (c + lo(width), r + lo(height))
/// with lo(n) = -floor(n / 2).
struct GradientSpectra {
  Eigen::MatrixXcd horizontal;
  Eigen::MatrixXcd vertical;
};

/// Differences in space, then DFT.
GradientSpectra gradient_spectrum(const GrayImage& img);
/// DFT of the image, then multiplication by exp(j 2 pi k / n) - 1.
GradientSpectra gradient_spectrum_multiplier(const GrayImage& img);

/// Valid-region 2-D convolution of both gradient spectra with a filter
/// supported on `support`, stacked channel by channel. Rows within a channel
/// run over output k2 (outer) and k1 (inner).
class ToeplitzLift {
 public:
  ToeplitzLift(GradientSpectra spectra, FrequencySupport support);

  const FrequencySupport& support() const noexcept { return support_; }
  const GradientSpectra& spectra() const noexcept { return spectra_; }
  Eigen::Index out_rows() const noexcept { return out_k2_; }
  Eigen::Index out_cols() const noexcept { return out_k1_; }
  Eigen::Index rows() const noexcept { return 2 * out_k1_ * out_k2_; }
  Eigen::Index cols() const noexcept { return static_cast<Eigen::Index>(support_.size()); }

  Eigen::VectorXcd apply(const Eigen::VectorXcd& c) const;
  /// T^H T, |support| x |support|.
  Eigen::MatrixXcd gram() const;

 private:
  GradientSpectra spectra_;
  FrequencySupport support_;
  Eigen::Index out_k1_;
  Eigen::Index out_k2_;
};

Eigen::VectorXcd toeplitz_apply(const ToeplitzLift& lift, const Eigen::VectorXcd& c);

/// sum_{i > rank} sigma_i^2 of the lift.
double trailing_energy(const ToeplitzLift& lift, int rank);

struct SegmentationConfig {
  int rank = 0;
  // Relative to unitary DFTs; much larger values flatten f.
  double lambda = 1.0;
  FrequencySupport filter{9, 9};
  int max_iters = 20;
  double rel_tol = 1e-4;
  int cg_max_iters = 300;
  double cg_tol = 1e-10;
};

struct SegmentationResult {
  GrayImage fstar;
  /// Sum-of-squares edge indicator scaled to [0, 1]; small on edges.
  GrayImage edge_map;
  /// Unscaled sum-of-squares values, same layout as the image.
  Eigen::MatrixXd edge_sos;
  /// Trailing right singular vectors of the final lift (columns).
  Eigen::MatrixXcd annihilators;
  double trailing_energy_initial = 0.0;
  double trailing_energy_final = 0.0;
  /// |f - h|^2 + lambda * trailing energy, from f = h onwards.
  std::vector<double> objective;
  int iterations = 0;
  bool converged = false;
  /// Support of the annihilating filters.
  FrequencySupport filter{1, 1};
};

/// Alternates between the trailing singular subspace of the lift and a
/// quadratic update of the image, starting from f = h. Returns the iterate
/// with the lowest objective; `converged` is false when max_iters ran out.
SegmentationResult segment(const GrayImage& h, const SegmentationConfig& cfg);

/// Sum-of-squares polynomial of the result's annihilators.
SosPolynomial edge_polynomial(const SegmentationResult& result);

/// Valley contours of the edge map, offset `offset_px` pixels from the
/// valley floor.
Polyline edge_contours(const SegmentationResult& result, double offset_px = 1.0);

}  // namespace curveband
