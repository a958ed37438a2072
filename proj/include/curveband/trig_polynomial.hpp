#pragma once

#include <complex>

#include <Eigen/Core>

#include "curveband/frequency_support.hpp"

namespace curveband {

using cdouble = std::complex<double>;

/// psi(x) = sum_{k in support} c_k exp(j 2 pi k.x) on [0,1)^2.
///
/// When flagged hermitian, c[-k] == conj(c[k]) holds (checked on
/// construction) and psi is real-valued.
class TrigPolynomial {
 public:
  TrigPolynomial(FrequencySupport support, Eigen::VectorXcd coeffs, bool hermitian = false);

  static TrigPolynomial constant(cdouble value);

  const FrequencySupport& support() const noexcept { return support_; }
  const Eigen::VectorXcd& coeffs() const noexcept { return coeffs_; }
  bool hermitian() const noexcept { return hermitian_; }

  /// Coefficient at k, zero outside the support.
  cdouble coeff(FreqIndex k) const;
  bool is_zero() const { return coeffs_.cwiseAbs().maxCoeff() == 0.0; }

  /// Max |c[-k] - conj(c[k])| relative to the coefficient norm.
  double hermitian_defect() const;

 private:
  FrequencySupport support_;
  Eigen::VectorXcd coeffs_;
  bool hermitian_;
};

}  // namespace curveband
