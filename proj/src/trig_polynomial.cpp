#include "curveband/trig_polynomial.hpp"

#include <algorithm>

#include "curveband/errors.hpp"

namespace curveband {

namespace {
constexpr double kHermitianTol = 1e-12;
}

TrigPolynomial::TrigPolynomial(FrequencySupport support, Eigen::VectorXcd coeffs, bool hermitian)
    : support_(support), coeffs_(std::move(coeffs)), hermitian_(hermitian) {
  detail::require(static_cast<std::size_t>(coeffs_.size()) == support_.size(),
                  "TrigPolynomial: coefficient count does not match support");
  detail::require(coeffs_.allFinite(), "TrigPolynomial: coefficients must be finite");
  if (hermitian_) {
    detail::require(support_.symmetric(), "TrigPolynomial: hermitian flag needs odd support sizes");
    detail::require(hermitian_defect() <= kHermitianTol,
                    "TrigPolynomial: coefficients are not hermitian symmetric");
  }
}

TrigPolynomial TrigPolynomial::constant(cdouble value) {
  Eigen::VectorXcd c(1);
  c(0) = value;
  return {FrequencySupport(1, 1), c, value.imag() == 0.0};
}

cdouble TrigPolynomial::coeff(FreqIndex k) const {
  if (!support_.contains(k)) return {0.0, 0.0};
  return coeffs_(static_cast<Eigen::Index>(support_.flat(k)));
}

double TrigPolynomial::hermitian_defect() const {
  const double norm = coeffs_.norm();
  if (norm == 0.0) return 0.0;
  double worst = 0.0;
  for (std::size_t f = 0; f < support_.size(); ++f) {
    const FreqIndex k = support_.index(f);
    const cdouble mirrored = coeff(-k);
    worst = std::max(worst, std::abs(mirrored - std::conj(coeffs_(static_cast<Eigen::Index>(f)))));
  }
  return worst / norm;
}

}  // namespace curveband
