#pragma once

#include <stdexcept>
#include <string>

namespace curveband {

/// Thrown when a caller breaks an operation's preconditions.
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed or missing input data (files, empty regions, ...).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A linear-algebra step could not produce a usable answer.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// More than one annihilating vector at the requested tolerance; the caller
/// should switch to nullspace_basis with an over-estimated support.
class AmbiguousSupport : public NumericalError {
 public:
  AmbiguousSupport(const std::string& what, std::size_t null_dim)
      : NumericalError(what), null_dim_(null_dim) {}
  std::size_t null_dim() const noexcept { return null_dim_; }

 private:
  std::size_t null_dim_;
};

class NoSamplesAvailable : public DataError {
 public:
  using DataError::DataError;
};

namespace detail {
inline void require(bool cond, const char* what) {
  if (!cond) throw ContractViolation(what);
}
}  // namespace detail

}  // namespace curveband
