#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <string_view>

namespace curveband {

/// Integer frequency (k1, k2).
struct FreqIndex {
  int k1 = 0;
  int k2 = 0;
  friend auto operator<=>(const FreqIndex&, const FreqIndex&) = default;
  FreqIndex operator-() const { return {-k1, -k2}; }
  FreqIndex operator+(const FreqIndex& o) const { return {k1 + o.k1, k2 + o.k2}; }
  FreqIndex operator-(const FreqIndex& o) const { return {k1 - o.k1, k2 - o.k2}; }
};

/// Centered k1 x k2 rectangle of frequencies. Along each axis the indices run
/// from -floor(k/2) to floor((k-1)/2). Flat enumeration is row-major over
/// (k1 index, k2 index) and every matrix/vector in the library uses it.
class FrequencySupport {
 public:
  FrequencySupport(int k1, int k2);

  int k1() const noexcept { return k1_; }
  int k2() const noexcept { return k2_; }
  int lo1() const noexcept { return -(k1_ / 2); }
  int hi1() const noexcept { return (k1_ - 1) / 2; }
  int lo2() const noexcept { return -(k2_ / 2); }
  int hi2() const noexcept { return (k2_ - 1) / 2; }

  std::size_t size() const noexcept {
    return static_cast<std::size_t>(k1_) * static_cast<std::size_t>(k2_);
  }
  /// Total degree of the associated complex polynomial.
  int degree() const noexcept { return k1_ + k2_; }
  /// Both sizes odd, so the index set is closed under negation.
  bool symmetric() const noexcept { return (k1_ % 2 == 1) && (k2_ % 2 == 1); }

  bool contains(FreqIndex k) const noexcept {
    return k.k1 >= lo1() && k.k1 <= hi1() && k.k2 >= lo2() && k.k2 <= hi2();
  }
  FreqIndex index(std::size_t flat) const;
  std::size_t flat(FreqIndex k) const;

  /// Componentwise k1 <= other.k1 and k2 <= other.k2.
  bool fits_in(const FrequencySupport& other) const noexcept {
    return k1_ <= other.k1_ && k2_ <= other.k2_;
  }

  std::string to_string() const;
  /// Parses "5x5" / "5X7" / "5".
  static FrequencySupport parse(std::string_view text);

  friend bool operator==(const FrequencySupport&, const FrequencySupport&) = default;

 private:
  int k1_;
  int k2_;
};

}  // namespace curveband
