#include "curveband/frequency_support.hpp"

#include <charconv>

#include "curveband/errors.hpp"

namespace curveband {

FrequencySupport::FrequencySupport(int k1, int k2) : k1_(k1), k2_(k2) {
  detail::require(k1 > 0 && k2 > 0, "FrequencySupport: sizes must be positive");
}

FreqIndex FrequencySupport::index(std::size_t flat) const {
  detail::require(flat < size(), "FrequencySupport::index: flat index out of range");
  const int i = static_cast<int>(flat / static_cast<std::size_t>(k2_));
  const int j = static_cast<int>(flat % static_cast<std::size_t>(k2_));
  return {lo1() + i, lo2() + j};
}

std::size_t FrequencySupport::flat(FreqIndex k) const {
  detail::require(contains(k), "FrequencySupport::flat: index outside support");
  return static_cast<std::size_t>(k.k1 - lo1()) * static_cast<std::size_t>(k2_) +
         static_cast<std::size_t>(k.k2 - lo2());
}

std::string FrequencySupport::to_string() const {
  return std::to_string(k1_) + "x" + std::to_string(k2_);
}

FrequencySupport FrequencySupport::parse(std::string_view text) {
  auto parse_int = [&](std::string_view s) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
      throw ContractViolation("cannot parse support '" + std::string(text) + "'");
    }
    return v;
  };
  const auto sep = text.find_first_of("xX");
  if (sep == std::string_view::npos) {
    const int k = parse_int(text);
    return {k, k};
  }
  return {parse_int(text.substr(0, sep)), parse_int(text.substr(sep + 1))};
}

}  // namespace curveband
