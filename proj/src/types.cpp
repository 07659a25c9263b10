#include "sgraph/types.hpp"

#include <limits>

namespace sgraph {

std::optional<Weight> Weight::parse(std::string_view text) {
  if (text.empty()) return std::nullopt;
  constexpr auto kMax = std::numeric_limits<std::int64_t>::max();

  std::int64_t whole = 0;
  std::size_t i = 0;
  bool sawDigit = false;
  for (; i < text.size() && text[i] != '.'; ++i) {
    char c = text[i];
    if (c < '0' || c > '9') return std::nullopt;
    int d = c - '0';
    if (whole > (kMax / kScale - d) / 10) return std::nullopt;
    whole = whole * 10 + d;
    sawDigit = true;
  }

  std::int64_t fraction = 0;
  int fractionDigits = 0;
  if (i < text.size()) {
    ++i;  // '.'
    for (; i < text.size(); ++i) {
      char c = text[i];
      if (c < '0' || c > '9') return std::nullopt;
      sawDigit = true;
      if (fractionDigits == kFractionDigits) {
        if (c != '0') return std::nullopt;  // would need rounding
        continue;
      }
      fraction = fraction * 10 + (c - '0');
      ++fractionDigits;
    }
  }
  if (!sawDigit) return std::nullopt;
  for (; fractionDigits < kFractionDigits; ++fractionDigits) fraction *= 10;
  return Weight(whole * kScale + fraction);
}

std::string Weight::toString() const {
  std::string out = std::to_string(units_ / kScale);
  std::int64_t fraction = units_ % kScale;
  if (fraction != 0) {
    std::string digits = std::to_string(fraction);
    digits.insert(0, kFractionDigits - digits.size(), '0');
    while (digits.back() == '0') digits.pop_back();
    out += '.';
    out += digits;
  }
  return out;
}

std::string SubgraphId::toString() const {
  return std::to_string(partition()) + ":" + std::to_string(component());
}

}  // namespace sgraph
