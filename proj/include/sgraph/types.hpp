#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace sgraph {

using VertexId = std::uint64_t;

/// Edge weight stored as a fixed-point decimal with six fractional digits.
/// Parsing is exact: inputs carrying more precision than that are rejected
/// instead of rounded, so comparisons between weights are total and stable.
class Weight {
 public:
  static constexpr std::int64_t kScale = 1'000'000;
  static constexpr int kFractionDigits = 6;

  constexpr Weight() = default;
  static constexpr Weight fromUnits(std::int64_t units) { return Weight(units); }
  static constexpr Weight fromInteger(std::int64_t value) { return Weight(value * kScale); }
  static constexpr Weight one() { return fromInteger(1); }

  /// Parses `[digits][.digits]`. Returns nullopt on negative values, syntax
  /// errors, overflow or more than six significant fractional digits.
  static std::optional<Weight> parse(std::string_view text);

  constexpr std::int64_t units() const { return units_; }
  std::string toString() const;

  constexpr auto operator<=>(const Weight&) const = default;
  constexpr Weight& operator+=(Weight other) {
    units_ += other.units_;
    return *this;
  }
  friend constexpr Weight operator+(Weight a, Weight b) { return a += b; }

 private:
  constexpr explicit Weight(std::int64_t units) : units_(units) {}
  std::int64_t units_ = 0;
};

/// Subgraph identity: partition id in the high 32 bits, the component index
/// within that partition in the low 32 bits.
class SubgraphId {
 public:
  constexpr SubgraphId() = default;
  constexpr SubgraphId(std::uint32_t partition, std::uint32_t component)
      : packed_((std::uint64_t{partition} << 32) | component) {}
  static constexpr SubgraphId fromPacked(std::uint64_t packed) {
    SubgraphId id;
    id.packed_ = packed;
    return id;
  }

  constexpr std::uint64_t packed() const { return packed_; }
  constexpr std::uint32_t partition() const { return static_cast<std::uint32_t>(packed_ >> 32); }
  constexpr std::uint32_t component() const { return static_cast<std::uint32_t>(packed_); }

  std::string toString() const;

  constexpr auto operator<=>(const SubgraphId&) const = default;

 private:
  std::uint64_t packed_ = 0;
};

}  // namespace sgraph

template <>
struct std::hash<sgraph::SubgraphId> {
  std::size_t operator()(const sgraph::SubgraphId& id) const noexcept {
    return std::hash<std::uint64_t>{}(id.packed());
  }
};
