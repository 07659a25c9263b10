#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace sgraph {

using Payload = std::vector<std::uint8_t>;

/// Fixed-width little-endian 64-bit fields, the encoding every shipped
/// algorithm uses for its messages.
class PayloadWriter {
 public:
  PayloadWriter() = default;
  explicit PayloadWriter(std::size_t fields) { bytes_.reserve(fields * 8); }

  PayloadWriter& u64(std::uint64_t value) {
    for (int i = 0; i < 8; ++i) bytes_.push_back(static_cast<std::uint8_t>(value >> (8 * i)));
    return *this;
  }
  PayloadWriter& i64(std::int64_t value) { return u64(static_cast<std::uint64_t>(value)); }

  Payload take() { return std::move(bytes_); }

 private:
  Payload bytes_;
};

class PayloadReader {
 public:
  explicit PayloadReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::uint64_t u64() {
    if (bytes_.size() - pos_ < 8) throw std::out_of_range("payload underflow");
    std::uint64_t value = 0;
    for (int i = 0; i < 8; ++i) value |= std::uint64_t{bytes_[pos_ + i]} << (8 * i);
    pos_ += 8;
    return value;
  }
  std::int64_t i64() { return static_cast<std::int64_t>(u64()); }

  std::size_t remainingFields() const { return (bytes_.size() - pos_) / 8; }
  bool done() const { return pos_ == bytes_.size(); }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace sgraph
