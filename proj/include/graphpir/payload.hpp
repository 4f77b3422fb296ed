// Copyright 2026 The graphpir Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "graphpir/rng.hpp"

namespace gpir {

/// Fixed-length bit string. XOR is componentwise, so every protocol that
/// works on one-bit files works unchanged on longer payloads.
class Payload {
 public:
  Payload() = default;
  explicit Payload(std::size_t bits) : bits_(bits), words_((bits + 63) / 64, 0) {}

  static Payload random(std::size_t bits, Rng& rng) {
    Payload p(bits);
    for (auto& w : p.words_) w = rng.next();
    p.mask_tail();
    return p;
  }

  std::size_t bits() const noexcept { return bits_; }

  bool bit(std::size_t i) const { return (words_.at(i / 64) >> (i % 64)) & 1U; }

  void set_bit(std::size_t i, bool v) {
    auto& w = words_.at(i / 64);
    const std::uint64_t m = std::uint64_t{1} << (i % 64);
    w = v ? (w | m) : (w & ~m);
  }

  bool is_zero() const noexcept {
    for (auto w : words_)
      if (w != 0) return false;
    return true;
  }

  Payload& operator^=(const Payload& other) {
    if (other.bits_ != bits_) throw std::invalid_argument("payload length mismatch");
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= other.words_[i];
    return *this;
  }

  friend Payload operator^(Payload a, const Payload& b) { return a ^= b; }
  friend bool operator==(const Payload&, const Payload&) = default;

  /// Most-significant-first hex of the little-endian bit string.
  std::string to_hex() const {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    const std::size_t nibbles = (bits_ + 3) / 4;
    for (std::size_t n = nibbles; n-- > 0;) {
      unsigned v = 0;
      for (unsigned b = 0; b < 4; ++b) {
        const std::size_t i = n * 4 + b;
        if (i < bits_ && bit(i)) v |= 1U << b;
      }
      out.push_back(digits[v]);
    }
    return out;
  }

 private:
  void mask_tail() {
    if (bits_ % 64 != 0 && !words_.empty())
      words_.back() &= (std::uint64_t{1} << (bits_ % 64)) - 1;
  }

  std::size_t bits_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Payloads indexed by file slot (edge id for graphs, file index - 1 for
/// stars). All payloads share one length.
class FileStore {
 public:
  FileStore(std::size_t files, std::size_t bits) : bits_(bits), payloads_(files, Payload(bits)) {
    if (bits == 0) throw std::invalid_argument("payload length must be positive");
  }

  static FileStore random(std::size_t files, std::size_t bits, Rng& rng) {
    FileStore fs(files, bits);
    for (auto& p : fs.payloads_) p = Payload::random(bits, rng);
    return fs;
  }

  std::size_t size() const noexcept { return payloads_.size(); }
  std::size_t payload_bits() const noexcept { return bits_; }

  const Payload& at(std::size_t slot) const { return payloads_.at(slot); }

  void set(std::size_t slot, Payload p) {
    if (p.bits() != bits_) throw std::invalid_argument("payload length mismatch");
    payloads_.at(slot) = std::move(p);
  }

 private:
  std::size_t bits_;
  std::vector<Payload> payloads_;
};

}  // namespace gpir
