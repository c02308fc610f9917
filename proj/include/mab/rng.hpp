// Copyright 2026 The MAB Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <string_view>

#include "mab/hash.hpp"
#include "mab/natural.hpp"

namespace mab {

// Deterministic byte stream: block i = SHA256(key || i). Seeded runs are
// byte-identical across platforms. Single-owner; not shared between parties.
class Drbg {
 public:
  explicit Drbg(std::uint64_t seed) {
    TranscriptEncoder enc("mab/drbg/v1");
    enc.add_u64(seed);
    key_ = enc.digest();
  }

  // Independent child stream, domain-separated by label and index.
  Drbg fork(std::string_view label, std::uint64_t index) const {
    TranscriptEncoder enc("mab/drbg/fork/v1");
    enc.add_part(Bytes(key_.begin(), key_.end()));
    enc.add_str(label);
    enc.add_u64(index);
    return Drbg(enc.digest());
  }

  void fill(Bytes& out) {
    size_t off = 0;
    while (off < out.size()) {
      Bytes in(key_.begin(), key_.end());
      for (int i = 7; i >= 0; --i)
        in.push_back(static_cast<std::uint8_t>((counter_ >> (8 * i)) & 0xff));
      ++counter_;
      Digest block = sha256(in);
      size_t take = std::min(block.size(), out.size() - off);
      std::copy(block.begin(), block.begin() + take, out.begin() + off);
      off += take;
    }
  }

  // Uniform in [0, 2^bits).
  Natural uniform_bits(size_t bits) {
    if (bits == 0) return 0;
    Bytes buf((bits + 7) / 8);
    fill(buf);
    if (bits % 8 != 0)
      buf[0] &= static_cast<std::uint8_t>((1u << (bits % 8)) - 1);
    return from_bytes(buf);
  }

  // Uniform in [0, bound) by rejection.
  Natural below(const Natural& bound) {
    if (bound <= 0) throw std::invalid_argument("Drbg::below: empty range");
    size_t bits = bit_length(bound - 1);
    if (bits == 0) return 0;
    for (;;) {
      Natural c = uniform_bits(bits);
      if (c < bound) return c;
    }
  }

  // Uniform in [lo, hi).
  Natural range(const Natural& lo, const Natural& hi) {
    if (hi <= lo) throw std::invalid_argument("Drbg::range: empty range");
    return lo + below(hi - lo);
  }

  // Uniform in [1, bound) with gcd(result, coprime_to) = 1.
  Natural coprime_below(const Natural& bound, const Natural& coprime_to) {
    for (;;) {
      Natural c = range(1, bound);
      if (gcd(c, coprime_to) == 1) return c;
    }
  }

  std::uint64_t next_u64() {
    Bytes b(8);
    fill(b);
    std::uint64_t v = 0;
    for (auto byte : b) v = (v << 8) | byte;
    return v;
  }

 private:
  explicit Drbg(const Digest& key) : key_(key) {}

  Digest key_;
  std::uint64_t counter_ = 0;
};

}  // namespace mab
