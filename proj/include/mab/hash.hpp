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

#include <openssl/sha.h>

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "mab/counters.hpp"
#include "mab/natural.hpp"

namespace mab {

using Digest = std::array<std::uint8_t, 32>;

inline Digest sha256(const Bytes& data) {
  Digest out;
  SHA256(data.data(), data.size(), out.data());
  return out;
}

inline std::string hex_of_digest(const Digest& d) {
  static const char* k = "0123456789abcdef";
  std::string s;
  s.reserve(64);
  for (auto b : d) {
    s.push_back(k[b >> 4]);
    s.push_back(k[b & 0xf]);
  }
  return s;
}

// Canonical length-prefixed concatenation of a domain tag plus an ordered
// part sequence. Distinct part sequences never collide structurally: every
// part is preceded by its u32 big-endian length.
class TranscriptEncoder {
 public:
  explicit TranscriptEncoder(std::string_view domain_tag) {
    append_u32(static_cast<std::uint32_t>(domain_tag.size()));
    buf_.insert(buf_.end(), domain_tag.begin(), domain_tag.end());
  }

  void add_part(const Bytes& part) {
    append_u32(static_cast<std::uint32_t>(part.size()));
    buf_.insert(buf_.end(), part.begin(), part.end());
    ++parts_;
  }

  void add_str(std::string_view s) { add_part(Bytes(s.begin(), s.end())); }
  void add_nat(const Natural& x) { add_part(to_bytes(x)); }
  void add_int(const SignedInt& x) { add_part(to_bytes_signed(x)); }
  void add_u64(std::uint64_t v) {
    Bytes b(8);
    for (int i = 7; i >= 0; --i) {
      b[i] = static_cast<std::uint8_t>(v & 0xff);
      v >>= 8;
    }
    add_part(b);
  }

  size_t part_count() const { return parts_; }
  const Bytes& bytes() const { return buf_; }

  Digest digest() const {
    counters().hash++;  // protocol-level hash operation
    Bytes framed = buf_;
    // Part count sealed at the end so extending a transcript cannot alias a
    // shorter one.
    for (int i = 3; i >= 0; --i)
      framed.push_back(static_cast<std::uint8_t>((parts_ >> (8 * i)) & 0xff));
    return sha256(framed);
  }

 private:
  void append_u32(std::uint32_t v) {
    for (int i = 3; i >= 0; --i)
      buf_.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xff));
  }

  Bytes buf_;
  size_t parts_ = 0;
};

// Deterministic, uniform-looking value in [0, bound). Rejection sampling over
// counter-extended digests avoids modulo bias.
inline Natural hash_to_int(const TranscriptEncoder& enc, const Natural& bound) {
  if (bound < 2) throw std::invalid_argument("hash_to_int: bound must be >= 2");
  const size_t bits = bit_length(bound - 1);
  const size_t nbytes = (bits + 7) / 8;
  const unsigned top_mask =
      bits % 8 == 0 ? 0xff : static_cast<unsigned>((1u << (bits % 8)) - 1);
  Digest base = enc.digest();
  for (std::uint64_t ctr = 0;; ++ctr) {
    Bytes stream;
    std::uint64_t block = 0;
    while (stream.size() < nbytes) {
      Bytes in(base.begin(), base.end());
      for (int i = 7; i >= 0; --i)
        in.push_back(static_cast<std::uint8_t>((ctr >> (8 * i)) & 0xff));
      for (int i = 7; i >= 0; --i)
        in.push_back(static_cast<std::uint8_t>((block >> (8 * i)) & 0xff));
      Digest d = sha256(in);
      stream.insert(stream.end(), d.begin(), d.end());
      ++block;
    }
    stream.resize(nbytes);
    stream[0] &= static_cast<std::uint8_t>(top_mask);
    Natural candidate = from_bytes(stream);
    if (candidate < bound) return candidate;
  }
}

inline Natural hash_to_int(std::string_view tag,
                           const std::vector<Bytes>& parts,
                           const Natural& bound) {
  TranscriptEncoder enc(tag);
  for (const auto& p : parts) enc.add_part(p);
  return hash_to_int(enc, bound);
}

}  // namespace mab
