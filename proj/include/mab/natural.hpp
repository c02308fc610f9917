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

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace mab {

// Arbitrary-precision integers. Natural is used where values are known
// non-negative; SignedInt marks places where protocol algebra goes below zero
// (exponents, responses). Both are mpz_class underneath.
using Natural = mpz_class;
using SignedInt = mpz_class;

using Bytes = std::vector<std::uint8_t>;

// Big-endian, minimal-length encoding: no leading zero byte, except the value
// 0 which encodes as a single zero byte.
inline Bytes to_bytes(const Natural& x) {
  if (sgn(x) < 0) throw std::invalid_argument("to_bytes: negative value");
  if (sgn(x) == 0) return Bytes{0x00};
  size_t count = 0;
  Bytes out((mpz_sizeinbase(x.get_mpz_t(), 2) + 7) / 8);
  mpz_export(out.data(), &count, 1, 1, 1, 0, x.get_mpz_t());
  out.resize(count);
  return out;
}

inline Natural from_bytes(const Bytes& b) {
  Natural x;
  if (!b.empty()) mpz_import(x.get_mpz_t(), b.size(), 1, 1, 1, 0, b.data());
  return x;
}

// Signed values carry a one-byte sign prefix so encodings stay unambiguous
// inside hashed transcripts.
inline Bytes to_bytes_signed(const SignedInt& x) {
  Bytes out{static_cast<std::uint8_t>(sgn(x) < 0 ? 1 : 0)};
  Bytes mag = to_bytes(abs(x));
  out.insert(out.end(), mag.begin(), mag.end());
  return out;
}

// Lowercase big-endian hex, "0" for zero; signed values get a '-' prefix.
inline std::string to_hex(const SignedInt& x) {
  char* raw = mpz_get_str(nullptr, 16, x.get_mpz_t());
  std::string s(raw);
  void (*freefunc)(void*, size_t);
  mp_get_memory_functions(nullptr, nullptr, &freefunc);
  freefunc(raw, s.size() + 1);
  return s;
}

inline SignedInt from_hex(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("from_hex: empty string");
  SignedInt x;
  if (mpz_set_str(x.get_mpz_t(), s.c_str(), 16) != 0)
    throw std::invalid_argument("from_hex: bad hex string: " + s);
  return x;
}

inline Natural natural_from_hex(const std::string& s) {
  SignedInt x = from_hex(s);
  if (sgn(x) < 0) throw std::invalid_argument("natural_from_hex: negative");
  return x;
}

inline size_t bit_length(const Natural& x) {
  if (sgn(x) == 0) return 0;
  return mpz_sizeinbase(x.get_mpz_t(), 2);
}

inline Natural pow2(unsigned long bits) {
  Natural r;
  mpz_ui_pow_ui(r.get_mpz_t(), 2, bits);
  return r;
}

}  // namespace mab
