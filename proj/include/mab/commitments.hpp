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

#include <string>

#include "mab/arith.hpp"

namespace mab {

// Integer-commitment group of unknown order: commitments are g^x * h^r mod n
// where n is a product of two safe primes discarded after setup and the
// discrete logs between g and h are unknown to provers.
struct CommitParams {
  Natural modulus;
  Natural g_base;
  Natural h_base;
  std::string params_id;              // hex digest of the setup transcript
  unsigned max_message_bits = 128;    // |x| cap for user-level commits
  bool key_bound = false;             // true when derived from a Paillier key

  void require_group_element(const Natural& v) const {
    if (v < 1 || v >= modulus)
      throw std::invalid_argument("commitment value outside group range");
  }
};

struct Commitment {
  Natural value;
  std::string params_id;

  bool operator==(const Commitment& o) const = default;
};

// Held prover-side only; never serialized into transactions. r may be
// negative (mirrored interval commitments, product-bound randomness).
struct Opening {
  SignedInt x_value;
  SignedInt r_value;
};

struct SetupSecrets {
  Natural p_prime;  // (P-1)/2
  Natural q_prime;  // (Q-1)/2
  Natural sigma;    // dlog of h base g
};

namespace detail {

inline Natural gen_safe_prime(unsigned bits, Drbg& rng) {
  PrimeSpec half{.bit_length = bits - 1};
  for (;;) {
    Natural p_prime = gen_prime(half, rng);
    Natural p = 2 * p_prime + 1;
    if (bit_length(p) == bits && is_probable_prime(p)) return p;
  }
}

inline std::string commit_params_digest(const Natural& n, const Natural& g,
                                        const Natural& h,
                                        std::string_view context) {
  TranscriptEncoder enc("mab/commit/setup/v1");
  enc.add_str(context);
  enc.add_nat(n);
  enc.add_nat(g);
  enc.add_nat(h);
  return hex_of_digest(enc.digest());
}

}  // namespace detail

// Trusted-setup generation: modulus from two safe primes, h = g^sigma with
// sigma destroyed. Only the transcript hash is retained for audit. When
// `secrets` is non-null the linking exponent is leaked to the caller; that
// path exists for the binding tests and must not be used elsewhere.
inline CommitParams setup_params(unsigned bits, Drbg& rng,
                                 std::string_view context = "commit",
                                 unsigned max_message_bits = 128,
                                 SetupSecrets* secrets = nullptr) {
  if (bits < 32)
    throw std::invalid_argument("setup_params: modulus below minimum width");
  Natural p = detail::gen_safe_prime(bits / 2, rng);
  Natural q;
  do {
    q = detail::gen_safe_prime(bits - bits / 2, rng);
  } while (q == p);
  Natural n = p * q;
  Natural order = ((p - 1) / 2) * ((q - 1) / 2);  // odd part of the group order
  Natural g;
  do {
    Natural a = rng.range(2, n - 1);
    g = mul_mod(a, a, n);  // quadratic residue, order in {p', q', p'q'}
  } while (g == 1);
  Natural sigma = rng.range(1, order);
  Natural h = pow_mod(g, sigma, n);
  CommitParams params{.modulus = n,
                      .g_base = g,
                      .h_base = h,
                      .params_id = detail::commit_params_digest(n, g, h, context),
                      .max_message_bits = max_message_bits};
  if (secrets != nullptr)
    *secrets = SetupSecrets{(p - 1) / 2, (q - 1) / 2, sigma};
  return params;
}

// Params over an existing group (verification-layer binding): no fresh
// setup, id derived from the supplied elements.
inline CommitParams bound_params(const Natural& modulus, const Natural& g,
                                 const Natural& h, std::string_view context,
                                 unsigned max_message_bits = 128) {
  return CommitParams{.modulus = modulus,
                      .g_base = g,
                      .h_base = h,
                      .params_id = detail::commit_params_digest(g, h, modulus, context),
                      .max_message_bits = max_message_bits,
                      .key_bound = true};
}

// g^x * h^r mod n. Negative exponents are realized through modular inverses.
inline Commitment commit(const CommitParams& params, const SignedInt& x,
                         const SignedInt& r) {
  if (bit_length(abs(x)) > params.max_message_bits)
    throw std::invalid_argument("commit: message exceeds configured bound");
  if (abs(r) >= params.modulus)
    throw std::invalid_argument("commit: blinding outside [0, modulus)");
  Natural gx = pow_mod_signed(params.g_base, x, params.modulus);
  Natural hr = pow_mod_signed(params.h_base, r, params.modulus);
  return Commitment{mul_mod(gx, hr, params.modulus), params.params_id};
}

inline bool verify_opening(const CommitParams& params, const Commitment& cm,
                           const Opening& opening) {
  if (cm.params_id != params.params_id) return false;
  return commit(params, opening.x_value, opening.r_value).value == cm.value;
}

}  // namespace mab
