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

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mab/arith.hpp"

namespace mab {

// Additively homomorphic Paillier encryption: c = g^m * r^n mod n^2,
// Dec(c) = L(c^lambda mod n^2) * mu mod n with L(x) = (x-1)/n.

struct PaillierPublic {
  Natural n_value;
  Natural n_squared;
  Natural g_value;     // 1 + beta*n for receiver keys
  std::string key_id;
};

struct PaillierPrivate {
  Natural lambda_value;  // lcm(p-1, q-1)
  Natural mu_value;      // L(g^lambda mod n^2)^-1 mod n
};

// Consortium-held decryption: additive lambda shares modulo n*lambda, one per
// party. mu stays public combining information.
struct ThresholdShares {
  std::vector<Natural> lambda_shares;
  Natural mu_value;
};

struct PaillierKey {
  PaillierPublic pub;
  std::optional<PaillierPrivate> priv;
  std::optional<ThresholdShares> threshold;
};

struct Ciphertext {
  Natural c_value;
  std::string key_id;
};

namespace detail {

inline std::string paillier_key_id(const Natural& n, const Natural& g) {
  TranscriptEncoder enc("mab/paillier/key/v1");
  enc.add_nat(n);
  enc.add_nat(g);
  return hex_of_digest(enc.digest()).substr(0, 16);
}

// L(x) = (x - 1) / n; defined only on arguments congruent to 1 mod n.
inline Natural paillier_l(const Natural& x, const Natural& n) {
  Natural num = x - 1;
  if (!mpz_divisible_p(num.get_mpz_t(), n.get_mpz_t()))
    throw std::runtime_error("paillier: L argument not congruent to 1 mod n");
  return num / n;
}

}  // namespace detail

// Key from two distinct primes. beta parametrizes the generator
// g = 1 + beta*n, so distinct receivers over a shared modulus still get
// distinct public keys; beta = 1 gives the classic g = n + 1.
inline PaillierKey h_keygen(const Natural& p, const Natural& q,
                            const Natural& beta = 1) {
  if (p == q) throw std::invalid_argument("h_keygen: primes must be distinct");
  Natural n = p * q;
  if (n < 15) throw std::invalid_argument("h_keygen: degenerate modulus");
  if (beta < 1 || beta >= n)
    throw std::invalid_argument("h_keygen: beta outside [1, n)");
  Natural n_sq = n * n;
  Natural g = (1 + beta * n) % n_sq;
  Natural lambda = lcm(p - 1, q - 1);
  Natural l_g = detail::paillier_l(pow_mod(g, lambda, n_sq), n);
  Natural mu = mod_inv(l_g % n, n);  // throws when L(g^lambda) is degenerate
  PaillierKey key;
  key.pub = PaillierPublic{n, n_sq, g, detail::paillier_key_id(n, g)};
  key.priv = PaillierPrivate{lambda, mu};
  return key;
}

// Consortium-sourced key: lambda is split into k additive shares modulo
// n*lambda. The reconstructed primes come from the ceremony's test-mode
// shortcut; the full private half is retained as desk-scale escrow.
inline PaillierKey h_keygen_consortium(const Natural& p, const Natural& q,
                                       int k, Drbg& rng,
                                       const Natural& beta = 1) {
  if (p % 4 != 3 || q % 4 != 3)
    throw std::invalid_argument(
        "h_keygen_consortium: primes must be congruent to 3 mod 4");
  PaillierKey key = h_keygen(p, q, beta);
  const Natural& n = key.pub.n_value;
  Natural lambda = key.priv->lambda_value;
  Natural share_space = n * lambda;
  std::vector<Natural> shares;
  Natural sum = 0;
  for (int i = 0; i + 1 < k; ++i) {
    shares.push_back(rng.below(share_space));
    sum += shares.back();
  }
  Natural last = lambda - sum;
  mpz_mod(last.get_mpz_t(), last.get_mpz_t(), share_space.get_mpz_t());
  shares.push_back(last);
  key.threshold = ThresholdShares{std::move(shares), key.priv->mu_value};
  return key;
}

// Raw encryption form shared by receiver keys and the verification-layer
// (dumb account) key: g^m * r^n mod n^2 with r any unit.
inline Natural raw_enc(const Natural& n, const Natural& n_sq, const Natural& g,
                       const Natural& m, const Natural& r) {
  Natural gm;
  if ((g - 1) % n == 0) {
    // g = 1 + beta*n: g^m = 1 + beta*m*n mod n^2, no exponentiation needed.
    Natural beta = (g - 1) / n;
    gm = (1 + mul_mod(mul(beta, m), n, n_sq)) % n_sq;
  } else {
    gm = pow_mod(g, m, n_sq);
  }
  return mul_mod(gm, pow_mod(r % n_sq, n, n_sq), n_sq);
}

inline Ciphertext h_enc(const PaillierPublic& pk, const Natural& m,
                        const Natural& r) {
  if (m < 0 || m >= pk.n_value)
    throw std::invalid_argument("h_enc: amount exceeds message space");
  if (r < 1 || gcd(r, pk.n_value) != 1)
    throw std::invalid_argument("h_enc: randomness not a unit");
  return Ciphertext{raw_enc(pk.n_value, pk.n_squared, pk.g_value, m, r),
                    pk.key_id};
}

inline Ciphertext h_enc(const PaillierPublic& pk, const Natural& m,
                        Drbg& rng) {
  return h_enc(pk, m, rng.coprime_below(pk.n_value, pk.n_value));
}

// Product of ciphertexts under one key; decrypts to the sum of plaintexts
// mod n.
inline Ciphertext h_oper(const PaillierPublic& pk,
                         std::span<const Ciphertext> cs) {
  if (cs.empty()) throw std::invalid_argument("h_oper: empty sequence");
  Natural acc = 1;
  for (const auto& c : cs) {
    if (c.key_id != pk.key_id)
      throw std::invalid_argument("h_oper: ciphertext under different key");
    acc = mul_mod(acc, c.c_value, pk.n_squared);
  }
  return Ciphertext{acc, pk.key_id};
}

inline Natural h_dec(const PaillierKey& key, const Ciphertext& c) {
  if (!key.priv)
    throw std::invalid_argument("h_dec: no private key available");
  if (c.key_id != key.pub.key_id)
    throw std::invalid_argument("h_dec: ciphertext not under this key");
  if (gcd(c.c_value, key.pub.n_squared) != 1)
    throw std::invalid_argument("h_dec: ciphertext not a unit");
  Natural u = pow_mod(c.c_value, key.priv->lambda_value, key.pub.n_squared);
  Natural l = detail::paillier_l(u, key.pub.n_value);
  return mul_mod(l, key.priv->mu_value, key.pub.n_value);
}

// --- threshold decryption ---------------------------------------------------

inline Natural threshold_dec_contrib(const PaillierPublic& pk,
                                     const Natural& lambda_share,
                                     const Ciphertext& c) {
  if (c.key_id != pk.key_id)
    throw std::invalid_argument("threshold contrib: key mismatch");
  return pow_mod(c.c_value, lambda_share, pk.n_squared);
}

inline Natural threshold_dec_combine(const PaillierPublic& pk,
                                     const Natural& mu,
                                     std::span<const Natural> contribs,
                                     size_t expected_parties) {
  if (contribs.size() != expected_parties)
    throw std::invalid_argument("threshold combine: threshold not met");
  Natural acc = 1;
  for (const auto& v : contribs) acc = mul_mod(acc, v, pk.n_squared);
  Natural l = detail::paillier_l(acc, pk.n_value);
  return mul_mod(l, mu, pk.n_value);
}

}  // namespace mab
