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

#include <span>
#include <vector>

#include "mab/commitments.hpp"
#include "mab/paillier.hpp"

namespace mab {

// Proof that two commitments under different parameter sets (and moduli)
// hide the same value:
//
//   W1 = g_a^omega h_a^eta1,  W2 = g_b^omega h_b^eta2
//   u  = H(W1 || W2 || E || F)
//   D  = omega + u*m,  D1 = eta1 + u*r_a,  D2 = eta2 + u*r_b
//
// verified by recomputing u' = H(g_a^D h_a^D1 E^-u || g_b^D h_b^D2 F^-u ...).
// Responses are plain integers; the identity relies on exponent arithmetic
// over Z, so no modular reduction is applied to them.

struct EqualityParams {
  CommitParams params_a;
  CommitParams params_b;
  unsigned t = 16;  // challenge width
  unsigned l = 8;   // masking slack
  unsigned s = 8;   // statistical slack
  Natural msg_bound;  // committed values lie in [0, msg_bound)

  Natural challenge_bound() const { return pow2(t); }
  // caps keeping the responses inside their declared intervals
  Natural omega_bound() const { return (pow2(l) - 1) * pow2(t) * msg_bound; }
  Natural eta_bound(const CommitParams& side) const {
    return (pow2(l + s) - 1) * pow2(t) * side.modulus;
  }
  Natural d_interval() const { return pow2(l + t) * msg_bound; }
  Natural d1_interval() const { return pow2(l + t + s) * params_a.modulus; }
  Natural d2_interval() const { return pow2(l + t + s) * params_b.modulus; }
};

struct DualCommitment {
  Commitment e_cm;  // under params_a
  Commitment f_cm;  // under params_b
};

struct EqualityProof {
  Natural u_value;
  Natural d_value;
  Natural d1_value;
  Natural d2_value;
};

inline DualCommitment e_com(const EqualityParams& params, const Natural& m,
                            const SignedInt& r_a, const SignedInt& r_b) {
  if (params.params_a.params_id == params.params_b.params_id)
    throw std::invalid_argument("e_com: parameter sets must be distinct");
  if (m < 0 || m >= params.msg_bound)
    throw std::invalid_argument("e_com: value outside the message bound");
  return DualCommitment{commit(params.params_a, m, r_a),
                        commit(params.params_b, m, r_b)};
}

namespace detail {

inline Natural equality_challenge(const EqualityParams& params,
                                  const Natural& w1, const Natural& w2,
                                  const DualCommitment& dual) {
  TranscriptEncoder enc("mab/equality/v1");
  enc.add_nat(w1);
  enc.add_nat(w2);
  enc.add_nat(dual.e_cm.value);
  enc.add_nat(dual.f_cm.value);
  return hash_to_int(enc, params.challenge_bound());
}

}  // namespace detail

inline EqualityProof e_prove(const EqualityParams& params,
                             const DualCommitment& dual, const Natural& m,
                             const Natural& r_a, const Natural& r_b,
                             Drbg& rng) {
  if (!verify_opening(params.params_a, dual.e_cm, Opening{m, r_a}) ||
      !verify_opening(params.params_b, dual.f_cm, Opening{m, r_b}))
    throw std::invalid_argument("e_prove: openings inconsistent with duals");

  const Natural& na = params.params_a.modulus;
  const Natural& nb = params.params_b.modulus;
  Natural omega = rng.range(1, params.omega_bound());
  Natural eta1 = rng.range(1, params.eta_bound(params.params_a));
  Natural eta2 = rng.range(1, params.eta_bound(params.params_b));
  Natural w1 = mul_mod(pow_mod(params.params_a.g_base, omega, na),
                       pow_mod(params.params_a.h_base, eta1, na), na);
  Natural w2 = mul_mod(pow_mod(params.params_b.g_base, omega, nb),
                       pow_mod(params.params_b.h_base, eta2, nb), nb);
  Natural u = detail::equality_challenge(params, w1, w2, dual);
  return EqualityProof{u, omega + u * m, eta1 + u * r_a, eta2 + u * r_b};
}

inline bool e_verify(const EqualityParams& params, const DualCommitment& dual,
                     const EqualityProof& proof) try {
  if (proof.u_value < 0 || proof.u_value >= params.challenge_bound())
    return false;
  // response-interval checks (statistical hiding precondition)
  if (proof.d_value < 0 || proof.d_value >= params.d_interval()) return false;
  if (proof.d1_value < 0 || proof.d1_value >= params.d1_interval())
    return false;
  if (proof.d2_value < 0 || proof.d2_value >= params.d2_interval())
    return false;

  const Natural& na = params.params_a.modulus;
  const Natural& nb = params.params_b.modulus;
  const Natural& u = proof.u_value;
  Natural w1 = mul_mod(
      mul_mod(pow_mod(params.params_a.g_base, proof.d_value, na),
              pow_mod(params.params_a.h_base, proof.d1_value, na), na),
      pow_mod_signed(dual.e_cm.value, -SignedInt(u), na), na);
  Natural w2 = mul_mod(
      mul_mod(pow_mod(params.params_b.g_base, proof.d_value, nb),
              pow_mod(params.params_b.h_base, proof.d2_value, nb), nb),
      pow_mod_signed(dual.f_cm.value, -SignedInt(u), nb), nb);
  return detail::equality_challenge(params, w1, w2, dual) == u;
} catch (const std::exception&) {
  return false;
}

// ---------------------------------------------------------------------------
// Dumb-account binding
// ---------------------------------------------------------------------------

// Verification-layer key material published at mint time. n_d is a safe
// composite with discarded factors; g_d = (1+n_d) * rho^{n_d} mod n_d^2 has
// order divisible by n_d plus a large component of unknown order, and
// r_d = g_d^sigma with sigma discarded. Binding per the protocol:
// n_beta = n_d^2, g_beta = g_d, h_beta = r_d, r_beta = n_d.
struct DumbAccountKey {
  PaillierPublic pk;          // (n_d, g_d): encryption view, no private key
  Natural r_d;                // h_beta
  CommitParams beta_params;   // (n_d^2, g_d, r_d): F commitments
  CommitParams range_params;  // (n_d^2, g_d, r_d^{n_d}): ciphertexts as commitments
};

inline DumbAccountKey make_dumb_account(unsigned bits, Drbg& rng,
                                        unsigned max_message_bits = 128) {
  if (bits < 32)
    throw std::invalid_argument("make_dumb_account: modulus below minimum");
  Natural p = detail::gen_safe_prime(bits / 2, rng);
  Natural q;
  do {
    q = detail::gen_safe_prime(bits - bits / 2, rng);
  } while (q == p);
  Natural n = p * q;
  Natural n_sq = n * n;
  Natural rho = rng.coprime_below(n, n);
  Natural g = mul_mod(1 + n, pow_mod(rho, n, n_sq), n_sq);
  Natural sigma = rng.range(1, n_sq / 4);
  Natural r_d = pow_mod(g, sigma, n_sq);
  DumbAccountKey key;
  key.pk = PaillierPublic{n, n_sq, g, detail::paillier_key_id(n, g)};
  key.r_d = r_d;
  key.beta_params =
      bound_params(n_sq, g, r_d, "mab/v-beta", max_message_bits);
  key.range_params = bound_params(n_sq, g, pow_mod(r_d, n, n_sq),
                                  "mab/dumb-range", max_message_bits);
  return key;
}

// Verification-layer ciphertexts with product-bound randomness: the i-th
// output uses r_i = r_d^{k_i}, with sum(k_i) = 1 so prod(r_i) = r_d. Each
// ciphertext then equals g_d^{m_i} * (r_d^{n_d})^{k_i}: an integer commitment
// under range_params whose opening (m_i, k_i) drives the range proof.
struct DumbOutputs {
  std::vector<Ciphertext> ciphertexts;
  std::vector<SignedInt> k_exponents;
};

inline DumbOutputs encrypt_verification_outputs(const DumbAccountKey& key,
                                                std::span<const Natural> amounts,
                                                Drbg& rng) {
  if (amounts.empty())
    throw std::invalid_argument("verification outputs: empty amount list");
  DumbOutputs out;
  SignedInt k_sum = 0;
  for (size_t i = 0; i < amounts.size(); ++i) {
    SignedInt k;
    if (i + 1 < amounts.size()) {
      k = rng.range(1, key.pk.n_value);
      k_sum += k;
    } else {
      k = 1 - k_sum;
    }
    Natural c = commit(key.range_params, amounts[i], k).value;
    out.ciphertexts.push_back(Ciphertext{c, key.pk.key_id});
    out.k_exponents.push_back(k);
  }
  return out;
}

// H = prod(c_id) mod n_d^2 compared against the committed output-sum F.
// Equality holds iff the ciphertext amounts sum to F's committed value.
inline bool aggregate_check(const DumbAccountKey& key,
                            std::span<const Ciphertext> verification_outputs,
                            const Commitment& f_cm) {
  if (verification_outputs.empty())
    throw std::invalid_argument("aggregate_check: empty ciphertext sequence");
  if (f_cm.params_id != key.beta_params.params_id)
    throw std::invalid_argument(
        "aggregate_check: commitment not under the bound parameters");
  Natural h = 1;
  for (const auto& c : verification_outputs) {
    if (c.key_id != key.pk.key_id)
      throw std::invalid_argument("aggregate_check: foreign ciphertext");
    h = mul_mod(h, c.c_value, key.pk.n_squared);
  }
  return h == f_cm.value;
}

}  // namespace mab
