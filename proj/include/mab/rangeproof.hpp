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

#include <functional>
#include <utility>

#include "mab/commitments.hpp"

namespace mab {

// Proof that a committed value exceeds a public bound a (strict), via the
// five-step masked-square protocol:
//
//   E1 = cm / g^a = g^y h^r          (y = x - a)
//   E2 = E1^alpha h^r1
//   E3 = E2^alpha h^r2
//   F  = g^omega h^r3                omega in [-2^(t+l+s+T), 2^(t+l+s+T)]
//   V  = g^v / E3                    v = alpha^2 y + omega
//
// plus three sub-proofs: PK1 links E1 -> E2 -> E3 under one alpha, PK2 shows
// F and U = g^v / E3 hide the same omega, PK3 bounds omega. The verifier
// accepts iff all three check out and v > 2^(t+l+s+T); for y <= 0 that forces
// v = alpha^2 y + omega <= omega <= 2^(t+l+s+T), a contradiction.

struct RangeParams {
  CommitParams group;
  unsigned t = 16;   // challenge width
  unsigned l = 8;    // masking slack
  unsigned s = 8;    // statistical slack
  unsigned T = 33;   // threshold exponent margin; must exceed t + l + s

  void validate() const {
    if (T <= t + l + s)
      throw std::invalid_argument("RangeParams: T must exceed t + l + s");
  }

  Natural threshold() const { return pow2(t + l + s + T); }
  Natural challenge_bound() const { return pow2(t); }
  // blinding draws r1, r2, r3 in [1, R)
  Natural blinding_bound() const { return pow2(l + s) * group.modulus; }
  // PK3 acceptance window for the shifted response; doubles as the declared
  // interval of the omega response (CFT slack included)
  Natural pk3_window() const {
    return (pow2(l + s) + challenge_bound()) * 2 * threshold();
  }
};

struct RangePk1 {
  Natural a1, a2;          // announcements
  Natural c;               // challenge
  Natural z_alpha, z1, z2; // responses
};

struct RangePk2 {
  Natural b1, b2;
  Natural c;
  SignedInt z_omega;
  Natural z3;
  SignedInt z_star;
};

struct RangePk3 {
  Natural c0;
  Natural c;
  Natural z_omega;  // response for the shifted witness omega + threshold
  Natural z_r;
};

struct RangeProof {
  Natural e1, e2, e3, f, v_cm;  // group elements E1, E2, E3, F, V
  Natural v_value;
  RangePk1 pk1;
  RangePk2 pk2;
  RangePk3 pk3;
};

// Challenge source: Fiat-Shamir over the running transcript by default; the
// interactive driver in the tests substitutes verifier-drawn randomness.
using Challenger =
    std::function<Natural(const TranscriptEncoder&, const Natural&)>;

inline Natural fiat_shamir(const TranscriptEncoder& enc, const Natural& bound) {
  return hash_to_int(enc, bound);
}

// Commitment entry point of the module: non-negative x only.
inline Commitment r_com(const RangeParams& params, const Natural& x,
                        const Natural& r) {
  if (sgn(x) < 0) throw std::invalid_argument("r_com: negative value");
  return commit(params.group, x, r);
}

namespace detail {

inline TranscriptEncoder range_transcript(const RangeParams& params,
                                          const Natural& a,
                                          const Commitment& cm) {
  TranscriptEncoder enc("mab/rangeproof/v1");
  enc.add_nat(params.group.modulus);
  enc.add_nat(params.group.g_base);
  enc.add_nat(params.group.h_base);
  enc.add_nat(a);
  enc.add_nat(cm.value);
  return enc;
}

inline Natural group_div(const Natural& num, const Natural& den,
                         const Natural& n) {
  return mul_mod(num, mod_inv(den, n), n);
}

struct RangeWitness {
  SignedInt y;      // x - a
  SignedInt r;      // blinding of cm
  Natural alpha, r1, r2, r3;
  SignedInt omega;
  SignedInt v;
};

// Prover rounds shared by the honest and the scripted cheating drivers. The
// cheater differs only in how omega is chosen.
inline RangeProof prove_rounds(const RangeParams& params, const Commitment& cm,
                               const Natural& a, const RangeWitness& w,
                               Drbg& rng, const Challenger& challenge) {
  const Natural& n = params.group.modulus;
  const Natural& g = params.group.g_base;
  const Natural& h = params.group.h_base;
  const Natural theta = params.threshold();
  const Natural cbound = params.challenge_bound();

  RangeProof proof;
  proof.e1 = group_div(cm.value, pow_mod_signed(g, a, n), n);
  proof.e2 = mul_mod(pow_mod(proof.e1, w.alpha, n), pow_mod(h, w.r1, n), n);
  proof.e3 = mul_mod(pow_mod(proof.e2, w.alpha, n), pow_mod(h, w.r2, n), n);
  proof.f = mul_mod(pow_mod_signed(g, w.omega, n), pow_mod(h, w.r3, n), n);
  proof.v_value = w.v;
  Natural g_v = pow_mod_signed(g, w.v, n);
  proof.v_cm = group_div(g_v, proof.e3, n);
  SignedInt r_star = -(w.r * w.alpha * w.alpha + w.r1 * w.alpha + w.r2);

  TranscriptEncoder enc = range_transcript(params, a, cm);
  enc.add_nat(proof.e1);
  enc.add_nat(proof.e2);
  enc.add_nat(proof.e3);
  enc.add_nat(proof.f);
  enc.add_nat(proof.v_cm);
  enc.add_int(proof.v_value);

  // PK1: knowledge of (alpha, r1, r2) with E2 = E1^alpha h^r1,
  // E3 = E2^alpha h^r2.
  const Natural mask_scale = pow2(params.l + params.s + params.t);
  Natural m_alpha = rng.range(1, mask_scale * cbound);
  Natural m1 = rng.range(1, mask_scale * params.blinding_bound());
  Natural m2 = rng.range(1, mask_scale * params.blinding_bound());
  proof.pk1.a1 = mul_mod(pow_mod(proof.e1, m_alpha, n), pow_mod(h, m1, n), n);
  proof.pk1.a2 = mul_mod(pow_mod(proof.e2, m_alpha, n), pow_mod(h, m2, n), n);
  enc.add_str("pk1");
  enc.add_nat(proof.pk1.a1);
  enc.add_nat(proof.pk1.a2);
  proof.pk1.c = challenge(enc, cbound);
  proof.pk1.z_alpha = m_alpha + proof.pk1.c * w.alpha;
  proof.pk1.z1 = m1 + proof.pk1.c * w.r1;
  proof.pk1.z2 = m2 + proof.pk1.c * w.r2;
  enc.add_nat(proof.pk1.z_alpha);
  enc.add_nat(proof.pk1.z1);
  enc.add_nat(proof.pk1.z2);

  // PK2: F and U hide the same omega.
  Natural r_star_bound = params.blinding_bound() * pow2(2 * params.t + 1);
  Natural m_omega = rng.range(1, mask_scale * theta);
  Natural m3 = rng.range(1, mask_scale * params.blinding_bound());
  Natural m_star = rng.range(1, mask_scale * r_star_bound);
  proof.pk2.b1 = mul_mod(pow_mod(g, m_omega, n), pow_mod(h, m3, n), n);
  proof.pk2.b2 = mul_mod(pow_mod(g, m_omega, n), pow_mod(h, m_star, n), n);
  enc.add_str("pk2");
  enc.add_nat(proof.pk2.b1);
  enc.add_nat(proof.pk2.b2);
  proof.pk2.c = challenge(enc, cbound);
  proof.pk2.z_omega = m_omega + proof.pk2.c * w.omega;
  proof.pk2.z3 = m3 + proof.pk2.c * w.r3;
  proof.pk2.z_star = m_star + proof.pk2.c * r_star;
  enc.add_int(proof.pk2.z_omega);
  enc.add_nat(proof.pk2.z3);
  enc.add_int(proof.pk2.z_star);

  // PK3: CFT-style boundedness of omega, shifted to omega + theta >= 0.
  SignedInt omega_hat = w.omega + theta;
  if (sgn(omega_hat) < 0)
    throw std::invalid_argument("range prover: omega below -threshold");
  Natural m_hat = rng.below(pow2(params.l + params.s) * 2 * theta);
  Natural m_r = rng.range(1, mask_scale * params.blinding_bound());
  proof.pk3.c0 = mul_mod(pow_mod(g, m_hat, n), pow_mod(h, m_r, n), n);
  enc.add_str("pk3");
  enc.add_nat(proof.pk3.c0);
  proof.pk3.c = challenge(enc, cbound);
  proof.pk3.z_omega = m_hat + proof.pk3.c * omega_hat;
  proof.pk3.z_r = m_r + proof.pk3.c * w.r3;
  return proof;
}

inline RangeWitness sample_witness(const RangeParams& params,
                                   const Opening& opening, const Natural& a,
                                   Drbg& rng) {
  RangeWitness w;
  w.y = opening.x_value - a;
  w.r = opening.r_value;
  w.alpha = rng.range(pow2(params.t - 1), pow2(params.t));
  w.r1 = rng.range(1, params.blinding_bound());
  w.r2 = rng.range(1, params.blinding_bound());
  w.r3 = rng.range(1, params.blinding_bound());
  return w;
}

}  // namespace detail

// Honest prover; requires opening.x > a and a valid opening of cm.
inline RangeProof r_prove(const RangeParams& params, const Commitment& cm,
                          const Opening& opening, const Natural& a, Drbg& rng,
                          const Challenger& challenge = fiat_shamir) {
  params.validate();
  if (opening.x_value <= a)
    throw std::invalid_argument("r_prove: committed value not above bound");
  if (!verify_opening(params.group, cm, opening))
    throw std::invalid_argument("r_prove: opening does not match commitment");

  detail::RangeWitness w = detail::sample_witness(params, opening, a, rng);
  const Natural theta = params.threshold();
  // omega uniform over the part of [-theta, theta] where v = alpha^2 y + omega
  // clears the threshold; non-empty whenever y >= 1.
  SignedInt alpha_sq_y = w.alpha * w.alpha * w.y;
  SignedInt lo = theta - alpha_sq_y;
  if (lo < -theta) lo = -theta;
  if (lo >= theta)
    throw std::invalid_argument(
        "r_prove: parameter set too tight for the value range");
  w.omega = lo + 1 + rng.below(Natural(theta - lo));
  w.v = alpha_sq_y + w.omega;
  return detail::prove_rounds(params, cm, a, w, rng, challenge);
}

// Scripted cheating driver from the soundness analysis: runs the honest
// protocol for openings with x <= a, pushing omega to its legal maximum. The
// resulting v = alpha^2 y + omega cannot clear the threshold, so r_verify
// rejects every such proof.
inline RangeProof r_prove_forced(const RangeParams& params,
                                 const Commitment& cm, const Opening& opening,
                                 const Natural& a, Drbg& rng) {
  params.validate();
  if (!verify_opening(params.group, cm, opening))
    throw std::invalid_argument("r_prove_forced: opening mismatch");
  detail::RangeWitness w = detail::sample_witness(params, opening, a, rng);
  w.omega = params.threshold();  // best effort: largest omega PK3 allows
  w.v = w.alpha * w.alpha * w.y + w.omega;
  return detail::prove_rounds(params, cm, a, w, rng, fiat_shamir);
}

namespace detail {

// Shared equation checks; challenges are taken from the proof so both the
// Fiat-Shamir and the interactive flow use the same verdict path.
inline bool range_equations_hold(const RangeParams& params,
                                 const Commitment& cm, const Natural& a,
                                 const RangeProof& p) {
  const Natural& n = params.group.modulus;
  const Natural& g = params.group.g_base;
  const Natural& h = params.group.h_base;

  for (const Natural* e : {&p.e1, &p.e2, &p.e3, &p.f, &p.v_cm}) {
    if (*e < 1 || *e >= n) return false;
  }
  // Bob recomputes E1 and U from public data
  Natural e1 = group_div(cm.value, pow_mod_signed(g, a, n), n);
  if (e1 != p.e1) return false;
  Natural g_v = pow_mod_signed(g, p.v_value, n);
  Natural u = group_div(g_v, p.e3, n);
  if (u != p.v_cm) return false;  // g^v = V * E3
  if (p.v_value <= params.threshold()) return false;

  const Natural cbound = params.challenge_bound();
  if (p.pk1.c >= cbound || p.pk2.c >= cbound || p.pk3.c >= cbound)
    return false;

  // PK1
  if (mul_mod(pow_mod(p.e1, p.pk1.z_alpha, n), pow_mod(h, p.pk1.z1, n), n) !=
      mul_mod(p.pk1.a1, pow_mod(p.e2, p.pk1.c, n), n))
    return false;
  if (mul_mod(pow_mod(p.e2, p.pk1.z_alpha, n), pow_mod(h, p.pk1.z2, n), n) !=
      mul_mod(p.pk1.a2, pow_mod(p.e3, p.pk1.c, n), n))
    return false;

  // PK2
  if (mul_mod(pow_mod_signed(g, p.pk2.z_omega, n), pow_mod(h, p.pk2.z3, n),
              n) != mul_mod(p.pk2.b1, pow_mod(p.f, p.pk2.c, n), n))
    return false;
  if (mul_mod(pow_mod_signed(g, p.pk2.z_omega, n),
              pow_mod_signed(h, p.pk2.z_star, n), n) !=
      mul_mod(p.pk2.b2, pow_mod(u, p.pk2.c, n), n))
    return false;

  // PK3 over F * g^theta with the response window check
  if (p.pk3.z_omega < 0 || p.pk3.z_omega >= params.pk3_window()) return false;
  Natural f_hat = mul_mod(p.f, pow_mod(g, params.threshold(), n), n);
  if (mul_mod(pow_mod(g, p.pk3.z_omega, n), pow_mod(h, p.pk3.z_r, n), n) !=
      mul_mod(p.pk3.c0, pow_mod(f_hat, p.pk3.c, n), n))
    return false;

  return true;
}

}  // namespace detail

// Verifier: recomputes E1 and U, replays the Fiat-Shamir challenges over the
// canonical transcript order, and checks PK1-PK3 plus v > 2^(t+l+s+T).
// Malformed proofs (non-unit elements, negative responses) yield false, never
// an exception.
inline bool r_verify(const RangeParams& params, const Commitment& cm,
                     const Natural& a, const RangeProof& p) try {
  params.validate();
  TranscriptEncoder enc = detail::range_transcript(params, a, cm);
  enc.add_nat(p.e1);
  enc.add_nat(p.e2);
  enc.add_nat(p.e3);
  enc.add_nat(p.f);
  enc.add_nat(p.v_cm);
  enc.add_int(p.v_value);
  enc.add_str("pk1");
  enc.add_nat(p.pk1.a1);
  enc.add_nat(p.pk1.a2);
  if (p.pk1.c != fiat_shamir(enc, params.challenge_bound())) return false;
  enc.add_nat(p.pk1.z_alpha);
  enc.add_nat(p.pk1.z1);
  enc.add_nat(p.pk1.z2);
  enc.add_str("pk2");
  enc.add_nat(p.pk2.b1);
  enc.add_nat(p.pk2.b2);
  if (p.pk2.c != fiat_shamir(enc, params.challenge_bound())) return false;
  enc.add_int(p.pk2.z_omega);
  enc.add_nat(p.pk2.z3);
  enc.add_int(p.pk2.z_star);
  enc.add_str("pk3");
  enc.add_nat(p.pk3.c0);
  if (p.pk3.c != fiat_shamir(enc, params.challenge_bound())) return false;
  return detail::range_equations_hold(params, cm, a, p);
} catch (const std::exception&) {
  return false;
}

// Interactive flavor: equation checks against caller-supplied challenges
// (test-only message-passing driver).
inline bool r_verify_interactive(const RangeParams& params,
                                 const Commitment& cm, const Natural& a,
                                 const RangeProof& p) try {
  params.validate();
  return detail::range_equations_hold(params, cm, a, p);
} catch (const std::exception&) {
  return false;
}

// Interval membership a < x < b as two strict proofs: x > a on cm and
// b - x > 0 on the mirrored commitment g^b / cm.
inline std::pair<RangeProof, RangeProof> r_prove_interval(
    const RangeParams& params, const Commitment& cm, const Opening& opening,
    const Natural& a, const Natural& b, Drbg& rng) {
  if (opening.x_value <= a || opening.x_value >= b)
    throw std::invalid_argument("r_prove_interval: value outside (a, b)");
  RangeProof lower = r_prove(params, cm, opening, a, rng);
  const Natural& n = params.group.modulus;
  Commitment mirrored{
      detail::group_div(pow_mod_signed(params.group.g_base, b, n), cm.value, n),
      params.group.params_id};
  Opening mirrored_opening{b - opening.x_value, -opening.r_value};
  RangeProof upper = r_prove(params, mirrored, mirrored_opening, 0, rng);
  return {std::move(lower), std::move(upper)};
}

inline bool r_verify_interval(const RangeParams& params, const Commitment& cm,
                              const Natural& a, const Natural& b,
                              const std::pair<RangeProof, RangeProof>& proofs) {
  if (!r_verify(params, cm, a, proofs.first)) return false;
  const Natural& n = params.group.modulus;
  Commitment mirrored{
      detail::group_div(pow_mod_signed(params.group.g_base, b, n), cm.value, n),
      params.group.params_id};
  return r_verify(params, mirrored, 0, proofs.second);
}

}  // namespace mab
