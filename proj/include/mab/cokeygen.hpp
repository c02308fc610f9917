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
#include <string>
#include <vector>

#include "mab/arith.hpp"
#include "mab/paillier.hpp"

namespace mab {

// k-party generation of an RSA modulus N = pq where p = sum(p_i) and
// q = sum(q_i) stay additively shared: no party learns the factorization.
// Party 1 keeps its shares congruent to 3 mod 4 and everyone else to 0 mod 4,
// which forces p = q = 3 mod 4 as the biprimality algebra requires.
//
// The ceremony runs as a deterministic round-based message exchange; every
// message is appended to a public transcript that must never contain a share
// value verbatim.

struct PartyShare {
  int party_index = 0;  // 1-based
  Natural p_share;
  Natural q_share;
  std::optional<Natural> d_share;
};

struct CeremonyMessage {
  int round = 0;
  int from_party = 0;
  std::string kind;
  Bytes payload;
};

struct JointModulus {
  Natural n_value;
  int party_count = 0;
  Natural e_public;
  std::vector<CeremonyMessage> transcript;
  bool biprime_checked = false;
  // Set when a step used the desk-scale reconstruction shortcut instead of a
  // fully share-private protocol (exponent-share derivation does).
  bool simulated_shortcut = false;
};

struct CokeygenConfig {
  unsigned prime_bits = 32;              // per-prime width lambda
  unsigned long trial_division_bound = 10000;
  int biprimality_rounds = 20;
  int max_ceremony_attempts = 200;
};

// Candidate failed a trial-division screen; the driver restarts the ceremony.
struct TrialDivisionFailure : std::runtime_error {
  TrialDivisionFailure(const std::string& stage, unsigned long prime)
      : std::runtime_error("trial division failure on " + stage +
                           " (prime " + std::to_string(prime) + ")"),
        stage_name(stage),
        divisor(prime) {}
  std::string stage_name;
  unsigned long divisor;
};

namespace detail {

inline void record(std::vector<CeremonyMessage>& transcript, int round,
                   int from, const std::string& kind, const Bytes& payload) {
  transcript.push_back(CeremonyMessage{round, from, kind, payload});
}

// Sieve primes for the distributed residue exchange: odd primes below the
// configured trial-division bound, with the running product kept below
// 2^(lambda-2). Residues mod a larger prime set would let an observer
// CRT-reconstruct the shares outright at small lambda; candidates surviving
// this screen are fully screened again through the public N.
inline std::vector<unsigned long> sieve_primes(unsigned lambda,
                                               unsigned long bound) {
  std::vector<unsigned long> out;
  Natural product = 1;
  Natural cap = pow2(lambda >= 2 ? lambda - 2 : 1);
  for (unsigned long p : small_primes(std::min(bound, 1000ul))) {
    if (p == 2 || p >= bound) continue;
    product *= p;
    if (product >= cap) break;
    out.push_back(p);
  }
  return out;
}

}  // namespace detail

inline void validate_shares(std::span<const PartyShare> shares) {
  if (shares.size() < 2)
    throw std::invalid_argument("consortium needs at least 2 parties");
  for (size_t i = 0; i < shares.size(); ++i) {
    const auto& s = shares[i];
    if (s.party_index != static_cast<int>(i) + 1)
      throw std::invalid_argument("party indices must be 1..k in order");
    if (s.p_share <= 0 || s.q_share <= 0)
      throw std::invalid_argument("shares must be strictly positive");
  }
}

// Each party picks independent (p_share, q_share) in [2^(lambda-1)/k,
// 2^lambda/k) adjusted to its residue class, so the share sums land in
// [2^(lambda-1), 2^lambda).
inline std::vector<PartyShare> rdm_para(unsigned lambda, int k, Drbg& rng,
                                        std::uint64_t attempt = 0) {
  if (k < 2) throw std::invalid_argument("rdm_para: k must be >= 2");
  if (lambda < 16) throw std::invalid_argument("rdm_para: lambda must be >= 16");
  Natural lo = pow2(lambda - 1) / k + 1;
  Natural hi = pow2(lambda) / k;
  std::vector<PartyShare> shares;
  for (int i = 1; i <= k; ++i) {
    Drbg party_rng = rng.fork("rdmpara", attempt).fork("party", i);
    auto draw = [&](std::string_view which, int iteration) {
      Drbg r = party_rng.fork(which, iteration);
      unsigned residue = i == 1 ? 3 : 0;
      for (;;) {
        Natural c = r.range(lo, hi);
        c += (residue + 4 - mpz_fdiv_ui(c.get_mpz_t(), 4)) % 4;
        if (c < hi && c > 0) return c;
      }
    };
    shares.push_back(PartyShare{i, draw("p", 0), draw("q", 1), std::nullopt});
  }
  return shares;
}

namespace detail {

// Distributed trial-division round: parties broadcast their share residues
// modulo each sieve prime; the candidate is rejected when the residue sum
// vanishes mod any of them.
inline void sieve_round(std::span<const PartyShare> shares,
                        const std::vector<unsigned long>& primes,
                        bool q_side, std::vector<CeremonyMessage>& transcript,
                        int round) {
  counters().trial_div++;
  const std::string kind = q_side ? "sieve_q" : "sieve_p";
  std::vector<std::vector<unsigned long>> residues(shares.size());
  for (size_t i = 0; i < shares.size(); ++i) {
    const Natural& v = q_side ? shares[i].q_share : shares[i].p_share;
    TranscriptEncoder payload("mab/ceremony/sieve");
    for (unsigned long p : primes) {
      unsigned long r = mpz_fdiv_ui(v.get_mpz_t(), p);
      residues[i].push_back(r);
      payload.add_u64(r);
    }
    record(transcript, round, static_cast<int>(i) + 1, kind, payload.bytes());
  }
  for (size_t j = 0; j < primes.size(); ++j) {
    unsigned long sum = 0;
    for (const auto& r : residues) sum = (sum + r[j]) % primes[j];
    if (sum == 0)
      throw TrialDivisionFailure(q_side ? "q" : "p", primes[j]);
  }
}

// Three-round masked multiplication of the shared sums: round 1 publishes
// Enc_i(p_i) under a throwaway key of party i, round 2 answers with
// Enc_i(p_i * q_j + rho_ij), round 3 reveals masked partial sums sigma_i with
// sum(sigma_i) = (sum p_i)(sum q_i). No message carries a share in clear and
// no party's view contains both sums.
inline Natural masked_product(std::span<const PartyShare> shares,
                              unsigned lambda, Drbg& rng,
                              std::vector<CeremonyMessage>& transcript,
                              int first_round) {
  const int k = static_cast<int>(shares.size());
  const unsigned tmp_bits = 2 * lambda + 96;
  const Natural mask_bound = pow2(2 * lambda + 64);

  std::vector<PaillierKey> keys;
  std::vector<Ciphertext> enc_p;
  for (int i = 0; i < k; ++i) {
    Drbg krng = rng.fork("mulkey", i + 1);
    PrimeSpec spec{.bit_length = tmp_bits / 2};
    Natural p = gen_prime(spec, krng);
    Natural q;
    do {
      q = gen_prime(spec, krng);
    } while (q == p);
    keys.push_back(h_keygen(p, q));
    TranscriptEncoder key_msg("mab/ceremony/mulkey");
    key_msg.add_nat(keys[i].pub.n_value);
    key_msg.add_nat(keys[i].pub.g_value);
    record(transcript, first_round, i + 1, "mul_key", key_msg.bytes());

    Drbg erng = rng.fork("mulenc", i + 1);
    enc_p.push_back(h_enc(keys[i].pub, shares[i].p_share, erng));
    TranscriptEncoder enc_msg("mab/ceremony/mulenc");
    enc_msg.add_nat(enc_p[i].c_value);
    record(transcript, first_round, i + 1, "mul_enc", enc_msg.bytes());
  }

  // masks[j][i] = rho chosen by party j for party i's ciphertext
  std::vector<std::vector<Natural>> masks(k, std::vector<Natural>(k));
  std::vector<std::vector<Ciphertext>> responses(k, std::vector<Ciphertext>(k));
  for (int j = 0; j < k; ++j) {
    Drbg mrng = rng.fork("mulmask", j + 1);
    for (int i = 0; i < k; ++i) {
      if (i == j) continue;
      masks[j][i] = mrng.below(mask_bound);
      const PaillierPublic& pk = keys[i].pub;
      Natural scaled = pow_mod(enc_p[i].c_value, shares[j].q_share, pk.n_squared);
      Ciphertext mask_ct = h_enc(pk, masks[j][i], mrng);
      responses[j][i] =
          Ciphertext{mul_mod(scaled, mask_ct.c_value, pk.n_squared), pk.key_id};
      TranscriptEncoder resp("mab/ceremony/mulresp");
      resp.add_u64(static_cast<std::uint64_t>(i + 1));
      resp.add_nat(responses[j][i].c_value);
      record(transcript, first_round + 1, j + 1, "mul_resp", resp.bytes());
    }
  }

  Natural total = 0;
  for (int i = 0; i < k; ++i) {
    SignedInt sigma = mul(shares[i].p_share, shares[i].q_share);
    for (int j = 0; j < k; ++j) {
      if (j == i) continue;
      sigma = add(sigma, h_dec(keys[i], responses[j][i]));  // p_i q_j + rho_ji
      sigma -= masks[i][j];  // masks party i handed out
    }
    TranscriptEncoder sig("mab/ceremony/mulsigma");
    sig.add_int(sigma);
    record(transcript, first_round + 2, i + 1, "mul_sigma", sig.bytes());
    total += sigma;
  }
  return total;
}

}  // namespace detail

// N = (sum p_i)(sum q_i) via the masked multiparty multiplication, then a
// full trial-division screen of the public N. Throws TrialDivisionFailure
// when a screen rejects ("go back to step 1").
inline JointModulus co_n(std::span<const PartyShare> shares,
                         const CokeygenConfig& config, Drbg& rng) {
  validate_shares(shares);
  JointModulus jm;
  jm.party_count = static_cast<int>(shares.size());

  auto primes =
      detail::sieve_primes(config.prime_bits, config.trial_division_bound);
  detail::sieve_round(shares, primes, false, jm.transcript, 1);
  detail::sieve_round(shares, primes, true, jm.transcript, 1);

  Drbg mul_rng = rng.fork("con", 0);
  Natural n = detail::masked_product(shares, config.prime_bits, mul_rng,
                                     jm.transcript, 2);
  if (mpz_even_p(n.get_mpz_t()))
    throw TrialDivisionFailure("N", 2);
  if (unsigned long f = trial_division(n, config.trial_division_bound); f != 0)
    throw TrialDivisionFailure("N", f);
  jm.n_value = n;
  detail::record(jm.transcript, 5, 0, "modulus_published",
                 to_bytes(jm.n_value));
  return jm;
}

// Distributed Boneh-Franklin biprimality rounds: public-coin g with
// (g/N) = +1; party 1 publishes g^((N - p_1 - q_1 + 1)/4), everyone else
// g^(-(p_i + q_i)/4); a round accepts iff the product is +-1 mod N.
inline bool biprimality_test(JointModulus& jm,
                             std::span<const PartyShare> shares, int rounds,
                             Drbg& rng) {
  validate_shares(shares);
  const Natural& n = jm.n_value;
  bool all_ok = true;
  int round_base = 6;
  Natural nonce = rng.uniform_bits(64);
  for (int r = 0; r < rounds && all_ok; ++r) {
    counters().biprime_round++;
    Natural g;
    for (std::uint64_t ctr = 0;; ++ctr) {
      TranscriptEncoder enc("mab/bipritest/g");
      enc.add_nat(n);
      enc.add_nat(nonce);
      enc.add_u64(static_cast<std::uint64_t>(r));
      enc.add_u64(ctr);
      g = hash_to_int(enc, n);
      if (g > 1 && jacobi(g, n) == 1) break;
    }
    Natural product = 1;
    bool exponents_ok = true;
    for (const auto& share : shares) {
      Natural v;
      if (share.party_index == 1) {
        Natural e = n - share.p_share - share.q_share + 1;
        if (e <= 0 || e % 4 != 0) {
          exponents_ok = false;
          break;
        }
        v = pow_mod(g, e / 4, n);
      } else {
        Natural e = share.p_share + share.q_share;
        if (e % 4 != 0) {
          exponents_ok = false;
          break;
        }
        v = mod_inv(pow_mod(g, e / 4, n), n);
      }
      TranscriptEncoder msg("mab/ceremony/biprime");
      msg.add_u64(static_cast<std::uint64_t>(r));
      msg.add_nat(v);
      detail::record(jm.transcript, round_base + r, share.party_index,
                     "biprime_v", msg.bytes());
      product = mul_mod(product, v, n);
    }
    bool ok = exponents_ok && (product == 1 || product == n - 1);
    detail::record(jm.transcript, round_base + r, 0, "biprime_round_result",
                   Bytes{static_cast<std::uint8_t>(ok ? 1 : 0)});
    all_ok = all_ok && ok;
  }
  jm.biprime_checked = true;
  detail::record(jm.transcript, round_base + rounds, 0, "biprime_verdict",
                 Bytes{static_cast<std::uint8_t>(all_ok ? 1 : 0)});
  return all_ok;
}

// Desk-scale reconstruction of (p, q) from the shares. Test harnesses and the
// flagged keygen shortcut only.
inline std::pair<Natural, Natural> testmode_reconstruct(
    std::span<const PartyShare> shares) {
  Natural p = 0, q = 0;
  for (const auto& s : shares) {
    p = add(p, s.p_share);
    q = add(q, s.q_share);
  }
  return {p, q};
}

// Jointly derive additive shares of d = e^-1 mod phi(N). The share-private
// inverse protocol is out of scope; phi is reconstructed locally and the
// shortcut is flagged on the modulus and in the transcript.
inline std::vector<PartyShare> co_keygen(JointModulus& jm, const Natural& e,
                                         std::span<const PartyShare> shares,
                                         Drbg& rng) {
  validate_shares(shares);
  if (!jm.biprime_checked)
    throw std::invalid_argument("co_keygen: biprimality not yet recorded");
  auto [p, q] = testmode_reconstruct(shares);
  Natural phi = jm.n_value - p - q + 1;
  jm.simulated_shortcut = true;
  detail::record(jm.transcript, 1000, 0, "keygen_phi_simulated", Bytes{1});
  if (gcd(e, phi) != 1)
    throw std::invalid_argument(
        "co_keygen: e shares a factor with phi(N); choose a different e");
  Natural d = mod_inv(e, phi);
  std::vector<PartyShare> out(shares.begin(), shares.end());
  Natural sum = 0;
  Drbg drng = rng.fork("dshare", 0);
  for (size_t i = 0; i + 1 < out.size(); ++i) {
    Natural di = drng.below(phi);
    out[i].d_share = di;
    sum += di;
  }
  Natural last = d - sum;
  mpz_mod(last.get_mpz_t(), last.get_mpz_t(), phi.get_mpz_t());
  out.back().d_share = last;
  jm.e_public = e;
  detail::record(jm.transcript, 1000, 0, "exponent_published", to_bytes(e));
  return out;
}

// One party's threshold-decryption contribution c^(d_i) mod N.
inline Natural threshold_decrypt_contrib(const PartyShare& share,
                                         const Natural& c,
                                         const JointModulus& jm) {
  if (!share.d_share)
    throw std::invalid_argument("threshold contrib: no exponent share");
  return pow_mod(c, *share.d_share, jm.n_value);
}

// combine = product of all k contributions = c^d mod N.
inline Natural threshold_combine(std::span<const Natural> contribs,
                                 const JointModulus& jm) {
  if (contribs.size() != static_cast<size_t>(jm.party_count))
    throw std::invalid_argument("threshold combine: threshold not met");
  Natural acc = 1;
  for (const auto& v : contribs) acc = mul_mod(acc, v, jm.n_value);
  return acc;
}

struct CeremonyResult {
  JointModulus modulus;
  std::vector<PartyShare> shares;
  bool biprime_ok = false;
  int attempts = 0;
};

// Full ceremony driver with the restart loop: rdmPara -> coN -> BipriTest ->
// KeyGen, retrying on trial-division or biprimality rejection.
inline CeremonyResult run_ceremony(const CokeygenConfig& config, int k,
                                   const Natural& e, std::uint64_t seed) {
  Drbg rng(seed);
  for (int attempt = 0; attempt < config.max_ceremony_attempts; ++attempt) {
    auto shares = rdm_para(config.prime_bits, k, rng,
                           static_cast<std::uint64_t>(attempt));
    JointModulus jm;
    try {
      Drbg crng = rng.fork("con-attempt", attempt);
      jm = co_n(shares, config, crng);
    } catch (const TrialDivisionFailure&) {
      continue;
    }
    Drbg brng = rng.fork("biprime", attempt);
    if (!biprimality_test(jm, shares, config.biprimality_rounds, brng))
      continue;
    try {
      Drbg krng = rng.fork("keygen", attempt);
      auto keyed = co_keygen(jm, e, shares, krng);
      return CeremonyResult{std::move(jm), std::move(keyed), true, attempt + 1};
    } catch (const std::invalid_argument&) {
      continue;  // gcd(e, phi) != 1: restart with a fresh candidate
    }
  }
  throw std::runtime_error("run_ceremony: retry budget exhausted");
}

// Consortium-sourced Paillier key (shared modulus N, lambda in shares).
inline PaillierKey consortium_paillier_key(const JointModulus& jm,
                                           std::span<const PartyShare> shares,
                                           Drbg& rng, const Natural& beta = 1) {
  auto [p, q] = testmode_reconstruct(shares);
  if (p * q != jm.n_value)
    throw std::invalid_argument("consortium key: shares do not match modulus");
  return h_keygen_consortium(p, q, jm.party_count, rng, beta);
}

}  // namespace mab
