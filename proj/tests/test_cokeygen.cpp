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

#include "mab/cokeygen.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace mab;

namespace {

std::vector<PartyShare> make_shares(std::vector<std::pair<long, long>> pq) {
  std::vector<PartyShare> shares;
  int i = 1;
  for (auto [p, q] : pq)
    shares.push_back(PartyShare{i++, Natural(p), Natural(q), std::nullopt});
  return shares;
}

bool transcript_contains(const std::vector<CeremonyMessage>& transcript,
                         const Natural& value) {
  Bytes needle = to_bytes(value);
  for (const auto& msg : transcript) {
    auto it = std::search(msg.payload.begin(), msg.payload.end(),
                          needle.begin(), needle.end());
    if (it != msg.payload.end()) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("rdm_para share structure") {
  Drbg rng(17);
  auto shares = rdm_para(32, 3, rng);
  REQUIRE(shares.size() == 3);
  Natural bound = pow2(32);
  for (const auto& s : shares) {
    REQUIRE(s.p_share > 0);
    REQUIRE(s.p_share < bound);
    REQUIRE(s.q_share < bound);
    unsigned long residue = s.party_index == 1 ? 3 : 0;
    REQUIRE(s.p_share % 4 == residue);
    REQUIRE(s.q_share % 4 == residue);
  }
  auto [p, q] = testmode_reconstruct(shares);
  REQUIRE(p % 4 == 3);
  REQUIRE(q % 4 == 3);
  REQUIRE(bit_length(p) == 32);
}

TEST_CASE("rdm_para rejects a single party") {
  Drbg rng(1);
  REQUIRE_THROWS_AS(rdm_para(32, 1, rng), std::invalid_argument);
}

TEST_CASE("rdm_para is deterministic per seed") {
  Drbg a(5), b(5);
  auto sa = rdm_para(24, 2, a);
  auto sb = rdm_para(24, 2, b);
  for (size_t i = 0; i < sa.size(); ++i) {
    REQUIRE(sa[i].p_share == sb[i].p_share);
    REQUIRE(sa[i].q_share == sb[i].q_share);
  }
}

TEST_CASE("co_n multiplies the shared sums") {
  Drbg rng(23);
  CokeygenConfig cfg{.prime_bits = 16, .trial_division_bound = 3};
  auto shares = make_shares({{3, 7}, {4, 4}});  // p = 7, q = 11
  JointModulus jm = co_n(shares, cfg, rng);
  REQUIRE(jm.n_value == 77);
  REQUIRE(jm.party_count == 2);
}

TEST_CASE("co_n rejects candidates with small factors") {
  Drbg rng(29);
  CokeygenConfig cfg{.prime_bits = 16, .trial_division_bound = 10000};
  // p = 9 is divisible by 3: caught by the distributed sieve
  auto shares = make_shares({{5, 7}, {4, 4}});
  REQUIRE_THROWS_AS(co_n(shares, cfg, rng), TrialDivisionFailure);
  // even p slips past the odd-prime sieve but yields an even N
  CokeygenConfig loose{.prime_bits = 16, .trial_division_bound = 3};
  auto even = make_shares({{4, 7}, {4, 4}});
  REQUIRE_THROWS_MATCHES(co_n(even, loose, rng), TrialDivisionFailure,
                         Catch::Matchers::Predicate<TrialDivisionFailure>(
                             [](const TrialDivisionFailure& e) {
                               return e.divisor == 2;
                             }));
}

TEST_CASE("co_n transcript never carries a share verbatim") {
  Drbg rng(31);
  CokeygenConfig cfg{.prime_bits = 32};
  auto shares = rdm_para(32, 3, rng);
  JointModulus jm;
  unsigned attempt = 0;
  for (;;) {
    try {
      Drbg crng = rng.fork("attempt", attempt++);
      jm = co_n(shares, cfg, crng);
      break;
    } catch (const TrialDivisionFailure&) {
      Drbg srng = rng.fork("reshare", attempt);
      shares = rdm_para(32, 3, srng, attempt);
    }
  }
  for (const auto& s : shares) {
    REQUIRE_FALSE(transcript_contains(jm.transcript, s.p_share));
    REQUIRE_FALSE(transcript_contains(jm.transcript, s.q_share));
  }
}

TEST_CASE("biprimality accepts N=77 and rejects planted composites") {
  CokeygenConfig cfg{.prime_bits = 16, .trial_division_bound = 3};
  SECTION("true biprime 7 * 11") {
    Drbg rng(37);
    auto shares = make_shares({{3, 7}, {4, 4}});
    JointModulus jm = co_n(shares, cfg, rng);
    REQUIRE(biprimality_test(jm, shares, 20, rng));
    REQUIRE(jm.biprime_checked);
  }
  SECTION("N=45 = 9 * 5 rejected") {
    Drbg rng(41);
    auto shares = make_shares({{5, 3}, {4, 2}});
    JointModulus jm;
    jm.n_value = 45;
    jm.party_count = 2;
    REQUIRE_FALSE(biprimality_test(jm, shares, 20, rng));
  }
  SECTION("residue-respecting composite p = 15, q = 7 rejected") {
    Drbg rng(43);
    auto shares = make_shares({{3, 3}, {12, 4}});  // p = 15, q = 7, N = 105
    JointModulus jm = co_n(shares, cfg, rng);
    REQUIRE_FALSE(biprimality_test(jm, shares, 20, rng));
  }
}

TEST_CASE("co_keygen derives exponent shares summing to d mod phi") {
  Drbg rng(47);
  CokeygenConfig cfg{.prime_bits = 16, .trial_division_bound = 3};
  auto shares = make_shares({{3, 7}, {4, 4}});
  JointModulus jm = co_n(shares, cfg, rng);
  REQUIRE(biprimality_test(jm, shares, 10, rng));
  auto keyed = co_keygen(jm, 7, shares, rng);
  Natural d_sum = 0;
  for (const auto& s : keyed) d_sum += *s.d_share;
  REQUIRE(d_sum % 60 == 43);  // 7 * 43 = 301 = 1 mod 60
  REQUIRE(jm.simulated_shortcut);

  SECTION("even exponent rejected when phi is even") {
    JointModulus jm2 = jm;
    REQUIRE_THROWS_AS(co_keygen(jm2, 2, shares, rng), std::invalid_argument);
  }
  SECTION("keygen before biprimality is rejected") {
    Drbg rng2(48);
    JointModulus fresh = co_n(shares, cfg, rng2);
    REQUIRE_THROWS_AS(co_keygen(fresh, 7, shares, rng2),
                      std::invalid_argument);
  }
}

TEST_CASE("threshold decryption round-trips RSA at N=77") {
  Drbg rng(53);
  CokeygenConfig cfg{.prime_bits = 16, .trial_division_bound = 3};
  auto shares = make_shares({{3, 7}, {4, 4}});
  JointModulus jm = co_n(shares, cfg, rng);
  REQUIRE(biprimality_test(jm, shares, 10, rng));
  auto keyed = co_keygen(jm, 7, shares, rng);

  Natural c = pow_mod(5, 7, 77);  // m = 5, e = 7
  std::vector<Natural> contribs;
  for (const auto& s : keyed)
    contribs.push_back(threshold_decrypt_contrib(s, c, jm));
  REQUIRE(threshold_combine(contribs, jm) == 5);
  REQUIRE(threshold_combine({std::vector<Natural>{contribs[0], contribs[0]}},
                            jm) != 5);

  SECTION("identity ciphertext") {
    std::vector<Natural> ones;
    for (const auto& s : keyed)
      ones.push_back(threshold_decrypt_contrib(s, 1, jm));
    REQUIRE(threshold_combine(ones, jm) == 1);
  }
  SECTION("k-1 contributions rejected") {
    std::vector<Natural> partial{contribs[0]};
    REQUIRE_THROWS_AS(threshold_combine(partial, jm), std::invalid_argument);
  }
  SECTION("a missing share cannot reconstruct the plaintext") {
    // decryption with only one party's exponent share mismatches
    Natural partial = pow_mod(c, *keyed[0].d_share, 77);
    REQUIRE(partial != 5);
  }
}

TEST_CASE("full ceremonies at test scale produce sound parameters") {
  for (int k : {2, 3}) {
    CokeygenConfig cfg{.prime_bits = 32,
                       .trial_division_bound = 10000,
                       .biprimality_rounds = 10,
                       .max_ceremony_attempts = 4000};
    CeremonyResult res = run_ceremony(cfg, k, 65537, 1000 + k);
    auto [p, q] = testmode_reconstruct(res.shares);
    REQUIRE(p * q == res.modulus.n_value);
    REQUIRE(is_probable_prime(p));
    REQUIRE(is_probable_prime(q));
    REQUIRE(p % 4 == 3);
    REQUIRE(q % 4 == 3);
    Natural phi = (p - 1) * (q - 1);
    Natural d_sum = 0;
    for (const auto& s : res.shares) d_sum += *s.d_share;
    REQUIRE((65537 * d_sum) % phi == 1);
  }
}

TEST_CASE("ceremony determinism: same seed, same modulus") {
  CokeygenConfig cfg{.prime_bits = 24, .biprimality_rounds = 5,
                     .max_ceremony_attempts = 4000};
  CeremonyResult a = run_ceremony(cfg, 2, 65537, 77);
  CeremonyResult b = run_ceremony(cfg, 2, 65537, 77);
  REQUIRE(a.modulus.n_value == b.modulus.n_value);
  REQUIRE(a.shares[0].p_share == b.shares[0].p_share);
  REQUIRE(*a.shares[1].d_share == *b.shares[1].d_share);
}

TEST_CASE("consortium paillier key from ceremony output") {
  CokeygenConfig cfg{.prime_bits = 32, .biprimality_rounds = 10,
                     .max_ceremony_attempts = 4000};
  CeremonyResult res = run_ceremony(cfg, 2, 65537, 4242);
  Drbg rng(4243);
  PaillierKey key = consortium_paillier_key(res.modulus, res.shares, rng);
  REQUIRE(key.pub.n_value == res.modulus.n_value);
  Ciphertext c = h_enc(key.pub, 123, rng);
  REQUIRE(h_dec(key, c) == 123);
}
