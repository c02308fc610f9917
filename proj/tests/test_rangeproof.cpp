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

#include "mab/rangeproof.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace mab;

namespace {

RangeParams test_params(std::uint64_t seed = 101) {
  Drbg rng(seed);
  RangeParams params;
  params.group = setup_params(256, rng, "range-test", 40);
  params.t = 16;
  params.l = 8;
  params.s = 8;
  params.T = 33;
  return params;
}

std::vector<Bytes> proof_elements(const RangeProof& p) {
  return {to_bytes(p.e1),         to_bytes(p.e2),
          to_bytes(p.e3),         to_bytes(p.f),
          to_bytes(p.v_cm),       to_bytes_signed(p.v_value),
          to_bytes(p.pk1.a1),     to_bytes(p.pk1.a2),
          to_bytes(p.pk1.c),      to_bytes(p.pk1.z_alpha),
          to_bytes(p.pk1.z1),     to_bytes(p.pk1.z2),
          to_bytes(p.pk2.b1),     to_bytes(p.pk2.b2),
          to_bytes(p.pk2.c),      to_bytes_signed(p.pk2.z_omega),
          to_bytes(p.pk2.z3),     to_bytes_signed(p.pk2.z_star),
          to_bytes(p.pk3.c0),     to_bytes(p.pk3.c),
          to_bytes(p.pk3.z_omega), to_bytes(p.pk3.z_r)};
}

bool bytes_equal(const std::vector<Bytes>& a, const std::vector<Bytes>& b) {
  return a == b;
}

}  // namespace

TEST_CASE("r_com delegates to the commitment scheme") {
  RangeParams params = test_params();
  Drbg rng(1);
  Natural r = rng.range(1, params.group.modulus);
  Commitment cm = r_com(params, 5, r);
  Natural expected =
      mul_mod(pow_mod(params.group.g_base, 5, params.group.modulus),
              pow_mod(params.group.h_base, r, params.group.modulus),
              params.group.modulus);
  REQUIRE(cm.value == expected);
  REQUIRE(r_com(params, 0, r).value ==
          pow_mod(params.group.h_base, r, params.group.modulus));
  REQUIRE_THROWS_AS(r_com(params, -1, r), std::invalid_argument);
  REQUIRE_THROWS_AS(r_com(params, pow2(41), r), std::invalid_argument);
}

TEST_CASE("honest proof for x=5 above a=0 verifies") {
  RangeParams params = test_params();
  Drbg rng(2);
  Opening opening{5, rng.range(1, params.group.modulus)};
  Commitment cm = r_com(params, 5, opening.r_value);
  RangeProof proof = r_prove(params, cm, opening, 0, rng);
  REQUIRE(r_verify(params, cm, 0, proof));
  // verifier recomputation identity g^v = V * E3
  Natural lhs = pow_mod_signed(params.group.g_base, proof.v_value,
                               params.group.modulus);
  REQUIRE(lhs == mul_mod(proof.v_cm, proof.e3, params.group.modulus));
}

TEST_CASE("prover rejects x = a (strict positivity)") {
  RangeParams params = test_params();
  Drbg rng(3);
  Opening opening{0, rng.range(1, params.group.modulus)};
  Commitment cm = r_com(params, 0, opening.r_value);
  REQUIRE_THROWS_AS(r_prove(params, cm, opening, 0, rng),
                    std::invalid_argument);
}

TEST_CASE("prover rejects openings that do not match the commitment") {
  RangeParams params = test_params();
  Drbg rng(4);
  Opening opening{5, rng.range(1, params.group.modulus)};
  Commitment cm = r_com(params, 6, opening.r_value);
  REQUIRE_THROWS_AS(r_prove(params, cm, opening, 0, rng),
                    std::invalid_argument);
}

TEST_CASE("same seed replays a byte-identical proof") {
  RangeParams params = test_params();
  Drbg seed_rng(5);
  Opening opening{77, seed_rng.range(1, params.group.modulus)};
  Commitment cm = r_com(params, 77, opening.r_value);
  Drbg rng_a(42), rng_b(42);
  RangeProof a = r_prove(params, cm, opening, 0, rng_a);
  RangeProof b = r_prove(params, cm, opening, 0, rng_b);
  REQUIRE(bytes_equal(proof_elements(a), proof_elements(b)));
}

TEST_CASE("two seeds differ in every announcement element") {
  RangeParams params = test_params();
  Drbg seed_rng(6);
  Opening opening{99, seed_rng.range(1, params.group.modulus)};
  Commitment cm = r_com(params, 99, opening.r_value);
  Drbg rng_a(1), rng_b(2);
  RangeProof a = r_prove(params, cm, opening, 0, rng_a);
  RangeProof b = r_prove(params, cm, opening, 0, rng_b);
  REQUIRE(a.e2 != b.e2);
  REQUIRE(a.e3 != b.e3);
  REQUIRE(a.f != b.f);
  REQUIRE(a.v_cm != b.v_cm);
  REQUIRE(a.pk1.a1 != b.pk1.a1);
  REQUIRE(a.pk1.a2 != b.pk1.a2);
  REQUIRE(a.pk2.b1 != b.pk2.b1);
  REQUIRE(a.pk2.b2 != b.pk2.b2);
  REQUIRE(a.pk3.c0 != b.pk3.c0);
}

TEST_CASE("proof transcript never leaks the witness bytes") {
  RangeParams params = test_params();
  Drbg rng(7);
  // distinctive values so accidental containment is detectable
  Natural x = natural_from_hex("beefbeef");
  Opening opening{x, rng.range(pow2(100), params.group.modulus)};
  Commitment cm = r_com(params, x, opening.r_value);
  RangeProof proof = r_prove(params, cm, opening, 0, rng);
  Bytes x_bytes = to_bytes(x);
  Bytes r_bytes = to_bytes(opening.r_value);
  for (const Bytes& elem : proof_elements(proof)) {
    REQUIRE(std::search(elem.begin(), elem.end(), x_bytes.begin(),
                        x_bytes.end()) == elem.end());
    REQUIRE(std::search(elem.begin(), elem.end(), r_bytes.begin(),
                        r_bytes.end()) == elem.end());
  }
}

TEST_CASE("scripted negative-value cheater is rejected") {
  RangeParams params = test_params();
  Drbg rng(8);
  for (int i = 0; i < 25; ++i) {
    SignedInt x = -1 - SignedInt(rng.below(1000));
    Opening opening{x, rng.range(1, params.group.modulus)};
    Commitment cm = commit(params.group, x, opening.r_value);
    RangeProof proof = r_prove_forced(params, cm, opening, 0, rng);
    REQUIRE_FALSE(r_verify(params, cm, 0, proof));
  }
  // zero is rejected as well: strict positivity
  Opening zero{0, rng.range(1, params.group.modulus)};
  Commitment cm0 = commit(params.group, 0, zero.r_value);
  REQUIRE_FALSE(r_verify(params, cm0, 0, r_prove_forced(params, cm0, zero, 0, rng)));
}

TEST_CASE("single-element mutations invalidate the proof") {
  RangeParams params = test_params();
  Drbg rng(9);
  Opening opening{1234, rng.range(1, params.group.modulus)};
  Commitment cm = r_com(params, 1234, opening.r_value);
  RangeProof proof = r_prove(params, cm, opening, 0, rng);
  REQUIRE(r_verify(params, cm, 0, proof));

  auto mutated = [&](auto&& tweak) {
    RangeProof copy = proof;
    tweak(copy);
    return r_verify(params, cm, 0, copy);
  };
  REQUIRE_FALSE(mutated([](RangeProof& p) { p.e2 += 1; }));
  REQUIRE_FALSE(mutated([](RangeProof& p) { p.e3 += 1; }));
  REQUIRE_FALSE(mutated([](RangeProof& p) { p.f += 1; }));
  REQUIRE_FALSE(mutated([](RangeProof& p) { p.v_cm += 1; }));
  REQUIRE_FALSE(mutated([](RangeProof& p) { p.v_value += 1; }));
  REQUIRE_FALSE(mutated([](RangeProof& p) { p.pk1.z_alpha += 1; }));
  REQUIRE_FALSE(mutated([](RangeProof& p) { p.pk2.z_omega -= 1; }));
  REQUIRE_FALSE(mutated([](RangeProof& p) { p.pk3.z_omega += 1; }));
  REQUIRE_FALSE(mutated([](RangeProof& p) { p.pk3.c += 1; }));
}

TEST_CASE("interactive flavor with verifier-drawn challenges") {
  RangeParams params = test_params();
  Drbg prover_rng(10);
  Drbg verifier_rng(11);
  Opening opening{321, prover_rng.range(1, params.group.modulus)};
  Commitment cm = r_com(params, 321, opening.r_value);
  Challenger verifier_coin = [&](const TranscriptEncoder&,
                                 const Natural& bound) {
    return verifier_rng.below(bound);
  };
  RangeProof proof = r_prove(params, cm, opening, 0, prover_rng, verifier_coin);
  REQUIRE(r_verify_interactive(params, cm, 0, proof));
  // the non-interactive verifier rejects it: challenges are not the
  // transcript hashes
  REQUIRE_FALSE(r_verify(params, cm, 0, proof));
}

TEST_CASE("interval proofs: a < x < b") {
  RangeParams params = test_params();
  Drbg rng(12);
  Opening opening{5, rng.range(1, params.group.modulus)};
  Commitment cm = r_com(params, 5, opening.r_value);
  auto proofs = r_prove_interval(params, cm, opening, 0, 10, rng);
  REQUIRE(r_verify_interval(params, cm, 0, 10, proofs));

  Opening ten{10, rng.range(1, params.group.modulus)};
  Commitment cm10 = r_com(params, 10, ten.r_value);
  REQUIRE_THROWS_AS(r_prove_interval(params, cm10, ten, 0, 10, rng),
                    std::invalid_argument);
  Opening eleven{11, rng.range(1, params.group.modulus)};
  Commitment cm11 = r_com(params, 11, eleven.r_value);
  REQUIRE_THROWS_AS(r_prove_interval(params, cm11, eleven, 0, 10, rng),
                    std::invalid_argument);
}

TEST_CASE("params validation requires T above t+l+s") {
  RangeParams params = test_params();
  params.T = params.t + params.l + params.s;
  Drbg rng(13);
  Opening opening{5, rng.range(1, params.group.modulus)};
  Commitment cm = commit(params.group, 5, opening.r_value);
  REQUIRE_THROWS_AS(r_prove(params, cm, opening, 0, rng),
                    std::invalid_argument);
}

TEST_CASE("completeness sweep over random values") {
  RangeParams params = test_params();
  Drbg rng(14);
  for (int i = 0; i < 50; ++i) {
    Natural x = 1 + rng.below(pow2(16) - 1);
    Opening opening{x, rng.range(1, params.group.modulus)};
    Commitment cm = r_com(params, x, opening.r_value);
    RangeProof proof = r_prove(params, cm, opening, 0, rng);
    REQUIRE(r_verify(params, cm, 0, proof));
  }
}
