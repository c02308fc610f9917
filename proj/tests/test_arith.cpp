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

#include "mab/arith.hpp"

#include <catch2/catch_amalgamated.hpp>
#include <set>

using namespace mab;

namespace {

// Independent primality oracle: exhaustive trial division.
bool oracle_is_prime(unsigned long n) {
  if (n < 2) return false;
  for (unsigned long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

}  // namespace

TEST_CASE("gen_prime produces an 8-bit prime congruent 3 mod 4") {
  Drbg rng(7);
  PrimeSpec spec{.bit_length = 8,
                 .residue_class = std::make_pair(Natural(3), Natural(4))};
  Natural p = gen_prime(spec, rng);
  REQUIRE(p >= 128);
  REQUIRE(p <= 255);
  REQUIRE(p % 4 == 3);
  REQUIRE(oracle_is_prime(p.get_ui()));
}

TEST_CASE("gen_prime rejects the even-only residue class") {
  Drbg rng(7);
  PrimeSpec spec{.bit_length = 8,
                 .residue_class = std::make_pair(Natural(0), Natural(2))};
  REQUIRE_THROWS_AS(gen_prime(spec, rng), std::invalid_argument);
}

TEST_CASE("gen_prime accepts the odd residue class") {
  Drbg rng(9);
  PrimeSpec spec{.bit_length = 8,
                 .residue_class = std::make_pair(Natural(1), Natural(2))};
  REQUIRE(oracle_is_prime(gen_prime(spec, rng).get_ui()));
}

TEST_CASE("gen_prime is deterministic for a fixed seed") {
  PrimeSpec spec{.bit_length = 9};
  Drbg a(42), b(42);
  Natural pa = gen_prime(spec, a);
  Natural pb = gen_prime(spec, b);
  REQUIRE(pa == pb);
  REQUIRE(bit_length(pa) == 9);
}

TEST_CASE("gen_prime bit_length below 8 rejected") {
  Drbg rng(1);
  REQUIRE_THROWS_AS(gen_prime(PrimeSpec{.bit_length = 4}, rng),
                    std::invalid_argument);
}

TEST_CASE("gen_prime output has no proper factor below 10^4") {
  Drbg rng(12);
  for (unsigned bits : {16u, 24u, 48u}) {
    Natural p = gen_prime(PrimeSpec{.bit_length = bits}, rng);
    REQUIRE(trial_division(p, 10000) == 0);
  }
}

TEST_CASE("jacobi symbol basics") {
  REQUIRE(jacobi(1, 9) == 1);
  REQUIRE(jacobi(2, 15) == 1);
  REQUIRE(jacobi(3, 9) == 0);
  REQUIRE_THROWS_AS(jacobi(3, 8), std::invalid_argument);
  REQUIRE_THROWS_AS(jacobi(1, 1), std::invalid_argument);
}

TEST_CASE("jacobi agrees with Euler's criterion for all primes below 200") {
  for (unsigned long p = 3; p < 200; ++p) {
    if (!oracle_is_prime(p)) continue;
    for (unsigned long a = 0; a < p; ++a) {
      Natural euler = pow_mod(a, (p - 1) / 2, p);
      int expected = euler == 1 ? 1 : (euler == p - 1 ? -1 : 0);
      REQUIRE(jacobi(a, p) == expected);
    }
  }
}

TEST_CASE("mod_inv examples and failure") {
  REQUIRE(mod_inv(1, 7) == 1);
  REQUIRE(mod_inv(7, 60) == 43);
  REQUIRE_THROWS_AS(mod_inv(6, 9), std::invalid_argument);
}

TEST_CASE("mod_inv is an involution for units") {
  Drbg rng(3);
  Natural n("9223372036854775837");  // any odd modulus works here
  for (int i = 0; i < 500; ++i) {
    Natural a = rng.coprime_below(n, n);
    Natural inv = mod_inv(a, n);
    REQUIRE(mul_mod(a, inv, n) == 1);
    REQUIRE(mod_inv(inv, n) == a % n);
  }
}

TEST_CASE("byte serialization round-trip on random values up to 4096 bits") {
  Drbg rng(99);
  for (int i = 0; i < 10000; ++i) {
    Natural x = rng.uniform_bits(1 + (rng.next_u64() % 4096));
    REQUIRE(from_bytes(to_bytes(x)) == x);
    REQUIRE(natural_from_hex(to_hex(x)) == x);
  }
  // canonical zero: single zero byte
  REQUIRE(to_bytes(Natural(0)) == Bytes{0x00});
  REQUIRE(to_bytes(Natural(1)) == Bytes{0x01});
  // no leading zero byte
  REQUIRE(to_bytes(Natural(256))[0] == 0x01);
}

TEST_CASE("hash_to_int determinism and structural separation") {
  Natural bound = pow2(128);
  Bytes ab{'a', 'b'}, c{'c'}, a{'a'}, bc{'b', 'c'};
  Natural h1 = hash_to_int("tag", {ab, c}, bound);
  Natural h2 = hash_to_int("tag", {ab, c}, bound);
  Natural h3 = hash_to_int("tag", {a, bc}, bound);
  REQUIRE(h1 == h2);
  REQUIRE(h1 != h3);
}

TEST_CASE("hash_to_int respects the bound") {
  std::set<unsigned long> seen;
  for (std::uint64_t i = 0; i < 64; ++i) {
    TranscriptEncoder enc("bound-test");
    enc.add_u64(i);
    Natural v = hash_to_int(enc, 2);
    REQUIRE(v >= 0);
    REQUIRE(v < 2);
    seen.insert(v.get_ui());
  }
  REQUIRE(seen.size() == 2);  // both values occur
  REQUIRE_THROWS_AS(hash_to_int("t", {}, Natural(1)), std::invalid_argument);
}

TEST_CASE("pow_mod_signed uses inverses for negative exponents") {
  Natural n = 101;
  Natural g = 5;
  Natural direct = pow_mod(g, 7, n);
  REQUIRE(mul_mod(direct, pow_mod_signed(g, -7, n), n) == 1);
}

TEST_CASE("counters are monotone within a scope") {
  CounterScope scope;
  (void)pow_mod(3, 1000, 101);
  (void)mul_mod(3, 4, 101);
  auto d = scope.delta();
  REQUIRE(d.mod_exp == 1);
  REQUIRE(d.mod_mul == 1);
}
