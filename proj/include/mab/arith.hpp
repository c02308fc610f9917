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
#include <stdexcept>
#include <utility>
#include <vector>

#include "mab/counters.hpp"
#include "mab/hash.hpp"
#include "mab/natural.hpp"
#include "mab/rng.hpp"

namespace mab {

inline constexpr int kPrimalityRounds = 40;

// ---------------------------------------------------------------------------
// Counted modular arithmetic. All modules route group operations through
// these so operation-count instrumentation sees them.
// ---------------------------------------------------------------------------

inline Natural mul_mod(const Natural& a, const Natural& b, const Natural& m) {
  counters().mod_mul++;
  Natural r = a * b;
  mpz_mod(r.get_mpz_t(), r.get_mpz_t(), m.get_mpz_t());
  return r;
}

inline Natural mul(const Natural& a, const Natural& b) {
  counters().mul++;
  return a * b;
}

inline Natural add(const Natural& a, const Natural& b) {
  counters().add++;
  return a + b;
}

// b^e mod m for e >= 0.
inline Natural pow_mod(const Natural& b, const Natural& e, const Natural& m) {
  if (sgn(e) < 0) throw std::invalid_argument("pow_mod: negative exponent");
  counters().mod_exp++;
  Natural r;
  mpz_powm(r.get_mpz_t(), b.get_mpz_t(), e.get_mpz_t(), m.get_mpz_t());
  return r;
}

// a^-1 mod n; requires gcd(a, n) = 1.
inline Natural mod_inv(const Natural& a, const Natural& n) {
  Natural r;
  if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), n.get_mpz_t()) == 0)
    throw std::invalid_argument("mod_inv: element not invertible");
  return r;
}

// b^e mod m with signed e; negative exponents go through the inverse, so b
// must be a unit mod m when e < 0.
inline Natural pow_mod_signed(const Natural& b, const SignedInt& e,
                              const Natural& m) {
  if (sgn(e) >= 0) return pow_mod(b, e, m);
  return pow_mod(mod_inv(b, m), -e, m);
}

// Jacobi symbol (a/n); n must be odd and >= 3.
inline int jacobi(const Natural& a, const Natural& n) {
  if (n < 3 || mpz_even_p(n.get_mpz_t()))
    throw std::invalid_argument("jacobi: modulus must be odd and >= 3");
  return mpz_jacobi(a.get_mpz_t(), n.get_mpz_t());
}

inline bool is_probable_prime(const Natural& n, int rounds = kPrimalityRounds) {
  return mpz_probab_prime_p(n.get_mpz_t(), rounds) > 0;
}

// ---------------------------------------------------------------------------
// Small primes and trial division
// ---------------------------------------------------------------------------

inline const std::vector<unsigned long>& small_primes(unsigned long bound) {
  static std::vector<unsigned long> table;
  static unsigned long table_bound = 0;
  if (bound > table_bound) {
    table.clear();
    std::vector<bool> sieve(bound, true);
    for (unsigned long i = 2; i < bound; ++i) {
      if (!sieve[i]) continue;
      table.push_back(i);
      for (unsigned long j = i * i; j < bound; j += i) sieve[j] = false;
    }
    table_bound = bound;
  }
  // Callers asking for a smaller bound reuse the bigger table via the cutoff
  // below; rebuilds only grow.
  return table;
}

// Smallest prime factor of n below `bound`, or 0 if none divides n.
inline unsigned long trial_division(const Natural& n, unsigned long bound) {
  counters().trial_div++;
  for (unsigned long p : small_primes(bound)) {
    if (p >= bound) break;
    if (mpz_divisible_ui_p(n.get_mpz_t(), p) && n != p) return p;
  }
  return 0;
}

// ---------------------------------------------------------------------------
// Prime generation
// ---------------------------------------------------------------------------

struct PrimeSpec {
  unsigned bit_length = 0;
  // Optional (remainder, modulus) the prime must satisfy.
  std::optional<std::pair<Natural, Natural>> residue_class;

  void validate() const {
    if (bit_length < 8)
      throw std::invalid_argument("PrimeSpec: bit_length must be >= 8");
    if (residue_class) {
      const auto& [rem, mod] = *residue_class;
      if (mod < 2 || rem < 0 || rem >= mod)
        throw std::invalid_argument("PrimeSpec: malformed residue class");
      if (gcd(rem, mod) != 1)
        throw std::invalid_argument(
            "PrimeSpec: residue class shares a factor with its modulus");
    }
  }
};

// Probable prime of exactly spec.bit_length bits satisfying the residue
// class. Throws after a bounded number of failed candidates.
inline Natural gen_prime(const PrimeSpec& spec, Drbg& rng) {
  spec.validate();
  const Natural lo = pow2(spec.bit_length - 1);
  const Natural hi = pow2(spec.bit_length);
  const unsigned long max_attempts = 64ul * spec.bit_length * spec.bit_length;
  for (unsigned long attempt = 0; attempt < max_attempts; ++attempt) {
    Natural c = rng.range(lo, hi);
    if (spec.residue_class) {
      const auto& [rem, mod] = *spec.residue_class;
      Natural delta = rem - c;
      mpz_mod(delta.get_mpz_t(), delta.get_mpz_t(), mod.get_mpz_t());
      c += delta;
      if (c >= hi) continue;
    } else {
      mpz_setbit(c.get_mpz_t(), 0);  // only odd candidates are worth testing
    }
    if (is_probable_prime(c)) return c;
  }
  throw std::runtime_error(
      "gen_prime: attempt budget exhausted (unsatisfiable residue class or "
      "rng exhaustion)");
}

}  // namespace mab
