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

#include <fstream>
#include <json.hpp>
#include <string>

#include "mab/natural.hpp"

namespace mab {

// Two shipped profiles only: intermediate configurations are easy to get
// subtly wrong. "test" completes the full transaction flow in seconds;
// "default" carries production-scale widths. The transcript hash is SHA-256
// in both.
struct SecurityProfile {
  std::string name = "test";
  unsigned prime_bits = 32;        // per-prime width in the ceremony
  unsigned commit_bits = 256;      // commitment-group and dumb-account width
  unsigned t = 16;                 // soundness / challenge width
  unsigned l = 8;                  // masking slack
  unsigned s = 8;                  // statistical slack
  unsigned T = 33;                 // threshold margin, > t + l + s
  unsigned challenge_bits = 16;    // Fiat-Shamir challenge bound 2^t
  unsigned long trial_division_bound = 10000;
  int biprimality_rounds = 20;
  unsigned long reward_amount = 50;
  unsigned amount_bits = 32;       // transaction amounts lie in [0, 2^amount_bits)
  unsigned long e_public = 65537;
  std::string hash_function = "sha256";

  void validate() const {
    if (T <= t + l + s)
      throw std::invalid_argument("profile: T must exceed t + l + s");
    if (prime_bits < 16 || commit_bits < 32 || t == 0 || l == 0 || s == 0)
      throw std::invalid_argument("profile: parameter out of range");
    if (biprimality_rounds <= 0 || reward_amount == 0)
      throw std::invalid_argument("profile: parameter out of range");
  }
};

inline SecurityProfile test_profile() { return SecurityProfile{}; }

inline SecurityProfile default_profile() {
  SecurityProfile p;
  p.name = "default";
  p.prime_bits = 512;
  p.commit_bits = 1024;
  p.t = 128;
  p.l = 40;
  p.s = 40;
  p.T = 209;
  p.challenge_bits = 128;
  p.biprimality_rounds = 40;
  p.amount_bits = 64;
  return p;
}

inline SecurityProfile profile_from_json(const nlohmann::json& j) {
  SecurityProfile p;
  p.name = j.value("name", p.name);
  p.prime_bits = j.value("prime_bits", p.prime_bits);
  p.commit_bits = j.value("commit_bits", p.commit_bits);
  p.t = j.value("t", p.t);
  p.l = j.value("l", p.l);
  p.s = j.value("s", p.s);
  p.T = j.value("T", p.T);
  p.challenge_bits = j.value("challenge_bits", p.t);
  p.trial_division_bound = j.value("trial_division_bound", p.trial_division_bound);
  p.biprimality_rounds = j.value("biprimality_rounds", p.biprimality_rounds);
  p.reward_amount = j.value("reward_amount", p.reward_amount);
  p.amount_bits = j.value("amount_bits", p.amount_bits);
  p.e_public = j.value("e_public", p.e_public);
  p.validate();
  return p;
}

// Named profile lookup; MAB_PARAMS_DIR may carry <name>.json overrides.
inline SecurityProfile load_profile(const std::string& name,
                                    const char* params_dir = nullptr) {
  if (params_dir != nullptr) {
    std::ifstream in(std::string(params_dir) + "/" + name + ".json");
    if (in.good()) return profile_from_json(nlohmann::json::parse(in));
  }
  if (name == "test") return test_profile();
  if (name == "default") return default_profile();
  throw std::invalid_argument("unknown security profile: " + name);
}

}  // namespace mab
