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

#include <cstdint>

namespace mab {

// Call counts at the arithmetic API boundary. Counted per thread; every
// counter is monotone non-decreasing within a thread.
struct OpCounters {
  std::uint64_t mod_mul = 0;        // modular multiplication
  std::uint64_t mod_exp = 0;        // modular exponentiation
  std::uint64_t mul = 0;            // plain multiplication
  std::uint64_t add = 0;            // plain addition
  std::uint64_t hash = 0;           // hash invocation
  std::uint64_t trial_div = 0;      // trial-division screening
  std::uint64_t biprime_round = 0;  // biprimality test round
  std::uint64_t tx_broadcast = 0;   // transaction broadcast
  std::uint64_t block_confirm = 0;  // block confirmation

  OpCounters operator-(const OpCounters& o) const {
    OpCounters d;
    d.mod_mul = mod_mul - o.mod_mul;
    d.mod_exp = mod_exp - o.mod_exp;
    d.mul = mul - o.mul;
    d.add = add - o.add;
    d.hash = hash - o.hash;
    d.trial_div = trial_div - o.trial_div;
    d.biprime_round = biprime_round - o.biprime_round;
    d.tx_broadcast = tx_broadcast - o.tx_broadcast;
    d.block_confirm = block_confirm - o.block_confirm;
    return d;
  }
};

inline OpCounters& counters() {
  thread_local OpCounters c;
  return c;
}

// Snapshot-on-construction scope; delta() gives the counts accumulated since.
class CounterScope {
 public:
  CounterScope() : start_(counters()) {}
  OpCounters delta() const { return counters() - start_; }

 private:
  OpCounters start_;
};

}  // namespace mab
