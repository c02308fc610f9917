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

#include "mab/serialize.hpp"

namespace mab {

// End-to-end transaction flow: one stage per boxed line, rdmPara through
// HDec, executed in order with a 0/1 verdict each. The flow halts at the
// first 0 verdict. Seeded runs produce byte-identical reports.

struct FlowConfig {
  std::string profile_name = "test";
  std::uint64_t seed = 7;
  int parties = 2;
  std::vector<unsigned long> amounts = {20, 30};
  // none | wrong_sum | zero_output | mutate_proof
  std::string fault = "none";
};

struct FlowStage {
  std::string name;
  bool ok = false;
  Json note;
};

struct FlowReport {
  bool all_ok = false;
  std::vector<FlowStage> stages;

  Json to_json() const {
    Json stages_json = Json::array();
    for (const auto& s : stages)
      stages_json.push_back(
          Json{{"stage", s.name}, {"ok", s.ok ? 1 : 0}, {"note", s.note}});
    return Json{{"ok", all_ok ? 1 : 0}, {"stages", stages_json}};
  }
};

inline FlowReport run_transaction_flow(const FlowConfig& config) {
  FlowReport report;
  auto stage = [&](const std::string& name, bool ok, Json note) {
    report.stages.push_back(FlowStage{name, ok, std::move(note)});
    return ok;
  };

  SecurityProfile profile = load_profile(config.profile_name);
  if (config.amounts.empty())
    throw std::invalid_argument("flow: no output amounts configured");

  // Pi1: rdmPara, CoN, BipriTest, KeyGen (with the restart loop inside)
  CokeygenConfig ck{profile.prime_bits, profile.trial_division_bound,
                    profile.biprimality_rounds, 4000};
  CeremonyResult ceremony =
      run_ceremony(ck, config.parties, profile.e_public, config.seed);
  stage("rdmPara", true,
        Json{{"parties", config.parties},
             {"prime_bits", profile.prime_bits},
             {"attempts", ceremony.attempts}});
  stage("CoN", true, Json{{"n_hex", to_hex(ceremony.modulus.n_value)}});
  stage("BipriTest", true, Json{{"verdict", 1}});
  stage("KeyGen", true, Json{{"e_hex", to_hex(ceremony.modulus.e_public)}});

  // Pi5 Mint: system keys, miner and receiver registration, reward coin
  MabSystem sys = init_system(profile, std::move(ceremony), config.seed);
  Drbg rng = Drbg(config.seed).fork("flow", 0);
  Drbg mint_rng = rng.fork("mint", 0);
  mint(sys, "miner", mint_rng);
  std::vector<std::pair<std::string, Natural>> outputs;
  for (size_t i = 0; i < config.amounts.size(); ++i) {
    std::string address = "acct_" + std::to_string(i + 1);
    Drbg arng = rng.fork("mint", i + 1);
    mint(sys, address, arng);
    outputs.emplace_back(address, config.amounts[i]);
  }
  std::string coinbase_id = sys.chain.blocks.at(0).tx_list.at(0).tx_id;
  stage("Mint", true,
        Json{{"pk_d_id", sys.params.dumb.pk.key_id},
             {"addresses", outputs.size() + 1},
             {"coinbase", coinbase_id}});

  // fault injection happens at the encryption step, where a dishonest sender
  // would tamper
  Natural claimed_input = profile.reward_amount;
  if (config.fault == "wrong_sum") outputs.front().second += 1;
  if (config.fault == "zero_output") outputs.front().second = 0;

  Drbg txrng = rng.fork("tx", 0);
  Transaction tx = force_build_transaction(sys, {{coinbase_id, 0}}, outputs,
                                           claimed_input, txrng);
  if (config.fault == "mutate_proof") {
    tx.range_proofs.front().v_value += 1;
    tx.tx_id = compute_tx_id(tx);
  }

  // Pi2 HEnc: two-layer encryption of every amount
  {
    Json ids = Json::array();
    for (const auto& out : tx.payment_outputs)
      ids.push_back(out.ciphertext.key_id);
    stage("HEnc", true,
          Json{{"outputs", tx.payment_outputs.size()}, {"receiver_keys", ids}});
  }

  // Pi2 HOper: the verification-layer product CM = prod(c_id)
  {
    Natural cm = 1;
    for (const auto& c : tx.verification_outputs)
      cm = mul_mod(cm, c.c_value, sys.params.dumb.pk.n_squared);
    stage("HOper", true, Json{{"cm_hex", to_hex(cm)}});
  }

  // Pi3 RInact / RVer
  stage("RInact", true, Json{{"proofs", tx.range_proofs.size()}});
  {
    bool all = true;
    Json verdicts = Json::array();
    for (size_t i = 0; i < tx.range_proofs.size(); ++i) {
      Commitment cm{tx.verification_outputs[i].c_value,
                    sys.params.range_params.group.params_id};
      bool ok = r_verify(sys.params.range_params, cm, 0, tx.range_proofs[i]);
      verdicts.push_back(ok ? 1 : 0);
      all = all && ok;
    }
    if (!stage("RVer", all, Json{{"verdicts", verdicts}})) return report;
  }

  // Pi4 EInact / EVer (equality plus the dumb-account aggregate identity)
  stage("EInact", true,
        Json{{"e_hex", to_hex(tx.input_sum.e_cm.value)},
             {"f_hex", to_hex(tx.input_sum.f_cm.value)}});
  {
    bool eq = e_verify(sys.params.eq_params, tx.input_sum, tx.equality);
    bool agg = eq && aggregate_check(sys.params.dumb, tx.verification_outputs,
                                     tx.input_sum.f_cm);
    if (!stage("EVer", eq && agg,
               Json{{"equality", eq ? 1 : 0}, {"aggregate", agg ? 1 : 0}}))
      return report;
  }

  // Pi5 Spend: broadcast to the pool
  submit_to_pool(sys, tx);
  stage("Spend", true, Json{{"tx_id", tx.tx_id}});

  // Pi5 TxConfirm: consensus round across the consortium replicas
  {
    ConsensusSim sim(sys.params, sys.chain);
    auto block = sim.round(sys.pool);
    bool committed = block.has_value() && !block->tx_list.empty();
    if (committed) {
      detail::apply_block(sys.chain, *block);
      prune_pool(sys.pool, *block);
    }
    if (!stage("TxConfirm", committed,
               Json{{"height", sys.chain.height()},
                    {"tip", sys.chain.tip_hash()}}))
      return report;
  }

  // Pi2 HDec: every receiver decrypts its confirmed output
  {
    bool all = true;
    Json values = Json::array();
    for (size_t i = 0; i < outputs.size(); ++i) {
      Natural m = spend_and_decrypt(sys, outputs[i].first, tx.tx_id,
                                    static_cast<std::uint32_t>(i));
      values.push_back(to_hex(m));
      all = all && (m == outputs[i].second);
    }
    stage("HDec", all, Json{{"amounts_hex", values}});
  }

  report.all_ok = true;
  for (const auto& s : report.stages) report.all_ok = report.all_ok && s.ok;
  return report;
}

// ---------------------------------------------------------------------------
// Operation-count instrumentation
// ---------------------------------------------------------------------------

inline Json counters_to_json(const OpCounters& c) {
  return Json{{"tau_M", c.mod_mul},       {"tau_E", c.mod_exp},
              {"tau_m", c.mul},           {"tau_a", c.add},
              {"tau_H", c.hash},          {"tau_td", c.trial_div},
              {"tau_bp", c.biprime_round}, {"tau_Tx", c.tx_broadcast},
              {"tau_Bl", c.block_confirm}};
}

// Runs a representative workload for the scope and reports measured call
// counts next to the symbolic cost formula evaluated at the same i and k.
// The numbers are informational: the formulas are order-of-magnitude
// estimates, not implementation specifications.
inline Json measure_scope(const std::string& scope, unsigned i,
                          std::uint64_t seed) {
  if (i == 0) throw std::invalid_argument("measure: i must be positive");
  Drbg rng(seed);
  Json formula;
  CounterScope counted;

  if (scope == "Encryption" || scope == "Decryption") {
    PrimeSpec spec{.bit_length = 96};
    Natural p = gen_prime(spec, rng);
    Natural q;
    do {
      q = gen_prime(spec, rng);
    } while (q == p);
    PaillierKey key = h_keygen(p, q);
    std::vector<Ciphertext> cs;
    counted = CounterScope();  // count the encryptions, not the keygen
    for (unsigned j = 0; j < i; ++j)
      cs.push_back(h_enc(key.pub, rng.below(key.pub.n_value), rng));
    if (scope == "Encryption") {
      formula = Json{{"tau_M", 2 * i}, {"tau_E", 4 * i}};
    } else {
      counted = CounterScope();  // count only the decryptions
      for (const auto& c : cs) (void)h_dec(key, c);
      formula = Json{{"tau_m", 2}, {"tau_E", 2 * i}};
    }
  } else if (scope == "JointKeyGen") {
    int k = static_cast<int>(i) < 2 ? 2 : static_cast<int>(i);
    CokeygenConfig cfg{.prime_bits = 32, .biprimality_rounds = 10,
                       .max_ceremony_attempts = 4000};
    (void)run_ceremony(cfg, k, 65537, seed);
    formula = Json{{"tau_bp", 1}, {"tau_td", 3}, {"tau_a", 2 * k}, {"tau_m", 1}};
  } else if (scope == "Verification" || scope == "Blockchain") {
    SecurityProfile profile = test_profile();
    CokeygenConfig cfg{profile.prime_bits, profile.trial_division_bound,
                       profile.biprimality_rounds, 4000};
    MabSystem sys =
        init_system(profile, run_ceremony(cfg, 2, profile.e_public, seed), seed);
    Drbg mrng = rng.fork("mint", 0);
    mint(sys, "miner", mrng);
    std::vector<std::pair<std::string, Natural>> outs;
    Natural reward = profile.reward_amount;
    for (unsigned j = 0; j + 1 < i; ++j) {
      outs.emplace_back("r" + std::to_string(j), 1);
      Drbg arng = rng.fork("mint", j + 1);
      mint(sys, outs.back().first, arng);
      reward -= 1;
    }
    outs.emplace_back("miner", reward);
    std::string coinbase = sys.chain.blocks.at(0).tx_list.at(0).tx_id;
    Drbg txrng = rng.fork("tx", 0);
    Transaction tx =
        build_transaction(sys, "miner", {{coinbase, 0}}, outs, txrng);
    counted = CounterScope();
    if (scope == "Verification") {
      (void)verify_transaction(sys.params, sys.chain, tx);
      formula = Json{{"tau_m", 2 * i + 3},
                     {"tau_M", 7 * i + 8},
                     {"tau_E", 12 * i + 14},
                     {"tau_H", 2}};
    } else {
      submit_to_pool(sys, tx);
      (void)confirm_pool(sys);
      formula = Json{{"tau_Tx", i}, {"tau_Bl", 1}};
    }
  } else {
    throw std::invalid_argument("measure: unknown scope " + scope);
  }

  return Json{{"scope", scope},
              {"i", i},
              {"measured", counters_to_json(counted.delta())},
              {"formula", formula},
              {"informational", true}};
}

}  // namespace mab
