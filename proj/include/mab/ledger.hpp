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

#include <map>
#include <set>
#include <string>
#include <vector>

#include "mab/cokeygen.hpp"
#include "mab/config.hpp"
#include "mab/equalityproof.hpp"
#include "mab/rangeproof.hpp"

namespace mab {

// Two-layer confidential transactions over a linear consortium chain.
// Payment outputs carry amounts under each receiver's key; verification
// outputs carry the same amounts under the dumb-account key and double as the
// commitments the range proofs run against. E / F commit the input and
// output sums; validators check range proofs, the equality proof, the
// aggregate H = F identity, UTXO availability and the transaction digest,
// never touching a plaintext.

struct OutPoint {
  std::string tx_id;
  std::uint32_t index = 0;

  std::string key() const { return tx_id + ":" + std::to_string(index); }
  auto operator<=>(const OutPoint&) const = default;
};

struct PaymentOutput {
  std::string receiver_address;
  Ciphertext ciphertext;
};

struct Transaction {
  std::string tx_id;
  bool reward_flag = false;
  std::vector<OutPoint> inputs;
  std::vector<PaymentOutput> payment_outputs;
  std::vector<Ciphertext> verification_outputs;
  DualCommitment input_sum;  // E under V_alpha, F under V_beta
  EqualityProof equality;
  std::vector<RangeProof> range_proofs;
};

struct Block {
  std::uint64_t height = 0;
  std::string prev_hash;
  int proposer = 0;
  std::vector<Transaction> tx_list;
  std::string merkle_root;
  std::string block_hash;
};

struct Chain {
  std::vector<Block> blocks;
  std::map<std::string, PaymentOutput> utxo_set;

  std::uint64_t height() const { return blocks.size(); }
  std::string tip_hash() const {
    return blocks.empty() ? std::string("genesis") : blocks.back().block_hash;
  }
};

struct SystemParams {
  SecurityProfile profile;
  JointModulus consortium;
  DumbAccountKey dumb;
  CommitParams v_alpha;
  RangeParams range_params;
  EqualityParams eq_params;

  int party_count() const { return consortium.party_count; }
  Natural amount_bound() const { return pow2(profile.amount_bits); }
};

// Desk-scale wallet: the full private half is escrowed so tests and the
// simulator can decrypt; the threshold path stays available through the
// lambda shares.
struct Wallet {
  std::string address;
  PaillierKey key;
};

struct MabSystem {
  SystemParams params;
  std::vector<PartyShare> shares;  // consortium members' shares
  std::map<std::string, Wallet> wallets;
  Chain chain;
  std::vector<Transaction> pool;
  bool reward_minted = false;
};

// ---------------------------------------------------------------------------
// Digests
// ---------------------------------------------------------------------------

namespace detail {

inline void encode_range_proof(TranscriptEncoder& enc, const RangeProof& p) {
  enc.add_nat(p.e1);
  enc.add_nat(p.e2);
  enc.add_nat(p.e3);
  enc.add_nat(p.f);
  enc.add_nat(p.v_cm);
  enc.add_int(p.v_value);
  enc.add_nat(p.pk1.a1);
  enc.add_nat(p.pk1.a2);
  enc.add_nat(p.pk1.c);
  enc.add_nat(p.pk1.z_alpha);
  enc.add_nat(p.pk1.z1);
  enc.add_nat(p.pk1.z2);
  enc.add_nat(p.pk2.b1);
  enc.add_nat(p.pk2.b2);
  enc.add_nat(p.pk2.c);
  enc.add_int(p.pk2.z_omega);
  enc.add_nat(p.pk2.z3);
  enc.add_int(p.pk2.z_star);
  enc.add_nat(p.pk3.c0);
  enc.add_nat(p.pk3.c);
  enc.add_nat(p.pk3.z_omega);
  enc.add_nat(p.pk3.z_r);
}

}  // namespace detail

inline std::string compute_tx_id(const Transaction& tx) {
  TranscriptEncoder enc("mab/tx/v1");
  enc.add_part(Bytes{static_cast<std::uint8_t>(tx.reward_flag ? 1 : 0)});
  enc.add_u64(tx.inputs.size());
  for (const auto& in : tx.inputs) {
    enc.add_str(in.tx_id);
    enc.add_u64(in.index);
  }
  enc.add_u64(tx.payment_outputs.size());
  for (const auto& out : tx.payment_outputs) {
    enc.add_str(out.receiver_address);
    enc.add_str(out.ciphertext.key_id);
    enc.add_nat(out.ciphertext.c_value);
  }
  enc.add_u64(tx.verification_outputs.size());
  for (const auto& out : tx.verification_outputs) {
    enc.add_str(out.key_id);
    enc.add_nat(out.c_value);
  }
  enc.add_str(tx.input_sum.e_cm.params_id);
  enc.add_nat(tx.input_sum.e_cm.value);
  enc.add_str(tx.input_sum.f_cm.params_id);
  enc.add_nat(tx.input_sum.f_cm.value);
  enc.add_nat(tx.equality.u_value);
  enc.add_nat(tx.equality.d_value);
  enc.add_nat(tx.equality.d1_value);
  enc.add_nat(tx.equality.d2_value);
  enc.add_u64(tx.range_proofs.size());
  for (const auto& rp : tx.range_proofs) detail::encode_range_proof(enc, rp);
  return hex_of_digest(enc.digest());
}

// Hash-tree root over the ordered transaction ids.
inline std::string merkle_root(const std::vector<std::string>& tx_ids) {
  if (tx_ids.empty()) {
    TranscriptEncoder enc("mab/merkle/empty");
    return hex_of_digest(enc.digest());
  }
  std::vector<std::string> level = tx_ids;
  while (level.size() > 1) {
    std::vector<std::string> next;
    for (size_t i = 0; i + 1 < level.size(); i += 2) {
      TranscriptEncoder enc("mab/merkle/node");
      enc.add_str(level[i]);
      enc.add_str(level[i + 1]);
      next.push_back(hex_of_digest(enc.digest()));
    }
    if (level.size() % 2 == 1) next.push_back(level.back());
    level = std::move(next);
  }
  return level.front();
}

inline std::string compute_block_hash(const Block& b) {
  TranscriptEncoder enc("mab/block/v1");
  enc.add_u64(b.height);
  enc.add_str(b.prev_hash);
  enc.add_u64(static_cast<std::uint64_t>(b.proposer));
  enc.add_str(b.merkle_root);
  return hex_of_digest(enc.digest());
}

inline int leader_for_height(std::uint64_t height, int k) {
  return static_cast<int>(height % static_cast<std::uint64_t>(k)) + 1;
}

// ---------------------------------------------------------------------------
// System bootstrap and minting
// ---------------------------------------------------------------------------

inline SystemParams make_system_params(const SecurityProfile& profile,
                                       CeremonyResult ceremony, Drbg& rng) {
  profile.validate();
  if (!ceremony.biprime_ok || ceremony.modulus.e_public == 0)
    throw std::invalid_argument("system params: ceremony incomplete");
  SystemParams params;
  params.profile = profile;
  params.consortium = std::move(ceremony.modulus);
  Drbg drng = rng.fork("dumb", 0);
  params.dumb =
      make_dumb_account(profile.commit_bits, drng, profile.amount_bits + 8);
  Drbg arng = rng.fork("valpha", 0);
  params.v_alpha = setup_params(profile.commit_bits, arng, "mab/v-alpha",
                                profile.amount_bits + 8);
  params.range_params = RangeParams{params.dumb.range_params, profile.t,
                                    profile.l, profile.s, profile.T};
  params.range_params.group.max_message_bits = profile.amount_bits + 8;
  params.eq_params = EqualityParams{params.v_alpha,
                                    params.dumb.beta_params,
                                    profile.t,
                                    profile.l,
                                    profile.s,
                                    pow2(profile.amount_bits)};
  return params;
}

inline MabSystem init_system(const SecurityProfile& profile,
                             CeremonyResult ceremony, std::uint64_t seed) {
  MabSystem sys;
  sys.shares = std::move(ceremony.shares);
  Drbg rng = Drbg(seed).fork("system", 0);
  sys.params = make_system_params(profile, std::move(ceremony), rng);
  return sys;
}

// The public blinding convention for reward coins: the reward amount is
// public ledger policy, so its input-sum commitment must be recomputable by
// every validator.
inline Natural reward_blinding(const SystemParams& params,
                               const std::string& address) {
  TranscriptEncoder enc("mab/reward-blind/v1");
  enc.add_str(address);
  enc.add_nat(params.consortium.n_value);
  return hash_to_int(enc, params.v_alpha.modulus - 1) + 1;
}

namespace detail {

struct BuiltOutputs {
  std::vector<PaymentOutput> payments;
  DumbOutputs dumb;
};

inline BuiltOutputs encrypt_two_layers(
    const MabSystem& sys,
    const std::vector<std::pair<std::string, Natural>>& outputs, Drbg& rng) {
  BuiltOutputs built;
  std::vector<Natural> amounts;
  for (const auto& [address, amount] : outputs) {
    auto it = sys.wallets.find(address);
    if (it == sys.wallets.end())
      throw std::invalid_argument("unknown receiver address: " + address);
    built.payments.push_back(PaymentOutput{
        address, h_enc(it->second.key.pub, amount, rng)});
    amounts.push_back(amount);
  }
  built.dumb = encrypt_verification_outputs(sys.params.dumb, amounts, rng);
  return built;
}

// Assembles outputs, the dual commitment and all proofs around a claimed
// input sum. Amount preconditions are the caller's responsibility: the
// honest builder enforces them, the forced builder deliberately does not and
// produces proofs the validators will reject.
inline Transaction assemble(const MabSystem& sys, bool reward,
                            const std::vector<OutPoint>& inputs,
                            const std::vector<std::pair<std::string, Natural>>& outputs,
                            const Natural& claimed_input_sum,
                            const SignedInt& r_alpha, Drbg& rng, bool forced) {
  Transaction tx;
  tx.reward_flag = reward;
  tx.inputs = inputs;
  BuiltOutputs built = encrypt_two_layers(sys, outputs, rng);
  tx.payment_outputs = std::move(built.payments);
  tx.verification_outputs = std::move(built.dumb.ciphertexts);

  Natural output_sum = 0;
  for (const auto& [addr, amount] : outputs) output_sum += amount;

  tx.input_sum.e_cm = commit(sys.params.v_alpha, claimed_input_sum, r_alpha);
  tx.input_sum.f_cm = commit(sys.params.dumb.beta_params, output_sum,
                             sys.params.dumb.pk.n_value);
  if (!forced) {
    tx.equality = e_prove(sys.params.eq_params, tx.input_sum,
                          claimed_input_sum, r_alpha,
                          sys.params.dumb.pk.n_value, rng);
  } else {
    // forced path: run the protocol rounds with the output-sum witness; when
    // the sums differ the verifier's u' recomputation cannot match.
    Natural omega = rng.range(1, sys.params.eq_params.omega_bound());
    Natural eta1 =
        rng.range(1, sys.params.eq_params.eta_bound(sys.params.eq_params.params_a));
    Natural eta2 =
        rng.range(1, sys.params.eq_params.eta_bound(sys.params.eq_params.params_b));
    const auto& pa = sys.params.eq_params.params_a;
    const auto& pb = sys.params.eq_params.params_b;
    Natural w1 = mul_mod(pow_mod(pa.g_base, omega, pa.modulus),
                         pow_mod(pa.h_base, eta1, pa.modulus), pa.modulus);
    Natural w2 = mul_mod(pow_mod(pb.g_base, omega, pb.modulus),
                         pow_mod(pb.h_base, eta2, pb.modulus), pb.modulus);
    Natural u = detail::equality_challenge(sys.params.eq_params, w1, w2,
                                           tx.input_sum);
    tx.equality = EqualityProof{
        u, omega + u * output_sum, eta1 + u * abs(r_alpha),
        eta2 + u * sys.params.dumb.pk.n_value};
  }

  for (size_t i = 0; i < outputs.size(); ++i) {
    Commitment cm{tx.verification_outputs[i].c_value,
                  sys.params.range_params.group.params_id};
    Opening opening{outputs[i].second, built.dumb.k_exponents[i]};
    if (outputs[i].second >= 1) {
      tx.range_proofs.push_back(
          r_prove(sys.params.range_params, cm, opening, 0, rng));
    } else {
      tx.range_proofs.push_back(
          r_prove_forced(sys.params.range_params, cm, opening, 0, rng));
    }
  }
  tx.tx_id = compute_tx_id(tx);
  return tx;
}

}  // namespace detail

inline void submit_to_pool(MabSystem& sys, Transaction tx) {
  counters().tx_broadcast++;
  sys.pool.push_back(std::move(tx));
}

inline void prune_pool(std::vector<Transaction>& pool, const Block& block) {
  std::set<std::string> confirmed;
  for (const auto& tx : block.tx_list) confirmed.insert(tx.tx_id);
  std::erase_if(pool, [&](const Transaction& tx) {
    return confirmed.contains(tx.tx_id);
  });
}

inline Block confirm_pool(MabSystem& sys);

// Registers a Paillier key for the address over the shared consortium
// modulus; the first mint additionally issues the reward coin and confirms it
// in the genesis block.
inline Wallet mint(MabSystem& sys, const std::string& address, Drbg& rng) {
  if (sys.wallets.contains(address))
    throw std::invalid_argument("mint: duplicate address " + address);
  const Natural& n = sys.params.consortium.n_value;
  PaillierKey key;
  for (std::uint64_t salt = 0;; ++salt) {
    TranscriptEncoder enc("mab/addr-beta/v1");
    enc.add_str(address);
    enc.add_u64(salt);
    Natural beta = hash_to_int(enc, n - 1) + 1;
    try {
      Drbg krng = rng.fork("receiver-key", salt);
      key = consortium_paillier_key(sys.params.consortium, sys.shares, krng,
                                    beta);
      break;
    } catch (const std::invalid_argument&) {
      continue;  // degenerate beta: mu not invertible; very rare
    }
  }
  Wallet wallet{address, std::move(key)};
  sys.wallets[address] = wallet;

  if (!sys.reward_minted) {
    sys.reward_minted = true;
    Natural reward = sys.params.profile.reward_amount;
    Drbg txrng = rng.fork("reward-tx", 0);
    Transaction coinbase = detail::assemble(
        sys, true, {}, {{address, reward}}, reward,
        reward_blinding(sys.params, address), txrng, false);
    submit_to_pool(sys, std::move(coinbase));
    confirm_pool(sys);  // the reward is the first confirmed transaction
  }
  return wallet;
}

// ---------------------------------------------------------------------------
// Transaction construction and verification
// ---------------------------------------------------------------------------

inline Natural decrypt_output(const MabSystem& sys, const std::string& address,
                              const Ciphertext& c) {
  auto it = sys.wallets.find(address);
  if (it == sys.wallets.end())
    throw std::invalid_argument("unknown address: " + address);
  return h_dec(it->second.key, c);
}

inline Transaction build_transaction(
    const MabSystem& sys, const std::string& sender,
    const std::vector<OutPoint>& inputs,
    const std::vector<std::pair<std::string, Natural>>& outputs, Drbg& rng) {
  if (inputs.empty()) throw std::invalid_argument("build: no inputs");
  if (outputs.empty()) throw std::invalid_argument("build: no outputs");
  Natural input_sum = 0;
  std::set<OutPoint> seen;
  for (const auto& in : inputs) {
    if (!seen.insert(in).second)
      throw std::invalid_argument("build: duplicate input");
    auto it = sys.chain.utxo_set.find(in.key());
    if (it == sys.chain.utxo_set.end())
      throw std::invalid_argument("build: input not in the UTXO set");
    if (it->second.receiver_address != sender)
      throw std::invalid_argument("build: sender does not own the input");
    input_sum += decrypt_output(sys, sender, it->second.ciphertext);
  }
  Natural output_sum = 0;
  for (const auto& [addr, amount] : outputs) {
    if (amount < 1)
      throw std::invalid_argument("build: output amounts must be positive");
    if (amount >= sys.params.amount_bound())
      throw std::invalid_argument("build: amount exceeds the bound");
    output_sum += amount;
  }
  if (output_sum != input_sum)
    throw std::invalid_argument("build: outputs do not balance the inputs");

  SignedInt r_alpha = rng.range(1, sys.params.v_alpha.modulus);
  return detail::assemble(sys, false, inputs, outputs, input_sum, r_alpha, rng,
                          false);
}

// Adversarial builder: skips the balance and positivity preconditions so the
// experiments can hand deliberately broken transactions to the validators.
inline Transaction force_build_transaction(
    const MabSystem& sys, const std::vector<OutPoint>& inputs,
    const std::vector<std::pair<std::string, Natural>>& outputs,
    const Natural& claimed_input_sum, Drbg& rng) {
  Natural output_sum = 0;
  for (const auto& [addr, amount] : outputs) output_sum += amount;
  SignedInt r_alpha = rng.range(1, sys.params.v_alpha.modulus);
  bool forced = output_sum != claimed_input_sum;
  return detail::assemble(sys, false, inputs, outputs, claimed_input_sum,
                          r_alpha, rng, forced);
}

// Validator-side checks; plaintexts are never accessed. A missing input, a
// failing proof, a broken aggregate identity or a digest mismatch all yield
// false.
inline bool verify_transaction(const SystemParams& params, const Chain& chain,
                               const Transaction& tx) try {
  const size_t n_out = tx.payment_outputs.size();
  if (n_out == 0 || tx.verification_outputs.size() != n_out ||
      tx.range_proofs.size() != n_out)
    return false;
  if (compute_tx_id(tx) != tx.tx_id) return false;

  if (tx.reward_flag) {
    if (!tx.inputs.empty()) return false;
    // one reward coin per chain, with the public blinding convention
    for (const auto& block : chain.blocks)
      for (const auto& prior : block.tx_list)
        if (prior.reward_flag && prior.tx_id != tx.tx_id) return false;
    if (n_out != 1) return false;
    Natural r = reward_blinding(params, tx.payment_outputs[0].receiver_address);
    Commitment expected =
        commit(params.v_alpha, params.profile.reward_amount, r);
    if (!(tx.input_sum.e_cm == expected)) return false;
  } else {
    if (tx.inputs.empty()) return false;
    std::set<OutPoint> seen;
    for (const auto& in : tx.inputs) {
      if (!seen.insert(in).second) return false;
      if (!chain.utxo_set.contains(in.key())) return false;
    }
  }

  for (size_t i = 0; i < n_out; ++i) {
    Commitment cm{tx.verification_outputs[i].c_value,
                  params.range_params.group.params_id};
    if (!r_verify(params.range_params, cm, 0, tx.range_proofs[i]))
      return false;
  }
  if (!e_verify(params.eq_params, tx.input_sum, tx.equality)) return false;
  if (!aggregate_check(params.dumb, tx.verification_outputs,
                       tx.input_sum.f_cm))
    return false;
  return true;
} catch (const std::exception&) {
  return false;
}

// ---------------------------------------------------------------------------
// Blocks, consensus, audit
// ---------------------------------------------------------------------------

namespace detail {

inline void apply_block(Chain& chain, const Block& block) {
  for (const auto& tx : block.tx_list) {
    for (const auto& in : tx.inputs) chain.utxo_set.erase(in.key());
    for (std::uint32_t i = 0; i < tx.payment_outputs.size(); ++i) {
      chain.utxo_set[OutPoint{tx.tx_id, i}.key()] = tx.payment_outputs[i];
    }
    // verification outputs are unspendable: they never enter the UTXO set
  }
  chain.blocks.push_back(block);
}

// Filters a candidate list against a chain snapshot, tracking intra-block
// spends, and lays out a block. Pure with respect to `chain`.
inline Block lay_out_block(const SystemParams& params, const Chain& chain,
                           std::vector<Transaction> candidates, int proposer) {
  std::vector<Transaction> valid;
  std::set<std::string> spent;
  std::sort(candidates.begin(), candidates.end(),
            [](const Transaction& a, const Transaction& b) {
              return a.tx_id < b.tx_id;
            });
  for (const auto& tx : candidates) {
    if (!verify_transaction(params, chain, tx)) continue;
    bool clash = false;
    for (const auto& in : tx.inputs)
      if (spent.contains(in.key())) clash = true;
    if (clash) continue;
    for (const auto& in : tx.inputs) spent.insert(in.key());
    valid.push_back(tx);
  }
  Block block;
  block.height = chain.height();
  block.prev_hash = chain.tip_hash();
  block.proposer = proposer;
  block.tx_list = std::move(valid);
  std::vector<std::string> ids;
  for (const auto& tx : block.tx_list) ids.push_back(tx.tx_id);
  block.merkle_root = merkle_root(ids);
  block.block_hash = compute_block_hash(block);
  return block;
}

}  // namespace detail

// Full structural + semantic re-verification of a proposed block against a
// party's own chain snapshot.
inline bool verify_block(const SystemParams& params, const Chain& chain,
                         const Block& block) {
  if (block.height != chain.height()) return false;
  if (block.prev_hash != chain.tip_hash()) return false;
  if (block.proposer != leader_for_height(block.height, params.party_count()))
    return false;
  std::vector<std::string> ids;
  std::set<std::string> spent;
  for (const auto& tx : block.tx_list) {
    if (!verify_transaction(params, chain, tx)) return false;
    for (const auto& in : tx.inputs)
      if (!spent.insert(in.key()).second) return false;
    ids.push_back(tx.tx_id);
  }
  if (!std::is_sorted(ids.begin(), ids.end())) return false;
  if (merkle_root(ids) != block.merkle_root) return false;
  return compute_block_hash(block) == block.block_hash;
}

// Leader path: verify the pool, order deterministically, build the hash
// tree, append, update the UTXO fold. Throws when the proposer is not the
// round leader.
inline Block tx_confirm(const SystemParams& params, Chain& chain,
                        const std::vector<Transaction>& pool, int proposer) {
  if (proposer != leader_for_height(chain.height(), params.party_count()))
    throw std::invalid_argument("tx_confirm: proposer is not the round leader");
  Block block = detail::lay_out_block(params, chain, pool, proposer);
  detail::apply_block(chain, block);
  counters().block_confirm++;
  return block;
}

// Confirms whatever sits in the pool into the next block (round leader
// proposes) and prunes the pool.
inline Block confirm_pool(MabSystem& sys) {
  int leader = leader_for_height(sys.chain.height(), sys.params.party_count());
  Block block = tx_confirm(sys.params, sys.chain, sys.pool, leader);
  prune_pool(sys.pool, block);
  return block;
}

// In-process consensus simulation: one chain replica per consortium member,
// round-robin leadership, majority re-verification.
struct ConsensusSim {
  const SystemParams* params = nullptr;
  std::vector<Chain> replicas;
  std::set<int> offline;  // 1-based party ids

  explicit ConsensusSim(const SystemParams& p, const Chain& start = Chain{})
      : params(&p), replicas(static_cast<size_t>(p.party_count()), start) {}

  int majority() const { return (params->party_count() + 2) / 2; }

  Chain& replica(int party) { return replicas[static_cast<size_t>(party - 1)]; }

  // One round over the given pool; commits iff a majority of online parties
  // accepts the leader's proposal. Returns the committed block, or nothing
  // when the round is skipped.
  std::optional<Block> round(const std::vector<Transaction>& pool) {
    std::uint64_t h = replicas.front().height();
    for (size_t i = 1; i < replicas.size(); ++i)
      h = std::max(h, replicas[i].height());
    int leader = leader_for_height(h, params->party_count());
    if (offline.contains(leader)) return std::nullopt;
    sync_replica(leader, h);
    Block proposal =
        detail::lay_out_block(*params, replica(leader), pool, leader);
    return drive_vote(proposal, h);
  }

  // Fault-injection path: the leader proposes an arbitrary block.
  std::optional<Block> round_with_proposal(Block proposal) {
    std::uint64_t h = proposal.height;
    return drive_vote(std::move(proposal), h);
  }

 private:
  void sync_replica(int party, std::uint64_t target_height) {
    Chain& mine = replica(party);
    for (const Chain& other : replicas) {
      while (mine.height() < target_height &&
             other.height() > mine.height()) {
        detail::apply_block(mine, other.blocks[mine.height()]);
      }
    }
  }

  std::optional<Block> drive_vote(Block proposal, std::uint64_t h) {
    int votes = 0, responders = 0;
    for (int party = 1; party <= params->party_count(); ++party) {
      if (offline.contains(party)) continue;
      sync_replica(party, h);
      ++responders;
      if (verify_block(*params, replica(party), proposal)) ++votes;
    }
    if (responders < majority() || votes < majority()) return std::nullopt;
    for (int party = 1; party <= params->party_count(); ++party) {
      if (offline.contains(party)) continue;
      detail::apply_block(replica(party), proposal);
    }
    counters().block_confirm++;
    return proposal;
  }
};

// Receiver-side decryption of a confirmed payment output.
inline Natural spend_and_decrypt(const MabSystem& sys,
                                 const std::string& address,
                                 const std::string& tx_id,
                                 std::uint32_t output_index) {
  for (const auto& block : sys.chain.blocks) {
    for (const auto& tx : block.tx_list) {
      if (tx.tx_id != tx_id) continue;
      if (output_index >= tx.payment_outputs.size())
        throw std::invalid_argument("spend: no such output index");
      const PaymentOutput& out = tx.payment_outputs[output_index];
      if (out.receiver_address != address)
        throw std::invalid_argument("spend: address does not own the output");
      return decrypt_output(sys, address, out.ciphertext);
    }
  }
  throw std::invalid_argument("spend: output not confirmed on chain");
}

// Threshold flavor: every consortium share contributes; used when no single
// party may decrypt alone.
inline Natural threshold_spend_decrypt(const MabSystem& sys,
                                       const std::string& address,
                                       const Ciphertext& c) {
  auto it = sys.wallets.find(address);
  if (it == sys.wallets.end() || !it->second.key.threshold)
    throw std::invalid_argument("threshold spend: no shares for address");
  const auto& key = it->second.key;
  std::vector<Natural> contribs;
  for (const auto& share : key.threshold->lambda_shares)
    contribs.push_back(threshold_dec_contrib(key.pub, share, c));
  return threshold_dec_combine(key.pub, key.threshold->mu_value, contribs,
                               key.threshold->lambda_shares.size());
}

// Replays genesis-to-tip: every hash link, every proof, the whole UTXO fold.
inline bool audit_chain(const SystemParams& params, const Chain& chain) {
  Chain replay;
  for (const auto& block : chain.blocks) {
    Block expected_layout = block;  // verify against the replayed state
    if (!verify_block(params, replay, expected_layout)) return false;
    detail::apply_block(replay, block);
  }
  if (replay.utxo_set.size() != chain.utxo_set.size()) return false;
  for (const auto& [key, out] : chain.utxo_set) {
    auto it = replay.utxo_set.find(key);
    if (it == replay.utxo_set.end()) return false;
    if (it->second.receiver_address != out.receiver_address) return false;
    if (it->second.ciphertext.c_value != out.ciphertext.c_value) return false;
  }
  return true;
}

}  // namespace mab
