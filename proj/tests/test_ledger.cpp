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

#include "mab/ledger.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace mab;

namespace {

MabSystem make_test_system(std::uint64_t seed, int k = 2) {
  SecurityProfile profile = test_profile();
  CokeygenConfig cfg{profile.prime_bits, profile.trial_division_bound,
                     profile.biprimality_rounds, 4000};
  CeremonyResult ceremony = run_ceremony(cfg, k, profile.e_public, seed);
  return init_system(profile, std::move(ceremony), seed);
}

// genesis + two wallets, 50-coin UTXO for alice
struct Fixture {
  MabSystem sys;
  std::string coinbase_id;

  explicit Fixture(std::uint64_t seed, int k = 2) : sys(make_test_system(seed, k)) {
    Drbg rng = Drbg(seed).fork("fixture", 0);
    Drbg mint_a = rng.fork("mint", 1);
    Drbg mint_b = rng.fork("mint", 2);
    mint(sys, "alice", mint_a);
    mint(sys, "bob", mint_b);
    coinbase_id = sys.chain.blocks.at(0).tx_list.at(0).tx_id;
  }

  Drbg tx_rng(std::uint64_t i) const { return Drbg(9000 + i); }
};

}  // namespace

TEST_CASE("first mint issues the reward coin, second mints keys only") {
  Fixture f(201);
  REQUIRE(f.sys.chain.height() == 1);
  REQUIRE(f.sys.chain.utxo_set.size() == 1);
  const auto& utxo = f.sys.chain.utxo_set.begin()->second;
  REQUIRE(utxo.receiver_address == "alice");
  REQUIRE(decrypt_output(f.sys, "alice", utxo.ciphertext) == 50);
  REQUIRE(f.sys.wallets.contains("bob"));

  Drbg rng(1);
  REQUIRE_THROWS_AS(mint(f.sys, "alice", rng), std::invalid_argument);  // duplicate

  // the chain-held reward transaction passes full verification in replay
  REQUIRE(audit_chain(f.sys.params, f.sys.chain));
}

TEST_CASE("mint before a complete ceremony is rejected") {
  SecurityProfile profile = test_profile();
  CokeygenConfig cfg{profile.prime_bits, profile.trial_division_bound,
                     profile.biprimality_rounds, 4000};
  CeremonyResult ceremony = run_ceremony(cfg, 2, profile.e_public, 77);
  ceremony.biprime_ok = false;
  Drbg rng(1);
  REQUIRE_THROWS_AS(make_system_params(profile, std::move(ceremony), rng),
                    std::invalid_argument);
}

TEST_CASE("honest spend verifies, confirms and decrypts") {
  Fixture f(202);
  Drbg rng = f.tx_rng(0);
  Transaction tx =
      build_transaction(f.sys, "alice", {{f.coinbase_id, 0}},
                        {{"bob", 20}, {"alice", 30}}, rng);
  REQUIRE(verify_transaction(f.sys.params, f.sys.chain, tx));
  submit_to_pool(f.sys, tx);
  Block block = confirm_pool(f.sys);
  REQUIRE(block.tx_list.size() == 1);
  REQUIRE(f.sys.pool.empty());
  REQUIRE(f.sys.chain.utxo_set.size() == 2);
  REQUIRE(spend_and_decrypt(f.sys, "bob", tx.tx_id, 0) == 20);
  REQUIRE(spend_and_decrypt(f.sys, "alice", tx.tx_id, 1) == 30);
  REQUIRE(audit_chain(f.sys.params, f.sys.chain));

  SECTION("threshold decryption agrees with the escrow path") {
    const auto& out = tx.payment_outputs[0];
    REQUIRE(threshold_spend_decrypt(f.sys, "bob", out.ciphertext) == 20);
  }
  SECTION("wrong owner cannot claim the output") {
    REQUIRE_THROWS_AS(spend_and_decrypt(f.sys, "alice", tx.tx_id, 0),
                      std::invalid_argument);
  }
  SECTION("stranger's key is detected by the well-formedness check") {
    REQUIRE_THROWS_AS(decrypt_output(f.sys, "bob", tx.payment_outputs[1].ciphertext),
                      std::invalid_argument);
  }
  SECTION("verification outputs cannot be decrypted: no key exists") {
    REQUIRE_THROWS_AS(decrypt_output(f.sys, "bob", tx.verification_outputs[0]),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(decrypt_output(f.sys, "alice", tx.verification_outputs[0]),
                      std::invalid_argument);
  }
}

TEST_CASE("builder preconditions") {
  Fixture f(203);
  Drbg rng = f.tx_rng(1);
  OutPoint coin{f.coinbase_id, 0};
  // amounts must balance the decrypted input sum
  REQUIRE_THROWS_AS(build_transaction(f.sys, "alice", {coin},
                                      {{"bob", 4}, {"alice", 7}}, rng),
                    std::invalid_argument);
  // strict positivity
  REQUIRE_THROWS_AS(build_transaction(f.sys, "alice", {coin},
                                      {{"bob", 0}, {"alice", 50}}, rng),
                    std::invalid_argument);
  // unknown receiver
  REQUIRE_THROWS_AS(
      build_transaction(f.sys, "alice", {coin}, {{"carol", 50}}, rng),
      std::invalid_argument);
  // not the owner
  REQUIRE_THROWS_AS(
      build_transaction(f.sys, "bob", {coin}, {{"alice", 50}}, rng),
      std::invalid_argument);
  // duplicate input
  REQUIRE_THROWS_AS(build_transaction(f.sys, "alice", {coin, coin},
                                      {{"bob", 100}}, rng),
                    std::invalid_argument);
}

TEST_CASE("force-built imbalance fails the equality verification") {
  Fixture f(204);
  Drbg rng = f.tx_rng(2);
  Transaction tx = force_build_transaction(
      f.sys, {{f.coinbase_id, 0}}, {{"bob", 4}, {"alice", 7}}, 50, rng);
  REQUIRE_FALSE(e_verify(f.sys.params.eq_params, tx.input_sum, tx.equality));
  REQUIRE_FALSE(verify_transaction(f.sys.params, f.sys.chain, tx));
}

TEST_CASE("force-built zero output fails its range proof") {
  Fixture f(205);
  Drbg rng = f.tx_rng(3);
  Transaction tx = force_build_transaction(
      f.sys, {{f.coinbase_id, 0}}, {{"bob", 0}, {"alice", 50}}, 50, rng);
  Commitment cm{tx.verification_outputs[0].c_value,
                f.sys.params.range_params.group.params_id};
  REQUIRE_FALSE(r_verify(f.sys.params.range_params, cm, 0, tx.range_proofs[0]));
  REQUIRE_FALSE(verify_transaction(f.sys.params, f.sys.chain, tx));
}

TEST_CASE("double spends are rejected") {
  Fixture f(206);
  Drbg rng = f.tx_rng(4);
  Transaction tx = build_transaction(f.sys, "alice", {{f.coinbase_id, 0}},
                                     {{"bob", 50}}, rng);
  submit_to_pool(f.sys, tx);
  confirm_pool(f.sys);
  // the consumed input is gone from the UTXO set
  Transaction replay = tx;
  REQUIRE_FALSE(verify_transaction(f.sys.params, f.sys.chain, replay));
}

TEST_CASE("mutated transactions fail verification or change their id") {
  Fixture f(207);
  Drbg rng = f.tx_rng(5);
  Transaction tx = build_transaction(f.sys, "alice", {{f.coinbase_id, 0}},
                                     {{"bob", 12}, {"alice", 38}}, rng);
  REQUIRE(verify_transaction(f.sys.params, f.sys.chain, tx));

  SECTION("field mutated, id kept: digest check fails") {
    Transaction m = tx;
    m.verification_outputs[0].c_value += 1;
    REQUIRE_FALSE(verify_transaction(f.sys.params, f.sys.chain, m));
  }
  SECTION("field mutated, id recomputed: proofs fail") {
    Transaction m = tx;
    m.verification_outputs[0].c_value += 1;
    m.tx_id = compute_tx_id(m);
    REQUIRE(m.tx_id != tx.tx_id);
    REQUIRE_FALSE(verify_transaction(f.sys.params, f.sys.chain, m));
  }
  SECTION("range proof mutated") {
    Transaction m = tx;
    m.range_proofs[1].v_value += 1;
    m.tx_id = compute_tx_id(m);
    REQUIRE_FALSE(verify_transaction(f.sys.params, f.sys.chain, m));
  }
  SECTION("equality proof mutated") {
    Transaction m = tx;
    m.equality.d_value += 1;
    m.tx_id = compute_tx_id(m);
    REQUIRE_FALSE(verify_transaction(f.sys.params, f.sys.chain, m));
  }
}

TEST_CASE("tx_confirm filters the pool and enforces leadership") {
  Fixture f(208);
  Drbg rng = f.tx_rng(6);
  Transaction good = build_transaction(f.sys, "alice", {{f.coinbase_id, 0}},
                                       {{"bob", 50}}, rng);
  Transaction bad = force_build_transaction(
      f.sys, {{f.coinbase_id, 0}}, {{"bob", 1}, {"alice", 2}}, 50, rng);
  std::vector<Transaction> pool{bad, good};

  int leader = leader_for_height(f.sys.chain.height(), 2);
  SECTION("wrong proposer is a consensus violation") {
    int wrong = leader == 1 ? 2 : 1;
    REQUIRE_THROWS_AS(tx_confirm(f.sys.params, f.sys.chain, pool, wrong),
                      std::invalid_argument);
  }
  SECTION("only the valid transaction enters the block") {
    Block block = tx_confirm(f.sys.params, f.sys.chain, pool, leader);
    REQUIRE(block.tx_list.size() == 1);
    REQUIRE(block.tx_list[0].tx_id == good.tx_id);
  }
  SECTION("empty pool yields an empty block") {
    Block block = tx_confirm(f.sys.params, f.sys.chain, {}, leader);
    REQUIRE(block.tx_list.empty());
    REQUIRE(f.sys.chain.height() == 2);
  }
}

TEST_CASE("three-party consensus") {
  Fixture f(209, 3);
  Drbg rng = f.tx_rng(7);
  ConsensusSim sim(f.sys.params, f.sys.chain);
  Transaction tx = build_transaction(f.sys, "alice", {{f.coinbase_id, 0}},
                                     {{"bob", 25}, {"alice", 25}}, rng);

  SECTION("all honest: three identical tips") {
    auto block = sim.round({tx});
    REQUIRE(block.has_value());
    REQUIRE(sim.replicas[0].tip_hash() == sim.replicas[1].tip_hash());
    REQUIRE(sim.replicas[1].tip_hash() == sim.replicas[2].tip_hash());
    REQUIRE(block->tx_list.size() == 1);
  }
  SECTION("leader proposing an invalid transaction never commits") {
    Transaction bad = force_build_transaction(
        f.sys, {{f.coinbase_id, 0}}, {{"bob", 1}, {"alice", 2}}, 50, rng);
    int leader = leader_for_height(f.sys.chain.height(), 3);
    Block dishonest;
    dishonest.height = f.sys.chain.height();
    dishonest.prev_hash = f.sys.chain.tip_hash();
    dishonest.proposer = leader;
    dishonest.tx_list = {bad};
    dishonest.merkle_root = merkle_root({bad.tx_id});
    dishonest.block_hash = compute_block_hash(dishonest);
    auto committed = sim.round_with_proposal(dishonest);
    REQUIRE_FALSE(committed.has_value());
    for (const auto& replica : sim.replicas)
      REQUIRE(replica.height() == f.sys.chain.height());
  }
  SECTION("one party offline: 2-of-3 commits") {
    sim.offline.insert(3);
    auto block = sim.round({tx});
    REQUIRE(block.has_value());
    REQUIRE(sim.replicas[0].tip_hash() == sim.replicas[1].tip_hash());
  }
  SECTION("quorum failure skips the round") {
    sim.offline.insert(2);
    sim.offline.insert(3);
    auto block = sim.round({tx});
    REQUIRE_FALSE(block.has_value());
  }
}

TEST_CASE("chain audit detects tampering") {
  Fixture f(210);
  Drbg rng = f.tx_rng(8);
  Transaction tx = build_transaction(f.sys, "alice", {{f.coinbase_id, 0}},
                                     {{"bob", 50}}, rng);
  submit_to_pool(f.sys, tx);
  confirm_pool(f.sys);
  REQUIRE(audit_chain(f.sys.params, f.sys.chain));

  SECTION("historical ciphertext bit flip") {
    MabSystem tampered = f.sys;
    tampered.chain.blocks[1].tx_list[0].payment_outputs[0].ciphertext.c_value ^= 1;
    REQUIRE_FALSE(audit_chain(tampered.params, tampered.chain));
  }
  SECTION("reordered blocks break the hash links") {
    MabSystem tampered = f.sys;
    std::swap(tampered.chain.blocks[0], tampered.chain.blocks[1]);
    REQUIRE_FALSE(audit_chain(tampered.params, tampered.chain));
  }
  SECTION("UTXO set drift") {
    MabSystem tampered = f.sys;
    tampered.chain.utxo_set.begin()->second.receiver_address = "mallory";
    REQUIRE_FALSE(audit_chain(tampered.params, tampered.chain));
  }
}

TEST_CASE("value conservation across a chain of spends") {
  Fixture f(211);
  Drbg rng = f.tx_rng(9);
  Transaction t1 = build_transaction(f.sys, "alice", {{f.coinbase_id, 0}},
                                     {{"bob", 20}, {"alice", 30}}, rng);
  submit_to_pool(f.sys, t1);
  confirm_pool(f.sys);
  Transaction t2 = build_transaction(f.sys, "bob", {{t1.tx_id, 0}},
                                     {{"alice", 5}, {"bob", 15}}, rng);
  submit_to_pool(f.sys, t2);
  confirm_pool(f.sys);

  Natural total = 0;
  for (const auto& [key, out] : f.sys.chain.utxo_set)
    total += decrypt_output(f.sys, out.receiver_address, out.ciphertext);
  REQUIRE(total == 50);  // minted rewards only; nothing created or destroyed
}
