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

#include <filesystem>
#include <fstream>
#include <json.hpp>

#include "mab/ledger.hpp"

// JSON schemas for every externally visible document. Integers are lowercase
// big-endian hex strings; signed values carry a '-' prefix. Field order is
// canonical (ordered_json) so seeded runs serialize byte-identically.

namespace mab {

using Json = nlohmann::ordered_json;

inline std::string payload_hex(const Bytes& b) {
  static const char* k = "0123456789abcdef";
  std::string s;
  s.reserve(b.size() * 2);
  for (auto byte : b) {
    s.push_back(k[byte >> 4]);
    s.push_back(k[byte & 0xf]);
  }
  return s;
}

inline Bytes payload_from_hex(const std::string& s) {
  if (s.size() % 2 != 0) throw std::invalid_argument("payload hex length odd");
  auto nib = [](char c) -> unsigned {
    if (c >= '0' && c <= '9') return static_cast<unsigned>(c - '0');
    if (c >= 'a' && c <= 'f') return static_cast<unsigned>(c - 'a' + 10);
    throw std::invalid_argument("bad hex digit");
  };
  Bytes out(s.size() / 2);
  for (size_t i = 0; i < out.size(); ++i)
    out[i] = static_cast<std::uint8_t>((nib(s[2 * i]) << 4) | nib(s[2 * i + 1]));
  return out;
}

// --- profiles ---------------------------------------------------------------

inline Json to_json(const SecurityProfile& p) {
  return Json{{"name", p.name},
              {"prime_bits", p.prime_bits},
              {"commit_bits", p.commit_bits},
              {"t", p.t},
              {"l", p.l},
              {"s", p.s},
              {"T", p.T},
              {"challenge_bits", p.challenge_bits},
              {"trial_division_bound", p.trial_division_bound},
              {"biprimality_rounds", p.biprimality_rounds},
              {"reward_amount", p.reward_amount},
              {"amount_bits", p.amount_bits},
              {"e_public", p.e_public},
              {"hash_function", p.hash_function}};
}

inline SecurityProfile profile_from(const Json& j) {
  return profile_from_json(nlohmann::json(j));
}

// --- cokeygen ---------------------------------------------------------------

inline Json to_json(const CeremonyMessage& m) {
  return Json{{"round", m.round},
              {"from_party", m.from_party},
              {"kind", m.kind},
              {"payload_hex", payload_hex(m.payload)}};
}

inline CeremonyMessage ceremony_message_from(const Json& j) {
  return CeremonyMessage{j.at("round").get<int>(),
                         j.at("from_party").get<int>(),
                         j.at("kind").get<std::string>(),
                         payload_from_hex(j.at("payload_hex"))};
}

inline Json to_json(const JointModulus& jm) {
  Json transcript = Json::array();
  for (const auto& m : jm.transcript) transcript.push_back(to_json(m));
  return Json{{"n_hex", to_hex(jm.n_value)},
              {"party_count", jm.party_count},
              {"e_hex", to_hex(jm.e_public)},
              {"biprime_checked", jm.biprime_checked},
              {"simulated_shortcut", jm.simulated_shortcut},
              {"transcript", transcript}};
}

inline JointModulus joint_modulus_from(const Json& j) {
  JointModulus jm;
  jm.n_value = natural_from_hex(j.at("n_hex"));
  jm.party_count = j.at("party_count").get<int>();
  jm.e_public = natural_from_hex(j.at("e_hex"));
  jm.biprime_checked = j.at("biprime_checked").get<bool>();
  jm.simulated_shortcut = j.at("simulated_shortcut").get<bool>();
  for (const auto& m : j.at("transcript"))
    jm.transcript.push_back(ceremony_message_from(m));
  return jm;
}

inline Json to_json(const PartyShare& s) {
  Json j{{"party_index", s.party_index},
         {"p_share_hex", to_hex(s.p_share)},
         {"q_share_hex", to_hex(s.q_share)}};
  if (s.d_share) j["d_share_hex"] = to_hex(*s.d_share);
  return j;
}

inline PartyShare party_share_from(const Json& j) {
  PartyShare s;
  s.party_index = j.at("party_index").get<int>();
  s.p_share = natural_from_hex(j.at("p_share_hex"));
  s.q_share = natural_from_hex(j.at("q_share_hex"));
  if (j.contains("d_share_hex"))
    s.d_share = natural_from_hex(j.at("d_share_hex"));
  return s;
}

// --- paillier ---------------------------------------------------------------

inline Json to_json(const PaillierPublic& pk) {
  return Json{{"n_hex", to_hex(pk.n_value)}, {"g_hex", to_hex(pk.g_value)}};
}

inline PaillierPublic paillier_public_from(const Json& j) {
  Natural n = natural_from_hex(j.at("n_hex"));
  Natural g = natural_from_hex(j.at("g_hex"));
  return PaillierPublic{n, n * n, g, detail::paillier_key_id(n, g)};
}

inline Json to_json(const PaillierKey& key) {
  Json j{{"public", to_json(key.pub)}};
  if (key.priv)
    j["private"] = Json{{"lambda_hex", to_hex(key.priv->lambda_value)},
                        {"mu_hex", to_hex(key.priv->mu_value)}};
  if (key.threshold) {
    Json shares = Json::array();
    for (const auto& s : key.threshold->lambda_shares)
      shares.push_back(to_hex(s));
    j["threshold"] =
        Json{{"lambda_shares", shares}, {"mu_hex", to_hex(key.threshold->mu_value)}};
  }
  return j;
}

inline PaillierKey paillier_key_from(const Json& j) {
  PaillierKey key;
  key.pub = paillier_public_from(j.at("public"));
  if (j.contains("private"))
    key.priv = PaillierPrivate{natural_from_hex(j.at("private").at("lambda_hex")),
                               natural_from_hex(j.at("private").at("mu_hex"))};
  if (j.contains("threshold")) {
    ThresholdShares th;
    for (const auto& s : j.at("threshold").at("lambda_shares"))
      th.lambda_shares.push_back(natural_from_hex(s));
    th.mu_value = natural_from_hex(j.at("threshold").at("mu_hex"));
    key.threshold = std::move(th);
  }
  return key;
}

inline Json to_json(const Ciphertext& c) {
  return Json{{"key_id", c.key_id}, {"c_hex", to_hex(c.c_value)}};
}

inline Ciphertext ciphertext_from(const Json& j) {
  return Ciphertext{natural_from_hex(j.at("c_hex")), j.at("key_id")};
}

// --- commitments ------------------------------------------------------------

inline Json to_json(const CommitParams& p) {
  return Json{{"n_hex", to_hex(p.modulus)},
              {"g_hex", to_hex(p.g_base)},
              {"h_hex", to_hex(p.h_base)},
              {"setup_transcript_hash", p.params_id},
              {"max_message_bits", p.max_message_bits},
              {"key_bound", p.key_bound}};
}

inline CommitParams commit_params_from(const Json& j) {
  return CommitParams{natural_from_hex(j.at("n_hex")),
                      natural_from_hex(j.at("g_hex")),
                      natural_from_hex(j.at("h_hex")),
                      j.at("setup_transcript_hash"),
                      j.at("max_message_bits").get<unsigned>(),
                      j.at("key_bound").get<bool>()};
}

inline Json to_json(const Commitment& c) {
  return Json{{"value_hex", to_hex(c.value)}, {"params_id", c.params_id}};
}

inline Commitment commitment_from(const Json& j) {
  return Commitment{natural_from_hex(j.at("value_hex")), j.at("params_id")};
}

inline Json to_json(const DualCommitment& d) {
  return Json{{"e_hex", to_hex(d.e_cm.value)},
              {"f_hex", to_hex(d.f_cm.value)},
              {"params_a_id", d.e_cm.params_id},
              {"params_b_id", d.f_cm.params_id}};
}

inline DualCommitment dual_commitment_from(const Json& j) {
  return DualCommitment{
      Commitment{natural_from_hex(j.at("e_hex")), j.at("params_a_id")},
      Commitment{natural_from_hex(j.at("f_hex")), j.at("params_b_id")}};
}

// --- proofs -----------------------------------------------------------------

inline Json to_json(const EqualityProof& p) {
  return Json{{"u_hex", to_hex(p.u_value)},
              {"d_hex", to_hex(p.d_value)},
              {"d1_hex", to_hex(p.d1_value)},
              {"d2_hex", to_hex(p.d2_value)}};
}

inline EqualityProof equality_proof_from(const Json& j) {
  return EqualityProof{
      natural_from_hex(j.at("u_hex")), natural_from_hex(j.at("d_hex")),
      natural_from_hex(j.at("d1_hex")), natural_from_hex(j.at("d2_hex"))};
}

inline Json to_json(const RangeProof& p) {
  return Json{
      {"e1", to_hex(p.e1)},
      {"e2", to_hex(p.e2)},
      {"e3", to_hex(p.e3)},
      {"f", to_hex(p.f)},
      {"v", to_hex(p.v_cm)},
      {"v_value", to_hex(p.v_value)},
      {"pk1",
       Json{{"a1", to_hex(p.pk1.a1)},
            {"a2", to_hex(p.pk1.a2)},
            {"c", to_hex(p.pk1.c)},
            {"z_alpha", to_hex(p.pk1.z_alpha)},
            {"z1", to_hex(p.pk1.z1)},
            {"z2", to_hex(p.pk1.z2)}}},
      {"pk2",
       Json{{"b1", to_hex(p.pk2.b1)},
            {"b2", to_hex(p.pk2.b2)},
            {"c", to_hex(p.pk2.c)},
            {"z_omega", to_hex(p.pk2.z_omega)},
            {"z3", to_hex(p.pk2.z3)},
            {"z_star", to_hex(p.pk2.z_star)}}},
      {"pk3",
       Json{{"c0", to_hex(p.pk3.c0)},
            {"c", to_hex(p.pk3.c)},
            {"z_omega", to_hex(p.pk3.z_omega)},
            {"z_r", to_hex(p.pk3.z_r)}}}};
}

inline RangeProof range_proof_from(const Json& j) {
  RangeProof p;
  p.e1 = natural_from_hex(j.at("e1"));
  p.e2 = natural_from_hex(j.at("e2"));
  p.e3 = natural_from_hex(j.at("e3"));
  p.f = natural_from_hex(j.at("f"));
  p.v_cm = natural_from_hex(j.at("v"));
  p.v_value = from_hex(j.at("v_value"));
  const Json& pk1 = j.at("pk1");
  p.pk1 = RangePk1{natural_from_hex(pk1.at("a1")), natural_from_hex(pk1.at("a2")),
                   natural_from_hex(pk1.at("c")),
                   natural_from_hex(pk1.at("z_alpha")),
                   natural_from_hex(pk1.at("z1")), natural_from_hex(pk1.at("z2"))};
  const Json& pk2 = j.at("pk2");
  p.pk2 = RangePk2{natural_from_hex(pk2.at("b1")), natural_from_hex(pk2.at("b2")),
                   natural_from_hex(pk2.at("c")), from_hex(pk2.at("z_omega")),
                   natural_from_hex(pk2.at("z3")), from_hex(pk2.at("z_star"))};
  const Json& pk3 = j.at("pk3");
  p.pk3 = RangePk3{natural_from_hex(pk3.at("c0")), natural_from_hex(pk3.at("c")),
                   natural_from_hex(pk3.at("z_omega")),
                   natural_from_hex(pk3.at("z_r"))};
  return p;
}

// --- system parameters ------------------------------------------------------

inline Json to_json(const DumbAccountKey& k) {
  return Json{{"pk", to_json(k.pk)},
              {"r_d_hex", to_hex(k.r_d)},
              {"beta_params", to_json(k.beta_params)},
              {"range_params", to_json(k.range_params)}};
}

inline DumbAccountKey dumb_account_from(const Json& j) {
  DumbAccountKey k;
  k.pk = paillier_public_from(j.at("pk"));
  k.r_d = natural_from_hex(j.at("r_d_hex"));
  k.beta_params = commit_params_from(j.at("beta_params"));
  k.range_params = commit_params_from(j.at("range_params"));
  return k;
}

inline Json to_json(const SystemParams& p) {
  return Json{{"profile", to_json(p.profile)},
              {"consortium", to_json(p.consortium)},
              {"dumb", to_json(p.dumb)},
              {"v_alpha", to_json(p.v_alpha)},
              {"range", Json{{"t", p.range_params.t},
                             {"l", p.range_params.l},
                             {"s", p.range_params.s},
                             {"T", p.range_params.T}}},
              {"equality", Json{{"t", p.eq_params.t},
                                {"l", p.eq_params.l},
                                {"s", p.eq_params.s},
                                {"msg_bound_hex", to_hex(p.eq_params.msg_bound)}}}};
}

inline SystemParams system_params_from(const Json& j) {
  SystemParams p;
  p.profile = profile_from(j.at("profile"));
  p.consortium = joint_modulus_from(j.at("consortium"));
  p.dumb = dumb_account_from(j.at("dumb"));
  p.v_alpha = commit_params_from(j.at("v_alpha"));
  const Json& r = j.at("range");
  p.range_params = RangeParams{p.dumb.range_params, r.at("t").get<unsigned>(),
                               r.at("l").get<unsigned>(), r.at("s").get<unsigned>(),
                               r.at("T").get<unsigned>()};
  const Json& e = j.at("equality");
  p.eq_params = EqualityParams{p.v_alpha,
                               p.dumb.beta_params,
                               e.at("t").get<unsigned>(),
                               e.at("l").get<unsigned>(),
                               e.at("s").get<unsigned>(),
                               natural_from_hex(e.at("msg_bound_hex"))};
  return p;
}

// --- transactions, blocks, chain --------------------------------------------

inline Json to_json(const Transaction& tx) {
  Json inputs = Json::array();
  for (const auto& in : tx.inputs)
    inputs.push_back(Json{{"tx_id", in.tx_id}, {"index", in.index}});
  Json payments = Json::array();
  for (const auto& out : tx.payment_outputs)
    payments.push_back(Json{{"receiver", out.receiver_address},
                            {"ciphertext", to_json(out.ciphertext)}});
  Json verifs = Json::array();
  for (const auto& out : tx.verification_outputs)
    verifs.push_back(to_json(out));
  Json ranges = Json::array();
  for (const auto& rp : tx.range_proofs) ranges.push_back(to_json(rp));
  return Json{{"tx_id", tx.tx_id},
              {"reward", tx.reward_flag},
              {"inputs", inputs},
              {"payment_outputs", payments},
              {"verification_outputs", verifs},
              {"input_sum", to_json(tx.input_sum)},
              {"equality_proof", to_json(tx.equality)},
              {"range_proofs", ranges}};
}

inline Transaction transaction_from(const Json& j) {
  Transaction tx;
  tx.tx_id = j.at("tx_id");
  tx.reward_flag = j.at("reward").get<bool>();
  for (const auto& in : j.at("inputs"))
    tx.inputs.push_back(
        OutPoint{in.at("tx_id"), in.at("index").get<std::uint32_t>()});
  for (const auto& out : j.at("payment_outputs"))
    tx.payment_outputs.push_back(
        PaymentOutput{out.at("receiver"), ciphertext_from(out.at("ciphertext"))});
  for (const auto& out : j.at("verification_outputs"))
    tx.verification_outputs.push_back(ciphertext_from(out));
  tx.input_sum = dual_commitment_from(j.at("input_sum"));
  tx.equality = equality_proof_from(j.at("equality_proof"));
  for (const auto& rp : j.at("range_proofs"))
    tx.range_proofs.push_back(range_proof_from(rp));
  return tx;
}

inline Json to_json(const Block& b) {
  Json txs = Json::array();
  for (const auto& tx : b.tx_list) txs.push_back(to_json(tx));
  return Json{{"height", b.height},
              {"prev_hash", b.prev_hash},
              {"proposer", b.proposer},
              {"merkle_root", b.merkle_root},
              {"block_hash", b.block_hash},
              {"tx_list", txs}};
}

inline Block block_from(const Json& j) {
  Block b;
  b.height = j.at("height").get<std::uint64_t>();
  b.prev_hash = j.at("prev_hash");
  b.proposer = j.at("proposer").get<int>();
  b.merkle_root = j.at("merkle_root");
  b.block_hash = j.at("block_hash");
  for (const auto& tx : j.at("tx_list")) b.tx_list.push_back(transaction_from(tx));
  return b;
}

// --- chain directory --------------------------------------------------------

namespace fsio {

inline void write_file(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << "\n";
}

inline Json read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return Json::parse(in);
}

inline std::string block_filename(std::uint64_t height) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "block_%08llu.json",
                static_cast<unsigned long long>(height));
  return buf;
}

}  // namespace fsio

inline void save_system(const std::filesystem::path& dir, const MabSystem& sys) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  Json shares = Json::array();
  for (const auto& s : sys.shares) shares.push_back(to_json(s));
  fsio::write_file(dir / "system.json",
                   Json{{"params", to_json(sys.params)},
                        {"shares", shares},
                        {"reward_minted", sys.reward_minted}});
  Json wallets = Json::array();
  for (const auto& [addr, w] : sys.wallets)
    wallets.push_back(Json{{"address", addr}, {"key", to_json(w.key)}});
  fsio::write_file(dir / "wallets.json", wallets);
  Json pool = Json::array();
  for (const auto& tx : sys.pool) pool.push_back(to_json(tx));
  fsio::write_file(dir / "pool.json", pool);
  for (const auto& block : sys.chain.blocks)
    fsio::write_file(dir / fsio::block_filename(block.height), to_json(block));
  fsio::write_file(dir / "chain_head.json",
                   Json{{"height", sys.chain.height()},
                        {"tip_hash", sys.chain.tip_hash()}});
}

inline MabSystem load_system(const std::filesystem::path& dir) {
  MabSystem sys;
  Json system = fsio::read_file(dir / "system.json");
  sys.params = system_params_from(system.at("params"));
  for (const auto& s : system.at("shares"))
    sys.shares.push_back(party_share_from(s));
  sys.reward_minted = system.at("reward_minted").get<bool>();
  for (const auto& w : fsio::read_file(dir / "wallets.json"))
    sys.wallets[w.at("address")] =
        Wallet{w.at("address"), paillier_key_from(w.at("key"))};
  for (const auto& tx : fsio::read_file(dir / "pool.json"))
    sys.pool.push_back(transaction_from(tx));
  Json head = fsio::read_file(dir / "chain_head.json");
  std::uint64_t height = head.at("height").get<std::uint64_t>();
  for (std::uint64_t h = 0; h < height; ++h) {
    Block block = block_from(fsio::read_file(dir / fsio::block_filename(h)));
    detail::apply_block(sys.chain, block);
  }
  if (sys.chain.tip_hash() != head.at("tip_hash").get<std::string>())
    throw std::runtime_error("chain head does not match the stored blocks");
  return sys;
}

}  // namespace mab
