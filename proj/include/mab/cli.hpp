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

#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>

#include "mab/flow.hpp"

namespace mab {

// Command dispatch. Machine-readable JSON goes to the success channel,
// diagnostics to the error channel. Exit codes: 0 success, 1 operation
// failure (including false verdicts), 2 unknown command or bad usage.
//
// MAB_SEED forces a deterministic seed for every subcommand; MAB_PARAMS_DIR
// points at a directory of profile overrides.

namespace cli_detail {

inline std::uint64_t resolve_seed(std::uint64_t flag_seed) {
  if (const char* env = std::getenv("MAB_SEED"); env != nullptr)
    return std::strtoull(env, nullptr, 10);
  return flag_seed;
}

inline SecurityProfile resolve_profile(const std::string& name) {
  return load_profile(name, std::getenv("MAB_PARAMS_DIR"));
}

inline OutPoint parse_outpoint(const std::string& s) {
  auto pos = s.rfind(':');
  if (pos == std::string::npos || pos == 0 || pos + 1 >= s.size())
    throw CLI::ValidationError("--in", "expected txid:index");
  return OutPoint{s.substr(0, pos),
                  static_cast<std::uint32_t>(std::stoul(s.substr(pos + 1)))};
}

inline std::pair<std::string, Natural> parse_output(const std::string& s) {
  auto pos = s.rfind(':');
  if (pos == std::string::npos || pos == 0 || pos + 1 >= s.size())
    throw CLI::ValidationError("--out", "expected address:amount");
  return {s.substr(0, pos), Natural(s.substr(pos + 1))};
}

}  // namespace cli_detail

inline int run_command(std::vector<std::string> args, std::ostream& out,
                       std::ostream& err) {
  CLI::App app{"multi-center anonymous consortium ledger"};
  app.require_subcommand(1);

  // --- cokeygen --------------------------------------------------------------
  auto* cokeygen_cmd =
      app.add_subcommand("cokeygen", "run the joint RSA key ceremony");
  int ck_parties = 2;
  unsigned ck_bits = 32;
  std::uint64_t ck_exponent = 65537;
  std::uint64_t ck_seed = 7;
  std::string ck_out;
  std::string ck_profile = "test";
  cokeygen_cmd->add_option("--parties", ck_parties, "consortium size k");
  cokeygen_cmd->add_option("--prime-bits", ck_bits, "per-prime width");
  cokeygen_cmd->add_option("--exponent", ck_exponent, "public exponent e");
  cokeygen_cmd->add_option("--seed", ck_seed, "deterministic seed");
  cokeygen_cmd->add_option("--params", ck_profile, "security profile");
  cokeygen_cmd->add_option("--out", ck_out, "output directory")->required();

  // --- mint ------------------------------------------------------------------
  auto* mint_cmd = app.add_subcommand("mint", "register a receiver key");
  std::string mint_chain, mint_ceremony, mint_address;
  std::string mint_profile = "test";
  std::uint64_t mint_seed = 7;
  mint_cmd->add_option("--chain", mint_chain, "chain directory")->required();
  mint_cmd->add_option("--ceremony", mint_ceremony,
                       "ceremony directory (first mint only)");
  mint_cmd->add_option("--address", mint_address, "address label")->required();
  mint_cmd->add_option("--params", mint_profile, "security profile");
  mint_cmd->add_option("--seed", mint_seed, "deterministic seed");

  // --- tx --------------------------------------------------------------------
  auto* tx_cmd = app.add_subcommand("tx", "transaction operations");
  tx_cmd->require_subcommand(1);
  auto* tx_build = tx_cmd->add_subcommand("build", "build and broadcast");
  std::string txb_chain, txb_from, txb_file;
  std::vector<std::string> txb_ins, txb_outs;
  std::uint64_t txb_seed = 7;
  tx_build->add_option("--chain", txb_chain, "chain directory")->required();
  tx_build->add_option("--from", txb_from, "sender address")->required();
  tx_build->add_option("--in", txb_ins, "input txid:index")->required();
  tx_build->add_option("--out", txb_outs, "output address:amount")->required();
  tx_build->add_option("--file", txb_file, "also write the transaction JSON");
  tx_build->add_option("--seed", txb_seed, "deterministic seed");

  auto* tx_verify = tx_cmd->add_subcommand("verify", "verify a transaction");
  std::string txv_chain, txv_file;
  tx_verify->add_option("--chain", txv_chain, "chain directory")->required();
  tx_verify->add_option("file", txv_file, "transaction JSON")->required();

  // --- block -----------------------------------------------------------------
  auto* block_cmd = app.add_subcommand("block", "block operations");
  block_cmd->require_subcommand(1);
  auto* block_propose = block_cmd->add_subcommand(
      "propose", "confirm the pool into the next block");
  std::string bp_chain;
  int bp_proposer = 0;
  block_propose->add_option("--chain", bp_chain, "chain directory")->required();
  block_propose->add_option("--proposer", bp_proposer,
                            "proposing party (defaults to the round leader)");

  // --- chain -----------------------------------------------------------------
  auto* chain_cmd = app.add_subcommand("chain", "chain operations");
  chain_cmd->require_subcommand(1);
  auto* chain_audit =
      chain_cmd->add_subcommand("audit", "replay and verify the whole chain");
  std::string ca_chain;
  chain_audit->add_option("--chain", ca_chain, "chain directory")->required();

  // --- flow ------------------------------------------------------------------
  auto* flow_cmd = app.add_subcommand("flow", "transaction-flow operations");
  flow_cmd->require_subcommand(1);
  auto* flow_run = flow_cmd->add_subcommand("run", "run the boxed flow");
  std::string fr_config, fr_profile = "test", fr_fault = "none";
  std::uint64_t fr_seed = 7;
  int fr_parties = 2;
  flow_run->add_option("--config", fr_config, "flow config JSON");
  flow_run->add_option("--params", fr_profile, "security profile");
  flow_run->add_option("--seed", fr_seed, "deterministic seed");
  flow_run->add_option("--fault", fr_fault,
                       "none|wrong_sum|zero_output|mutate_proof");
  flow_run->add_option("--parties", fr_parties, "consortium size");

  // --- measure ---------------------------------------------------------------
  auto* measure_cmd =
      app.add_subcommand("measure", "operation-count instrumentation");
  std::string ms_scope;
  unsigned ms_i = 2;
  std::uint64_t ms_seed = 7;
  measure_cmd->add_option("--scope", ms_scope, "workload scope")->required();
  measure_cmd->add_option("--outputs", ms_i, "output count i");
  measure_cmd->add_option("--seed", ms_seed, "deterministic seed");

  try {
    std::vector<const char*> argv;
    argv.push_back("mab");
    for (const auto& a : args) argv.push_back(a.c_str());
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help() << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return 2;
  }

  try {
    if (app.got_subcommand(cokeygen_cmd)) {
      namespace fs = std::filesystem;
      SecurityProfile profile = cli_detail::resolve_profile(ck_profile);
      CokeygenConfig cfg{ck_bits, profile.trial_division_bound,
                         profile.biprimality_rounds, 4000};
      CeremonyResult res = run_ceremony(cfg, ck_parties, Natural(ck_exponent),
                                        cli_detail::resolve_seed(ck_seed));
      fs::create_directories(ck_out);
      for (const auto& share : res.shares)
        fsio::write_file(ck_out + "/party_" +
                             std::to_string(share.party_index) + ".json",
                         to_json(share));
      fsio::write_file(ck_out + "/modulus.json", to_json(res.modulus));
      out << Json{{"n_hex", to_hex(res.modulus.n_value)},
                  {"parties", ck_parties},
                  {"attempts", res.attempts},
                  {"out", ck_out}}
                 .dump(2)
          << "\n";
      return 0;
    }

    if (app.got_subcommand(mint_cmd)) {
      namespace fs = std::filesystem;
      MabSystem sys;
      if (fs::exists(fs::path(mint_chain) / "system.json")) {
        sys = load_system(mint_chain);
      } else {
        if (mint_ceremony.empty())
          throw std::invalid_argument(
              "first mint needs --ceremony to bootstrap the chain");
        SecurityProfile profile = cli_detail::resolve_profile(mint_profile);
        CeremonyResult res;
        res.modulus = joint_modulus_from(
            fsio::read_file(fs::path(mint_ceremony) / "modulus.json"));
        for (int i = 1; i <= res.modulus.party_count; ++i)
          res.shares.push_back(party_share_from(fsio::read_file(
              fs::path(mint_ceremony) / ("party_" + std::to_string(i) + ".json"))));
        res.biprime_ok = res.modulus.biprime_checked;
        sys = init_system(profile, std::move(res),
                          cli_detail::resolve_seed(mint_seed));
      }
      Drbg rng = Drbg(cli_detail::resolve_seed(mint_seed))
                     .fork("mint-cli", sys.wallets.size());
      Wallet wallet = mint(sys, mint_address, rng);
      save_system(mint_chain, sys);
      out << Json{{"address", wallet.address},
                  {"key_id", wallet.key.pub.key_id},
                  {"height", sys.chain.height()}}
                 .dump(2)
          << "\n";
      return 0;
    }

    if (app.got_subcommand(tx_cmd) && tx_cmd->got_subcommand(tx_build)) {
      MabSystem sys = load_system(txb_chain);
      std::vector<OutPoint> ins;
      for (const auto& s : txb_ins) ins.push_back(cli_detail::parse_outpoint(s));
      std::vector<std::pair<std::string, Natural>> outs;
      for (const auto& s : txb_outs) outs.push_back(cli_detail::parse_output(s));
      Drbg rng = Drbg(cli_detail::resolve_seed(txb_seed)).fork("tx-cli", 0);
      Transaction tx = build_transaction(sys, txb_from, ins, outs, rng);
      submit_to_pool(sys, tx);
      save_system(txb_chain, sys);
      if (!txb_file.empty()) fsio::write_file(txb_file, to_json(tx));
      out << Json{{"tx_id", tx.tx_id}, {"pool_size", sys.pool.size()}}.dump(2)
          << "\n";
      return 0;
    }

    if (app.got_subcommand(tx_cmd) && tx_cmd->got_subcommand(tx_verify)) {
      MabSystem sys = load_system(txv_chain);
      Transaction tx = transaction_from(fsio::read_file(txv_file));
      bool ok = verify_transaction(sys.params, sys.chain, tx);
      out << Json{{"tx_id", tx.tx_id}, {"valid", ok ? 1 : 0}}.dump(2) << "\n";
      return ok ? 0 : 1;
    }

    if (app.got_subcommand(block_cmd) && block_cmd->got_subcommand(block_propose)) {
      MabSystem sys = load_system(bp_chain);
      int leader =
          leader_for_height(sys.chain.height(), sys.params.party_count());
      int proposer = bp_proposer == 0 ? leader : bp_proposer;
      Block block = tx_confirm(sys.params, sys.chain, sys.pool, proposer);
      prune_pool(sys.pool, block);
      save_system(bp_chain, sys);
      out << Json{{"height", block.height},
                  {"block_hash", block.block_hash},
                  {"confirmed", block.tx_list.size()}}
                 .dump(2)
          << "\n";
      return 0;
    }

    if (app.got_subcommand(chain_cmd) && chain_cmd->got_subcommand(chain_audit)) {
      MabSystem sys = load_system(ca_chain);
      bool ok = audit_chain(sys.params, sys.chain);
      out << Json{{"height", sys.chain.height()},
                  {"tip", sys.chain.tip_hash()},
                  {"valid", ok ? 1 : 0}}
                 .dump(2)
          << "\n";
      return ok ? 0 : 1;
    }

    if (app.got_subcommand(flow_cmd) && flow_cmd->got_subcommand(flow_run)) {
      FlowConfig config;
      if (!fr_config.empty()) {
        Json j = fsio::read_file(fr_config);
        config.profile_name = j.value("params", config.profile_name);
        config.seed = j.value("seed", config.seed);
        config.parties = j.value("parties", config.parties);
        config.fault = j.value("fault", config.fault);
        if (j.contains("amounts"))
          config.amounts = j.at("amounts").get<std::vector<unsigned long>>();
      }
      if (flow_run->count("--params") != 0) config.profile_name = fr_profile;
      if (flow_run->count("--seed") != 0) config.seed = fr_seed;
      if (flow_run->count("--fault") != 0) config.fault = fr_fault;
      if (flow_run->count("--parties") != 0) config.parties = fr_parties;
      config.seed = cli_detail::resolve_seed(config.seed);
      FlowReport report = run_transaction_flow(config);
      out << report.to_json().dump(2) << "\n";
      return report.all_ok ? 0 : 1;
    }

    if (app.got_subcommand(measure_cmd)) {
      out << measure_scope(ms_scope, ms_i, cli_detail::resolve_seed(ms_seed))
                 .dump(2)
          << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  err << "error: no command executed\n";
  return 2;
}

}  // namespace mab
