// Copyright 2026 The blindmarket Authors
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

// Command-line front end: keygen, run, audit, bench, gas-report, generate.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "blindmarket/errors.hpp"
#include "blindmarket/threshold_blind_sig.hpp"
#include "blindmarket/verifier.hpp"
#include "blindmarket/workloads.hpp"

using namespace blindmarket;

namespace {

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorCode::kParseError, "cannot write " + path);
  }
  out << text;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kParseError, "cannot open " + path);
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int keygen(std::uint32_t t, std::uint32_t n, const std::vector<Money>& denominations, std::uint64_t seed,
           const std::string& out) {
  Rng rng(seed);
  const auto keys = tbs::keygen_per_denomination(GroupParams::bn254(), t, n, denominations, rng);
  nlohmann::ordered_json j;
  j["format"] = "blindmarket-keys/1";
  j["threshold"] = t;
  j["authorities"] = n;
  for (const auto& [d, ks] : keys) {
    nlohmann::ordered_json entry;
    entry["denomination"] = d;
    entry["verify_key"] = to_hex(ks.master_verify_key.serialize());
    for (const auto& share : ks.shares) {
      entry["shares"].push_back({{"index", share.index},
                                 {"secret", to_hex(share.secret.to_bytes())},
                                 {"verify_key", to_hex(share.verify_key.serialize())}});
    }
    j["keys"].push_back(entry);
  }
  write_output(out, j.dump(2) + "\n");
  return 0;
}

int run(const std::string& path, const std::string& gas_path, const std::string& report_out,
        const std::string& events_out) {
  auto s = workloads::load_scenario(path);
  if (!gas_path.empty()) {
    s.gas = ledger::GasTable::load(gas_path);
  }
  const auto report = workloads::run_scenario(s);
  write_output(report_out, workloads::report_json(report));
  if (!events_out.empty()) {
    write_output(events_out, report.events_ndjson);
  }
  std::cerr << "solve " << report.execution.solve_ms << " ms, audit " << report.execution.audit_ms << " ms\n";
  return report.conserved ? 0 : 1;
}

int audit(const std::string& path, const std::string& solution_path) {
  const auto s = workloads::load_scenario(path);
  std::vector<Item> items;
  for (std::size_t k = 0; k < s.items.size(); ++k) {
    items.push_back(Item{static_cast<ItemId>(k + 1), s.items[k].characteristics, s.items[k].reserve, {}});
  }
  std::vector<Bid> bids;
  for (const auto& b : s.bidders) {
    bids.push_back(b.bid);
  }
  const auto v = verifier::rebuild_valuations(bids, items);
  const auto sol = solution_path.empty() ? vda::run_vda(v, items)
                                         : workloads::parse_solution_json(read_file(solution_path));
  if (const auto proof = verifier::audit(sol, v, items)) {
    std::cout << "misbehaviour: " << ledger::describe(*proof) << "\n";
    return 2;
  }
  if (!verifier::check_vcg(sol, v, items)) {
    const auto better = verifier::best_response(sol, v, items);
    std::cout << "equilibrium but not VCG; better solution: " << workloads::solution_json(better);
    return 3;
  }
  std::cout << "ok: " << workloads::solution_json(sol);
  return 0;
}

int bench(std::size_t items, const std::vector<std::size_t>& bidders, const std::vector<std::uint64_t>& seeds,
          const std::string& out) {
  std::string csv = workloads::csv_header() + "\n";
  for (const auto seed : seeds) {
    for (const auto b : bidders) {
      csv += workloads::to_csv(workloads::bench_market(workloads::generate_filecoin_workload(seed, items, b))) + "\n";
    }
  }
  write_output(out, csv);
  return 0;
}

int gas_report(const std::string& path) {
  const auto report = workloads::run_scenario(workloads::load_scenario(path));
  const auto rows = workloads::gas_report(report.gas_by_operation);
  std::cout << workloads::format_gas_report(rows);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sealed-bid multi-item auction simulator"};
  app.require_subcommand(1);

  std::uint32_t t = 2;
  std::uint32_t n = 3;
  std::vector<Money> denominations{1, 2, 5, 10, 20, 50, 100};
  std::uint64_t seed = 1;
  std::string out;
  auto* kg = app.add_subcommand("keygen", "Dealer key generation per denomination");
  kg->add_option("-t,--threshold", t, "Signing threshold");
  kg->add_option("-n,--authorities", n, "Number of authorities");
  kg->add_option("-d,--denominations", denominations, "Deposit denominations");
  kg->add_option("-s,--seed", seed, "Random seed");
  kg->add_option("-o,--out", out, "Output file (JSON)");

  std::string scenario;
  std::string gas_table;
  std::string events;
  auto* rn = app.add_subcommand("run", "Run a scenario through the full protocol");
  rn->add_option("scenario", scenario, "Scenario file")->required();
  rn->add_option("-g,--gas-table", gas_table, "Gas table overriding the scenario's");
  rn->add_option("-o,--out", out, "Report file (JSON)");
  rn->add_option("-e,--events", events, "Event log file (NDJSON)");

  std::string solution;
  auto* au = app.add_subcommand("audit", "Audit a solution against a scenario's bids");
  au->add_option("scenario", scenario, "Scenario file")->required();
  au->add_option("-s,--solution", solution, "Solution file (JSON); solver output if omitted");

  std::size_t items = 100;
  std::vector<std::size_t> bidders{500, 1000, 2000};
  std::vector<std::uint64_t> seeds{1};
  auto* bn = app.add_subcommand("bench", "Solve and audit generated workloads, CSV out");
  bn->add_option("-i,--items", items, "Items per auction");
  bn->add_option("-b,--bidders", bidders, "Bidder counts")->delimiter(',');
  bn->add_option("-s,--seeds", seeds, "Seeds")->delimiter(',');
  bn->add_option("-o,--out", out, "CSV file");

  auto* gr = app.add_subcommand("gas-report", "Per-operation gas of a scenario run");
  gr->add_option("scenario", scenario, "Scenario file")->required();

  std::size_t gen_bidders = 50;
  std::size_t gen_items = 10;
  auto* gen = app.add_subcommand("generate", "Write a storage-market scenario");
  gen->add_option("-s,--seed", seed, "Random seed");
  gen->add_option("-i,--items", gen_items, "Items");
  gen->add_option("-b,--bidders", gen_bidders, "Bidders");
  gen->add_option("-o,--out", out, "Scenario file (YAML)");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*kg) return keygen(t, n, denominations, seed, out);
    if (*rn) return run(scenario, gas_table, out, events);
    if (*au) return audit(scenario, solution);
    if (*bn) return bench(items, bidders, seeds, out);
    if (*gr) return gas_report(scenario);
    if (*gen) {
      write_output(out, workloads::to_yaml(workloads::generate_filecoin_workload(seed, gen_items, gen_bidders)));
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
