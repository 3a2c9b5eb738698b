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

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "blindmarket/actors.hpp"
#include "blindmarket/ledger.hpp"
#include "blindmarket/market_model.hpp"
#include "blindmarket/vda_solver.hpp"

namespace blindmarket::workloads {

inline constexpr std::string_view kScenarioFormat = "blindmarket-scenario/1";
inline constexpr std::string_view kReportFormat = "blindmarket-report/1";

struct ItemSpec {
  std::string seller;
  std::vector<std::int64_t> characteristics;
  Money reserve = 0;
  bool opens = true;
};

struct BidderSpec {
  Bid bid;
  Money deposit = 0;
  actors::BidderBehaviour behaviour = actors::BidderBehaviour::kHonest;
};

/// Everything needed to replay one auction deterministically.
struct Scenario {
  std::string id = "scenario";
  std::uint64_t seed = 1;
  std::uint32_t threshold = 2;
  std::uint32_t authorities = 3;
  std::uint32_t authorities_offline = 0;
  ledger::Timers timers{4, 4, 4, 4};
  ledger::GasPrice gas_price{1, 1000};
  ledger::GasTable gas;
  int significant_digits = 0;  // 0: {1, 2, 5} x 10^k denominations
  std::vector<ItemSpec> items;
  std::vector<BidderSpec> bidders;
  actors::SolverBehaviour solver = actors::SolverBehaviour::kHonest;
  vda::Solution fixed_solution;  // used by the fixed solver
  std::vector<actors::AuditorBehaviour> auditors{actors::AuditorBehaviour::kHonest};

  DenominationSet denominations() const;
};

/// Throws ParseError (with line number) on malformed YAML or unknown keys,
/// ScenarioInvalid on inconsistent content.
Scenario parse_scenario(std::string_view yaml);
Scenario load_scenario(const std::string& path);
std::string to_yaml(const Scenario& s);

/// Storage-market price model. Money is in thousandths of a dollar.
struct PriceModel {
  double reference_per_gb_month = 20.0;  // cloud list price
  double discount_per_month = 0.015;     // per extra month of commitment
  double min_discount = 0.6;
  double budget_noise = 0.1;             // budgets vary by +/- this fraction
  double ask_low = 0.4;                  // seller reserve per GB-month, as a
  double ask_high = 0.8;                 //   fraction of the reference price
  std::vector<std::int64_t> sizes_gb{32, 64, 128, 256};
  std::int64_t max_months = 12;
  int significant_digits = 2;

  /// Price multiplier for a commitment of `months`; non-increasing.
  double discount(std::int64_t months) const;
};

/// Items are storage offers (GB, months); bidders post general bids for at
/// least their size and duration. Bidder k and item k depend only on the
/// seed and k, so populations are nested as counts grow.
Scenario generate_filecoin_workload(std::uint64_t seed, std::size_t n_items, std::size_t n_bidders,
                                    const PriceModel& model = {});

/// Rounds to the nearest value with at most `digits` significant digits (min 1).
Money round_significant(double amount, int digits);

/// Price statistics over all items; an unsold item counts at its reserve,
/// and as its own valuation in the valuation baseline.
struct MarketMetrics {
  double avg_price = 0;
  double avg_reservation = 0;
  double avg_valuation = 0;      // holder's valuation per sold item
  double avg_net_valuation = 0;  // mean of v - p over assigned bidders
  std::size_t sold = 0;
};

MarketMetrics market_metrics(const vda::Solution& sol, const ValuationMatrix& v, std::span<const Item> items);

/// Gas of an honest run: deployment, every item submitted and opened, every
/// bidder committing and revealing, one solution and `withdrawals` withdrawals.
std::uint64_t honest_protocol_gas(std::size_t bidders, std::size_t items, std::size_t withdrawals,
                                  const ledger::GasTable& gas);

struct Withdrawal {
  std::string role;
  std::size_t index = 0;
  ledger::Status status = ledger::Status::kOk;
  Money amount = 0;
};

struct Report {
  std::string scenario_id;
  std::uint64_t seed = 0;
  actors::PreparationReport preparation;
  actors::ExecutionReport execution;
  std::vector<Item> items;
  ValuationMatrix valuations;
  MarketMetrics metrics;
  std::vector<Withdrawal> withdrawals;
  std::map<std::string, std::uint64_t> gas_by_role;
  std::map<std::string, ledger::OperationGas> gas_by_operation;
  std::uint64_t gas_total = 0;
  bool conserved = false;
  std::string state_digest;
  std::string events_ndjson;
};

/// Everything a scenario sets up, after preparation (the ledger is in SOLVE).
struct Market {
  ledger::Ledger ledger;
  actors::AuthoritySet authorities;
  ledger::Address deployer;
  std::vector<actors::SellerAgent> sellers;
  std::vector<actors::BidderAgent> bidders;
  actors::SolverAgent solver;
  std::vector<actors::AuditorAgent> auditors;
  actors::PreparationReport preparation;
};

Market prepare_scenario(const Scenario& s);
/// Full protocol run: keys, preparation, execution and withdrawals.
Report run_scenario(const Scenario& s);
/// Stable JSON rendering; wall-clock timings are left out.
std::string report_json(const Report& r);

/// One CSV row of an off-chain market run.
struct BenchRow {
  std::string scenario_id;
  std::size_t bidders = 0;
  std::size_t items = 0;
  double avg_price = 0;
  double avg_net_valuation = 0;
  double solve_ms = 0;
  double audit_ms = 0;
  std::uint64_t gas_total = 0;
  MarketMetrics metrics;
};

/// Solves and audits the scenario off chain, assuming every party is honest.
BenchRow bench_market(const Scenario& s);
std::string csv_header();
std::string to_csv(const BenchRow& row);

struct GasReportRow {
  std::string operation;
  std::uint64_t calls = 0;
  std::uint64_t gas = 0;
  Money fee = 0;  // ledger currency at the configured gas price
  double usd = 0;
};

/// Illustrative conversion only: 10 gwei per gas at 2000 USD per ether.
inline constexpr double kIllustrativeUsdPerGas = 10e-9 * 2000.0;

std::vector<GasReportRow> gas_report(const std::map<std::string, ledger::OperationGas>& used,
                                     double usd_per_gas = kIllustrativeUsdPerGas);
std::vector<GasReportRow> gas_report(const ledger::Ledger& ledger, double usd_per_gas = kIllustrativeUsdPerGas);
std::string format_gas_report(std::span<const GasReportRow> rows);

std::string solution_json(const vda::Solution& s);
/// Throws ParseError.
vda::Solution parse_solution_json(std::string_view text);

}  // namespace blindmarket::workloads
