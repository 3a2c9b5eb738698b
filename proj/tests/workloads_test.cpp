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

#include "blindmarket/workloads.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <optional>

#include "blindmarket/errors.hpp"

namespace blindmarket::workloads {
namespace {

using ledger::Status;

std::string fixture(const std::string& name) { return std::string(BLINDMARKET_FIXTURES) + "/" + name; }

std::optional<ErrorCode> code_of(std::string_view yaml) {
  try {
    parse_scenario(yaml);
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

std::string message_of(std::string_view yaml) {
  try {
    parse_scenario(yaml);
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

TEST(ScenarioFile, IntroRunsToVcgOutcome) {
  const auto s = load_scenario(fixture("intro.yaml"));
  ASSERT_EQ(s.items.size(), 3U);
  ASSERT_EQ(s.bidders.size(), 5U);
  EXPECT_EQ(s.bidders[4].deposit, 30);  // smallest denomination covering the bid
  const auto r = run_scenario(s);
  EXPECT_EQ(r.preparation.reveals, 5U);
  ASSERT_TRUE(r.execution.final_solution.has_value());
  const auto& f = *r.execution.final_solution;
  EXPECT_EQ(f.assignment, (vda::Assignment{3, 2, 1, 0, 0}));
  EXPECT_EQ(f.prices, (vda::PriceVector{0, 30, 15, 30}));
  EXPECT_EQ(f.prices, vda::vcg_oracle(r.valuations, vda::reservation_prices(r.items)).prices);
  EXPECT_TRUE(r.conserved);
  ASSERT_EQ(r.withdrawals.size(), 5U + 3U);
  const Money refunds[] = {40 - 30, 25 - 15, 35 - 30, 30, 30};
  for (std::size_t b = 0; b < 5; ++b) {
    EXPECT_EQ(r.withdrawals[b].amount, refunds[b]) << b;
  }
  EXPECT_EQ(r.withdrawals[5].amount, 30);
  EXPECT_EQ(r.withdrawals[6].amount, 15);
  EXPECT_EQ(r.withdrawals[7].amount, 30);
}

TEST(ScenarioFile, ProofsFixtureIsChallenged) {
  const auto r = run_scenario(load_scenario(fixture("proofs.yaml")));
  EXPECT_EQ(r.execution.proofs_accepted, 1U);
  EXPECT_EQ(r.execution.submissions, 2U);
  ASSERT_TRUE(r.execution.final_solution.has_value());
  EXPECT_EQ(r.execution.final_solution->score, vda::run_vda(r.valuations, r.items).score);
  EXPECT_NE(r.events_ndjson.find("WrongPrice(item 3)"), std::string::npos) << r.events_ndjson;
  EXPECT_TRUE(r.conserved);
}

TEST(ScenarioFile, LifecycleFixture) {
  const auto r = run_scenario(load_scenario(fixture("lifecycle.yaml")));
  EXPECT_EQ(r.preparation.commits, 5U);
  EXPECT_EQ(r.preparation.reveals, 4U);
  EXPECT_EQ(r.items.size(), 3U);  // the unopened item is out
  EXPECT_EQ(r.execution.proofs_accepted, 1U);
  EXPECT_EQ(r.execution.proofs_rejected, 1U);
  EXPECT_EQ(r.withdrawals[3].status, Status::kNothingToWithdraw);
  EXPECT_TRUE(r.conserved);
  ASSERT_TRUE(r.execution.final_solution.has_value());
  const auto& f = *r.execution.final_solution;
  EXPECT_EQ(f, vda::run_vda(r.valuations, r.items));
}

TEST(ScenarioFile, ParseErrorsCarryLineNumbers) {
  const std::string head = "format: blindmarket-scenario/1\n";
  EXPECT_NE(message_of(head + "items:\n  - {reserve: 1}\n  - {reserve: [}\n").find("line 4"), std::string::npos);
  EXPECT_NE(message_of(head + "seed: 1\ncolour: red\n").find("line 3"), std::string::npos);
  EXPECT_NE(message_of(head + "items:\n  - {reserve: -1}\n").find("line 3"), std::string::npos);
  EXPECT_NE(message_of(head + "gas:\n  commit: x\n").find("line 3"), std::string::npos);
  EXPECT_EQ(code_of("format: other/1\n"), ErrorCode::kParseError);
  EXPECT_EQ(code_of(head + "bidders:\n  - {deposit: 5}\n"), ErrorCode::kParseError);
  EXPECT_EQ(code_of(head + "solver: {behaviour: sneaky}\n"), ErrorCode::kParseError);
}

TEST(ScenarioFile, InvalidContent) {
  const std::string head = "format: blindmarket-scenario/1\nitems:\n  - {characteristics: [1], reserve: 1}\n";
  EXPECT_EQ(code_of(head + "bidders:\n  - {specific: {1: 5}, deposit: 7}\n"), ErrorCode::kScenarioInvalid);
  EXPECT_EQ(code_of(head + "bidders:\n  - {specific: {2: 5}}\n"), ErrorCode::kScenarioInvalid);
  EXPECT_EQ(code_of(head + "bidders:\n  - general: {constraints: [1, 1], budget: 5}\n"), ErrorCode::kScenarioInvalid);
  EXPECT_EQ(code_of(head + "authorities: {threshold: 2, count: 4}\n"), ErrorCode::kScenarioInvalid);
  EXPECT_EQ(code_of(head + "bidders:\n  - {specific: {1: 5}}\n"), std::nullopt);
}

TEST(ScenarioFile, YamlRoundTrip) {
  for (const auto* name : {"intro.yaml", "proofs.yaml", "lifecycle.yaml"}) {
    const auto s = load_scenario(fixture(name));
    const std::string once = to_yaml(s);
    EXPECT_EQ(to_yaml(parse_scenario(once)), once) << name;
  }
  const auto g = generate_filecoin_workload(4, 5, 9);
  EXPECT_EQ(to_yaml(parse_scenario(to_yaml(g))), to_yaml(g));
}

TEST(Generator, DeterministicAndNested) {
  EXPECT_EQ(to_yaml(generate_filecoin_workload(5, 10, 40)), to_yaml(generate_filecoin_workload(5, 10, 40)));
  EXPECT_NE(to_yaml(generate_filecoin_workload(5, 10, 40)), to_yaml(generate_filecoin_workload(6, 10, 40)));
  const auto small = generate_filecoin_workload(5, 4, 10);
  const auto large = generate_filecoin_workload(5, 8, 30);
  for (std::size_t k = 0; k < 10; ++k) {
    EXPECT_EQ(small.bidders[k].bid, large.bidders[k].bid);
  }
  for (std::size_t k = 0; k < 4; ++k) {
    EXPECT_EQ(small.items[k].characteristics, large.items[k].characteristics);
    EXPECT_EQ(small.items[k].reserve, large.items[k].reserve);
  }
  const auto denominations = large.denominations();
  for (const auto& b : large.bidders) {
    EXPECT_TRUE(denominations.contains(b.deposit));
    EXPECT_EQ(std::get<GeneralBid>(b.bid).budget, b.deposit);
    EXPECT_EQ(std::get<GeneralBid>(b.bid).constraints.size(), 2U);
  }
}

TEST(Generator, LongerCommitmentsPayLessPerMonth) {
  const PriceModel m;
  for (std::int64_t months = 1; months < 40; ++months) {
    EXPECT_GE(m.discount(months), m.discount(months + 1));
  }
  EXPECT_LT(m.discount(12), m.discount(1));
}

TEST(Generator, NoItemsMeansFullRefunds) {
  const auto r = run_scenario(generate_filecoin_workload(7, 0, 3));
  EXPECT_EQ(r.preparation.reveals, 3U);
  ASSERT_TRUE(r.execution.final_solution.has_value());
  for (std::size_t b = 0; b < 3; ++b) {
    EXPECT_EQ(r.execution.final_solution->assignment[b], 0U);
    EXPECT_TRUE(r.withdrawals[b].status == Status::kOk);
  }
  const auto s = generate_filecoin_workload(7, 0, 3);
  for (std::size_t b = 0; b < 3; ++b) {
    EXPECT_EQ(r.withdrawals[b].amount, s.bidders[b].deposit);
  }
}

TEST(Generator, PricesRiseTowardsValuations) {
  double last = 0;
  for (const std::size_t b : {5, 10, 20, 40, 80, 160, 320}) {
    const auto row = bench_market(generate_filecoin_workload(3, 10, b));
    EXPECT_GE(row.avg_price, last) << b;
    last = row.avg_price;
  }
  const auto s = generate_filecoin_workload(3, 10, 320);
  std::vector<Item> items;
  for (std::size_t k = 0; k < s.items.size(); ++k) {
    items.push_back(Item{static_cast<ItemId>(k + 1), s.items[k].characteristics, s.items[k].reserve, {}});
  }
  ValuationMatrix v(0, items.size());
  for (const auto& b : s.bidders) {
    v.add_row(derive_valuations(std::get<GeneralBid>(b.bid), items));
  }
  const auto m = market_metrics(vda::run_vda(v, items), v, items);
  EXPECT_GE(m.avg_price, 0.9 * m.avg_valuation);
  EXPECT_LE(m.avg_price, m.avg_valuation);
  EXPECT_GE(m.avg_price, m.avg_reservation);
}

TEST(RoundSignificant, Cases) {
  EXPECT_EQ(round_significant(0.2, 2), 1);
  EXPECT_EQ(round_significant(7.4, 2), 7);
  EXPECT_EQ(round_significant(1234.0, 2), 1200);
  EXPECT_EQ(round_significant(1250.0, 2), 1300);
  EXPECT_EQ(round_significant(99.6, 2), 100);
  EXPECT_EQ(round_significant(987654.0, 3), 988000);
}

TEST(Metrics, HandComputed) {
  ValuationMatrix v;
  v.add_row(std::vector<Money>{0, 10, 0});
  v.add_row(std::vector<Money>{0, 8, 0});
  const std::vector<Item> items{Item{1, {}, 2, {}}, Item{2, {}, 4, {}}};
  const auto m = market_metrics(vda::Solution{{1, 0}, {0, 8, 4}, 2}, v, items);
  EXPECT_DOUBLE_EQ(m.avg_price, 6.0);
  EXPECT_DOUBLE_EQ(m.avg_reservation, 3.0);
  EXPECT_DOUBLE_EQ(m.avg_valuation, 7.0);
  EXPECT_DOUBLE_EQ(m.avg_net_valuation, 2.0);
  EXPECT_EQ(m.sold, 1U);
}

TEST(Gas, HonestFormulaMatchesLedger) {
  const auto s = generate_filecoin_workload(8, 3, 4);
  const auto r = run_scenario(s);
  ASSERT_EQ(r.preparation.reveals, 4U);
  ASSERT_EQ(r.execution.submissions, 1U);
  EXPECT_EQ(r.gas_total, bench_market(s).gas_total);
  EXPECT_EQ(r.gas_by_operation.at("commit").gas, 4U * 26'590);
  EXPECT_EQ(r.gas_by_operation.at("reveal").gas, 4U * 364'456);
  EXPECT_EQ(r.gas_by_operation.at("submitSolution").gas, 5'068U + 408U * 3);
  EXPECT_EQ(r.gas_by_operation.at("commit").fee, 4 * s.gas_price.fee(26'590));
}

TEST(Gas, ReportOnFreshLedger) {
  const ledger::Address deployer{};
  const ledger::Ledger l(ledger::AuctionId{}, {}, ledger::Policy{}, deployer, {{deployer, 10'000'000}});
  const auto rows = gas_report(l);
  ASSERT_EQ(rows.size(), ledger::GasTable::operation_names().size());
  for (const auto& row : rows) {
    EXPECT_EQ(row.gas, row.operation == "deployment" ? ledger::GasTable{}.deployment.base : 0U) << row.operation;
  }
  EXPECT_NE(format_gas_report(rows).find("total"), std::string::npos);
}

TEST(Reports, StableAcrossRuns) {
  const auto s = load_scenario(fixture("intro.yaml"));
  EXPECT_EQ(report_json(run_scenario(s)), report_json(run_scenario(s)));
  EXPECT_EQ(csv_header(), "scenario_id,B,I,avg_price,avg_net_valuation,solve_ms,audit_ms,gas_total");
  const std::string row = to_csv(bench_market(generate_filecoin_workload(1, 5, 20)));
  EXPECT_EQ(std::count(row.begin(), row.end(), ','), 7);
  EXPECT_EQ(row.rfind("filecoin-s1-b20-i5,20,5,", 0), 0U);
}

TEST(Solutions, JsonRoundTrip) {
  const vda::Solution s{{1, 0, 2}, {0, 5, 7}, 12};
  EXPECT_EQ(parse_solution_json(solution_json(s)), s);
  EXPECT_THROW(parse_solution_json("{\"assignment\": [1]}"), Error);
  EXPECT_THROW(parse_solution_json("not json"), Error);
}

}  // namespace
}  // namespace blindmarket::workloads
