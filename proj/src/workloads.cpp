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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "blindmarket/errors.hpp"
#include "blindmarket/verifier.hpp"
#include "yaml_support.hpp"

namespace blindmarket::workloads {

using actors::AuditorBehaviour;
using actors::BidderBehaviour;
using actors::SolverBehaviour;
using yaml::fail;

DenominationSet Scenario::denominations() const {
  return significant_digits > 0 ? DenominationSet::significant(significant_digits) : DenominationSet::standard();
}

// ---- scenario files --------------------------------------------------------

namespace {

void check_keys(const YAML::Node& map, std::initializer_list<std::string_view> allowed) {
  if (!map.IsMap()) {
    fail(map, "expected a mapping");
  }
  for (const auto& kv : map) {
    const auto key = kv.first.as<std::string>();
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      fail(kv.first, "unknown key '" + key + "'");
    }
  }
}

template <typename T>
T get(const YAML::Node& n, const char* what) {
  try {
    return n.as<T>();
  } catch (const YAML::Exception&) {
    fail(n, std::string("expected ") + what);
  }
}

std::int64_t get_nonneg(const YAML::Node& n, const char* what) {
  const auto v = get<std::int64_t>(n, what);
  if (v < 0) {
    fail(n, std::string(what) + " must not be negative");
  }
  return v;
}

std::vector<std::int64_t> get_ints(const YAML::Node& n, const char* what) {
  if (!n.IsSequence()) {
    fail(n, std::string("expected a list of ") + what);
  }
  std::vector<std::int64_t> out;
  for (const auto& e : n) {
    out.push_back(get_nonneg(e, what));
  }
  return out;
}

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::kScenarioInvalid, what); }

constexpr std::pair<BidderBehaviour, std::string_view> kBidderNames[] = {
    {BidderBehaviour::kHonest, "honest"}, {BidderBehaviour::kCommitNoReveal, "commit-no-reveal"}};
constexpr std::pair<SolverBehaviour, std::string_view> kSolverNames[] = {{SolverBehaviour::kHonest, "honest"},
                                                                          {SolverBehaviour::kEquivocating, "equivocating"},
                                                                          {SolverBehaviour::kNonVcg, "non-vcg"},
                                                                          {SolverBehaviour::kFixed, "fixed"}};
constexpr std::pair<AuditorBehaviour, std::string_view> kAuditorNames[] = {{AuditorBehaviour::kHonest, "honest"},
                                                                            {AuditorBehaviour::kGriefing, "griefing"}};

template <typename E, std::size_t N>
E by_name(const std::pair<E, std::string_view> (&names)[N], const YAML::Node& n) {
  const auto s = get<std::string>(n, "a behaviour name");
  for (const auto& [value, name] : names) {
    if (name == s) {
      return value;
    }
  }
  fail(n, "unknown behaviour '" + s + "'");
}

template <typename E, std::size_t N>
std::string_view name_of(const std::pair<E, std::string_view> (&names)[N], E value) {
  for (const auto& [v, name] : names) {
    if (v == value) {
      return name;
    }
  }
  return "?";
}

vda::Solution parse_fixed_solution(const YAML::Node& n) {
  check_keys(n, {"assignment", "prices", "score"});
  if (!n["assignment"] || !n["prices"] || !n["score"]) {
    fail(n, "a fixed solution needs assignment, prices and score");
  }
  vda::Solution s;
  for (const auto x : get_ints(n["assignment"], "item ids")) {
    s.assignment.push_back(static_cast<ItemId>(x));
  }
  s.prices = get_ints(n["prices"], "prices");
  s.prices.insert(s.prices.begin(), 0);
  s.score = get<Money>(n["score"], "an integer score");
  return s;
}

// Semantic checks shared by parsed and generated scenarios.
void validate(const Scenario& s) {
  if (!tbs::valid_threshold(s.threshold, s.authorities)) {
    invalid("threshold " + std::to_string(s.threshold) + " of " + std::to_string(s.authorities) +
            " authorities needs a strict majority");
  }
  if (s.authorities_offline > s.authorities) {
    invalid("more authorities offline than exist");
  }
  const auto& t = s.timers;
  if (t.commit_blocks == 0 || t.reveal_blocks == 0 || t.solve_blocks == 0 || t.contest_blocks == 0) {
    invalid("timers must be positive");
  }
  if (s.gas_price.den == 0) {
    invalid("gas price denominator is zero");
  }
  const std::size_t dims = s.items.empty() ? 0 : s.items.front().characteristics.size();
  for (const auto& item : s.items) {
    if (item.characteristics.size() != dims) {
      invalid("items disagree on the number of characteristics");
    }
  }
  const auto denominations = s.denominations();
  for (std::size_t b = 0; b < s.bidders.size(); ++b) {
    const auto& spec = s.bidders[b];
    const std::string who = "bidder " + std::to_string(b + 1);
    if (!denominations.contains(spec.deposit)) {
      invalid(who + ": deposit " + std::to_string(spec.deposit) + " is not a denomination");
    }
    if (const auto* g = std::get_if<GeneralBid>(&spec.bid)) {
      if (!s.items.empty() && g->constraints.size() != dims) {
        invalid(who + ": constraint count does not match the item characteristics");
      }
    } else {
      for (const auto& [id, value] : std::get<SpecificBid>(spec.bid).valuations) {
        if (id == 0 || id > s.items.size()) {
          invalid(who + ": unknown item " + std::to_string(id));
        }
      }
    }
    if (!bid_within_deposit(spec.bid, spec.deposit)) {
      invalid(who + ": bid does not fit the deposit");
    }
  }
}

}  // namespace

Scenario parse_scenario(std::string_view text) {
  const YAML::Node root = yaml::load(text);
  if (!root || !root.IsMap()) {
    throw Error(ErrorCode::kParseError, "line 1: a scenario must be a mapping");
  }
  check_keys(root, {"format", "id", "seed", "authorities", "timers", "gas_price", "gas", "denominations", "items",
                    "bidders", "solver", "auditors"});
  if (!root["format"] || get<std::string>(root["format"], "a format string") != kScenarioFormat) {
    fail(root["format"] ? root["format"] : root, "expected format: " + std::string(kScenarioFormat));
  }
  Scenario s;
  if (root["id"]) {
    s.id = get<std::string>(root["id"], "an id string");
  }
  if (root["seed"]) {
    s.seed = get<std::uint64_t>(root["seed"], "an unsigned seed");
  }
  if (const auto a = root["authorities"]) {
    check_keys(a, {"threshold", "count", "offline"});
    if (a["threshold"]) s.threshold = get<std::uint32_t>(a["threshold"], "a threshold");
    if (a["count"]) s.authorities = get<std::uint32_t>(a["count"], "an authority count");
    if (a["offline"]) s.authorities_offline = get<std::uint32_t>(a["offline"], "an offline count");
  }
  if (const auto t = root["timers"]) {
    check_keys(t, {"commit", "reveal", "solve", "contest"});
    if (t["commit"]) s.timers.commit_blocks = get<std::uint64_t>(t["commit"], "a block count");
    if (t["reveal"]) s.timers.reveal_blocks = get<std::uint64_t>(t["reveal"], "a block count");
    if (t["solve"]) s.timers.solve_blocks = get<std::uint64_t>(t["solve"], "a block count");
    if (t["contest"]) s.timers.contest_blocks = get<std::uint64_t>(t["contest"], "a block count");
  }
  if (const auto g = root["gas_price"]) {
    check_keys(g, {"num", "den"});
    if (g["num"]) s.gas_price.num = get<std::uint64_t>(g["num"], "an unsigned numerator");
    if (g["den"]) s.gas_price.den = get<std::uint64_t>(g["den"], "an unsigned denominator");
  }
  if (const auto g = root["gas"]) {
    yaml::apply_gas_overrides(g, s.gas);
  }
  if (const auto d = root["denominations"]) {
    if (d.IsScalar() && d.as<std::string>() == "standard") {
      s.significant_digits = 0;
    } else {
      check_keys(d, {"significant"});
      s.significant_digits = get<int>(d["significant"], "a digit count");
      if (s.significant_digits < 1 || s.significant_digits > 6) {
        fail(d["significant"], "significant digits must be in [1, 6]");
      }
    }
  }
  if (const auto items = root["items"]) {
    if (!items.IsSequence()) {
      fail(items, "items must be a list");
    }
    for (const auto& n : items) {
      check_keys(n, {"seller", "characteristics", "reserve", "opens"});
      ItemSpec item;
      item.seller = n["seller"] ? get<std::string>(n["seller"], "a seller name") : "seller-" + std::to_string(s.items.size() + 1);
      if (n["characteristics"]) item.characteristics = get_ints(n["characteristics"], "characteristics");
      if (!n["reserve"]) fail(n, "item needs a reserve");
      item.reserve = get_nonneg(n["reserve"], "reserve");
      if (n["opens"]) item.opens = get<bool>(n["opens"], "true or false");
      s.items.push_back(std::move(item));
    }
  }
  const auto denominations = s.denominations();
  if (const auto bidders = root["bidders"]) {
    if (!bidders.IsSequence()) {
      fail(bidders, "bidders must be a list");
    }
    for (const auto& n : bidders) {
      check_keys(n, {"general", "specific", "deposit", "behaviour"});
      if (static_cast<bool>(n["general"]) == static_cast<bool>(n["specific"])) {
        fail(n, "a bidder needs exactly one of general or specific");
      }
      BidderSpec spec;
      Money needed = 0;
      if (const auto g = n["general"]) {
        check_keys(g, {"constraints", "budget"});
        if (!g["budget"]) fail(g, "general bid needs a budget");
        GeneralBid bid;
        if (g["constraints"]) bid.constraints = get_ints(g["constraints"], "constraints");
        bid.budget = get_nonneg(g["budget"], "budget");
        needed = bid.budget;
        spec.bid = std::move(bid);
      } else {
        const auto sp = n["specific"];
        if (!sp.IsMap()) fail(sp, "specific bid must map item ids to valuations");
        SpecificBid bid;
        for (const auto& kv : sp) {
          const auto id = get_nonneg(kv.first, "item id");
          const auto value = get_nonneg(kv.second, "valuation");
          if (!bid.valuations.emplace(static_cast<ItemId>(id), value).second) {
            fail(kv.first, "duplicate item id");
          }
          needed = std::max(needed, value);
        }
        spec.bid = std::move(bid);
      }
      if (n["deposit"]) {
        spec.deposit = get_nonneg(n["deposit"], "deposit");
      } else if (std::holds_alternative<GeneralBid>(spec.bid)) {
        spec.deposit = needed;
      } else {
        const auto values = denominations.values();
        const auto it = std::lower_bound(values.begin(), values.end(), std::max<Money>(needed, 1));
        if (it == values.end()) fail(n, "no denomination covers this bid");
        spec.deposit = *it;
      }
      if (n["behaviour"]) spec.behaviour = by_name(kBidderNames, n["behaviour"]);
      s.bidders.push_back(std::move(spec));
    }
  }
  if (const auto sv = root["solver"]) {
    check_keys(sv, {"behaviour", "solution"});
    if (sv["behaviour"]) s.solver = by_name(kSolverNames, sv["behaviour"]);
    if (sv["solution"]) s.fixed_solution = parse_fixed_solution(sv["solution"]);
    if (s.solver == SolverBehaviour::kFixed && !sv["solution"]) fail(sv, "a fixed solver needs a solution");
  }
  if (const auto au = root["auditors"]) {
    if (!au.IsSequence()) fail(au, "auditors must be a list");
    s.auditors.clear();
    for (const auto& n : au) {
      s.auditors.push_back(by_name(kAuditorNames, n));
    }
  }
  validate(s);
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kParseError, "cannot open " + path);
  }
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_scenario(ss.str());
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.message());
  }
}

std::string to_yaml(const Scenario& s) {
  YAML::Emitter out;
  out << YAML::BeginMap;
  out << YAML::Key << "format" << YAML::Value << std::string(kScenarioFormat);
  out << YAML::Key << "id" << YAML::Value << s.id;
  out << YAML::Key << "seed" << YAML::Value << s.seed;
  out << YAML::Key << "authorities" << YAML::Value << YAML::Flow << YAML::BeginMap << YAML::Key << "threshold"
      << YAML::Value << s.threshold << YAML::Key << "count" << YAML::Value << s.authorities << YAML::Key << "offline"
      << YAML::Value << s.authorities_offline << YAML::EndMap;
  out << YAML::Key << "timers" << YAML::Value << YAML::Flow << YAML::BeginMap << YAML::Key << "commit" << YAML::Value
      << s.timers.commit_blocks << YAML::Key << "reveal" << YAML::Value << s.timers.reveal_blocks << YAML::Key
      << "solve" << YAML::Value << s.timers.solve_blocks << YAML::Key << "contest" << YAML::Value
      << s.timers.contest_blocks << YAML::EndMap;
  out << YAML::Key << "gas_price" << YAML::Value << YAML::Flow << YAML::BeginMap << YAML::Key << "num"
      << YAML::Value << s.gas_price.num << YAML::Key << "den" << YAML::Value << s.gas_price.den << YAML::EndMap;
  const ledger::GasTable defaults;
  bool any_gas = false;
  for (const auto op : ledger::GasTable::operation_names()) {
    if (!(s.gas[op] == defaults[op])) {
      if (!any_gas) {
        out << YAML::Key << "gas" << YAML::Value << YAML::BeginMap;
        any_gas = true;
      }
      out << YAML::Key << std::string(op) << YAML::Value << YAML::Flow << YAML::BeginMap << YAML::Key << "base"
          << YAML::Value << s.gas[op].base << YAML::Key << "per_unit" << YAML::Value << s.gas[op].per_unit
          << YAML::EndMap;
    }
  }
  if (any_gas) {
    out << YAML::EndMap;
  }
  out << YAML::Key << "denominations" << YAML::Value;
  if (s.significant_digits > 0) {
    out << YAML::Flow << YAML::BeginMap << YAML::Key << "significant" << YAML::Value << s.significant_digits
        << YAML::EndMap;
  } else {
    out << "standard";
  }
  out << YAML::Key << "items" << YAML::Value << YAML::BeginSeq;
  for (const auto& item : s.items) {
    out << YAML::Flow << YAML::BeginMap << YAML::Key << "seller" << YAML::Value << item.seller << YAML::Key
        << "characteristics" << YAML::Value << YAML::Flow << item.characteristics << YAML::Key << "reserve"
        << YAML::Value << item.reserve;
    if (!item.opens) {
      out << YAML::Key << "opens" << YAML::Value << false;
    }
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;
  out << YAML::Key << "bidders" << YAML::Value << YAML::BeginSeq;
  for (const auto& b : s.bidders) {
    out << YAML::Flow << YAML::BeginMap;
    if (const auto* g = std::get_if<GeneralBid>(&b.bid)) {
      out << YAML::Key << "general" << YAML::Value << YAML::BeginMap << YAML::Key << "constraints" << YAML::Value
          << YAML::Flow << g->constraints << YAML::Key << "budget" << YAML::Value << g->budget << YAML::EndMap;
    } else {
      out << YAML::Key << "specific" << YAML::Value << YAML::BeginMap;
      for (const auto& [id, value] : std::get<SpecificBid>(b.bid).valuations) {
        out << YAML::Key << id << YAML::Value << value;
      }
      out << YAML::EndMap;
    }
    out << YAML::Key << "deposit" << YAML::Value << b.deposit;
    if (b.behaviour != BidderBehaviour::kHonest) {
      out << YAML::Key << "behaviour" << YAML::Value << std::string(name_of(kBidderNames, b.behaviour));
    }
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;
  out << YAML::Key << "solver" << YAML::Value << YAML::BeginMap << YAML::Key << "behaviour" << YAML::Value
      << std::string(name_of(kSolverNames, s.solver));
  if (s.solver == SolverBehaviour::kFixed) {
    const std::vector<Money> prices(s.fixed_solution.prices.begin() + 1, s.fixed_solution.prices.end());
    out << YAML::Key << "solution" << YAML::Value << YAML::Flow << YAML::BeginMap << YAML::Key << "assignment"
        << YAML::Value << s.fixed_solution.assignment << YAML::Key << "prices" << YAML::Value << prices << YAML::Key
        << "score" << YAML::Value << s.fixed_solution.score << YAML::EndMap;
  }
  out << YAML::EndMap;
  out << YAML::Key << "auditors" << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (const auto a : s.auditors) {
    out << std::string(name_of(kAuditorNames, a));
  }
  out << YAML::EndSeq;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

// ---- workload generation ---------------------------------------------------

double PriceModel::discount(std::int64_t months) const {
  return std::max(min_discount, 1.0 - discount_per_month * static_cast<double>(months - 1));
}

Money round_significant(double amount, int digits) {
  if (amount < 1.0) {
    return 1;
  }
  const int magnitude = static_cast<int>(std::floor(std::log10(amount)));
  Money scale = 1;
  for (int k = 0; k < magnitude - digits + 1; ++k) {
    scale *= 10;
  }
  return std::max<Money>(1, std::llround(amount / static_cast<double>(scale)) * scale);
}

namespace {

// Independent stream per (seed, role, index) so populations nest.
Rng stream(std::uint64_t seed, std::uint64_t role, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(role), static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  std::array<std::uint32_t, 2> out{};
  seq.generate(out.begin(), out.end());
  return Rng((static_cast<std::uint64_t>(out[0]) << 32) | out[1]);
}

}  // namespace

Scenario generate_filecoin_workload(std::uint64_t seed, std::size_t n_items, std::size_t n_bidders,
                                    const PriceModel& model) {
  Scenario s;
  s.id = "filecoin-s" + std::to_string(seed) + "-b" + std::to_string(n_bidders) + "-i" + std::to_string(n_items);
  s.seed = seed;
  s.significant_digits = model.significant_digits;
  const auto pick_size = [&](Rng& r) {
    return model.sizes_gb[static_cast<std::size_t>(r.uniform(0, static_cast<std::int64_t>(model.sizes_gb.size()) - 1))];
  };
  for (std::size_t k = 0; k < n_items; ++k) {
    Rng r = stream(seed, 1, k);
    const std::int64_t gb = pick_size(r);
    const std::int64_t months = r.uniform(1, model.max_months);
    const double ask = r.uniform_real(model.ask_low, model.ask_high) * model.reference_per_gb_month;
    const double reserve = ask * static_cast<double>(gb * months) * model.discount(months);
    s.items.push_back(ItemSpec{"miner-" + std::to_string(k + 1), {gb, months}, std::llround(reserve), true});
  }
  for (std::size_t k = 0; k < n_bidders; ++k) {
    Rng r = stream(seed, 2, k);
    const std::int64_t gb = pick_size(r);
    const std::int64_t months = r.uniform(1, model.max_months);
    const double noise = r.uniform_real(1.0 - model.budget_noise, 1.0 + model.budget_noise);
    const double budget =
        model.reference_per_gb_month * static_cast<double>(gb * months) * model.discount(months) * noise;
    const Money b = round_significant(budget, model.significant_digits);
    s.bidders.push_back(BidderSpec{GeneralBid{{gb, months}, b}, b, BidderBehaviour::kHonest});
  }
  validate(s);
  return s;
}

// ---- metrics ---------------------------------------------------------------

MarketMetrics market_metrics(const vda::Solution& sol, const ValuationMatrix& v, std::span<const Item> items) {
  MarketMetrics m;
  const std::size_t n = items.size();
  std::vector<Money> holder_value(n + 1, -1);
  Money net = 0;
  std::size_t winners = 0;
  for (std::size_t b = 0; b < sol.assignment.size(); ++b) {
    const ItemId x = sol.assignment[b];
    if (x != 0) {
      holder_value[x] = v.at(b, x);
      net += v.at(b, x) - sol.prices[x];
      ++winners;
    }
  }
  if (n == 0) {
    return m;
  }
  double price = 0;
  double reserve = 0;
  double value = 0;
  for (ItemId i = 1; i <= n; ++i) {
    const Money r = items[i - 1].reservation_price;
    price += static_cast<double>(sol.prices[i]);
    reserve += static_cast<double>(r);
    value += static_cast<double>(holder_value[i] >= 0 ? holder_value[i] : r);
  }
  const auto dn = static_cast<double>(n);
  m.avg_price = price / dn;
  m.avg_reservation = reserve / dn;
  m.avg_valuation = value / dn;
  m.avg_net_valuation = winners == 0 ? 0.0 : static_cast<double>(net) / static_cast<double>(winners);
  m.sold = winners;
  return m;
}

std::uint64_t honest_protocol_gas(std::size_t bidders, std::size_t items, std::size_t withdrawals,
                                  const ledger::GasTable& gas) {
  return gas.deployment.at(0) + items * (gas.submit_item.at(0) + gas.reveal_min_price.at(0)) +
         bidders * (gas.commit.at(0) + gas.reveal.at(0)) + gas.submit_solution.at(items) +
         withdrawals * gas.withdraw.at(0);
}

// ---- full runs -------------------------------------------------------------

Market prepare_scenario(const Scenario& s) {
  validate(s);
  Rng rng(s.seed);
  std::set<Money> used;
  for (const auto& b : s.bidders) {
    used.insert(b.deposit);
  }
  const std::vector<Money> denominations(used.begin(), used.end());
  auto authorities = actors::AuthoritySet::generate(s.threshold, s.authorities, denominations, rng);
  for (std::uint32_t i = 0; i < s.authorities_offline; ++i) {
    authorities.members[i].set_online(false);
  }

  ByteWriter idw;
  idw.raw(as_bytes("blindmarket/auction/v1"));
  idw.raw(as_bytes(s.id));
  idw.u64(s.seed);
  const Digest idh = sha256(idw.bytes());
  ledger::AuctionId auction{};
  std::copy_n(idh.begin(), auction.size(), auction.begin());

  ledger::Policy policy;
  policy.t = s.threshold;
  policy.n = s.authorities;
  policy.timers = s.timers;
  policy.denominations = s.denominations();
  policy.gas = s.gas;
  policy.gas_price = s.gas_price;
  const auto deployer = actors::Identity::generate(rng).address();
  ledger::Ledger ledger(auction, authorities.verify_keys, policy, deployer,
                        {{deployer, s.gas_price.fee(s.gas.deployment.at(0))}});

  // Sellers in order of first appearance; their offers are submitted in that
  // order, so specific bids are renumbered to submission ids.
  std::vector<std::string> seller_names;
  std::vector<std::vector<actors::Offer>> offers;
  std::vector<ItemId> submission_id(s.items.size() + 1, 0);
  std::vector<std::vector<std::size_t>> seller_items;
  for (std::size_t k = 0; k < s.items.size(); ++k) {
    const auto& item = s.items[k];
    auto it = std::find(seller_names.begin(), seller_names.end(), item.seller);
    if (it == seller_names.end()) {
      seller_names.push_back(item.seller);
      offers.emplace_back();
      seller_items.emplace_back();
      it = seller_names.end() - 1;
    }
    const auto idx = static_cast<std::size_t>(it - seller_names.begin());
    offers[idx].push_back(actors::Offer{item.characteristics, item.reserve, item.opens});
    seller_items[idx].push_back(k + 1);
  }
  {
    ItemId next = 1;
    for (const auto& list : seller_items) {
      for (const auto k : list) {
        submission_id[k] = next++;
      }
    }
  }
  std::vector<actors::SellerAgent> sellers;
  for (auto& o : offers) {
    sellers.emplace_back(std::move(o), rng);
  }
  std::vector<actors::BidderAgent> bidders;
  for (const auto& spec : s.bidders) {
    Bid bid = spec.bid;
    if (auto* sp = std::get_if<SpecificBid>(&bid)) {
      SpecificBid renumbered;
      for (const auto& [id, value] : sp->valuations) {
        renumbered.valuations.emplace(submission_id[id], value);
      }
      bid = std::move(renumbered);
    }
    bidders.emplace_back(std::move(bid), spec.deposit, rng, spec.behaviour);
  }
  actors::SolverAgent solver{actors::Identity::generate(rng).address(), s.solver, s.fixed_solution};
  std::vector<actors::AuditorAgent> auditors;
  for (const auto behaviour : s.auditors) {
    auditors.push_back(actors::AuditorAgent{actors::Identity::generate(rng).address(), behaviour});
  }

  Market m{std::move(ledger), std::move(authorities), deployer, std::move(sellers), std::move(bidders),
           std::move(solver), std::move(auditors), {}};
  m.preparation = actors::run_preparation(m.ledger, m.authorities, m.sellers, m.bidders);
  return m;
}

Report run_scenario(const Scenario& s) {
  Market m = prepare_scenario(s);
  auto& [ledger, authorities, deployer, sellers, bidders, solver, auditors, preparation] = m;
  Report rep;
  rep.scenario_id = s.id;
  rep.seed = s.seed;
  rep.preparation = preparation;
  rep.execution = actors::run_execution(ledger, solver, auditors);
  rep.items.assign(ledger.auction_items().begin(), ledger.auction_items().end());
  rep.valuations = ledger.valuations();
  const vda::Solution unsold{vda::Assignment(rep.valuations.bidders(), 0), vda::reservation_prices(rep.items), 0};
  rep.metrics = market_metrics(rep.execution.final_solution.value_or(unsold), rep.valuations, rep.items);

  for (std::size_t b = 0; b < bidders.size(); ++b) {
    const bool revealed = std::any_of(ledger.revealed_bids().begin(), ledger.revealed_bids().end(),
                                      [&](const auto& r) { return r.addr == bidders[b].fresh_address(); });
    Money amount = 0;
    const auto r = ledger.withdraw(revealed ? bidders[b].fresh_address() : bidders[b].wallet(), &amount);
    rep.withdrawals.push_back(Withdrawal{"bidder", b + 1, r.status, r.ok() ? amount : 0});
  }
  for (std::size_t k = 0; k < sellers.size(); ++k) {
    Money amount = 0;
    const auto r = ledger.withdraw(sellers[k].wallet(), &amount);
    rep.withdrawals.push_back(Withdrawal{"seller", k + 1, r.status, r.ok() ? amount : 0});
  }

  rep.gas_by_role["deployer"] = ledger.gas_used(deployer);
  for (const auto& sl : sellers) {
    rep.gas_by_role["sellers"] += ledger.gas_used(sl.wallet());
  }
  for (const auto& b : bidders) {
    rep.gas_by_role["bidders"] += ledger.gas_used(b.wallet()) + ledger.gas_used(b.fresh_address());
  }
  rep.gas_by_role["solver"] = ledger.gas_used(solver.wallet);
  for (const auto& a : auditors) {
    rep.gas_by_role["auditors"] += ledger.gas_used(a.wallet);
  }
  rep.gas_by_operation = ledger.gas_by_operation();
  rep.gas_total = ledger.total_gas();
  rep.conserved = ledger.conserved_at_every_block();
  rep.state_digest = to_hex(ledger.state_digest());
  rep.events_ndjson = ledger.events_ndjson();
  return rep;
}

std::string report_json(const Report& r) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["format"] = kReportFormat;
  j["scenario"] = r.scenario_id;
  j["seed"] = r.seed;
  j["bidders"] = r.valuations.bidders();
  j["items"] = r.items.size();
  j["preparation"] = {{"items_submitted", r.preparation.items_submitted},
                      {"items_opened", r.preparation.items_opened},
                      {"commits", r.preparation.commits},
                      {"credentials", r.preparation.credentials},
                      {"reveals", r.preparation.reveals}};
  j["execution"] = {{"submissions", r.execution.submissions},
                    {"proofs_accepted", r.execution.proofs_accepted},
                    {"proofs_rejected", r.execution.proofs_rejected}};
  if (r.execution.final_solution) {
    const auto& f = *r.execution.final_solution;
    j["final"] = {{"assignment", f.assignment},
                  {"prices", std::vector<Money>(f.prices.begin() + 1, f.prices.end())},
                  {"score", f.score}};
  } else {
    j["final"] = nullptr;
  }
  j["metrics"] = {{"avg_price", r.metrics.avg_price},
                  {"avg_net_valuation", r.metrics.avg_net_valuation},
                  {"sold", r.metrics.sold}};
  // What the same assignment would cost under bilateral deals.
  j["baselines"] = {{"reservation", r.metrics.avg_reservation},
                    {"midpoint", (r.metrics.avg_reservation + r.metrics.avg_valuation) / 2},
                    {"valuation", r.metrics.avg_valuation}};
  ordered_json w = ordered_json::array();
  for (const auto& x : r.withdrawals) {
    w.push_back({{"role", x.role}, {"index", x.index}, {"status", ledger::to_string(x.status)}, {"amount", x.amount}});
  }
  j["withdrawals"] = w;
  ordered_json ops = ordered_json::object();
  for (const auto& [op, g] : r.gas_by_operation) {
    ops[op] = {{"calls", g.calls}, {"gas", g.gas}, {"fee", g.fee}};
  }
  j["gas"] = {{"by_operation", ops}, {"by_role", r.gas_by_role}, {"total", r.gas_total}};
  j["conserved"] = r.conserved;
  j["state_digest"] = r.state_digest;
  return j.dump(2) + "\n";
}

// ---- benchmarks ------------------------------------------------------------

BenchRow bench_market(const Scenario& s) {
  using Clock = std::chrono::steady_clock;
  std::vector<Item> items;
  for (std::size_t k = 0; k < s.items.size(); ++k) {
    items.push_back(Item{static_cast<ItemId>(k + 1), s.items[k].characteristics, s.items[k].reserve, {}});
  }
  std::vector<Bid> bids;
  for (const auto& b : s.bidders) {
    bids.push_back(b.bid);
  }
  const auto v = verifier::rebuild_valuations(bids, items);

  const auto t0 = Clock::now();
  const auto sol = verifier::best_response(std::nullopt, v, items);
  const auto t1 = Clock::now();
  const bool clean = !verifier::audit(sol, v, items).has_value() && verifier::check_vcg(sol, v, items);
  const auto t2 = Clock::now();
  if (!clean) {
    throw std::logic_error("solver output failed its own audit");
  }

  std::set<std::string> paid_sellers;
  for (const ItemId x : sol.assignment) {
    if (x != 0) {
      paid_sellers.insert(s.items[x - 1].seller);
    }
  }
  const auto m = market_metrics(sol, v, items);
  BenchRow row;
  row.scenario_id = s.id;
  row.bidders = s.bidders.size();
  row.items = s.items.size();
  row.avg_price = m.avg_price;
  row.avg_net_valuation = m.avg_net_valuation;
  row.solve_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  row.audit_ms = std::chrono::duration<double, std::milli>(t2 - t1).count();
  row.gas_total = honest_protocol_gas(row.bidders, row.items, row.bidders + paid_sellers.size(), s.gas);
  row.metrics = m;
  return row;
}

std::string csv_header() { return "scenario_id,B,I,avg_price,avg_net_valuation,solve_ms,audit_ms,gas_total"; }

std::string to_csv(const BenchRow& r) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%zu,%zu,%.3f,%.3f,%.3f,%.3f,%llu", r.bidders, r.items, r.avg_price,
                r.avg_net_valuation, r.solve_ms, r.audit_ms, static_cast<unsigned long long>(r.gas_total));
  return r.scenario_id + "," + buf;
}

// ---- gas report ------------------------------------------------------------

std::vector<GasReportRow> gas_report(const ledger::Ledger& ledger, double usd_per_gas) {
  return gas_report(ledger.gas_by_operation(), usd_per_gas);
}

std::vector<GasReportRow> gas_report(const std::map<std::string, ledger::OperationGas>& used, double usd_per_gas) {
  std::vector<GasReportRow> rows;
  for (const auto op : ledger::GasTable::operation_names()) {
    GasReportRow row{std::string(op)};
    if (const auto it = used.find(row.operation); it != used.end()) {
      row.calls = it->second.calls;
      row.gas = it->second.gas;
      row.fee = it->second.fee;
    }
    row.usd = static_cast<double>(row.gas) * usd_per_gas;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string format_gas_report(std::span<const GasReportRow> rows) {
  std::ostringstream out;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-16s %8s %14s %12s %12s\n", "operation", "calls", "gas", "fee", "usd*");
  out << buf;
  GasReportRow total{"total"};
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%-16s %8llu %14llu %12lld %12.4f\n", r.operation.c_str(),
                  static_cast<unsigned long long>(r.calls), static_cast<unsigned long long>(r.gas),
                  static_cast<long long>(r.fee), r.usd);
    out << buf;
    total.calls += r.calls;
    total.gas += r.gas;
    total.fee += r.fee;
    total.usd += r.usd;
  }
  std::snprintf(buf, sizeof buf, "%-16s %8llu %14llu %12lld %12.4f\n", "total", static_cast<unsigned long long>(total.calls),
                static_cast<unsigned long long>(total.gas), static_cast<long long>(total.fee), total.usd);
  out << buf << "* illustrative rate: " << kIllustrativeUsdPerGas * 1e9 << " USD per 10^9 gas\n";
  return out.str();
}

// ---- solutions -------------------------------------------------------------

std::string solution_json(const vda::Solution& s) {
  nlohmann::ordered_json j;
  j["assignment"] = s.assignment;
  j["prices"] = std::vector<Money>(s.prices.begin() + (s.prices.empty() ? 0 : 1), s.prices.end());
  j["score"] = s.score;
  return j.dump() + "\n";
}

vda::Solution parse_solution_json(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text);
    vda::Solution s;
    s.assignment = j.at("assignment").get<vda::Assignment>();
    s.prices = j.at("prices").get<std::vector<Money>>();
    s.prices.insert(s.prices.begin(), 0);
    s.score = j.at("score").get<Money>();
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("solution: ") + e.what());
  }
}

}  // namespace blindmarket::workloads
