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

#include "blindmarket/ledger.hpp"

#include <algorithm>
#include <fstream>
#include <json.hpp>
#include <numeric>
#include <sstream>
#include <utility>

#include "blindmarket/errors.hpp"
#include "yaml_support.hpp"

namespace blindmarket::ledger {

std::string_view to_string(Phase p) {
  switch (p) {
    case Phase::kSetup:
      return "SETUP";
    case Phase::kCommit:
      return "COMMIT";
    case Phase::kReveal:
      return "REVEAL";
    case Phase::kSolve:
      return "SOLVE";
    case Phase::kContest:
      return "CONTEST";
    case Phase::kFinal:
      return "FINAL";
  }
  return "?";
}

std::string_view to_string(Status s) {
  switch (s) {
    case Status::kOk:
      return "Ok";
    case Status::kPhaseClosed:
      return "PhaseClosed";
    case Status::kTimerExpired:
      return "TimerExpired";
    case Status::kBadDenomination:
      return "BadDenomination";
    case Status::kInsufficientFunds:
      return "InsufficientFunds";
    case Status::kWrongSender:
      return "WrongSender";
    case Status::kWrongAuction:
      return "WrongAuction";
    case Status::kDoubleSpend:
      return "DoubleSpend";
    case Status::kBadSignature:
      return "BadSignature";
    case Status::kMalformedBid:
      return "MalformedBid";
    case Status::kBadOpening:
      return "BadOpening";
    case Status::kUnknownItem:
      return "UnknownItem";
    case Status::kAlreadyOpened:
      return "AlreadyOpened";
    case Status::kInsufficientCollateral:
      return "InsufficientCollateral";
    case Status::kScoreNotHigher:
      return "ScoreNotHigher";
    case Status::kInvalidSolution:
      return "InvalidSolution";
    case Status::kNoCandidate:
      return "NoCandidate";
    case Status::kInvalidIndices:
      return "InvalidIndices";
    case Status::kNotBetter:
      return "NotBetter";
    case Status::kPriceValid:
      return "PriceValid";
    case Status::kScoreCorrect:
      return "ScoreCorrect";
    case Status::kNothingToWithdraw:
      return "NothingToWithdraw";
    case Status::kNotFinal:
      return "NotFinal";
  }
  return "?";
}

// ---- gas -------------------------------------------------------------------

namespace {

constexpr std::array<std::string_view, 10> kOperationNames = {
    "deployment", "submitItem",      "commit",      "reveal",    "revealMinPrice",
    "submitSolution", "wrongAssignment", "wrongScore", "wrongPrice", "withdraw",
};

template <typename Table>
auto& lookup(Table& t, std::string_view op) {
  if (op == "deployment") return t.deployment;
  if (op == "submitItem") return t.submit_item;
  if (op == "commit") return t.commit;
  if (op == "reveal") return t.reveal;
  if (op == "revealMinPrice") return t.reveal_min_price;
  if (op == "submitSolution") return t.submit_solution;
  if (op == "wrongAssignment") return t.wrong_assignment;
  if (op == "wrongScore") return t.wrong_score;
  if (op == "wrongPrice") return t.wrong_price;
  if (op == "withdraw") return t.withdraw;
  throw Error(ErrorCode::kParseError, "unknown gas operation '" + std::string(op) + "'");
}

std::uint64_t read_gas(const YAML::Node& n) {
  std::int64_t v = 0;
  try {
    v = n.as<std::int64_t>();
  } catch (const YAML::Exception&) {
    yaml::fail(n, "expected an integer gas amount");
  }
  if (v < 0) {
    throw Error(ErrorCode::kInvalidPolicy, "line " + std::to_string(n.Mark().line + 1) + ": negative gas cost");
  }
  return static_cast<std::uint64_t>(v);
}

}  // namespace

std::span<const std::string_view> GasTable::operation_names() { return kOperationNames; }

const GasCost& GasTable::operator[](std::string_view op) const { return lookup(*this, op); }
GasCost& GasTable::operator[](std::string_view op) { return lookup(*this, op); }

}  // namespace blindmarket::ledger

namespace blindmarket::yaml {

using ledger::kOperationNames;
using ledger::read_gas;

void apply_gas_overrides(const YAML::Node& map, ledger::GasTable& table) {
  if (!map.IsMap()) {
    fail(map, "gas table must be a mapping");
  }
  for (const auto& kv : map) {
    const auto key = kv.first.as<std::string>();
    if (key == "format") {
      continue;
    }
    if (std::find(kOperationNames.begin(), kOperationNames.end(), key) == kOperationNames.end()) {
      fail(kv.first, "unknown operation '" + key + "'");
    }
    ledger::GasCost& cost = table[key];
    if (kv.second.IsScalar()) {
      cost = ledger::GasCost{read_gas(kv.second), 0};
    } else if (kv.second.IsMap()) {
      cost = ledger::GasCost{0, 0};
      for (const auto& field : kv.second) {
        const auto name = field.first.as<std::string>();
        if (name == "base") {
          cost.base = read_gas(field.second);
        } else if (name == "per_unit") {
          cost.per_unit = read_gas(field.second);
        } else {
          fail(field.first, "unknown field '" + name + "'");
        }
      }
    } else {
      fail(kv.second, "expected a gas amount or {base, per_unit}");
    }
  }
}

}  // namespace blindmarket::yaml

namespace blindmarket::ledger {

GasTable GasTable::from_yaml(std::string_view text) {
  const YAML::Node root = yaml::load(text);
  GasTable table;
  if (!root || root.IsNull()) {
    return table;
  }
  if (root.IsMap() && root["format"] && root["format"].as<std::string>() != "blindmarket-gas/1") {
    yaml::fail(root["format"], "unsupported gas table format");
  }
  yaml::apply_gas_overrides(root, table);
  return table;
}

GasTable GasTable::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kParseError, "cannot open " + path);
  }
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return from_yaml(ss.str());
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.message());
  }
}

std::string GasTable::to_yaml() const {
  std::ostringstream out;
  out << "format: blindmarket-gas/1\n";
  for (const auto op : kOperationNames) {
    const GasCost& c = (*this)[op];
    out << op << ": {base: " << c.base << ", per_unit: " << c.per_unit << "}\n";
  }
  return out.str();
}

Money GasPrice::fee(std::uint64_t gas) const {
  __extension__ using Wide = unsigned __int128;
  if (num == 0) {
    return 0;
  }
  const auto wide = static_cast<Wide>(gas) * num;
  return static_cast<Money>((wide + den - 1) / den);
}

Money min_collateral(std::size_t bidders, std::size_t items, const GasTable& gas, GasPrice price) {
  (void)items;
  const std::uint64_t worst =
      std::max({gas.wrong_assignment.at(0), gas.wrong_price.at(0), gas.wrong_score.at(bidders)});
  return price.fee(worst) + 1;
}

// ---- wire formats ----------------------------------------------------------

namespace {

constexpr std::uint8_t kGeneralTag = 0x01;
constexpr std::uint8_t kSpecificTag = 0x02;

}  // namespace

Bytes encode_payload(const BidPayload& p) {
  ByteWriter w;
  if (const auto* g = std::get_if<GeneralBid>(&p.bid)) {
    w.u8(kGeneralTag);
    w.u64(static_cast<std::uint64_t>(p.deposit));
    w.u32(static_cast<std::uint32_t>(g->constraints.size()));
    for (const auto f : g->constraints) {
      w.u64(static_cast<std::uint64_t>(f));
    }
    w.u64(static_cast<std::uint64_t>(g->budget));
  } else {
    const auto& s = std::get<SpecificBid>(p.bid);
    w.u8(kSpecificTag);
    w.u64(static_cast<std::uint64_t>(p.deposit));
    w.u32(static_cast<std::uint32_t>(s.valuations.size()));
    for (const auto& [id, value] : s.valuations) {
      w.u32(id);
      w.u64(static_cast<std::uint64_t>(value));
    }
  }
  return std::move(w).bytes();
}

std::optional<BidPayload> decode_payload(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  std::uint8_t tag = 0;
  std::uint64_t deposit = 0;
  std::uint32_t count = 0;
  if (!r.u8(tag) || !r.u64(deposit) || !r.u32(count) || static_cast<std::int64_t>(deposit) < 0) {
    return std::nullopt;
  }
  BidPayload out;
  out.deposit = static_cast<Money>(deposit);
  if (tag == kGeneralTag) {
    if (count > r.remaining() / 8) {
      return std::nullopt;
    }
    GeneralBid g;
    for (std::uint32_t c = 0; c < count; ++c) {
      std::uint64_t f = 0;
      r.u64(f);
      if (static_cast<std::int64_t>(f) < 0) {
        return std::nullopt;
      }
      g.constraints.push_back(static_cast<std::int64_t>(f));
    }
    std::uint64_t budget = 0;
    if (!r.u64(budget) || static_cast<std::int64_t>(budget) < 0) {
      return std::nullopt;
    }
    g.budget = static_cast<Money>(budget);
    out.bid = std::move(g);
  } else if (tag == kSpecificTag) {
    if (count > r.remaining() / 12) {
      return std::nullopt;
    }
    SpecificBid s;
    for (std::uint32_t c = 0; c < count; ++c) {
      std::uint32_t id = 0;
      std::uint64_t value = 0;
      if (!r.u32(id) || !r.u64(value) || static_cast<std::int64_t>(value) < 0 ||
          !s.valuations.emplace(id, static_cast<Money>(value)).second) {
        return std::nullopt;
      }
    }
    out.bid = std::move(s);
  } else {
    return std::nullopt;
  }
  if (!r.done()) {
    return std::nullopt;
  }
  return out;
}

Bytes RevealMessage::encode() const {
  ByteWriter w;
  w.raw(addr);
  w.raw(auction);
  w.raw(k);
  const Bytes body = encode_payload(payload);
  w.u32(static_cast<std::uint32_t>(body.size()));
  w.raw(body);
  return std::move(w).bytes();
}

std::optional<RevealMessage> RevealMessage::decode(std::span<const std::uint8_t> m) {
  ByteReader r(m);
  RevealMessage out;
  std::uint32_t len = 0;
  std::span<const std::uint8_t> body;
  if (!r.raw(out.addr) || !r.raw(out.auction) || !r.raw(out.k) || !r.u32(len) || !r.take(len, body) || !r.done()) {
    return std::nullopt;
  }
  auto payload = decode_payload(body);
  if (!payload) {
    return std::nullopt;
  }
  out.payload = std::move(*payload);
  return out;
}

std::string describe(const MisbehaviourProof& p) {
  switch (p.kind) {
    case MisbehaviourProof::Kind::kWrongAssignment:
      return "WrongAssignment(bidder " + std::to_string(p.bidder + 1) + ", item " + std::to_string(p.item) + ")";
    case MisbehaviourProof::Kind::kWrongPrice:
      return "WrongPrice(item " + std::to_string(p.item) + ")";
    case MisbehaviourProof::Kind::kWrongScore:
      return "WrongScore";
  }
  return "?";
}

// ---- ledger ----------------------------------------------------------------

Ledger::Ledger(const AuctionId& id, std::map<Money, G2Element> verify_keys, Policy policy, const Address& deployer,
               const std::map<Address, Money>& genesis)
    : id_(id), verify_keys_(std::move(verify_keys)), policy_(std::move(policy)) {
  if (!tbs::valid_threshold(policy_.t, policy_.n)) {
    throw Error(ErrorCode::kInvalidPolicy, "threshold must satisfy 1 <= t <= n and t > n/2, got t=" +
                                               std::to_string(policy_.t) + " n=" + std::to_string(policy_.n));
  }
  const Timers& tm = policy_.timers;
  if (tm.commit_blocks == 0 || tm.reveal_blocks == 0 || tm.solve_blocks == 0 || tm.contest_blocks == 0) {
    throw Error(ErrorCode::kInvalidPolicy, "timers must be positive");
  }
  if (policy_.gas_price.den == 0) {
    throw Error(ErrorCode::kInvalidPolicy, "gas price denominator is zero");
  }
  for (const auto& [a, amount] : genesis) {
    mint(a, amount);
  }
  emit("Deployed", {{"auction", to_hex(id_)}, {"t", std::to_string(policy_.t)}, {"n", std::to_string(policy_.n)}});
  Receipt r;
  charge(deployer, "deployment", policy_.gas.deployment.at(0), r);
}

void Ledger::mint(const Address& to, Money amount) {
  if (amount < 0) {
    throw Error(ErrorCode::kInvalidPolicy, "negative mint");
  }
  wallets_[to] += amount;
  minted_ += amount;
}

Money Ledger::balance(const Address& a) const {
  const auto it = wallets_.find(a);
  return it == wallets_.end() ? 0 : it->second;
}

bool Ledger::charge(const Address& who, std::string_view op, std::uint64_t gas, Receipt& r) {
  const Money fee = policy_.gas_price.fee(gas);
  if (balance(who) < fee) {
    r.status = Status::kInsufficientFunds;
    return false;
  }
  if (fee > 0) {
    wallets_[who] -= fee;
    burned_ += fee;
  }
  gas_meter_[who] += gas;
  auto& entry = gas_by_op_[std::string(op)];
  ++entry.calls;
  entry.gas += gas;
  entry.fee += fee;
  r.gas = gas;
  r.fee = fee;
  return true;
}

void Ledger::emit(std::string kind, std::vector<std::pair<std::string, std::string>> fields) {
  events_.push_back(Event{height_, std::move(kind), std::move(fields)});
}

void Ledger::set_phase(Phase p, std::uint64_t deadline) {
  phase_ = p;
  deadline_ = deadline;
  emit("PhaseChanged", {{"phase", std::string(to_string(p))}, {"deadline", std::to_string(deadline)}});
}

Receipt Ledger::submit_item(const Address& seller, std::vector<std::int64_t> characteristics,
                            const Digest& commitment, ItemId* id_out) {
  Receipt r;
  if (!charge(seller, "submitItem", policy_.gas.submit_item.at(0), r)) {
    return r;
  }
  if (phase_ != Phase::kSetup && phase_ != Phase::kCommit) {
    r.status = Status::kPhaseClosed;
    return r;
  }
  if ((!submitted_.empty() && characteristics.size() != submitted_.front().characteristics.size()) ||
      std::any_of(characteristics.begin(), characteristics.end(), [](std::int64_t c) { return c < 0; })) {
    r.status = Status::kMalformedBid;
    return r;
  }
  const auto id = static_cast<ItemId>(submitted_.size() + 1);
  submitted_.push_back(SubmittedItem{id, seller, std::move(characteristics), commitment, std::nullopt});
  if (id_out != nullptr) {
    *id_out = id;
  }
  emit("ItemSubmitted", {{"item", std::to_string(id)}, {"seller", to_hex(seller)}, {"commitment", to_hex(commitment)}});
  return r;
}

Receipt Ledger::commit(const Address& sender, Money deposit, const G1Element& h_tilde) {
  Receipt r;
  if (!charge(sender, "commit", policy_.gas.commit.at(0), r)) {
    return r;
  }
  if (phase_ != Phase::kCommit) {
    r.status = phase_ == Phase::kSetup ? Status::kPhaseClosed : Status::kTimerExpired;
    return r;
  }
  if (!policy_.denominations.contains(deposit)) {
    r.status = Status::kBadDenomination;
    return r;
  }
  if (balance(sender) < deposit) {
    r.status = Status::kInsufficientFunds;
    return r;
  }
  wallets_[sender] -= deposit;
  escrow_ += deposit;
  const IssueRequest req{issue_requests_.size(), sender, deposit, h_tilde};
  issue_requests_.push_back(req);
  emit("IssueRequest", {{"request", std::to_string(req.index)},
                        {"deposit", std::to_string(deposit)},
                        {"h_tilde", to_hex(h_tilde.serialize())}});
  return r;
}

Receipt Ledger::reveal(const Address& sender, std::span<const std::uint8_t> m, const tbs::Signature& sigma) {
  Receipt r;
  if (!charge(sender, "reveal", policy_.gas.reveal.at(0), r)) {
    return r;
  }
  const auto reject = [&](Status s) {
    r.status = s;
    emit("RevealRejected", {{"sender", to_hex(sender)}, {"status", std::string(to_string(s))}});
    return r;
  };
  if (phase_ != Phase::kReveal) {
    return reject(Status::kPhaseClosed);
  }
  const auto msg = RevealMessage::decode(m);
  if (!msg) {
    return reject(Status::kMalformedBid);
  }
  if (msg->auction != id_) {
    return reject(Status::kWrongAuction);
  }
  if (msg->addr != sender) {
    return reject(Status::kWrongSender);
  }
  if (spent_.contains(msg->k)) {
    return reject(Status::kDoubleSpend);
  }
  const Money d = msg->payload.deposit;
  const auto key = verify_keys_.find(d);
  if (!policy_.denominations.contains(d) || key == verify_keys_.end()) {
    return reject(Status::kBadDenomination);
  }
  if (!bid_within_deposit(msg->payload.bid, d)) {
    return reject(Status::kMalformedBid);
  }
  if (const auto* g = std::get_if<GeneralBid>(&msg->payload.bid)) {
    if (!submitted_.empty() && g->constraints.size() != submitted_.front().characteristics.size()) {
      return reject(Status::kMalformedBid);
    }
  } else {
    for (const auto& [item, value] : std::get<SpecificBid>(msg->payload.bid).valuations) {
      if (item == 0 || item > submitted_.size()) {
        return reject(Status::kMalformedBid);
      }
    }
  }
  if (!tbs::verify(key->second, m, sigma)) {
    return reject(Status::kBadSignature);
  }
  spent_.insert(msg->k);
  revealed_.push_back(RevealedBid{msg->addr, msg->k, msg->payload, sigma, false});
  emit("BidRevealed", {{"bidder", std::to_string(revealed_.size())},
                       {"addr", to_hex(msg->addr)},
                       {"k", to_hex(msg->k)},
                       {"deposit", std::to_string(d)},
                       {"payload", to_hex(encode_payload(msg->payload))}});
  return r;
}

Receipt Ledger::reveal_min_price(const Address& seller, ItemId id, Money reservation,
                                 std::span<const std::uint8_t> salt) {
  Receipt r;
  if (!charge(seller, "revealMinPrice", policy_.gas.reveal_min_price.at(0), r)) {
    return r;
  }
  if (phase_ != Phase::kReveal) {
    r.status = Status::kPhaseClosed;
  } else if (id == 0 || id > submitted_.size()) {
    r.status = Status::kUnknownItem;
  } else if (submitted_[id - 1].seller != seller) {
    r.status = Status::kWrongSender;
  } else if (submitted_[id - 1].reservation) {
    r.status = Status::kAlreadyOpened;
  } else if (!open_min_price(submitted_[id - 1].commitment, reservation, salt)) {
    r.status = Status::kBadOpening;
  } else {
    submitted_[id - 1].reservation = reservation;
    emit("MinPriceRevealed", {{"item", std::to_string(id)}, {"reservation", std::to_string(reservation)}});
  }
  return r;
}

void Ledger::close_reveals() {
  auction_items_.clear();
  auction_to_submitted_.clear();
  std::vector<ItemId> submitted_to_auction(submitted_.size() + 1, 0);
  for (const auto& s : submitted_) {
    if (!s.reservation) {
      emit("ItemWithdrawn", {{"item", std::to_string(s.id)}, {"reason", "commitment not opened"}});
      continue;
    }
    const auto idx = static_cast<ItemId>(auction_items_.size() + 1);
    auction_items_.push_back(Item{idx, s.characteristics, *s.reservation, s.commitment});
    auction_to_submitted_.push_back(s.id);
    submitted_to_auction[s.id] = idx;
  }
  valuations_ = ValuationMatrix(0, auction_items_.size());
  for (const auto& bid : revealed_) {
    std::vector<Money> row;
    if (const auto* g = std::get_if<GeneralBid>(&bid.payload.bid)) {
      row = auction_items_.empty() ? std::vector<Money>{0} : derive_valuations(*g, auction_items_);
    } else {
      row.assign(auction_items_.size() + 1, 0);
      for (const auto& [item, value] : std::get<SpecificBid>(bid.payload.bid).valuations) {
        if (const ItemId idx = submitted_to_auction[item]; idx != 0) {
          row[idx] = value;
        }
      }
    }
    valuations_.add_row(row);
  }
  emit("RevealsClosed", {{"bidders", std::to_string(revealed_.size())}, {"items", std::to_string(auction_items_.size())}});
}

Money Ledger::min_collateral() const {
  return ledger::min_collateral(revealed_.size(), auction_items_.size(), policy_.gas, policy_.gas_price);
}

Receipt Ledger::submit_solution(const Address& submitter, const vda::Solution& sol, Money collateral) {
  Receipt r;
  if (!charge(submitter, "submitSolution", policy_.gas.submit_solution.at(auction_items_.size()), r)) {
    return r;
  }
  if (phase_ != Phase::kSolve && phase_ != Phase::kContest) {
    r.status = Status::kPhaseClosed;
    return r;
  }
  const std::size_t items = auction_items_.size();
  const bool shaped = sol.assignment.size() == revealed_.size() && sol.prices.size() == items + 1 &&
                      sol.prices[0] == 0 && vda::is_feasible(sol.assignment, items) &&
                      std::all_of(sol.prices.begin(), sol.prices.end(), [](Money p) { return p >= 0; });
  if (!shaped) {
    r.status = Status::kInvalidSolution;
  } else if (collateral < min_collateral()) {
    r.status = Status::kInsufficientCollateral;
  } else if (candidate_ && sol.score <= candidate_->solution.score) {
    r.status = Status::kScoreNotHigher;
  } else if (balance(submitter) < collateral) {
    r.status = Status::kInsufficientFunds;
  }
  if (!r.ok()) {
    emit("SolutionRejected", {{"submitter", to_hex(submitter)}, {"status", std::string(to_string(r.status))}});
    return r;
  }
  wallets_[submitter] -= collateral;
  collateral_held_ += collateral;
  if (candidate_) {
    wallets_[candidate_->submitter] += candidate_->collateral;
    collateral_held_ -= candidate_->collateral;
    emit("SolutionReplaced", {{"previous_score", std::to_string(candidate_->solution.score)}});
  }
  candidate_ = Candidate{sol, submitter, collateral, height_};
  emit("SolutionSubmitted",
       {{"submitter", to_hex(submitter)}, {"score", std::to_string(sol.score)}, {"collateral", std::to_string(collateral)}});
  set_phase(Phase::kContest, height_ + policy_.timers.contest_blocks);
  return r;
}

Receipt Ledger::proof_preamble(const Address& prover, std::string_view op, std::uint64_t gas) {
  Receipt r;
  if (!charge(prover, op, gas, r)) {
    return r;
  }
  if (phase_ != Phase::kContest) {
    r.status = Status::kPhaseClosed;
  } else if (!candidate_) {
    r.status = Status::kNoCandidate;
  }
  return r;
}

void Ledger::discard_candidate(const Address& prover, std::string_view reason) {
  wallets_[prover] += candidate_->collateral;
  collateral_held_ -= candidate_->collateral;
  emit("ProofAccepted", {{"prover", to_hex(prover)},
                         {"proof", std::string(reason)},
                         {"forfeited", std::to_string(candidate_->collateral)}});
  candidate_.reset();
  set_phase(Phase::kSolve, height_ + policy_.timers.solve_blocks);
}

Status check_proof(const MisbehaviourProof& proof, const vda::Solution& sol, const ValuationMatrix& v,
                   std::span<const Item> items) {
  switch (proof.kind) {
    case MisbehaviourProof::Kind::kWrongAssignment: {
      if (proof.bidder >= sol.assignment.size() || proof.item > items.size()) {
        return Status::kInvalidIndices;
      }
      const ItemId held = sol.assignment[proof.bidder];
      const Money current = v.at(proof.bidder, held) - sol.prices[held];
      const Money better = v.at(proof.bidder, proof.item) - sol.prices[proof.item];
      return better > current ? Status::kOk : Status::kNotBetter;
    }
    case MisbehaviourProof::Kind::kWrongPrice: {
      if (proof.item == 0 || proof.item > items.size()) {
        return Status::kInvalidIndices;
      }
      const Money p = sol.prices[proof.item];
      const Money reserve = items[proof.item - 1].reservation_price;
      const bool assigned = std::find(sol.assignment.begin(), sol.assignment.end(), proof.item) != sol.assignment.end();
      return (p < reserve || (!assigned && p > reserve)) ? Status::kOk : Status::kPriceValid;
    }
    case MisbehaviourProof::Kind::kWrongScore:
      return vda::score_of(v, sol.assignment, sol.prices) != sol.score ? Status::kOk : Status::kScoreCorrect;
  }
  return Status::kInvalidIndices;
}

Receipt Ledger::run_proof(const Address& prover, const MisbehaviourProof& proof, std::string_view op, std::uint64_t gas) {
  Receipt r = proof_preamble(prover, op, gas);
  if (!r.ok()) {
    return r;
  }
  r.status = check_proof(proof, candidate_->solution, valuations_, auction_items_);
  if (r.ok()) {
    discard_candidate(prover, describe(proof));
  } else {
    emit("ProofRejected", {{"prover", to_hex(prover)}, {"proof", describe(proof)}, {"status", std::string(to_string(r.status))}});
  }
  return r;
}

Receipt Ledger::wrong_assignment(const Address& prover, std::uint32_t bidder, ItemId alternative) {
  return run_proof(prover, MisbehaviourProof{MisbehaviourProof::Kind::kWrongAssignment, bidder, alternative},
                   "wrongAssignment", policy_.gas.wrong_assignment.at(0));
}

Receipt Ledger::wrong_price(const Address& prover, ItemId item) {
  return run_proof(prover, MisbehaviourProof{MisbehaviourProof::Kind::kWrongPrice, 0, item}, "wrongPrice",
                   policy_.gas.wrong_price.at(0));
}

Receipt Ledger::wrong_score(const Address& prover) {
  return run_proof(prover, MisbehaviourProof{}, "wrongScore", policy_.gas.wrong_score.at(revealed_.size()));
}

Receipt Ledger::submit_proof(const Address& prover, const MisbehaviourProof& proof) {
  switch (proof.kind) {
    case MisbehaviourProof::Kind::kWrongAssignment:
      return wrong_assignment(prover, proof.bidder, proof.item);
    case MisbehaviourProof::Kind::kWrongPrice:
      return wrong_price(prover, proof.item);
    case MisbehaviourProof::Kind::kWrongScore:
      return wrong_score(prover);
  }
  return Receipt{Status::kInvalidIndices, 0, 0};
}

void Ledger::finalize() {
  if (candidate_) {
    wallets_[candidate_->submitter] += candidate_->collateral;
    collateral_held_ -= candidate_->collateral;
    final_ = candidate_->solution;
    emit("Finalized", {{"score", std::to_string(final_->score)}, {"refunded", std::to_string(candidate_->collateral)}});
    candidate_.reset();
  } else {
    emit("Finalized", {{"score", "none"}});
  }
  set_phase(Phase::kFinal, height_);
}

void Ledger::advance_block(std::uint64_t n) {
  for (std::uint64_t step = 0; step < n; ++step) {
    ++height_;
    bool moved = true;
    while (moved && height_ >= deadline_ && phase_ != Phase::kFinal) {
      moved = true;
      switch (phase_) {
        case Phase::kSetup:
          set_phase(Phase::kCommit, height_ + policy_.timers.commit_blocks);
          break;
        case Phase::kCommit:
          set_phase(Phase::kReveal, height_ + policy_.timers.reveal_blocks);
          break;
        case Phase::kReveal:
          close_reveals();
          set_phase(Phase::kSolve, height_ + policy_.timers.solve_blocks);
          break;
        case Phase::kSolve:
        case Phase::kContest:
          finalize();
          break;
        case Phase::kFinal:
          moved = false;
          break;
      }
    }
    check_conservation();
  }
}

void Ledger::advance_to_next_phase(std::uint64_t limit) {
  const Phase start = phase_;
  for (std::uint64_t i = 0; i < limit && phase_ == start && phase_ != Phase::kFinal; ++i) {
    advance_block();
  }
}

Receipt Ledger::withdraw(const Address& who, Money* amount) {
  Receipt r;
  if (amount != nullptr) {
    *amount = 0;
  }
  if (!charge(who, "withdraw", policy_.gas.withdraw.at(0), r)) {
    return r;
  }
  if (phase_ != Phase::kFinal) {
    r.status = Status::kNotFinal;
    return r;
  }
  Money total = 0;
  bool claimed = false;
  for (std::size_t b = 0; b < revealed_.size(); ++b) {
    auto& bid = revealed_[b];
    if (bid.addr != who || bid.withdrawn) {
      continue;
    }
    Money due = bid.payload.deposit;
    if (final_) {
      const ItemId x = final_->assignment[b];
      due -= final_->prices[x];
    }
    bid.withdrawn = true;
    claimed = true;
    total += due;
  }
  if (final_ && !sellers_paid_.contains(who)) {
    for (std::size_t b = 0; b < final_->assignment.size(); ++b) {
      const ItemId x = final_->assignment[b];
      if (x != 0 && submitted_[submitted_id(x) - 1].seller == who) {
        total += final_->prices[x];
        claimed = true;
      }
    }
    if (claimed) {
      sellers_paid_.insert(who);
    }
  }
  if (!claimed) {
    r.status = Status::kNothingToWithdraw;
    return r;
  }
  escrow_ -= total;
  wallets_[who] += total;
  if (amount != nullptr) {
    *amount = total;
  }
  emit("Withdrawn", {{"addr", to_hex(who)}, {"amount", std::to_string(total)}});
  return r;
}

std::uint64_t Ledger::gas_used(const Address& a) const {
  const auto it = gas_meter_.find(a);
  return it == gas_meter_.end() ? 0 : it->second;
}

std::uint64_t Ledger::total_gas() const {
  std::uint64_t sum = 0;
  for (const auto& [addr, gas] : gas_meter_) {
    sum += gas;
  }
  return sum;
}

Money Ledger::wallets_total() const {
  Money sum = 0;
  for (const auto& [addr, amount] : wallets_) {
    sum += amount;
  }
  return sum;
}

bool Ledger::funds_conserved() const {
  return wallets_total() + escrow_ + collateral_held_ + burned_ == minted_ && escrow_ >= 0 && collateral_held_ >= 0;
}

void Ledger::check_conservation() { conservation_ok_ = conservation_ok_ && funds_conserved(); }

std::string Ledger::events_ndjson() const {
  std::string out;
  nlohmann::ordered_json header{{"format", "blindmarket-events/1"}, {"auction", to_hex(id_)}};
  out += header.dump() + "\n";
  for (const auto& e : events_) {
    nlohmann::ordered_json j{{"height", e.height}, {"event", e.kind}};
    for (const auto& [k, v] : e.fields) {
      j[k] = v;
    }
    out += j.dump() + "\n";
  }
  return out;
}

Digest Ledger::state_digest() const {
  ByteWriter w;
  w.raw(id_);
  w.u8(static_cast<std::uint8_t>(phase_));
  w.u64(height_);
  w.u64(deadline_);
  for (const auto& [a, m] : wallets_) {
    w.raw(a);
    w.u64(static_cast<std::uint64_t>(m));
  }
  for (const Money m : {minted_, escrow_, collateral_held_, burned_}) {
    w.u64(static_cast<std::uint64_t>(m));
  }
  for (const auto& k : spent_) {
    w.raw(k);
  }
  for (const auto& b : revealed_) {
    w.raw(b.addr);
    w.raw(b.k);
    w.raw(encode_payload(b.payload));
    w.raw(b.sigma.sigma.serialize());
    w.u8(b.withdrawn ? 1 : 0);
  }
  for (const auto& s : submitted_) {
    w.raw(s.seller);
    w.raw(s.commitment);
    w.u64(static_cast<std::uint64_t>(s.reservation.value_or(-1)));
  }
  const auto put_solution = [&w](const vda::Solution& sol) {
    for (const auto x : sol.assignment) {
      w.u32(x);
    }
    for (const auto p : sol.prices) {
      w.u64(static_cast<std::uint64_t>(p));
    }
    w.u64(static_cast<std::uint64_t>(sol.score));
  };
  if (candidate_) {
    put_solution(candidate_->solution);
    w.raw(candidate_->submitter);
    w.u64(static_cast<std::uint64_t>(candidate_->collateral));
  }
  if (final_) {
    put_solution(*final_);
  }
  for (const auto& [a, g] : gas_meter_) {
    w.raw(a);
    w.u64(g);
  }
  w.raw(as_bytes(events_ndjson()));
  return sha256(w.bytes());
}

}  // namespace blindmarket::ledger
