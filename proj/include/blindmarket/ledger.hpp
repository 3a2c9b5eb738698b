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

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "blindmarket/bytes.hpp"
#include "blindmarket/market_model.hpp"
#include "blindmarket/pairing_group.hpp"
#include "blindmarket/threshold_blind_sig.hpp"
#include "blindmarket/vda_solver.hpp"

namespace blindmarket::ledger {

using Address = std::array<std::uint8_t, 20>;
using AuctionId = std::array<std::uint8_t, 16>;
using Nonce = std::array<std::uint8_t, 32>;

enum class Phase { kSetup, kCommit, kReveal, kSolve, kContest, kFinal };

enum class Status {
  kOk,
  kPhaseClosed,
  kTimerExpired,
  kBadDenomination,
  kInsufficientFunds,
  kWrongSender,
  kWrongAuction,
  kDoubleSpend,
  kBadSignature,
  kMalformedBid,
  kBadOpening,
  kUnknownItem,
  kAlreadyOpened,
  kInsufficientCollateral,
  kScoreNotHigher,
  kInvalidSolution,
  kNoCandidate,
  kInvalidIndices,
  kNotBetter,
  kPriceValid,
  kScoreCorrect,
  kNothingToWithdraw,
  kNotFinal,
};

std::string_view to_string(Phase p);
std::string_view to_string(Status s);

struct Receipt {
  Status status = Status::kOk;
  std::uint64_t gas = 0;
  Money fee = 0;

  bool ok() const { return status == Status::kOk; }
};

struct GasCost {
  std::uint64_t base = 0;
  std::uint64_t per_unit = 0;

  std::uint64_t at(std::uint64_t units) const { return base + per_unit * units; }
  bool operator==(const GasCost&) const = default;
};

/// Gas per contract operation. Defaults are the measured costs of the
/// reference deployment, except deployment (not measured; illustrative) and
/// withdraw (not listed; zero).
struct GasTable {
  GasCost deployment{2'000'000, 0};
  GasCost submit_item{43'556, 0};
  GasCost commit{26'590, 0};
  GasCost reveal{364'456, 0};
  GasCost reveal_min_price{52'378, 0};
  GasCost submit_solution{5'068, 408};  // per item
  GasCost wrong_assignment{45'572, 0};
  GasCost wrong_score{18'048, 6'494};  // per bidder
  GasCost wrong_price{35'714, 0};
  GasCost withdraw{0, 0};

  bool operator==(const GasTable&) const = default;

  /// Named access, keys as in the config file ("commit", "submitSolution", ...).
  static std::span<const std::string_view> operation_names();
  const GasCost& operator[](std::string_view op) const;
  GasCost& operator[](std::string_view op);

  /// Parses a YAML gas table; missing operations keep their defaults.
  /// Throws ParseError (with line number) or InvalidPolicy on negative costs.
  static GasTable from_yaml(std::string_view text);
  static GasTable load(const std::string& path);
  std::string to_yaml() const;
};

/// Currency units per unit of gas, as a fraction. Fees round up.
struct GasPrice {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  Money fee(std::uint64_t gas) const;
};

struct Timers {
  std::uint64_t commit_blocks = 10;
  std::uint64_t reveal_blocks = 10;
  std::uint64_t solve_blocks = 10;
  std::uint64_t contest_blocks = 10;
};

struct Policy {
  std::uint32_t t = 1;
  std::uint32_t n = 1;
  Timers timers;
  DenominationSet denominations = DenominationSet::standard();
  GasTable gas;
  GasPrice gas_price;
};

/// Largest proof cost for (B, I) in currency, plus one unit.
Money min_collateral(std::size_t bidders, std::size_t items, const GasTable& gas, GasPrice price);

/// Deposit and bid carried inside a reveal.
struct BidPayload {
  Money deposit = 0;
  Bid bid;

  bool operator==(const BidPayload&) const = default;
};

/// m = addr || auction id || k || u32 length || payload.
struct RevealMessage {
  Address addr{};
  AuctionId auction{};
  Nonce k{};
  BidPayload payload;

  Bytes encode() const;
  static std::optional<RevealMessage> decode(std::span<const std::uint8_t> m);
};

Bytes encode_payload(const BidPayload& p);
std::optional<BidPayload> decode_payload(std::span<const std::uint8_t> bytes);

struct SubmittedItem {
  ItemId id = 0;  // submission order, 1-based
  Address seller{};
  std::vector<std::int64_t> characteristics;
  Digest commitment{};
  std::optional<Money> reservation;  // set once opened
};

struct RevealedBid {
  Address addr{};
  Nonce k{};
  BidPayload payload;
  tbs::Signature sigma;
  bool withdrawn = false;
};

struct IssueRequest {
  std::uint64_t index = 0;
  Address sender{};
  Money deposit = 0;
  G1Element h_tilde;
};

struct MisbehaviourProof {
  enum class Kind { kWrongAssignment, kWrongPrice, kWrongScore };
  Kind kind = Kind::kWrongScore;
  std::uint32_t bidder = 0;  // 0-based, WrongAssignment only
  ItemId item = 0;           // alternative item, or contested item for WrongPrice

  bool operator==(const MisbehaviourProof&) const = default;
};

std::string describe(const MisbehaviourProof& p);

/// The on-chain acceptance rule for `proof` against a well-formed candidate.
/// Returns Ok when the proof is accepted.
Status check_proof(const MisbehaviourProof& proof, const vda::Solution& sol, const ValuationMatrix& v,
                   std::span<const Item> items);

struct Candidate {
  vda::Solution solution;
  Address submitter{};
  Money collateral = 0;
  std::uint64_t height = 0;
};

struct Event {
  std::uint64_t height = 0;
  std::string kind;
  std::vector<std::pair<std::string, std::string>> fields;
};

struct OperationGas {
  std::uint64_t calls = 0;
  std::uint64_t gas = 0;
  Money fee = 0;  // burned, rounded up per call
};

/// In-process model of the auction contract. Every mutating call is one
/// transaction: it is charged gas (also when rejected), and reports the
/// outcome in its receipt instead of throwing.
class Ledger {
 public:
  /// Throws InvalidPolicy for t <= n/2, zero timers, or a zero gas price denominator.
  Ledger(const AuctionId& id, std::map<Money, G2Element> verify_keys, Policy policy, const Address& deployer,
         const std::map<Address, Money>& genesis);

  // Funds outside the contract. `mint` models a free transfer from outside
  // the system and counts towards the conserved total.
  void mint(const Address& to, Money amount);
  Money balance(const Address& a) const;

  Receipt submit_item(const Address& seller, std::vector<std::int64_t> characteristics, const Digest& commitment,
                      ItemId* id_out = nullptr);
  Receipt commit(const Address& sender, Money deposit, const G1Element& h_tilde);
  Receipt reveal(const Address& sender, std::span<const std::uint8_t> m, const tbs::Signature& sigma);
  Receipt reveal_min_price(const Address& seller, ItemId id, Money r, std::span<const std::uint8_t> salt);
  Receipt submit_solution(const Address& submitter, const vda::Solution& sol, Money collateral);
  Receipt wrong_assignment(const Address& prover, std::uint32_t bidder, ItemId alternative);
  Receipt wrong_price(const Address& prover, ItemId item);
  Receipt wrong_score(const Address& prover);
  Receipt submit_proof(const Address& prover, const MisbehaviourProof& proof);
  Receipt withdraw(const Address& who, Money* amount = nullptr);

  void advance_block(std::uint64_t n = 1);
  /// Advances until the phase changes or `limit` blocks pass.
  void advance_to_next_phase(std::uint64_t limit = 1'000'000);

  const AuctionId& auction_id() const { return id_; }
  Phase phase() const { return phase_; }
  std::uint64_t height() const { return height_; }
  std::uint64_t phase_deadline() const { return deadline_; }
  const Policy& policy() const { return policy_; }

  std::span<const SubmittedItem> submitted_items() const { return submitted_; }
  /// Items taking part once reveals close: opened commitments only, renumbered 1..I.
  std::span<const Item> auction_items() const { return auction_items_; }
  /// Submission id of auction item i (1-based).
  ItemId submitted_id(ItemId auction_item) const { return auction_to_submitted_.at(auction_item - 1); }
  std::span<const RevealedBid> revealed_bids() const { return revealed_; }
  std::span<const IssueRequest> issue_requests() const { return issue_requests_; }
  const std::set<Nonce>& spent_list() const { return spent_; }
  /// Valuations rebuilt on chain when reveals close (rows in reveal order).
  const ValuationMatrix& valuations() const { return valuations_; }
  const std::optional<Candidate>& candidate() const { return candidate_; }
  /// Final solution once FINAL; empty if none was ever accepted.
  const std::optional<vda::Solution>& final_solution() const { return final_; }

  Money min_collateral() const;

  std::uint64_t gas_used(const Address& a) const;
  std::uint64_t total_gas() const;
  const std::map<std::string, OperationGas>& gas_by_operation() const { return gas_by_op_; }

  Money minted() const { return minted_; }
  Money escrow() const { return escrow_; }
  Money collateral_held() const { return collateral_held_; }
  Money burned() const { return burned_; }
  Money wallets_total() const;
  /// Wallets + escrow + collateral + burned == minted.
  bool funds_conserved() const;
  /// True if conservation held after every block so far.
  bool conserved_at_every_block() const { return conservation_ok_; }

  std::span<const Event> events() const { return events_; }
  /// One JSON object per line, prefixed by a header record.
  std::string events_ndjson() const;

  /// Digest of the complete public state, for determinism checks.
  Digest state_digest() const;

 private:
  bool charge(const Address& who, std::string_view op, std::uint64_t gas, Receipt& r);
  void emit(std::string kind, std::vector<std::pair<std::string, std::string>> fields);
  void set_phase(Phase p, std::uint64_t deadline);
  void close_reveals();
  void finalize();
  void discard_candidate(const Address& prover, std::string_view reason);
  Receipt proof_preamble(const Address& prover, std::string_view op, std::uint64_t gas);
  Receipt run_proof(const Address& prover, const MisbehaviourProof& proof, std::string_view op, std::uint64_t gas);
  void check_conservation();

  AuctionId id_;
  std::map<Money, G2Element> verify_keys_;
  Policy policy_;
  Phase phase_ = Phase::kSetup;
  std::uint64_t height_ = 0;
  std::uint64_t deadline_ = 1;

  std::map<Address, Money> wallets_;
  Money minted_ = 0;
  Money escrow_ = 0;
  Money collateral_held_ = 0;
  Money burned_ = 0;
  bool conservation_ok_ = true;

  std::vector<SubmittedItem> submitted_;
  std::vector<Item> auction_items_;
  std::vector<ItemId> auction_to_submitted_;
  std::vector<IssueRequest> issue_requests_;
  std::set<Nonce> spent_;
  std::vector<RevealedBid> revealed_;
  ValuationMatrix valuations_;
  std::optional<Candidate> candidate_;
  std::optional<vda::Solution> final_;
  std::set<Address> sellers_paid_;

  std::map<Address, std::uint64_t> gas_meter_;
  std::map<std::string, OperationGas> gas_by_op_;
  std::vector<Event> events_;
};

}  // namespace blindmarket::ledger
