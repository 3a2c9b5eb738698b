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
#include <vector>

#include "blindmarket/ledger.hpp"
#include "blindmarket/rng.hpp"
#include "blindmarket/threshold_blind_sig.hpp"
#include "blindmarket/vda_solver.hpp"

namespace blindmarket::actors {

using PublicKey = std::array<std::uint8_t, 32>;
using EdSignature = std::array<std::uint8_t, 64>;

/// Ed25519 account key. The address is the first 20 bytes of BLAKE2b(pk).
class Identity {
 public:
  static Identity generate(Rng& rng);

  const PublicKey& public_key() const { return pk_; }
  const ledger::Address& address() const { return address_; }
  EdSignature sign(std::span<const std::uint8_t> message) const;

  static ledger::Address address_of(const PublicKey& pk);
  static bool verify(const PublicKey& pk, std::span<const std::uint8_t> message, const EdSignature& sig);

 private:
  PublicKey pk_{};
  std::array<std::uint8_t, 64> sk_{};
  ledger::Address address_{};
};

/// Seller-chosen challenge a winner signs to collect an item. Binds the
/// auction and the item so a claim cannot be replayed for another item.
struct Challenge {
  ledger::AuctionId auction{};
  ItemId item = 0;
  ledger::Nonce nonce{};

  static Challenge issue(const ledger::AuctionId& auction, ItemId item, Rng& rng);
  Bytes encode() const;
};

struct Claim {
  ItemId item = 0;
  PublicKey public_key{};
  EdSignature signature{};
};

/// True iff `claim` answers `challenge` and comes from the fresh address the
/// final solution assigns `challenge.item` to.
bool verify_claim(const ledger::Ledger& ledger, const Challenge& challenge, const Claim& claim);

enum class BidderBehaviour { kHonest, kCommitNoReveal };

class BidderAgent {
 public:
  BidderAgent(Bid bid, Money deposit, Rng& rng, BidderBehaviour behaviour = BidderBehaviour::kHonest);

  const ledger::Address& wallet() const { return identity_.address(); }
  const ledger::Address& fresh_address() const { return fresh_.address(); }
  const Bid& bid() const { return bid_; }
  Money deposit() const { return deposit_; }
  BidderBehaviour behaviour() const { return behaviour_; }
  bool has_credential() const { return credential_.has_value(); }
  /// Index of this bidder's IssueRequest, once committed.
  std::optional<std::size_t> request() const { return request_; }

  ledger::RevealMessage message(const ledger::AuctionId& auction) const;

  /// Blinds the reveal message and commits the deposit from the wallet.
  ledger::Receipt commit(ledger::Ledger& ledger);
  void receive(const tbs::PartialBlindSig& partial);
  /// Unblinds the first `t` partials and keeps the aggregate if it verifies.
  bool aggregate(std::uint32_t t, const G2Element& verify_key);
  ledger::Receipt reveal(ledger::Ledger& ledger) const;

  /// Throws NotWinner unless the final solution gives this bidder `challenge.item`.
  Claim claim_item(const ledger::Ledger& ledger, const Challenge& challenge) const;

 private:
  Identity identity_;
  Identity fresh_;
  ledger::Nonce k_{};
  Bid bid_;
  Money deposit_ = 0;
  BidderBehaviour behaviour_;
  Rng rng_;
  std::optional<tbs::BlindingState> blinding_;
  std::optional<std::size_t> request_;
  std::vector<tbs::PartialBlindSig> partials_;
  std::optional<tbs::Signature> credential_;
  Bytes message_bytes_;
};

class AuthorityAgent {
 public:
  AuthorityAgent(tbs::AuthorityIndex index, std::map<Money, tbs::KeyShare> shares)
      : index_(index), shares_(std::move(shares)) {}

  tbs::AuthorityIndex index() const { return index_; }
  bool online() const { return online_; }
  void set_online(bool online) { online_ = online; }

  /// Partial signature for IssueRequest number `request`, at most once each.
  std::optional<tbs::PartialBlindSig> issue(const ledger::Ledger& ledger, std::size_t request);

 private:
  tbs::AuthorityIndex index_;
  std::map<Money, tbs::KeyShare> shares_;
  std::set<std::size_t> served_;
  bool online_ = true;
};

struct AuthoritySet {
  std::uint32_t threshold = 0;
  std::vector<AuthorityAgent> members;
  std::map<Money, G2Element> verify_keys;

  /// Dealer key generation, one key set per denomination listed.
  static AuthoritySet generate(std::uint32_t t, std::uint32_t n, std::span<const Money> denominations, Rng& rng);
};

struct Offer {
  std::vector<std::int64_t> characteristics;
  Money reservation_price = 0;
  bool opens = true;  // false: never opens the min-price commitment
  std::array<std::uint8_t, 32> salt{};
  ItemId id = 0;      // submission id, set once submitted
};

struct SellerAgent {
  Identity identity;
  std::vector<Offer> offers;

  SellerAgent(std::vector<Offer> offers, Rng& rng);
  const ledger::Address& wallet() const { return identity.address(); }
};

enum class SolverBehaviour {
  kHonest,
  kEquivocating,  // declares a score its assignment and prices do not give
  kNonVcg,        // posts an equilibrium priced above the VCG outcome
  kFixed,         // posts `fixed` as given
};

struct SolverAgent {
  ledger::Address wallet{};
  SolverBehaviour behaviour = SolverBehaviour::kHonest;
  vda::Solution fixed;

  vda::Solution propose(const ledger::Ledger& ledger) const;
};

enum class AuditorBehaviour { kHonest, kGriefing };

struct AuditorAgent {
  ledger::Address wallet{};
  AuditorBehaviour behaviour = AuditorBehaviour::kHonest;
};

struct PreparationReport {
  std::size_t items_submitted = 0;
  std::size_t items_opened = 0;
  std::size_t commits = 0;
  std::size_t credentials = 0;
  std::size_t reveals = 0;
};

/// Drives a fresh ledger through setup, commit and reveal into SOLVE. Agents
/// are funded by free transfers of exactly what each call costs.
PreparationReport run_preparation(ledger::Ledger& ledger, AuthoritySet& authorities, std::vector<SellerAgent>& sellers,
                                  std::vector<BidderAgent>& bidders);

struct ExecutionReport {
  std::optional<vda::Solution> final_solution;
  std::size_t submissions = 0;
  std::size_t proofs_accepted = 0;
  std::size_t proofs_rejected = 0;
  double solve_ms = 0;
  double audit_ms = 0;
};

/// Solver posts, auditors audit and challenge each block until FINAL.
ExecutionReport run_execution(ledger::Ledger& ledger, const SolverAgent& solver, std::span<const AuditorAgent> auditors);

}  // namespace blindmarket::actors
