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

#include "blindmarket/actors.hpp"

#include <sodium.h>

#include <algorithm>
#include <chrono>
#include <stdexcept>

#include "blindmarket/errors.hpp"
#include "blindmarket/verifier.hpp"

namespace blindmarket::actors {

using ledger::Address;
using ledger::Ledger;
using ledger::Receipt;

Identity Identity::generate(Rng& rng) {
  if (sodium_init() < 0) {
    throw std::runtime_error("libsodium initialisation failed");
  }
  const auto seed = rng.bytes<crypto_sign_SEEDBYTES>();
  Identity id;
  crypto_sign_seed_keypair(id.pk_.data(), id.sk_.data(), seed.data());
  id.address_ = address_of(id.pk_);
  return id;
}

EdSignature Identity::sign(std::span<const std::uint8_t> message) const {
  EdSignature sig{};
  crypto_sign_detached(sig.data(), nullptr, message.data(), message.size(), sk_.data());
  return sig;
}

Address Identity::address_of(const PublicKey& pk) {
  Address a{};
  crypto_generichash(a.data(), a.size(), pk.data(), pk.size(), nullptr, 0);
  return a;
}

bool Identity::verify(const PublicKey& pk, std::span<const std::uint8_t> message, const EdSignature& sig) {
  return crypto_sign_verify_detached(sig.data(), message.data(), message.size(), pk.data()) == 0;
}

Challenge Challenge::issue(const ledger::AuctionId& auction, ItemId item, Rng& rng) {
  return Challenge{auction, item, rng.bytes<32>()};
}

Bytes Challenge::encode() const {
  ByteWriter w;
  w.raw(as_bytes("blindmarket/claim/v1"));
  w.raw(auction);
  w.u32(item);
  w.raw(nonce);
  return std::move(w).bytes();
}

namespace {

// Index of the revealed bidder holding `item` in the final solution.
std::optional<std::size_t> holder_of(const Ledger& ledger, ItemId item) {
  const auto& sol = ledger.final_solution();
  if (ledger.phase() != ledger::Phase::kFinal || !sol || item == 0) {
    return std::nullopt;
  }
  const auto it = std::find(sol->assignment.begin(), sol->assignment.end(), item);
  if (it == sol->assignment.end()) {
    return std::nullopt;
  }
  return static_cast<std::size_t>(it - sol->assignment.begin());
}

}  // namespace

bool verify_claim(const Ledger& ledger, const Challenge& challenge, const Claim& claim) {
  if (claim.item != challenge.item || challenge.auction != ledger.auction_id()) {
    return false;
  }
  const auto b = holder_of(ledger, challenge.item);
  if (!b || ledger.revealed_bids()[*b].addr != Identity::address_of(claim.public_key)) {
    return false;
  }
  return Identity::verify(claim.public_key, challenge.encode(), claim.signature);
}

BidderAgent::BidderAgent(Bid bid, Money deposit, Rng& rng, BidderBehaviour behaviour)
    : identity_(Identity::generate(rng)),
      fresh_(Identity::generate(rng)),
      k_(rng.bytes<32>()),
      bid_(std::move(bid)),
      deposit_(deposit),
      behaviour_(behaviour),
      rng_(rng.fork()) {}

ledger::RevealMessage BidderAgent::message(const ledger::AuctionId& auction) const {
  ledger::RevealMessage m;
  m.addr = fresh_.address();
  m.auction = auction;
  m.k = k_;
  m.payload = ledger::BidPayload{deposit_, bid_};
  return m;
}

Receipt BidderAgent::commit(Ledger& ledger) {
  message_bytes_ = message(ledger.auction_id()).encode();
  blinding_ = tbs::prepare_blind_sign(message_bytes_, rng_);
  const Receipt r = ledger.commit(wallet(), deposit_, blinding_->blinded_point);
  if (r.ok()) {
    request_ = ledger.issue_requests().size() - 1;
  }
  return r;
}

void BidderAgent::receive(const tbs::PartialBlindSig& partial) { partials_.push_back(partial); }

bool BidderAgent::aggregate(std::uint32_t t, const G2Element& verify_key) {
  if (!blinding_ || partials_.size() < t) {
    return false;
  }
  std::sort(partials_.begin(), partials_.end(),
            [](const auto& a, const auto& b) { return a.authority_index < b.authority_index; });
  std::vector<std::pair<tbs::AuthorityIndex, G1Element>> unblinded;
  for (std::size_t i = 0; i < t; ++i) {
    unblinded.emplace_back(partials_[i].authority_index, tbs::unblind(blinding_->blinding_factor, partials_[i].sigma_tilde));
  }
  const tbs::Signature sig = tbs::agg_sig(unblinded, t);
  if (!tbs::verify(verify_key, message_bytes_, sig)) {
    return false;
  }
  credential_ = sig;
  return true;
}

Receipt BidderAgent::reveal(Ledger& ledger) const {
  if (!credential_) {
    throw std::logic_error("reveal without a credential");
  }
  return ledger.reveal(fresh_.address(), message_bytes_, *credential_);
}

Claim BidderAgent::claim_item(const Ledger& ledger, const Challenge& challenge) const {
  const auto b = holder_of(ledger, challenge.item);
  if (!b || ledger.revealed_bids()[*b].addr != fresh_.address()) {
    throw Error(ErrorCode::kNotWinner, "item " + std::to_string(challenge.item) + " is not assigned to this bidder");
  }
  return Claim{challenge.item, fresh_.public_key(), fresh_.sign(challenge.encode())};
}

std::optional<tbs::PartialBlindSig> AuthorityAgent::issue(const Ledger& ledger, std::size_t request) {
  const auto requests = ledger.issue_requests();
  if (!online_ || request >= requests.size() || served_.contains(request)) {
    return std::nullopt;
  }
  const auto share = shares_.find(requests[request].deposit);
  if (share == shares_.end()) {
    return std::nullopt;
  }
  served_.insert(request);
  return tbs::blind_sign(share->second, requests[request].h_tilde);
}

AuthoritySet AuthoritySet::generate(std::uint32_t t, std::uint32_t n, std::span<const Money> denominations, Rng& rng) {
  const auto keys = tbs::keygen_per_denomination(GroupParams::bn254(), t, n, denominations, rng);
  AuthoritySet set;
  set.threshold = t;
  for (std::uint32_t i = 1; i <= n; ++i) {
    std::map<Money, tbs::KeyShare> shares;
    for (const auto& [d, ks] : keys) {
      shares.emplace(d, ks.shares[i - 1]);
    }
    set.members.emplace_back(i, std::move(shares));
  }
  for (const auto& [d, ks] : keys) {
    set.verify_keys.emplace(d, ks.master_verify_key);
  }
  return set;
}

SellerAgent::SellerAgent(std::vector<Offer> offers_in, Rng& rng)
    : identity(Identity::generate(rng)), offers(std::move(offers_in)) {
  for (auto& o : offers) {
    o.salt = rng.bytes<32>();
  }
}

namespace {

// Free transfer topping `who` up to `need`.
void top_up(Ledger& ledger, const Address& who, Money need) {
  if (const Money have = ledger.balance(who); have < need) {
    ledger.mint(who, need - have);
  }
}

Money fee(const Ledger& ledger, std::uint64_t gas) { return ledger.policy().gas_price.fee(gas); }

// Greedily raises sold items' prices while the solution stays an equilibrium.
vda::Solution inflate(vda::Solution sol, const ValuationMatrix& v, std::span<const Money> reserves) {
  for (ItemId j = 1; j < sol.prices.size(); ++j) {
    if (std::find(sol.assignment.begin(), sol.assignment.end(), j) == sol.assignment.end()) {
      continue;
    }
    for (;;) {
      ++sol.prices[j];
      if (!vda::is_equilibrium(sol, v, reserves)) {
        --sol.prices[j];
        break;
      }
    }
  }
  sol.score = vda::score_of(v, sol.assignment, sol.prices);
  return sol;
}

}  // namespace

vda::Solution SolverAgent::propose(const Ledger& ledger) const {
  if (behaviour == SolverBehaviour::kFixed) {
    return fixed;
  }
  const auto v = verifier::rebuild_valuations(ledger);
  const auto items = ledger.auction_items();
  vda::Solution sol = verifier::best_response(std::nullopt, v, items);
  switch (behaviour) {
    case SolverBehaviour::kHonest:
    case SolverBehaviour::kFixed:
      break;
    case SolverBehaviour::kEquivocating:
      sol.score += 1;
      break;
    case SolverBehaviour::kNonVcg:
      sol = inflate(std::move(sol), v, vda::reservation_prices(items));
      break;
  }
  return sol;
}

PreparationReport run_preparation(Ledger& ledger, AuthoritySet& authorities, std::vector<SellerAgent>& sellers,
                                  std::vector<BidderAgent>& bidders) {
  if (ledger.phase() == ledger::Phase::kSetup) {
    ledger.advance_to_next_phase();
  }
  if (ledger.phase() != ledger::Phase::kCommit) {
    throw Error(ErrorCode::kScenarioInvalid, "preparation needs a fresh ledger");
  }
  const auto& gas = ledger.policy().gas;
  PreparationReport rep;
  for (auto& s : sellers) {
    for (auto& o : s.offers) {
      top_up(ledger, s.wallet(), fee(ledger, gas.submit_item.at(0)));
      if (ledger.submit_item(s.wallet(), o.characteristics, commit_min_price(o.reservation_price, o.salt), &o.id).ok()) {
        ++rep.items_submitted;
      }
    }
  }
  for (auto& b : bidders) {
    top_up(ledger, b.wallet(), b.deposit() + fee(ledger, gas.commit.at(0)));
    if (b.commit(ledger).ok()) {
      ++rep.commits;
    }
  }
  // Issuance happens off chain: each authority answers the requests it sees
  // on the ledger, and the answers are routed back by request number.
  for (auto& a : authorities.members) {
    for (auto& b : bidders) {
      if (!b.request()) {
        continue;
      }
      if (const auto partial = a.issue(ledger, *b.request())) {
        b.receive(*partial);
      }
    }
  }
  for (auto& b : bidders) {
    const auto vk = authorities.verify_keys.find(b.deposit());
    if (b.request() && vk != authorities.verify_keys.end() && b.aggregate(authorities.threshold, vk->second)) {
      ++rep.credentials;
    }
  }
  ledger.advance_to_next_phase();
  for (const auto& b : bidders) {
    if (b.behaviour() == BidderBehaviour::kHonest && b.has_credential()) {
      top_up(ledger, b.fresh_address(), fee(ledger, gas.reveal.at(0)));
      if (b.reveal(ledger).ok()) {
        ++rep.reveals;
      }
    }
  }
  for (auto& s : sellers) {
    for (const auto& o : s.offers) {
      if (o.opens && o.id != 0) {
        top_up(ledger, s.wallet(), fee(ledger, gas.reveal_min_price.at(0)));
        if (ledger.reveal_min_price(s.wallet(), o.id, o.reservation_price, o.salt).ok()) {
          ++rep.items_opened;
        }
      }
    }
  }
  ledger.advance_to_next_phase();
  return rep;
}

ExecutionReport run_execution(Ledger& ledger, const SolverAgent& solver, std::span<const AuditorAgent> auditors) {
  using Clock = std::chrono::steady_clock;
  if (ledger.phase() != ledger::Phase::kSolve) {
    throw Error(ErrorCode::kScenarioInvalid, "execution starts in the SOLVE phase");
  }
  const auto& gas = ledger.policy().gas;
  const auto items = ledger.auction_items();
  const std::size_t bidders = ledger.revealed_bids().size();
  const auto v = verifier::rebuild_valuations(ledger);
  ExecutionReport rep;

  const auto post = [&](const Address& who, const vda::Solution& sol) {
    const Money collateral = ledger.min_collateral();
    top_up(ledger, who, collateral + fee(ledger, gas.submit_solution.at(items.size())));
    if (ledger.submit_solution(who, sol, collateral).ok()) {
      ++rep.submissions;
    }
  };
  const auto prove = [&](const Address& who, const ledger::MisbehaviourProof& p) {
    using Kind = ledger::MisbehaviourProof::Kind;
    const std::uint64_t g = p.kind == Kind::kWrongAssignment ? gas.wrong_assignment.at(0)
                            : p.kind == Kind::kWrongPrice    ? gas.wrong_price.at(0)
                                                             : gas.wrong_score.at(bidders);
    top_up(ledger, who, fee(ledger, g));
    if (ledger.submit_proof(who, p).ok()) {
      ++rep.proofs_accepted;
    } else {
      ++rep.proofs_rejected;
    }
  };

  const auto t0 = Clock::now();
  const vda::Solution proposal = solver.propose(ledger);
  rep.solve_ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
  post(solver.wallet, proposal);

  // Off-chain verdicts are cached per candidate; only ledger calls repeat.
  std::optional<vda::Solution> judged;
  std::optional<ledger::MisbehaviourProof> proof;
  bool is_vcg = true;
  std::set<std::size_t> griefed;
  while (ledger.phase() != ledger::Phase::kFinal) {
    for (std::size_t a = 0; a < auditors.size() && ledger.phase() != ledger::Phase::kFinal; ++a) {
      const auto& cand = ledger.candidate();
      if (cand && (!judged || !(*judged == cand->solution))) {
        const auto t1 = Clock::now();
        proof = verifier::audit(cand->solution, v, items);
        is_vcg = proof || verifier::check_vcg(cand->solution, v, items);
        rep.audit_ms += std::chrono::duration<double, std::milli>(Clock::now() - t1).count();
        judged = cand->solution;
        griefed.clear();
      }
      if (auditors[a].behaviour == AuditorBehaviour::kGriefing) {
        if (cand && !proof && !griefed.contains(a)) {
          griefed.insert(a);
          prove(auditors[a].wallet, ledger::MisbehaviourProof{});
        }
        continue;
      }
      if (!cand) {
        post(auditors[a].wallet, verifier::best_response(std::nullopt, v, items));
      } else if (proof) {
        prove(auditors[a].wallet, *proof);
      } else if (!is_vcg) {
        const auto better = verifier::best_response(cand->solution, v, items);
        if (better.score > cand->solution.score) {
          post(auditors[a].wallet, better);
        }
      }
    }
    if (ledger.phase() != ledger::Phase::kFinal) {
      ledger.advance_block();
    }
  }
  rep.final_solution = ledger.final_solution();
  return rep;
}

}  // namespace blindmarket::actors
