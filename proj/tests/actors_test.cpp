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

#include <gtest/gtest.h>

#include "blindmarket/errors.hpp"
#include "blindmarket/verifier.hpp"
#include "support/instances.hpp"

namespace blindmarket::actors {
namespace {

using ledger::Ledger;
using ledger::Phase;
using ledger::Status;

ledger::Policy policy() {
  ledger::Policy p;
  p.t = 2;
  p.n = 3;
  p.timers = ledger::Timers{4, 4, 4, 4};
  p.gas_price = ledger::GasPrice{1, 1000};
  return p;
}

ledger::AuctionId auction(std::uint8_t tag) {
  ledger::AuctionId id{};
  id.fill(tag);
  return id;
}

struct World {
  Rng rng;
  AuthoritySet authorities;
  Ledger ledger;
  std::vector<SellerAgent> sellers;
  std::vector<BidderAgent> bidders;

  World(std::uint64_t seed, std::vector<Money> denominations)
      : rng(seed),
        authorities(AuthoritySet::generate(policy().t, policy().n, denominations, rng)),
        ledger(auction(0xA0), authorities.verify_keys, policy(), ledger::Address{}, {}) {}

  PreparationReport prepare() { return run_preparation(ledger, authorities, sellers, bidders); }
};

// One seller per item and one specific bidder per valuation row, deposit 100.
World specific_world(std::uint64_t seed, const ValuationMatrix& v, const std::vector<Money>& reserves) {
  World w(seed, {100});
  for (std::size_t j = 1; j < reserves.size(); ++j) {
    w.sellers.emplace_back(std::vector<Offer>{Offer{{}, reserves[j]}}, w.rng);
  }
  for (std::size_t b = 0; b < v.bidders(); ++b) {
    SpecificBid bid;
    for (ItemId j = 1; j <= v.items(); ++j) {
      if (v.at(b, j) > 0) {
        bid.valuations[j] = v.at(b, j);
      }
    }
    w.bidders.emplace_back(bid, 100, w.rng);
  }
  return w;
}

const ValuationMatrix kProofsV = [] {
  ValuationMatrix v;
  v.add_row(std::vector<Money>{0, 70, 40, 50});
  v.add_row(std::vector<Money>{0, 30, 60, 70});
  v.add_row(std::vector<Money>{0, 20, 40, 90});
  return v;
}();
const std::vector<Money> kProofsReserves{0, 40, 50, 70};

TEST(Identity, AddressAndSignature) {
  Rng rng(1);
  const auto a = Identity::generate(rng);
  const auto b = Identity::generate(rng);
  EXPECT_NE(a.address(), b.address());
  EXPECT_EQ(Identity::address_of(a.public_key()), a.address());
  const auto sig = a.sign(as_bytes("hello"));
  EXPECT_TRUE(Identity::verify(a.public_key(), as_bytes("hello"), sig));
  EXPECT_FALSE(Identity::verify(b.public_key(), as_bytes("hello"), sig));
  EXPECT_FALSE(Identity::verify(a.public_key(), as_bytes("hellO"), sig));
}

TEST(Preparation, GeneralAndSpecificPopulation) {
  World w(2, {20, 50});
  for (const std::int64_t gb : {20, 50, 100}) {
    w.sellers.emplace_back(std::vector<Offer>{Offer{{gb}, 10}}, w.rng);
  }
  w.bidders.emplace_back(GeneralBid{{50}, 50}, 50, w.rng);
  w.bidders.emplace_back(GeneralBid{{20}, 20}, 20, w.rng);
  w.bidders.emplace_back(GeneralBid{{100}, 50}, 50, w.rng);
  w.bidders.emplace_back(SpecificBid{{{1, 20}}}, 20, w.rng);
  w.bidders.emplace_back(SpecificBid{{{1, 15}, {2, 30}, {3, 40}}}, 50, w.rng);
  const auto rep = w.prepare();
  EXPECT_EQ(rep.items_submitted, 3U);
  EXPECT_EQ(rep.items_opened, 3U);
  EXPECT_EQ(rep.commits, 5U);
  EXPECT_EQ(rep.credentials, 5U);
  ASSERT_EQ(rep.reveals, 5U);
  EXPECT_EQ(w.ledger.phase(), Phase::kSolve);
  const auto v = verifier::rebuild_valuations(w.ledger);
  EXPECT_EQ(v.at(0, 1), 0);
  EXPECT_EQ(v.at(0, 2), 50);
  EXPECT_EQ(v.at(2, 3), 50);
  EXPECT_EQ(v.at(4, 3), 40);
  for (std::size_t b = 0; b < 5; ++b) {
    for (ItemId i = 0; i <= 3; ++i) {
      EXPECT_EQ(v.at(b, i), w.ledger.valuations().at(b, i));
    }
  }
}

TEST(Preparation, CommitWithoutRevealLeavesDepositStuck) {
  auto w = specific_world(3, kProofsV, kProofsReserves);
  w.bidders.emplace_back(SpecificBid{{{1, 10}}}, 100, w.rng, BidderBehaviour::kCommitNoReveal);
  const auto rep = w.prepare();
  EXPECT_EQ(rep.commits, 4U);
  EXPECT_EQ(rep.reveals, 3U);
  const std::vector<AuditorAgent> auditors{{ledger::Address{0x0A}}};
  run_execution(w.ledger, SolverAgent{ledger::Address{0x05}}, auditors);
  EXPECT_EQ(w.ledger.withdraw(w.bidders.back().wallet()).status, Status::kNothingToWithdraw);
  EXPECT_EQ(w.ledger.withdraw(w.bidders.back().fresh_address()).status, Status::kNothingToWithdraw);
  for (std::size_t b = 0; b < 3; ++b) {
    EXPECT_TRUE(w.ledger.withdraw(w.bidders[b].fresh_address()).ok());
  }
  for (auto& s : w.sellers) {
    w.ledger.withdraw(s.wallet());
  }
  EXPECT_EQ(w.ledger.escrow(), 100);
  EXPECT_TRUE(w.ledger.conserved_at_every_block());
}

TEST(Preparation, AuthorityOutageBlocksCredentials) {
  auto w = specific_world(4, kProofsV, kProofsReserves);
  w.authorities.members[0].set_online(false);
  w.authorities.members[1].set_online(false);
  const auto rep = w.prepare();
  EXPECT_EQ(rep.commits, 3U);
  EXPECT_EQ(rep.credentials, 0U);
  EXPECT_EQ(rep.reveals, 0U);
  EXPECT_TRUE(w.ledger.revealed_bids().empty());
}

TEST(Authority, SignsOnlyRequestedMaterialOnce) {
  auto w = specific_world(5, kProofsV, kProofsReserves);
  w.ledger.advance_to_next_phase();
  auto& a = w.authorities.members[0];
  EXPECT_FALSE(a.issue(w.ledger, 0).has_value());
  w.ledger.mint(w.bidders[0].wallet(), 1'000);
  ASSERT_TRUE(w.bidders[0].commit(w.ledger).ok());
  EXPECT_TRUE(a.issue(w.ledger, 0).has_value());
  EXPECT_FALSE(a.issue(w.ledger, 0).has_value());
  EXPECT_FALSE(a.issue(w.ledger, 1).has_value());
}

TEST(Execution, HonestSolverFinalizesVcgOutcome) {
  Rng rng(6);
  for (int trial = 0; trial < 8; ++trial) {
    const auto b = static_cast<std::size_t>(rng.uniform(1, 4));
    const auto i = static_cast<std::size_t>(rng.uniform(1, 3));
    const auto v = testing::random_matrix(rng, b, i, 20);
    const auto r = testing::random_reserves(rng, i, 10);
    auto w = specific_world(100 + trial, v, r);
    w.prepare();
    const std::vector<AuditorAgent> auditors{{ledger::Address{0x0A}}};
    const auto rep = run_execution(w.ledger, SolverAgent{ledger::Address{0x05}}, auditors);
    ASSERT_TRUE(rep.final_solution.has_value());
    const auto want = vda::vcg_oracle(v, r);
    EXPECT_EQ(rep.final_solution->prices, want.prices) << trial;
    EXPECT_EQ(rep.final_solution->score, want.score) << trial;
    EXPECT_EQ(rep.submissions, 1U);
    EXPECT_EQ(rep.proofs_accepted + rep.proofs_rejected, 0U);
  }
}

TEST(Execution, EquivocatingSolverLosesCollateral) {
  auto w = specific_world(7, kProofsV, kProofsReserves);
  w.prepare();
  const ledger::Address solver{0x05};
  const std::vector<AuditorAgent> auditors{{ledger::Address{0x0A}}};
  const auto rep = run_execution(w.ledger, SolverAgent{solver, SolverBehaviour::kEquivocating}, auditors);
  EXPECT_EQ(rep.proofs_accepted, 1U);
  EXPECT_EQ(rep.submissions, 2U);
  ASSERT_TRUE(rep.final_solution.has_value());
  EXPECT_EQ(*rep.final_solution, vda::run_vda(kProofsV, kProofsReserves));
  EXPECT_EQ(w.ledger.balance(solver), 0);  // funded with exactly fee + collateral
  EXPECT_GT(w.ledger.balance(auditors[0].wallet), 0);
}

TEST(Execution, NonVcgEquilibriumIsOutbid) {
  auto w = specific_world(8, kProofsV, kProofsReserves);
  w.prepare();
  const auto inflated = SolverAgent{ledger::Address{0x05}, SolverBehaviour::kNonVcg}.propose(w.ledger);
  ASSERT_TRUE(vda::is_equilibrium(inflated, kProofsV, kProofsReserves));
  ASSERT_NE(inflated.prices, vda::run_vda(kProofsV, kProofsReserves).prices);
  const std::vector<AuditorAgent> auditors{{ledger::Address{0x0A}}};
  const auto rep = run_execution(w.ledger, SolverAgent{ledger::Address{0x05}, SolverBehaviour::kNonVcg}, auditors);
  EXPECT_EQ(rep.proofs_accepted, 0U);
  EXPECT_EQ(rep.submissions, 2U);
  EXPECT_EQ(*rep.final_solution, vda::run_vda(kProofsV, kProofsReserves));
}

TEST(Execution, GriefingAuditorOnlyBurnsOwnGas) {
  auto w = specific_world(9, kProofsV, kProofsReserves);
  w.prepare();
  const std::vector<AuditorAgent> auditors{{ledger::Address{0x0B}, AuditorBehaviour::kGriefing},
                                           {ledger::Address{0x0A}}};
  const auto rep = run_execution(w.ledger, SolverAgent{ledger::Address{0x05}}, auditors);
  EXPECT_EQ(rep.proofs_rejected, 1U);
  EXPECT_EQ(rep.proofs_accepted, 0U);
  EXPECT_EQ(*rep.final_solution, vda::run_vda(kProofsV, kProofsReserves));
  EXPECT_GT(w.ledger.gas_used(auditors[0].wallet), 0U);
}

TEST(Claim, WinnerNonWinnerAndReplay) {
  auto w = specific_world(10, kProofsV, kProofsReserves);
  w.bidders.emplace_back(SpecificBid{{{1, 1}}}, 100, w.rng);  // priced out
  w.prepare();
  const std::vector<AuditorAgent> auditors{{ledger::Address{0x0A}}};
  run_execution(w.ledger, SolverAgent{ledger::Address{0x05}}, auditors);
  const auto& sol = *w.ledger.final_solution();
  ASSERT_NE(sol.assignment[0], 0U);
  ASSERT_NE(sol.assignment[1], 0U);
  ASSERT_EQ(sol.assignment[3], 0U);

  Rng seller_rng(11);
  const auto c0 = Challenge::issue(w.ledger.auction_id(), sol.assignment[0], seller_rng);
  const auto c1 = Challenge::issue(w.ledger.auction_id(), sol.assignment[1], seller_rng);
  const Claim claim = w.bidders[0].claim_item(w.ledger, c0);
  EXPECT_TRUE(verify_claim(w.ledger, c0, claim));
  Claim replay = claim;
  replay.item = c1.item;
  EXPECT_FALSE(verify_claim(w.ledger, c1, replay));
  try {
    w.bidders[3].claim_item(w.ledger, c0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotWinner);
  }
  EXPECT_THROW(w.bidders[1].claim_item(w.ledger, c0), Error);
}

TEST(Unlinkability, CommitOrderDoesNotChangeReveals) {
  const auto run = [](bool reversed) {
    auto w = specific_world(12, kProofsV, kProofsReserves);
    if (reversed) {
      std::reverse(w.bidders.begin(), w.bidders.end());
    }
    w.prepare();
    std::set<std::pair<ledger::Address, ledger::Nonce>> out;
    for (const auto& r : w.ledger.revealed_bids()) {
      out.emplace(r.addr, r.k);
    }
    return out;
  };
  const auto a = run(false);
  EXPECT_EQ(a.size(), 3U);
  EXPECT_EQ(a, run(true));
}

}  // namespace
}  // namespace blindmarket::actors
