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

#include "blindmarket/verifier.hpp"

#include <algorithm>
#include <map>

#include "blindmarket/errors.hpp"

namespace blindmarket::verifier {

ValuationMatrix rebuild_valuations(std::span<const Bid> bids, std::span<const Item> items,
                                   std::optional<std::span<const ItemId>> submitted_ids) {
  if (submitted_ids && submitted_ids->size() != items.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "item id map does not cover the items");
  }
  std::map<ItemId, ItemId> to_auction;
  if (submitted_ids) {
    for (std::size_t i = 0; i < submitted_ids->size(); ++i) {
      to_auction.emplace((*submitted_ids)[i], static_cast<ItemId>(i + 1));
    }
  }
  ValuationMatrix v(0, items.size());
  for (std::size_t b = 0; b < bids.size(); ++b) {
    std::vector<Money> row(items.size() + 1, 0);
    if (const auto* g = std::get_if<GeneralBid>(&bids[b])) {
      if (!items.empty()) {
        try {
          row = derive_valuations(*g, items);
        } catch (const Error& e) {
          throw Error(ErrorCode::kMalformedBid, "bid " + std::to_string(b) + ": " + e.what());
        }
      }
    } else {
      for (const auto& [id, value] : std::get<SpecificBid>(bids[b]).valuations) {
        if (value < 0) {
          throw Error(ErrorCode::kMalformedBid, "bid " + std::to_string(b) + ": negative valuation");
        }
        if (!submitted_ids) {
          if (id == 0 || id > items.size()) {
            throw Error(ErrorCode::kMalformedBid, "bid " + std::to_string(b) + ": unknown item " + std::to_string(id));
          }
          row[id] = value;
        } else if (const auto it = to_auction.find(id); it != to_auction.end()) {
          row[it->second] = value;
        }
      }
    }
    v.add_row(row);
  }
  return v;
}

ValuationMatrix rebuild_valuations(const ledger::Ledger& ledger) {
  std::vector<Bid> bids;
  for (const auto& r : ledger.revealed_bids()) {
    bids.push_back(r.payload.bid);
  }
  std::vector<ItemId> ids;
  for (ItemId i = 1; i <= ledger.auction_items().size(); ++i) {
    ids.push_back(ledger.submitted_id(i));
  }
  return rebuild_valuations(bids, ledger.auction_items(), std::span<const ItemId>(ids));
}

std::optional<ledger::MisbehaviourProof> audit(const vda::Solution& sol, const ValuationMatrix& v,
                                               std::span<const Item> items) {
  using Kind = ledger::MisbehaviourProof::Kind;
  const std::size_t n_items = items.size();
  if (sol.assignment.size() != v.bidders() || sol.prices.size() != n_items + 1 || v.items() != n_items) {
    throw Error(ErrorCode::kDimensionMismatch, "solution shape does not match the auction");
  }
  std::vector<bool> assigned(n_items + 1, false);
  for (const ItemId x : sol.assignment) {
    if (x > n_items) {
      throw Error(ErrorCode::kDimensionMismatch, "assignment names an unknown item");
    }
    assigned[x] = true;
  }
  for (ItemId i = 1; i <= n_items; ++i) {
    const Money p = sol.prices[i];
    const Money r = items[i - 1].reservation_price;
    if (p < r || (!assigned[i] && p > r)) {
      return ledger::MisbehaviourProof{Kind::kWrongPrice, 0, i};
    }
  }
  for (std::size_t b = 0; b < sol.assignment.size(); ++b) {
    const auto row = v.row(b);
    ItemId best = 0;
    Money best_net = 0;
    for (ItemId j = 1; j <= n_items; ++j) {
      if (row[j] - sol.prices[j] > best_net) {
        best_net = row[j] - sol.prices[j];
        best = j;
      }
    }
    const ItemId held = sol.assignment[b];
    if (best_net > row[held] - sol.prices[held]) {
      return ledger::MisbehaviourProof{Kind::kWrongAssignment, static_cast<std::uint32_t>(b), best};
    }
  }
  if (vda::score_of(v, sol.assignment, sol.prices) != sol.score) {
    return ledger::MisbehaviourProof{Kind::kWrongScore, 0, 0};
  }
  return std::nullopt;
}

bool check_vcg(const vda::Solution& sol, const ValuationMatrix& v, std::span<const Item> items) {
  const auto reserves = vda::reservation_prices(items);
  return vda::vda_iteration(v, sol.prices, reserves).excess.empty();
}

vda::Solution best_response([[maybe_unused]] const std::optional<vda::Solution>& current,
                            const ValuationMatrix& v, std::span<const Item> items) {
  if (v.bidders() == 0 || items.empty()) {
    // Nothing to trade: everyone keeps the null item.
    return vda::Solution{vda::Assignment(v.bidders(), 0), vda::reservation_prices(items), 0};
  }
  return vda::run_vda(v, items);
}

}  // namespace blindmarket::verifier
