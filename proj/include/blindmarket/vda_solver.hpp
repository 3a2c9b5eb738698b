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
#include <span>
#include <vector>

#include "blindmarket/market_model.hpp"

namespace blindmarket::vda {

/// Prices indexed by item, entry 0 is the null item and always 0.
using PriceVector = std::vector<Money>;
/// One item per bidder, 0 means the bidder receives nothing.
using Assignment = std::vector<ItemId>;
/// Sorted item indices, may contain 0.
using ItemSet = std::vector<ItemId>;

struct Solution {
  Assignment assignment;
  PriceVector prices;
  Money score = 0;

  bool operator==(const Solution&) const = default;
};

enum class PMaxPolicy {
  kMaxValuation,  // p_max = max_{b,i} v_bi
  kFixed,         // p_max = VdaConfig::fixed_p_max
};

struct VdaConfig {
  Money delta_p = 1;
  PMaxPolicy p_max_policy = PMaxPolicy::kMaxValuation;
  Money fixed_p_max = 0;
  // Skip runs of iterations in which no demand set can change. The result is
  // identical to stepping by delta_p one iteration at a time.
  bool fast_forward = true;
};

struct VdaStats {
  std::uint64_t rounds = 0;  // loop bodies executed
  std::uint64_t steps = 0;   // price decrements applied, counting skipped ones
};

std::vector<Money> reservation_prices(std::span<const Item> items);

/// Items maximizing v_bi - p_i over I* (never empty).
ItemSet demand_correspondence(std::span<const Money> row, std::span<const Money> prices);

/// Maximum-cardinality matching of bidders to real items in their demand sets.
Assignment provisional_assignment(std::span<const ItemSet> demands, std::size_t item_count);

/// Matching used by the auction loop. Among maximum matchings it prefers one
/// that matches every bidder whose demand set excludes the null item, then one
/// that leaves no above-reserve item free. `warm` seeds the search.
Assignment provisional_assignment(std::span<const ItemSet> demands, std::span<const Money> prices,
                                  std::span<const Money> reserves, const Assignment& warm);

/// Closure seeded with items at reservation price and items demanded by
/// bidders holding the null item; grows by the demand sets of holders.
ItemSet universally_allocated(std::span<const Money> prices, std::span<const ItemSet> demands,
                              const Assignment& assignment, std::span<const Money> reserves);

/// {i : p_i > r_i} minus the universally allocated items.
ItemSet excess_supply(std::span<const Money> prices, const ItemSet& universally, std::span<const Money> reserves);

/// Demand sets, assignment and item classes at one price vector.
struct Iteration {
  std::vector<ItemSet> demands;
  Assignment assignment;
  ItemSet universally;
  ItemSet excess;
};

Iteration vda_iteration(const ValuationMatrix& v, std::span<const Money> prices, std::span<const Money> reserves,
                        const Assignment& warm = {});

Money initial_price(const ValuationMatrix& v, const VdaConfig& cfg);

Solution run_vda(const ValuationMatrix& v, std::span<const Item> items, const VdaConfig& cfg = {},
                 VdaStats* stats = nullptr);
Solution run_vda(const ValuationMatrix& v, std::span<const Money> reserves, const VdaConfig& cfg = {},
                 VdaStats* stats = nullptr);

/// Sum over bidders of v_{b,x_b} - p_{x_b}.
Money score_of(const ValuationMatrix& v, const Assignment& x, std::span<const Money> prices);

/// Sum over winners of v_{b,x_b} - r_{x_b}.
Money surplus_of(const ValuationMatrix& v, const Assignment& x, std::span<const Money> reserves);

bool is_feasible(const Assignment& x, std::size_t item_count);

bool is_equilibrium(const Solution& sol, const ValuationMatrix& v, std::span<const Money> reserves);

/// Exhaustive reference: efficient allocation with Clarke payments,
/// unassigned items at reserve. Throws TooLarge beyond 8 bidders or 6 items.
Solution vcg_oracle(const ValuationMatrix& v, std::span<const Money> reserves);

}  // namespace blindmarket::vda
