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

#include "blindmarket/vda_solver.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <string>

#include "blindmarket/errors.hpp"

namespace blindmarket::vda {
namespace {

constexpr std::int64_t kNoBidder = -1;

void check_prices(std::span<const Money> prices, std::span<const Money> reserves) {
  if (prices.size() != reserves.size() || prices.empty()) {
    throw Error(ErrorCode::kDimensionMismatch, "price and reserve vectors differ in length");
  }
}

// Augmenting-path matcher over the demand graph. Bidders on the left, real
// items on the right; visit order is by ascending index so results are
// deterministic.
class Matcher {
 public:
  Matcher(std::span<const ItemSet> demands, std::size_t item_count)
      : demands_(demands), x_(demands.size(), 0), owner_(item_count + 1, kNoBidder), seen_(item_count + 1, 0) {}

  void seed(const Assignment& warm) {
    if (warm.size() != x_.size()) {
      return;
    }
    for (std::size_t b = 0; b < warm.size(); ++b) {
      const ItemId i = warm[b];
      if (i != 0 && i < owner_.size() && owner_[i] == kNoBidder &&
          std::binary_search(demands_[b].begin(), demands_[b].end(), i)) {
        x_[b] = i;
        owner_[i] = static_cast<std::int64_t>(b);
      }
    }
  }

  // Tries to match bidder b, possibly rerouting others. With `releasable`,
  // the path may also end by evicting a bidder flagged in it.
  bool augment(std::size_t b, const std::vector<char>* releasable) {
    ++stamp_;
    return dfs(b, releasable);
  }

  // Gives free item i a holder by shifting bidders along an alternating path
  // that ends by freeing an item at its reservation price.
  bool pull(ItemId i, std::span<const std::vector<std::uint32_t>> demanders, std::span<const Money> prices,
            std::span<const Money> reserves) {
    ++stamp_;
    return pull_dfs(i, demanders, prices, reserves);
  }

  Assignment& assignment() { return x_; }
  std::span<const std::int64_t> owners() const { return owner_; }

 private:
  bool dfs(std::size_t b, const std::vector<char>* releasable) {
    for (const ItemId i : demands_[b]) {
      if (i == 0 || seen_[i] == stamp_) {
        continue;
      }
      seen_[i] = stamp_;
      const std::int64_t o = owner_[i];
      bool ok = o == kNoBidder;
      if (!ok && releasable != nullptr && (*releasable)[static_cast<std::size_t>(o)]) {
        x_[static_cast<std::size_t>(o)] = 0;
        ok = true;
      }
      if (!ok) {
        ok = dfs(static_cast<std::size_t>(o), releasable);
      }
      if (ok) {
        x_[b] = i;
        owner_[i] = static_cast<std::int64_t>(b);
        return true;
      }
    }
    return false;
  }

  bool pull_dfs(ItemId i, std::span<const std::vector<std::uint32_t>> demanders, std::span<const Money> prices,
                std::span<const Money> reserves) {
    seen_[i] = stamp_;
    for (const std::uint32_t b : demanders[i]) {
      const ItemId j = x_[b];
      if (j != 0 && seen_[j] == stamp_) {
        continue;
      }
      x_[b] = i;
      owner_[i] = b;
      if (j == 0) {
        return true;
      }
      owner_[j] = kNoBidder;
      if (prices[j] == reserves[j] || pull_dfs(j, demanders, prices, reserves)) {
        return true;
      }
      owner_[j] = b;
      x_[b] = j;
      owner_[i] = kNoBidder;
    }
    return false;
  }

  std::span<const ItemSet> demands_;
  Assignment x_;
  std::vector<std::int64_t> owner_;
  std::vector<std::uint64_t> seen_;
  std::uint64_t stamp_ = 0;
};

std::vector<std::int64_t> owners_of(const Assignment& x, std::size_t item_count) {
  std::vector<std::int64_t> owner(item_count + 1, kNoBidder);
  for (std::size_t b = 0; b < x.size(); ++b) {
    if (x[b] != 0) {
      owner[x[b]] = static_cast<std::int64_t>(b);
    }
  }
  return owner;
}

void demand_into(std::span<const Money> row, std::span<const Money> prices, ItemSet& out) {
  out.clear();
  Money best = std::numeric_limits<Money>::min();
  for (std::size_t i = 0; i < row.size(); ++i) {
    const Money net = row[i] - prices[i];
    if (net > best) {
      best = net;
      out.clear();
    }
    if (net == best) {
      out.push_back(static_cast<ItemId>(i));
    }
  }
}

Money ceil_div(Money a, Money b) { return (a + b - 1) / b; }

// Number of delta_p decrements of the excess-supply items that can be applied
// before any demand set changes or any price reaches its reserve.
Money steps_until_change(const ValuationMatrix& v, const Iteration& it, std::span<const Money> prices,
                         std::span<const Money> reserves, Money delta_p) {
  std::vector<char> in_excess(prices.size(), 0);
  Money k = std::numeric_limits<Money>::max();
  for (const ItemId i : it.excess) {
    in_excess[i] = 1;
    k = std::min(k, ceil_div(prices[i] - reserves[i], delta_p));
  }
  for (std::size_t b = 0; b < v.bidders() && k > 1; ++b) {
    const ItemSet& d = it.demands[b];
    bool any_excess = false;
    bool any_fixed = false;
    for (const ItemId i : d) {
      (in_excess[i] != 0 ? any_excess : any_fixed) = true;
    }
    if (any_excess && any_fixed) {
      return 1;
    }
    if (any_excess) {
      continue;  // every demanded item moves together with all other movers
    }
    const auto row = v.row(b);
    const Money best = row[d.front()] - prices[d.front()];
    for (const ItemId j : it.excess) {
      k = std::min(k, ceil_div(best - (row[j] - prices[j]), delta_p));
    }
  }
  return std::max<Money>(k, 1);
}

}  // namespace

std::vector<Money> reservation_prices(std::span<const Item> items) {
  std::vector<Money> r(items.size() + 1, 0);
  for (std::size_t k = 0; k < items.size(); ++k) {
    r[k + 1] = items[k].reservation_price;
  }
  return r;
}

ItemSet demand_correspondence(std::span<const Money> row, std::span<const Money> prices) {
  if (row.size() != prices.size() || row.empty()) {
    throw Error(ErrorCode::kDimensionMismatch, "valuation row and price vector differ in length");
  }
  ItemSet out;
  demand_into(row, prices, out);
  return out;
}

Assignment provisional_assignment(std::span<const ItemSet> demands, std::size_t item_count) {
  Matcher m(demands, item_count);
  for (std::size_t b = 0; b < demands.size(); ++b) {
    m.augment(b, nullptr);
  }
  return m.assignment();
}

Assignment provisional_assignment(std::span<const ItemSet> demands, std::span<const Money> prices,
                                  std::span<const Money> reserves, const Assignment& warm) {
  check_prices(prices, reserves);
  const std::size_t item_count = prices.size() - 1;
  Matcher m(demands, item_count);
  m.seed(warm);

  std::vector<char> optional(demands.size(), 0);
  for (std::size_t b = 0; b < demands.size(); ++b) {
    optional[b] = static_cast<char>(!demands[b].empty() && demands[b].front() == 0);
  }
  for (std::size_t b = 0; b < demands.size(); ++b) {
    if (!optional[b] && m.assignment()[b] == 0) {
      m.augment(b, &optional);
    }
  }
  for (std::size_t b = 0; b < demands.size(); ++b) {
    if (m.assignment()[b] == 0) {
      m.augment(b, nullptr);
    }
  }

  std::vector<std::vector<std::uint32_t>> demanders(item_count + 1);
  for (std::size_t b = 0; b < demands.size(); ++b) {
    for (const ItemId i : demands[b]) {
      if (i != 0) {
        demanders[i].push_back(static_cast<std::uint32_t>(b));
      }
    }
  }
  for (ItemId i = 1; i <= item_count; ++i) {
    if (prices[i] > reserves[i] && m.owners()[i] == kNoBidder && !demanders[i].empty()) {
      m.pull(i, demanders, prices, reserves);
    }
  }
  return m.assignment();
}

ItemSet universally_allocated(std::span<const Money> prices, std::span<const ItemSet> demands,
                              const Assignment& assignment, std::span<const Money> reserves) {
  check_prices(prices, reserves);
  const std::size_t item_count = prices.size() - 1;
  const auto owner = owners_of(assignment, item_count);
  std::vector<char> in(item_count + 1, 0);
  std::vector<char> expanded(assignment.size(), 0);
  std::vector<ItemId> queue;
  const auto add = [&](ItemId i) {
    if (i != 0 && !in[i]) {
      in[i] = 1;
      queue.push_back(i);
    }
  };
  for (ItemId i = 1; i <= item_count; ++i) {
    if (prices[i] == reserves[i]) {
      add(i);
    }
  }
  for (std::size_t b = 0; b < assignment.size(); ++b) {
    if (assignment[b] == 0) {
      for (const ItemId i : demands[b]) {
        add(i);
      }
    }
  }
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const std::int64_t o = owner[queue[head]];
    if (o == kNoBidder || expanded[static_cast<std::size_t>(o)]) {
      continue;
    }
    expanded[static_cast<std::size_t>(o)] = 1;
    for (const ItemId j : demands[static_cast<std::size_t>(o)]) {
      add(j);
    }
  }
  std::sort(queue.begin(), queue.end());
  return queue;
}

ItemSet excess_supply(std::span<const Money> prices, const ItemSet& universally, std::span<const Money> reserves) {
  check_prices(prices, reserves);
  ItemSet out;
  for (ItemId i = 1; i < prices.size(); ++i) {
    if (prices[i] > reserves[i] && !std::binary_search(universally.begin(), universally.end(), i)) {
      out.push_back(i);
    }
  }
  return out;
}

Iteration vda_iteration(const ValuationMatrix& v, std::span<const Money> prices, std::span<const Money> reserves,
                        const Assignment& warm) {
  check_prices(prices, reserves);
  if (v.cols() != prices.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "valuation matrix and price vector differ in item count");
  }
  Iteration it;
  it.demands.resize(v.bidders());
  for (std::size_t b = 0; b < v.bidders(); ++b) {
    demand_into(v.row(b), prices, it.demands[b]);
  }
  it.assignment = provisional_assignment(it.demands, prices, reserves, warm);
  it.universally = universally_allocated(prices, it.demands, it.assignment, reserves);
  it.excess = excess_supply(prices, it.universally, reserves);
  return it;
}

Money initial_price(const ValuationMatrix& v, const VdaConfig& cfg) {
  switch (cfg.p_max_policy) {
    case PMaxPolicy::kMaxValuation:
      return v.max_value();
    case PMaxPolicy::kFixed:
      if (cfg.fixed_p_max < 0) {
        throw Error(ErrorCode::kInvalidPolicy, "fixed p_max must be non-negative");
      }
      return cfg.fixed_p_max;
  }
  throw Error(ErrorCode::kInvalidPolicy, "unknown p_max policy");
}

Solution run_vda(const ValuationMatrix& v, std::span<const Item> items, const VdaConfig& cfg, VdaStats* stats) {
  const auto reserves = reservation_prices(items);
  return run_vda(v, reserves, cfg, stats);
}

Solution run_vda(const ValuationMatrix& v, std::span<const Money> reserves, const VdaConfig& cfg, VdaStats* stats) {
  if (cfg.delta_p < 1) {
    throw Error(ErrorCode::kInvalidPolicy, "delta_p must be at least 1");
  }
  if (reserves.size() != v.cols() || v.items() == 0 || v.bidders() == 0) {
    throw Error(ErrorCode::kDimensionMismatch, "need at least one bidder and one item with matching reserves");
  }
  const Money p_max = initial_price(v, cfg);
  PriceVector p(v.cols(), 0);
  for (std::size_t i = 1; i < p.size(); ++i) {
    if (reserves[i] < 0) {
      throw Error(ErrorCode::kDimensionMismatch, "negative reservation price");
    }
    p[i] = std::max(p_max, reserves[i]);
  }
  VdaStats local;
  Assignment warm;
  for (;;) {
    Iteration it = vda_iteration(v, p, reserves, warm);
    ++local.rounds;
    if (it.excess.empty()) {
      if (stats != nullptr) {
        *stats = local;
      }
      const Money s = score_of(v, it.assignment, p);
      return Solution{std::move(it.assignment), std::move(p), s};
    }
    const Money k = cfg.fast_forward ? steps_until_change(v, it, p, reserves, cfg.delta_p) : 1;
    for (const ItemId i : it.excess) {
      p[i] = std::max(reserves[i], p[i] - k * cfg.delta_p);
    }
    local.steps += static_cast<std::uint64_t>(k);
    warm = std::move(it.assignment);
  }
}

Money score_of(const ValuationMatrix& v, const Assignment& x, std::span<const Money> prices) {
  Money s = 0;
  for (std::size_t b = 0; b < x.size(); ++b) {
    s += v.at(b, x[b]) - prices[x[b]];
  }
  return s;
}

Money surplus_of(const ValuationMatrix& v, const Assignment& x, std::span<const Money> reserves) {
  Money s = 0;
  for (std::size_t b = 0; b < x.size(); ++b) {
    if (x[b] != 0) {
      s += v.at(b, x[b]) - reserves[x[b]];
    }
  }
  return s;
}

bool is_feasible(const Assignment& x, std::size_t item_count) {
  std::vector<char> used(item_count + 1, 0);
  for (const ItemId i : x) {
    if (i > item_count) {
      return false;
    }
    if (i != 0) {
      if (used[i]) {
        return false;
      }
      used[i] = 1;
    }
  }
  return true;
}

bool is_equilibrium(const Solution& sol, const ValuationMatrix& v, std::span<const Money> reserves) {
  const std::size_t item_count = v.items();
  if (sol.prices.size() != v.cols() || reserves.size() != v.cols() || sol.assignment.size() != v.bidders() ||
      sol.prices[0] != 0 || !is_feasible(sol.assignment, item_count)) {
    return false;
  }
  std::vector<char> assigned(item_count + 1, 0);
  ItemSet d;
  for (std::size_t b = 0; b < v.bidders(); ++b) {
    demand_into(v.row(b), sol.prices, d);
    if (!std::binary_search(d.begin(), d.end(), sol.assignment[b])) {
      return false;
    }
    assigned[sol.assignment[b]] = 1;
  }
  for (std::size_t i = 1; i <= item_count; ++i) {
    if (sol.prices[i] < reserves[i] || (!assigned[i] && sol.prices[i] != reserves[i])) {
      return false;
    }
  }
  return true;
}

namespace {

// Best total surplus over the bidders in `members`, by DP over item subsets.
// When `choice` is given, it receives one maximizing allocation that prefers
// the null item on ties.
Money max_surplus(const ValuationMatrix& v, std::span<const Money> reserves, const std::vector<char>& members,
                  Assignment* choice) {
  const std::size_t items = v.items();
  const std::size_t masks = std::size_t{1} << items;
  const std::size_t bidders = v.bidders();
  // best[k][mask]: max surplus of bidders k.. using items outside mask.
  std::vector<std::vector<Money>> best(bidders + 1, std::vector<Money>(masks, 0));
  for (std::size_t k = bidders; k-- > 0;) {
    for (std::size_t mask = 0; mask < masks; ++mask) {
      Money top = best[k + 1][mask];
      if (members[k]) {
        for (std::size_t i = 1; i <= items; ++i) {
          const std::size_t bit = std::size_t{1} << (i - 1);
          const Money gain = v.at(k, i) - reserves[i];
          if ((mask & bit) == 0 && gain > 0) {
            top = std::max(top, gain + best[k + 1][mask | bit]);
          }
        }
      }
      best[k][mask] = top;
    }
  }
  if (choice != nullptr) {
    choice->assign(bidders, 0);
    std::size_t mask = 0;
    for (std::size_t k = 0; k < bidders; ++k) {
      if (best[k][mask] == best[k + 1][mask]) {
        continue;
      }
      for (std::size_t i = 1; i <= items; ++i) {
        const std::size_t bit = std::size_t{1} << (i - 1);
        const Money gain = v.at(k, i) - reserves[i];
        if ((mask & bit) == 0 && gain > 0 && gain + best[k + 1][mask | bit] == best[k][mask]) {
          (*choice)[k] = static_cast<ItemId>(i);
          mask |= bit;
          break;
        }
      }
    }
  }
  return best[0][0];
}

}  // namespace

Solution vcg_oracle(const ValuationMatrix& v, std::span<const Money> reserves) {
  if (v.bidders() > 8 || v.items() > 6) {
    throw Error(ErrorCode::kTooLarge, "oracle enumerates at most 8 bidders and 6 items, got " +
                                          std::to_string(v.bidders()) + "x" + std::to_string(v.items()));
  }
  if (reserves.size() != v.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "reserve vector length");
  }
  std::vector<char> everyone(v.bidders(), 1);
  Solution sol;
  const Money total = max_surplus(v, reserves, everyone, &sol.assignment);
  sol.prices.assign(reserves.begin(), reserves.end());
  sol.prices[0] = 0;
  for (std::size_t b = 0; b < v.bidders(); ++b) {
    const ItemId i = sol.assignment[b];
    if (i == 0) {
      continue;
    }
    std::vector<char> others = everyone;
    others[b] = 0;
    const Money marginal = total - max_surplus(v, reserves, others, nullptr);
    sol.prices[i] = v.at(b, i) - marginal;
  }
  sol.score = score_of(v, sol.assignment, sol.prices);
  return sol;
}

}  // namespace blindmarket::vda
