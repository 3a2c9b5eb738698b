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
#include <map>
#include <span>
#include <variant>
#include <vector>

#include "blindmarket/bytes.hpp"

namespace blindmarket {

/// Money is counted in integer minimal units.
using Money = std::int64_t;
using ItemId = std::uint32_t;  // 1..I, 0 is the null item

struct Item {
  ItemId id = 0;
  std::vector<std::int64_t> characteristics;
  Money reservation_price = 0;
  Digest min_price_commitment{};
};

/// "At least" constraints per characteristic and one budget for every
/// item that meets all of them.
struct GeneralBid {
  std::vector<std::int64_t> constraints;
  Money budget = 0;

  bool operator==(const GeneralBid&) const = default;
};

struct SpecificBid {
  std::map<ItemId, Money> valuations;

  bool operator==(const SpecificBid&) const = default;
};

using Bid = std::variant<GeneralBid, SpecificBid>;

/// B x (I+1) valuations, column 0 is the null item and always 0.
class ValuationMatrix {
 public:
  ValuationMatrix() = default;
  ValuationMatrix(std::size_t bidders, std::size_t items);

  std::size_t bidders() const { return bidders_; }
  std::size_t items() const { return items_; }
  std::size_t cols() const { return items_ + 1; }

  Money at(std::size_t b, std::size_t i) const { return values_[b * cols() + i]; }
  /// Sets v_bi for a real item (i >= 1).
  void set(std::size_t b, std::size_t i, Money v);

  std::span<const Money> row(std::size_t b) const { return {values_.data() + b * cols(), cols()}; }
  /// Appends a row; row[0] must be 0 and length I+1.
  void add_row(std::span<const Money> row);

  Money max_value() const;

 private:
  std::size_t bidders_ = 0;
  std::size_t items_ = 0;
  std::vector<Money> values_;
};

/// v_bi = budget when every characteristic meets its constraint, 0 otherwise.
/// Throws DimensionMismatch.
std::vector<Money> derive_valuations(const GeneralBid& bid, std::span<const Item> items);

/// Row for a specific bid; items missing from the map are valued 0.
/// Throws DimensionMismatch on an unknown item id, MalformedBid on a negative value.
std::vector<Money> specific_valuations(const SpecificBid& bid, std::size_t item_count);

std::vector<Money> valuation_row(const Bid& bid, std::span<const Item> items);

/// Checks a bid against the deposit it is backed by: a general bid's budget
/// must equal the deposit, specific valuations may not exceed it.
bool bid_within_deposit(const Bid& bid, Money deposit);

Digest commit_min_price(Money r, std::span<const std::uint8_t> salt);
bool open_min_price(const Digest& commitment, Money r, std::span<const std::uint8_t> salt);

/// Cash-like denominations: {1, 2, 5} x 10^k for k in [0, max_exponent].
class DenominationSet {
 public:
  DenominationSet();
  explicit DenominationSet(std::vector<Money> values);

  static DenominationSet standard(int max_exponent = 15);
  /// Every amount with at most `digits` significant digits, up to 10^max_exponent scale.
  static DenominationSet significant(int digits, int max_exponent = 12);

  bool contains(Money d) const;
  std::span<const Money> values() const { return values_; }

  /// Greedy split of an amount into denominations, largest first. Empty if
  /// the amount cannot be represented exactly.
  std::vector<Money> split(Money amount) const;

 private:
  std::vector<Money> values_;  // sorted ascending
};

}  // namespace blindmarket
