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

#include "blindmarket/market_model.hpp"

#include <algorithm>
#include <string>
#include <utility>

#include "blindmarket/errors.hpp"

namespace blindmarket {

ValuationMatrix::ValuationMatrix(std::size_t bidders, std::size_t items)
    : bidders_(bidders), items_(items), values_(bidders * (items + 1), 0) {}

void ValuationMatrix::set(std::size_t b, std::size_t i, Money v) {
  if (b >= bidders_ || i == 0 || i > items_) {
    throw Error(ErrorCode::kDimensionMismatch, "valuation index out of range");
  }
  if (v < 0) {
    throw Error(ErrorCode::kMalformedBid, "negative valuation");
  }
  values_[b * cols() + i] = v;
}

void ValuationMatrix::add_row(std::span<const Money> row) {
  if (bidders_ == 0 && values_.empty() && items_ == 0) {
    items_ = row.empty() ? 0 : row.size() - 1;
  }
  if (row.size() != cols()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "row has " + std::to_string(row.size()) + " columns, expected " + std::to_string(cols()));
  }
  if (row[0] != 0) {
    throw Error(ErrorCode::kMalformedBid, "null item valuation must be 0");
  }
  if (std::any_of(row.begin(), row.end(), [](Money v) { return v < 0; })) {
    throw Error(ErrorCode::kMalformedBid, "negative valuation");
  }
  values_.insert(values_.end(), row.begin(), row.end());
  ++bidders_;
}

Money ValuationMatrix::max_value() const {
  return values_.empty() ? 0 : *std::max_element(values_.begin(), values_.end());
}

std::vector<Money> derive_valuations(const GeneralBid& bid, std::span<const Item> items) {
  std::vector<Money> row(items.size() + 1, 0);
  for (std::size_t k = 0; k < items.size(); ++k) {
    const auto& ch = items[k].characteristics;
    if (ch.size() != bid.constraints.size()) {
      throw Error(ErrorCode::kDimensionMismatch, "item " + std::to_string(items[k].id) + " has " +
                                                     std::to_string(ch.size()) + " characteristics, bid has " +
                                                     std::to_string(bid.constraints.size()) + " constraints");
    }
    bool meets = true;
    for (std::size_t c = 0; c < ch.size(); ++c) {
      meets = meets && ch[c] >= bid.constraints[c];
    }
    row[k + 1] = meets ? bid.budget : 0;
  }
  return row;
}

std::vector<Money> specific_valuations(const SpecificBid& bid, std::size_t item_count) {
  std::vector<Money> row(item_count + 1, 0);
  for (const auto& [id, value] : bid.valuations) {
    if (id == 0 || id > item_count) {
      throw Error(ErrorCode::kDimensionMismatch, "unknown item " + std::to_string(id));
    }
    if (value < 0) {
      throw Error(ErrorCode::kMalformedBid, "negative valuation for item " + std::to_string(id));
    }
    row[id] = value;
  }
  return row;
}

std::vector<Money> valuation_row(const Bid& bid, std::span<const Item> items) {
  if (const auto* g = std::get_if<GeneralBid>(&bid)) {
    return derive_valuations(*g, items);
  }
  return specific_valuations(std::get<SpecificBid>(bid), items.size());
}

bool bid_within_deposit(const Bid& bid, Money deposit) {
  if (const auto* g = std::get_if<GeneralBid>(&bid)) {
    return g->budget == deposit &&
           std::all_of(g->constraints.begin(), g->constraints.end(), [](std::int64_t f) { return f >= 0; });
  }
  const auto& s = std::get<SpecificBid>(bid);
  return std::all_of(s.valuations.begin(), s.valuations.end(),
                     [deposit](const auto& kv) { return kv.second >= 0 && kv.second <= deposit; });
}

namespace {

Bytes commitment_preimage(Money r, std::span<const std::uint8_t> salt) {
  ByteWriter w;
  w.raw(as_bytes("blindmarket/min-price/v1"));
  w.u32(static_cast<std::uint32_t>(salt.size()));
  w.raw(salt);
  w.u32(8);
  w.u64(static_cast<std::uint64_t>(r));
  return std::move(w).bytes();
}

}  // namespace

Digest commit_min_price(Money r, std::span<const std::uint8_t> salt) {
  if (r < 0) {
    throw Error(ErrorCode::kMalformedBid, "negative minimum price");
  }
  return sha256(commitment_preimage(r, salt));
}

bool open_min_price(const Digest& commitment, Money r, std::span<const std::uint8_t> salt) {
  return r >= 0 && sha256(commitment_preimage(r, salt)) == commitment;
}

DenominationSet::DenominationSet() : DenominationSet(standard()) {}

DenominationSet::DenominationSet(std::vector<Money> values) : values_(std::move(values)) {
  std::sort(values_.begin(), values_.end());
  values_.erase(std::unique(values_.begin(), values_.end()), values_.end());
  if (values_.empty() || values_.front() <= 0) {
    throw Error(ErrorCode::kInvalidPolicy, "denominations must be positive and non-empty");
  }
}

DenominationSet DenominationSet::standard(int max_exponent) {
  std::vector<Money> v;
  Money scale = 1;
  for (int k = 0; k <= max_exponent; ++k) {
    for (const Money m : {1, 2, 5}) {
      v.push_back(m * scale);
    }
    scale *= 10;
  }
  return DenominationSet(std::move(v));
}

DenominationSet DenominationSet::significant(int digits, int max_exponent) {
  if (digits < 1 || digits > 6) {
    throw Error(ErrorCode::kInvalidPolicy, "significant digits must be in [1, 6]");
  }
  Money top = 1;
  for (int i = 0; i < digits; ++i) {
    top *= 10;
  }
  std::vector<Money> v;
  Money scale = 1;
  for (int k = 0; k <= max_exponent; ++k) {
    for (Money m = 1; m < top; ++m) {
      v.push_back(m * scale);
    }
    scale *= 10;
  }
  return DenominationSet(std::move(v));
}

bool DenominationSet::contains(Money d) const { return std::binary_search(values_.begin(), values_.end(), d); }

std::vector<Money> DenominationSet::split(Money amount) const {
  std::vector<Money> out;
  for (auto it = values_.rbegin(); it != values_.rend() && amount > 0; ++it) {
    while (amount >= *it) {
      out.push_back(*it);
      amount -= *it;
    }
  }
  if (amount != 0) {
    out.clear();
  }
  return out;
}

}  // namespace blindmarket
