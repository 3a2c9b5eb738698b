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

#include <optional>
#include <span>

#include "blindmarket/ledger.hpp"
#include "blindmarket/market_model.hpp"
#include "blindmarket/vda_solver.hpp"

namespace blindmarket::verifier {

/// Valuation rows for `bids` in order. General bids expand against `items`;
/// specific bids name items by submission id, mapped through `submitted_ids`
/// (auction item i has submission id submitted_ids[i-1]). Without a map the
/// ids are auction ids. Valuations for items missing from the
/// map are dropped. Throws MalformedBid.
ValuationMatrix rebuild_valuations(std::span<const Bid> bids, std::span<const Item> items,
                                   std::optional<std::span<const ItemId>> submitted_ids = std::nullopt);

/// Rebuilds from a ledger's public record once reveals have closed.
ValuationMatrix rebuild_valuations(const ledger::Ledger& ledger);

/// First applicable proof against `sol`, checking prices, then assignments,
/// then the score. O(B*I). Throws DimensionMismatch on malformed shapes.
std::optional<ledger::MisbehaviourProof> audit(const vda::Solution& sol, const ValuationMatrix& v,
                                               std::span<const Item> items);

/// True iff a single VDA iteration at `sol.prices` finds no excess supply.
bool check_vcg(const vda::Solution& sol, const ValuationMatrix& v, std::span<const Item> items);

/// The solution a challenger posts in place of `current`. Its score is never
/// lower than that of an equilibrium `current`, and strictly higher when
/// `current` is an equilibrium other than the VCG outcome.
vda::Solution best_response(const std::optional<vda::Solution>& current, const ValuationMatrix& v,
                            std::span<const Item> items);

}  // namespace blindmarket::verifier
