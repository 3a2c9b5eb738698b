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
#include <utility>
#include <vector>

#include "blindmarket/bytes.hpp"
#include "blindmarket/pairing_group.hpp"
#include "blindmarket/rng.hpp"

namespace blindmarket::tbs {

// Threshold blind BLS signatures. Keys are dealt by a trusted dealer; users
// blind a message, collect t partial signatures, unblind and combine them
// with Lagrange coefficients; the result verifies under the master key.

using AuthorityIndex = std::uint32_t;

struct KeyShare {
  AuthorityIndex index = 0;  // 1..n
  Scalar secret;
  G2Element verify_key;
};

struct KeyShares {
  std::uint32_t threshold = 0;
  std::uint32_t authorities = 0;
  Scalar master_secret;
  G2Element master_verify_key;
  std::vector<KeyShare> shares;
};

struct BlindingState {
  Bytes message;
  Scalar blinding_factor;
  G1Element blinded_point;
};

struct PartialBlindSig {
  AuthorityIndex authority_index = 0;
  G1Element sigma_tilde;
};

struct Signature {
  G1Element sigma;

  bool operator==(const Signature&) const = default;
};

/// True when a (t, n) pair is acceptable: 1 <= t <= n and t > n / 2.
bool valid_threshold(std::uint32_t t, std::uint32_t n);

/// Deals a degree-(t-1) polynomial with v(0) = x and hands share v(i) to authority i.
/// Throws InvalidThreshold.
KeyShares ttp_keygen(const GroupParams& params, std::uint32_t t, std::uint32_t n, Rng& rng);

BlindingState prepare_blind_sign(std::span<const std::uint8_t> message, Rng& rng);

PartialBlindSig blind_sign(AuthorityIndex index, const Scalar& secret_share, const G1Element& h_tilde);

inline PartialBlindSig blind_sign(const KeyShare& share, const G1Element& h_tilde) {
  return blind_sign(share.index, share.secret, h_tilde);
}

/// Removes the blinding: sigma_tilde^(1/r). Throws ZeroBlindingFactor.
G1Element unblind(const Scalar& r, const G1Element& sigma_tilde);

/// Lagrange coefficient at zero for `index` over the interpolation set `indices`.
Scalar lagrange_at_zero(AuthorityIndex index, std::span<const AuthorityIndex> indices);

/// Combines exactly t partial signatures. Throws WrongCount, DuplicateIndex, IndexOutOfRange.
Signature agg_sig(std::span<const std::pair<AuthorityIndex, G1Element>> partials, std::uint32_t t);

/// e(H(m), y) == e(sigma, g2), evaluated as a single product check.
bool verify(const G2Element& y, std::span<const std::uint8_t> message, const Signature& sigma);

/// One independent key set per deposit denomination.
using DenominationKeys = std::map<std::int64_t, KeyShares>;

DenominationKeys keygen_per_denomination(const GroupParams& params, std::uint32_t t, std::uint32_t n,
                                         std::span<const std::int64_t> denominations, Rng& rng);

}  // namespace blindmarket::tbs
