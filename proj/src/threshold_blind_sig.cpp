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

#include "blindmarket/threshold_blind_sig.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "blindmarket/errors.hpp"

namespace blindmarket::tbs {

bool valid_threshold(std::uint32_t t, std::uint32_t n) { return t >= 1 && t <= n && 2 * t > n; }

KeyShares ttp_keygen(const GroupParams& params, std::uint32_t t, std::uint32_t n, Rng& rng) {
  if (!valid_threshold(t, n)) {
    throw Error(ErrorCode::kInvalidThreshold,
                "need 1 <= t <= n and t > n/2, got t=" + std::to_string(t) + " n=" + std::to_string(n));
  }
  std::vector<Scalar> coeffs(t);
  for (auto& c : coeffs) {
    c = Scalar::random(rng);
  }
  KeyShares out;
  out.threshold = t;
  out.authorities = n;
  out.master_secret = coeffs[0];
  out.master_verify_key = params.g2 * coeffs[0];
  out.shares.reserve(n);
  for (std::uint32_t i = 1; i <= n; ++i) {
    // Horner evaluation of v(i).
    const Scalar x = Scalar::from_u64(i);
    Scalar acc = Scalar::zero();
    for (std::size_t k = coeffs.size(); k-- > 0;) {
      acc = acc * x + coeffs[k];
    }
    out.shares.push_back(KeyShare{i, acc, params.g2 * acc});
  }
  return out;
}

BlindingState prepare_blind_sign(std::span<const std::uint8_t> message, Rng& rng) {
  BlindingState st;
  st.message.assign(message.begin(), message.end());
  st.blinding_factor = Scalar::random_nonzero(rng);
  st.blinded_point = hash_to_g1(message) * st.blinding_factor;
  return st;
}

PartialBlindSig blind_sign(AuthorityIndex index, const Scalar& secret_share, const G1Element& h_tilde) {
  return PartialBlindSig{index, h_tilde * secret_share};
}

G1Element unblind(const Scalar& r, const G1Element& sigma_tilde) {
  if (r.is_zero()) {
    throw Error(ErrorCode::kZeroBlindingFactor, "blinding factor must be nonzero");
  }
  return sigma_tilde * r.inverse();
}

Scalar lagrange_at_zero(AuthorityIndex index, std::span<const AuthorityIndex> indices) {
  Scalar num = Scalar::one();
  Scalar den = Scalar::one();
  const Scalar xi = Scalar::from_u64(index);
  for (const AuthorityIndex j : indices) {
    if (j == index) {
      continue;
    }
    const Scalar xj = Scalar::from_u64(j);
    num = num * (Scalar::zero() - xj);
    den = den * (xi - xj);
  }
  return num * den.inverse();
}

Signature agg_sig(std::span<const std::pair<AuthorityIndex, G1Element>> partials, std::uint32_t t) {
  if (partials.size() != t) {
    throw Error(ErrorCode::kWrongCount,
                "expected " + std::to_string(t) + " partials, got " + std::to_string(partials.size()));
  }
  std::vector<AuthorityIndex> indices;
  indices.reserve(partials.size());
  std::set<AuthorityIndex> seen;
  for (const auto& [idx, sig] : partials) {
    if (idx == 0) {
      throw Error(ErrorCode::kIndexOutOfRange, "authority indices start at 1");
    }
    if (!seen.insert(idx).second) {
      throw Error(ErrorCode::kDuplicateIndex, "authority " + std::to_string(idx) + " appears twice");
    }
    indices.push_back(idx);
  }
  G1Element acc = G1Element::identity();
  for (const auto& [idx, sig] : partials) {
    acc = acc + sig * lagrange_at_zero(idx, indices);
  }
  return Signature{acc};
}

bool verify(const G2Element& y, std::span<const std::uint8_t> message, const Signature& sigma) {
  if (!sigma.sigma.is_on_curve() || sigma.sigma.is_identity() || y.is_identity()) {
    return false;
  }
  const std::pair<G1Element, G2Element> terms[] = {
      {hash_to_g1(message), y},
      {-sigma.sigma, GroupParams::bn254().g2},
  };
  return pairing_product_is_one(terms);
}

DenominationKeys keygen_per_denomination(const GroupParams& params, std::uint32_t t, std::uint32_t n,
                                         std::span<const std::int64_t> denominations, Rng& rng) {
  DenominationKeys keys;
  for (const std::int64_t d : denominations) {
    keys.emplace(d, ttp_keygen(params, t, n, rng));
  }
  return keys;
}

}  // namespace blindmarket::tbs
