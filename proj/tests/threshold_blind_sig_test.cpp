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

#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <numeric>
#include <optional>
#include <set>
#include <string>

#include "blindmarket/errors.hpp"

namespace blindmarket::tbs {
namespace {

const GroupParams& params() { return GroupParams::bn254(); }

// Recovers v(0) by solving the Vandermonde system for all t coefficients with
// Gaussian elimination; independent of the Lagrange path used by agg_sig.
Scalar constant_term_by_elimination(const std::vector<std::pair<std::uint32_t, Scalar>>& points) {
  const std::size_t t = points.size();
  std::vector<std::vector<Scalar>> m(t, std::vector<Scalar>(t + 1));
  for (std::size_t row = 0; row < t; ++row) {
    Scalar pw = Scalar::one();
    for (std::size_t col = 0; col < t; ++col) {
      m[row][col] = pw;
      pw = pw * Scalar::from_u64(points[row].first);
    }
    m[row][t] = points[row].second;
  }
  for (std::size_t col = 0; col < t; ++col) {
    std::size_t pivot = col;
    while (m[pivot][col].is_zero()) {
      ++pivot;
    }
    std::swap(m[pivot], m[col]);
    const Scalar inv = m[col][col].inverse();
    for (auto& v : m[col]) {
      v = v * inv;
    }
    for (std::size_t row = 0; row < t; ++row) {
      if (row != col && !m[row][col].is_zero()) {
        const Scalar f = m[row][col];
        for (std::size_t k = 0; k <= t; ++k) {
          m[row][k] = m[row][k] - f * m[col][k];
        }
      }
    }
  }
  return m[0][t];
}

std::vector<std::pair<AuthorityIndex, G1Element>> unblinded_partials(const KeyShares& keys,
                                                                     const BlindingState& st,
                                                                     std::span<const AuthorityIndex> who) {
  std::vector<std::pair<AuthorityIndex, G1Element>> out;
  for (const AuthorityIndex i : who) {
    const PartialBlindSig partial = blind_sign(keys.shares[i - 1], st.blinded_point);
    out.emplace_back(partial.authority_index, unblind(st.blinding_factor, partial.sigma_tilde));
  }
  return out;
}

TEST(TtpKeygen, SingleAuthorityShareIsMasterSecret) {
  Rng rng(1);
  const KeyShares keys = ttp_keygen(params(), 1, 1, rng);
  ASSERT_EQ(keys.shares.size(), 1U);
  EXPECT_EQ(keys.shares[0].secret, keys.master_secret);
  EXPECT_EQ(keys.shares[0].verify_key, keys.master_verify_key);
}

TEST(TtpKeygen, AnyThresholdSubsetReconstructsTheSecret) {
  Rng rng(2);
  const KeyShares keys = ttp_keygen(params(), 7, 10, rng);
  std::vector<std::pair<std::uint32_t, Scalar>> low;
  std::vector<std::pair<std::uint32_t, Scalar>> high;
  for (std::uint32_t i = 1; i <= 7; ++i) {
    low.emplace_back(i, keys.shares[i - 1].secret);
  }
  for (std::uint32_t i = 4; i <= 10; ++i) {
    high.emplace_back(i, keys.shares[i - 1].secret);
  }
  const Scalar a = constant_term_by_elimination(low);
  const Scalar b = constant_term_by_elimination(high);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a, keys.master_secret);

  // Lagrange route agrees with elimination.
  std::vector<AuthorityIndex> idx(7);
  std::iota(idx.begin(), idx.end(), 4U);
  Scalar via_lagrange = Scalar::zero();
  for (const auto i : idx) {
    via_lagrange = via_lagrange + lagrange_at_zero(i, idx) * keys.shares[i - 1].secret;
  }
  EXPECT_EQ(via_lagrange, keys.master_secret);
}

TEST(TtpKeygen, VerifyKeysMatchSecretShares) {
  Rng rng(3);
  const KeyShares keys = ttp_keygen(params(), 3, 5, rng);
  EXPECT_EQ(keys.master_verify_key, params().g2 * keys.master_secret);
  for (const auto& share : keys.shares) {
    EXPECT_EQ(share.verify_key, params().g2 * share.secret);
  }
}

TEST(TtpKeygen, RejectsMinorityThreshold) {
  Rng rng(4);
  try {
    ttp_keygen(params(), 5, 10, rng);
    FAIL() << "expected InvalidThreshold";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidThreshold);
  }
  EXPECT_THROW(ttp_keygen(params(), 0, 1, rng), Error);
  EXPECT_THROW(ttp_keygen(params(), 4, 3, rng), Error);
  EXPECT_NO_THROW(ttp_keygen(params(), 6, 10, rng));
  EXPECT_THROW(ttp_keygen(params(), 5, 11, rng), Error);
}

TEST(PrepareBlindSign, FreshBlindingEachCall) {
  Rng rng(5);
  const Bytes m{1, 2, 3};
  std::set<G1Element::Encoding> seen;
  for (int i = 0; i < 100; ++i) {
    const BlindingState st = prepare_blind_sign(m, rng);
    EXPECT_EQ(st.blinded_point, hash_to_g1(m) * st.blinding_factor);
    EXPECT_FALSE(st.blinding_factor.is_zero());
    seen.insert(st.blinded_point.serialize());
  }
  EXPECT_EQ(seen.size(), 100U);
}

TEST(PrepareBlindSign, BlindedPointInSubgroup) {
  Rng rng(6);
  const BlindingState st = prepare_blind_sign(as_bytes("x"), rng);
  EXPECT_TRUE(st.blinded_point.mul_raw(params().prime_order).is_identity());
}

TEST(PrepareBlindSign, IdentityKeyRecoversHash) {
  Rng rng(7);
  const BlindingState st = prepare_blind_sign(as_bytes("identity"), rng);
  const PartialBlindSig partial = blind_sign(1, Scalar::one(), st.blinded_point);
  EXPECT_EQ(unblind(st.blinding_factor, partial.sigma_tilde), hash_to_g1(as_bytes("identity")));
}

TEST(BlindSign, Cases) {
  Rng rng(8);
  const G1Element h = hash_to_g1(as_bytes("h")) * Scalar::random_nonzero(rng);
  EXPECT_TRUE(blind_sign(1, Scalar::zero(), h).sigma_tilde.is_identity());
  const Scalar x = Scalar::random(rng);
  EXPECT_EQ(blind_sign(2, x, params().g1).sigma_tilde, params().g1 * x);
  const G1Element once = blind_sign(3, x, h).sigma_tilde;
  EXPECT_EQ(blind_sign(3, x, h + h).sigma_tilde, once + once);
  EXPECT_EQ(blind_sign(3, x, h).authority_index, 3U);
}

TEST(Unblind, Cases) {
  Rng rng(9);
  const G1Element s = hash_to_g1(as_bytes("s"));
  EXPECT_EQ(unblind(Scalar::one(), s), s);
  const Scalar r = Scalar::random_nonzero(rng);
  const Scalar x = Scalar::random(rng);
  const G1Element hm = hash_to_g1(as_bytes("m"));
  EXPECT_EQ(unblind(r, hm * (r * x)), hm * x);
  try {
    unblind(Scalar::zero(), s);
    FAIL() << "expected ZeroBlindingFactor";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kZeroBlindingFactor);
  }
}

TEST(AggSig, SingleAuthorityIsIdentityAggregation) {
  const G1Element s = hash_to_g1(as_bytes("one"));
  const std::pair<AuthorityIndex, G1Element> one[] = {{1, s}};
  EXPECT_EQ(agg_sig(one, 1).sigma, s);
}

TEST(AggSig, RejectsWrongCountAndDuplicates) {
  const G1Element s = hash_to_g1(as_bytes("dup"));
  std::vector<std::pair<AuthorityIndex, G1Element>> six;
  for (AuthorityIndex i = 1; i <= 6; ++i) {
    six.emplace_back(i, s);
  }
  try {
    agg_sig(six, 7);
    FAIL() << "expected WrongCount";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kWrongCount);
  }
  six.emplace_back(6, s);
  try {
    agg_sig(six, 7);
    FAIL() << "expected DuplicateIndex";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDuplicateIndex);
  }
}

TEST(ThresholdRoundTrip, SubsetIndependenceExhaustiveSmallN) {
  Rng rng(10);
  for (const auto& [t, n] : std::vector<std::pair<std::uint32_t, std::uint32_t>>{{2, 3}, {3, 4}, {3, 5}, {4, 6}}) {
    const KeyShares keys = ttp_keygen(params(), t, n, rng);
    const BlindingState st = prepare_blind_sign(as_bytes("subset"), rng);
    std::vector<AuthorityIndex> all(n);
    std::iota(all.begin(), all.end(), 1U);
    const auto partials = unblinded_partials(keys, st, all);

    std::optional<G1Element::Encoding> reference;
    for (std::uint32_t mask = 0; mask < (1U << n); ++mask) {
      if (static_cast<std::uint32_t>(__builtin_popcount(mask)) != t) {
        continue;
      }
      std::vector<std::pair<AuthorityIndex, G1Element>> subset;
      for (std::uint32_t i = 0; i < n; ++i) {
        if ((mask >> i) & 1U) {
          subset.push_back(partials[i]);
        }
      }
      const auto enc = agg_sig(subset, t).sigma.serialize();
      if (!reference) {
        reference = enc;
        EXPECT_TRUE(verify(keys.master_verify_key, st.message, agg_sig(subset, t)));
      }
      EXPECT_EQ(enc, *reference) << "t=" << t << " n=" << n << " mask=" << mask;
    }
  }
}

TEST(ThresholdRoundTrip, AggregateThenUnblindMatchesUnblindThenAggregate) {
  Rng rng(11);
  const KeyShares keys = ttp_keygen(params(), 3, 5, rng);
  const BlindingState st = prepare_blind_sign(as_bytes("order"), rng);
  std::vector<std::pair<AuthorityIndex, G1Element>> blinded;
  for (AuthorityIndex i : {1U, 3U, 5U}) {
    blinded.emplace_back(i, blind_sign(keys.shares[i - 1], st.blinded_point).sigma_tilde);
  }
  const G1Element late = unblind(st.blinding_factor, agg_sig(blinded, 3).sigma);
  const std::array<AuthorityIndex, 3> who{1, 3, 5};
  const G1Element early = agg_sig(unblinded_partials(keys, st, who), 3).sigma;
  EXPECT_EQ(late, early);
  EXPECT_EQ(early, hash_to_g1(st.message) * keys.master_secret);
}

TEST(Verify, RejectsOtherMessageAndUnderThreshold) {
  Rng rng(12);
  const KeyShares keys = ttp_keygen(params(), 7, 10, rng);
  const BlindingState st = prepare_blind_sign(as_bytes("bid"), rng);
  std::array<AuthorityIndex, 7> who{};
  std::iota(who.begin(), who.end(), 1U);
  const auto partials = unblinded_partials(keys, st, who);
  const Signature sig = agg_sig(partials, 7);
  EXPECT_TRUE(verify(keys.master_verify_key, st.message, sig));
  EXPECT_FALSE(verify(keys.master_verify_key, as_bytes("bie"), sig));

  auto padded = partials;
  padded.back().second = G1Element::identity();
  EXPECT_FALSE(verify(keys.master_verify_key, st.message, agg_sig(padded, 7)));
  EXPECT_FALSE(verify(keys.master_verify_key, st.message, Signature{G1Element::identity()}));
  // A single authority's key does not verify the aggregate.
  EXPECT_FALSE(verify(keys.shares[0].verify_key, st.message, sig));
}

// Sanity-level blindness check: blinded points for two fixed messages have
// indistinguishable low-byte distributions under random blinding.
TEST(Blindness, BlindedPointsLookUniformAcrossMessages) {
  Rng rng(13);
  constexpr int kBuckets = 16;
  constexpr int kSamples = 800;
  std::array<double, kBuckets> a{};
  std::array<double, kBuckets> b{};
  for (int i = 0; i < kSamples; ++i) {
    a[prepare_blind_sign(as_bytes("alpha"), rng).blinded_point.serialize()[31] % kBuckets] += 1;
    b[prepare_blind_sign(as_bytes("omega"), rng).blinded_point.serialize()[31] % kBuckets] += 1;
  }
  // Two-sample chi-square homogeneity statistic, 15 degrees of freedom.
  double chi2 = 0;
  for (int k = 0; k < kBuckets; ++k) {
    const double total = a[k] + b[k];
    const double expected = total / 2;
    if (expected > 0) {
      chi2 += (a[k] - expected) * (a[k] - expected) / expected + (b[k] - expected) * (b[k] - expected) / expected;
    }
  }
  EXPECT_LT(chi2, 37.7);  // p = 0.001 critical value
}

TEST(Unforgeability, UnderThresholdNeverVerifies) {
  Rng rng(14);
  const KeyShares keys = ttp_keygen(params(), 7, 10, rng);
  for (int trial = 0; trial < 1000; ++trial) {
    Bytes m(16);
    rng.fill(m);
    const BlindingState st = prepare_blind_sign(m, rng);
    std::vector<AuthorityIndex> pool(10);
    std::iota(pool.begin(), pool.end(), 1U);
    std::shuffle(pool.begin(), pool.end(), rng.engine());
    pool.resize(6);
    const auto partials = unblinded_partials(keys, st, pool);
    ASSERT_FALSE(verify(keys.master_verify_key, m, agg_sig(partials, 6))) << "trial " << trial;
  }
}

TEST(DenominationKeys, IndependentKeysPerDenomination) {
  Rng rng(15);
  const std::int64_t denoms[] = {1, 5, 10};
  const auto keys = keygen_per_denomination(params(), 2, 3, denoms, rng);
  ASSERT_EQ(keys.size(), 3U);
  EXPECT_NE(keys.at(1).master_verify_key, keys.at(5).master_verify_key);
  const BlindingState st = prepare_blind_sign(as_bytes("d"), rng);
  std::vector<std::pair<AuthorityIndex, G1Element>> partials;
  for (AuthorityIndex i : {1U, 2U}) {
    partials.emplace_back(i, unblind(st.blinding_factor, blind_sign(keys.at(5).shares[i - 1], st.blinded_point).sigma_tilde));
  }
  const Signature sig = agg_sig(partials, 2);
  EXPECT_TRUE(verify(keys.at(5).master_verify_key, st.message, sig));
  EXPECT_FALSE(verify(keys.at(10).master_verify_key, st.message, sig));
}

}  // namespace
}  // namespace blindmarket::tbs
