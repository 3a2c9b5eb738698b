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

#include "blindmarket/pairing_group.hpp"

#include <gmpxx.h>
#include <gtest/gtest.h>

#include <set>
#include <string>

#include "blindmarket/bytes.hpp"

namespace blindmarket {
namespace {

using crypto::Fq;
using crypto::Fq2;
using crypto::U256;

mpz_class to_mpz(const U256& v) {
  mpz_class out;
  mpz_import(out.get_mpz_t(), 4, -1, sizeof(std::uint64_t), 0, 0, v.limbs.data());
  return out;
}

U256 random_u256(Rng& rng) {
  return U256{{rng.next_u64(), rng.next_u64(), rng.next_u64(), rng.next_u64() & ((1ULL << 62) - 1)}};
}

// Montgomery arithmetic against GMP as an independent reference.
TEST(FieldArithmetic, MatchesBigIntegerReference) {
  Rng rng(7);
  const mpz_class p = to_mpz(crypto::FqParams::kModulus);
  for (int i = 0; i < 2000; ++i) {
    const U256 a = random_u256(rng);
    const U256 b = random_u256(rng);
    const Fq fa = Fq::from_u256(a);
    const Fq fb = Fq::from_u256(b);
    const mpz_class ma = to_mpz(a) % p;
    const mpz_class mb = to_mpz(b) % p;
    ASSERT_EQ(to_mpz((fa * fb).to_u256()), (ma * mb) % p);
    ASSERT_EQ(to_mpz((fa + fb).to_u256()), (ma + mb) % p);
    mpz_class diff = (ma - mb) % p;
    if (diff < 0) {
      diff += p;
    }
    ASSERT_EQ(to_mpz((fa - fb).to_u256()), diff);
    if (!fa.is_zero()) {
      ASSERT_EQ(fa * fa.inverse(), Fq::one());
    }
  }
}

TEST(FieldArithmetic, Fq2SquareRootRoundTrips) {
  Rng rng(11);
  int residues = 0;
  for (int i = 0; i < 200; ++i) {
    const Fq2 a{Fq::from_u256(random_u256(rng)), Fq::from_u256(random_u256(rng))};
    Fq2 root;
    ASSERT_TRUE(a.square().sqrt(root));
    EXPECT_TRUE(root == a || root == -a);
    Fq2 r2;
    if (a.sqrt(r2)) {
      EXPECT_EQ(r2.square(), a);
      ++residues;
    }
  }
  // Half of Fq2 is a square; a wildly different count means sqrt is broken.
  EXPECT_GT(residues, 60);
  EXPECT_LT(residues, 140);
}

TEST(FieldArithmetic, TwistCoefficientTimesXiIsThree) {
  const Fq2 xi{Fq::from_u64(9), Fq::one()};
  EXPECT_EQ(crypto::G2Curve::b() * xi, (Fq2{Fq::from_u64(3), Fq::zero()}));
}

TEST(PairingGroup, GeneratorsHavePrimeOrder) {
  const auto& params = GroupParams::bn254();
  EXPECT_TRUE(params.g1.is_on_curve());
  EXPECT_TRUE(params.g2.is_on_curve());
  EXPECT_TRUE(params.g1.mul_raw(params.prime_order).is_identity());
  EXPECT_TRUE(params.g2.mul_raw(params.prime_order).is_identity());
  EXPECT_FALSE(params.g1.is_identity());
  EXPECT_EQ(params.lambda, 254U);
}

TEST(PairingGroup, NonDegenerate) {
  const auto& params = GroupParams::bn254();
  const GTElement e = pair(params.g1, params.g2);
  EXPECT_FALSE(e.is_identity());
  EXPECT_TRUE(e.pow_raw(params.prime_order).is_identity());
}

TEST(PairingGroup, BilinearInSmallScalar) {
  const auto& params = GroupParams::bn254();
  const Scalar two = Scalar::from_u64(2);
  const GTElement lhs = pair(params.g1 * two, params.g2);
  const GTElement rhs = pair(params.g1, params.g2 * two);
  EXPECT_EQ(lhs, rhs);
  const GTElement base = pair(params.g1, params.g2);
  EXPECT_EQ(lhs, base * base);
}

TEST(PairingGroup, BilinearInRandomScalars) {
  const auto& params = GroupParams::bn254();
  Rng rng(3);
  const GTElement base = pair(params.g1, params.g2);
  for (int i = 0; i < 5; ++i) {
    const Scalar a = Scalar::random(rng);
    const Scalar b = Scalar::random(rng);
    const GTElement direct = pair(params.g1 * a, params.g2 * b);
    // Two evaluation orders of the same exponent.
    EXPECT_EQ(direct, base.pow(a * b));
    EXPECT_EQ(direct, pair(params.g1 * (a * b), params.g2));
  }
}

TEST(PairingGroup, QuantifiedBilinearityOnHashedPoints) {
  const auto& params = GroupParams::bn254();
  Rng rng(5);
  for (int i = 0; i < 5; ++i) {
    const G1Element a = hash_to_g1(as_bytes("point-" + std::to_string(i)));
    const G2Element b = params.g2 * Scalar::random(rng);
    const Scalar s = Scalar::random(rng);
    const GTElement e = pair(a, b);
    EXPECT_EQ(pair(a * s, b), e.pow(s));
    EXPECT_EQ(pair(a, b * s), e.pow(s));
  }
}

TEST(PairingGroup, ProductCheck) {
  const auto& params = GroupParams::bn254();
  Rng rng(9);
  const Scalar x = Scalar::random(rng);
  const G1Element h = hash_to_g1(as_bytes("msg"));
  const std::pair<G1Element, G2Element> good[] = {{h, params.g2 * x}, {-(h * x), params.g2}};
  EXPECT_TRUE(pairing_product_is_one(good));
  const std::pair<G1Element, G2Element> bad[] = {{h, params.g2 * x}, {-(h * (x + Scalar::one())), params.g2}};
  EXPECT_FALSE(pairing_product_is_one(bad));
  const std::pair<G1Element, G2Element> identities[] = {{G1Element::identity(), params.g2}};
  EXPECT_TRUE(pairing_product_is_one(identities));
}

TEST(HashToG1, Deterministic) {
  EXPECT_EQ(hash_to_g1(as_bytes("bid")), hash_to_g1(as_bytes("bid")));
  EXPECT_EQ(hash_to_g1({}), hash_to_g1({}));
}

TEST(HashToG1, DistinctMessagesGiveDistinctPoints) {
  EXPECT_NE(hash_to_g1(as_bytes("a")), hash_to_g1(as_bytes("b")));
  std::set<G1Element::Encoding> seen;
  for (int i = 0; i < 500; ++i) {
    seen.insert(hash_to_g1(as_bytes("m" + std::to_string(i))).serialize());
  }
  EXPECT_EQ(seen.size(), 500U);
}

TEST(HashToG1, OutputHasPrimeOrder) {
  const auto& params = GroupParams::bn254();
  EXPECT_TRUE(hash_to_g1(as_bytes("order")).mul_raw(params.prime_order).is_identity());
}

TEST(HashToG1, TenThousandRandomInputsLandOnCurve) {
  Rng rng(21);
  const auto& params = GroupParams::bn254();
  for (int i = 0; i < 10000; ++i) {
    Bytes msg(static_cast<std::size_t>(rng.uniform(0, 64)));
    rng.fill(msg);
    const G1Element h = hash_to_g1(msg);
    ASSERT_TRUE(h.is_on_curve());
    ASSERT_FALSE(h.is_identity());
    if (i % 500 == 0) {
      ASSERT_TRUE(h.mul_raw(params.prime_order).is_identity());
    }
  }
}

TEST(Encoding, G1RoundTripAndRejects) {
  Rng rng(31);
  const auto& params = GroupParams::bn254();
  for (int i = 0; i < 50; ++i) {
    const G1Element a = params.g1 * Scalar::random(rng);
    const auto enc = a.serialize();
    const auto back = G1Element::deserialize(enc);
    ASSERT_TRUE(back.has_value());
    EXPECT_EQ(*back, a);
  }
  const auto id = G1Element::identity().serialize();
  EXPECT_EQ(id[0], 0x80);
  EXPECT_TRUE(G1Element::deserialize(id)->is_identity());

  auto bad = params.g1.serialize();
  bad[31] ^= 0x01;  // x = 0 or 3 -> likely off-curve; at least must not equal the generator
  const auto parsed = G1Element::deserialize(bad);
  EXPECT_TRUE(!parsed.has_value() || !(*parsed == params.g1));
  std::array<std::uint8_t, 32> too_big{};
  too_big.fill(0x3F);
  EXPECT_FALSE(G1Element::deserialize(too_big).has_value());
  EXPECT_FALSE(G1Element::deserialize(std::span<const std::uint8_t>(id.data(), 31)).has_value());
}

TEST(Encoding, G2RoundTripAndSubgroupCheck) {
  Rng rng(41);
  const auto& params = GroupParams::bn254();
  for (int i = 0; i < 10; ++i) {
    const G2Element a = params.g2 * Scalar::random(rng);
    const auto back = G2Element::deserialize(a.serialize());
    ASSERT_TRUE(back.has_value());
    EXPECT_EQ(*back, a);
  }
  EXPECT_TRUE(G2Element::deserialize(G2Element::identity().serialize())->is_identity());

  // A twist point outside the order-r subgroup must be rejected.
  for (std::uint64_t x0 = 1;; ++x0) {
    const Fq2 x{Fq::from_u64(x0), Fq::one()};
    Fq2 y;
    if (!(x.square() * x + crypto::G2Curve::b()).sqrt(y)) {
      continue;
    }
    const G2Element pt(crypto::G2Point::from_affine(x, y));
    ASSERT_TRUE(pt.is_on_curve());
    ASSERT_FALSE(pt.in_subgroup());
    EXPECT_FALSE(G2Element::deserialize(pt.serialize()).has_value());
    break;
  }
}

TEST(Encoding, EncodingsAreStable) {
  // Pinned bytes for the generators guard against accidental format changes.
  const auto& params = GroupParams::bn254();
  EXPECT_EQ(to_hex(params.g1.serialize()), "0000000000000000000000000000000000000000000000000000000000000001");
  EXPECT_EQ(to_hex(params.g2.serialize()).substr(2, 62),
            std::string("198e9393920d483a7260bfb731fb5d25f1aa493335a9e71297e485b7aef312c2").substr(2));
}

TEST(ScalarTest, BytesRoundTripAndSignedConstruction) {
  Rng rng(1);
  const Scalar s = Scalar::random(rng);
  EXPECT_EQ(*Scalar::from_bytes(s.to_bytes()), s);
  EXPECT_EQ(Scalar::from_i64(-3) + Scalar::from_u64(3), Scalar::zero());
  EXPECT_EQ(s * s.inverse(), Scalar::one());
  std::array<std::uint8_t, 32> max{};
  max.fill(0xFF);
  EXPECT_FALSE(Scalar::from_bytes(max).has_value());
}

}  // namespace
}  // namespace blindmarket
