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

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>

#include "blindmarket/crypto/curve.hpp"
#include "blindmarket/rng.hpp"

namespace blindmarket {

// Type-3 bilinear group e: G1 x G2 -> GT over BN254 (alt_bn128). G1 and G2
// are written additively, GT multiplicatively. Everything else in the
// project depends only on the types and functions in this header.

/// Element of F_r, the exponent field shared by G1, G2 and GT.
class Scalar {
 public:
  Scalar() = default;

  static Scalar zero() { return Scalar(crypto::Fr::zero()); }
  static Scalar one() { return Scalar(crypto::Fr::one()); }
  static Scalar from_u64(std::uint64_t v) { return Scalar(crypto::Fr::from_u64(v)); }
  /// Signed convenience constructor: from_i64(-3) is r - 3.
  static Scalar from_i64(std::int64_t v);
  /// Uniform in [0, r).
  static Scalar random(Rng& rng);
  /// Uniform in [1, r).
  static Scalar random_nonzero(Rng& rng);

  static std::optional<Scalar> from_bytes(std::span<const std::uint8_t, 32> bytes);
  std::array<std::uint8_t, 32> to_bytes() const;

  bool is_zero() const { return v_.is_zero(); }
  Scalar inverse() const { return Scalar(v_.inverse()); }

  Scalar operator+(const Scalar& o) const { return Scalar(v_ + o.v_); }
  Scalar operator-(const Scalar& o) const { return Scalar(v_ - o.v_); }
  Scalar operator*(const Scalar& o) const { return Scalar(v_ * o.v_); }
  Scalar operator-() const { return Scalar(-v_); }
  bool operator==(const Scalar&) const = default;

  crypto::U256 to_u256() const { return v_.to_u256(); }

 private:
  explicit Scalar(crypto::Fr v) : v_(v) {}
  crypto::Fr v_;
};

class G1Element {
 public:
  static constexpr std::size_t kEncodedSize = 32;
  using Encoding = std::array<std::uint8_t, kEncodedSize>;

  G1Element() = default;
  static G1Element identity() { return {}; }
  static G1Element generator();

  bool is_identity() const { return p_.is_identity(); }

  G1Element operator+(const G1Element& o) const { return G1Element(p_ + o.p_); }
  G1Element operator-(const G1Element& o) const { return G1Element(p_ - o.p_); }
  G1Element operator-() const { return G1Element(-p_); }
  G1Element operator*(const Scalar& s) const { return G1Element(p_.mul(s.to_u256())); }
  /// Multiplication by an arbitrary 256-bit integer, not reduced mod r.
  G1Element mul_raw(const crypto::U256& k) const { return G1Element(p_.mul(k)); }
  bool operator==(const G1Element& o) const { return p_ == o.p_; }

  /// Compressed encoding: big-endian x with flag bits in the top of byte 0
  /// (0x80 identity, 0x40 y is the larger root).
  Encoding serialize() const;
  /// Rejects non-canonical coordinates and points off the curve.
  static std::optional<G1Element> deserialize(std::span<const std::uint8_t> bytes);

  bool is_on_curve() const { return p_.is_on_curve(); }
  const crypto::G1Point& point() const { return p_; }
  explicit G1Element(const crypto::G1Point& p) : p_(p) {}

 private:
  crypto::G1Point p_;
};

class G2Element {
 public:
  static constexpr std::size_t kEncodedSize = 64;
  using Encoding = std::array<std::uint8_t, kEncodedSize>;

  G2Element() = default;
  static G2Element identity() { return {}; }
  static G2Element generator();

  bool is_identity() const { return p_.is_identity(); }

  G2Element operator+(const G2Element& o) const { return G2Element(p_ + o.p_); }
  G2Element operator-(const G2Element& o) const { return G2Element(p_ - o.p_); }
  G2Element operator-() const { return G2Element(-p_); }
  G2Element operator*(const Scalar& s) const { return G2Element(p_.mul(s.to_u256())); }
  G2Element mul_raw(const crypto::U256& k) const { return G2Element(p_.mul(k)); }
  bool operator==(const G2Element& o) const { return p_ == o.p_; }

  /// Compressed encoding: x.c1 || x.c0, big-endian, flags as for G1.
  Encoding serialize() const;
  /// Also checks membership in the order-r subgroup of the twist.
  static std::optional<G2Element> deserialize(std::span<const std::uint8_t> bytes);

  bool is_on_curve() const { return p_.is_on_curve(); }
  bool in_subgroup() const;
  const crypto::G2Point& point() const { return p_; }
  explicit G2Element(const crypto::G2Point& p) : p_(p) {}

 private:
  crypto::G2Point p_;
};

class GTElement {
 public:
  static constexpr std::size_t kEncodedSize = 384;

  GTElement() : v_(crypto::Fq12::one()) {}
  static GTElement identity() { return {}; }

  bool is_identity() const { return v_.is_one(); }
  GTElement operator*(const GTElement& o) const { return GTElement(v_ * o.v_); }
  GTElement inverse() const { return GTElement(v_.conjugate()); }
  GTElement pow(const Scalar& s) const;
  GTElement pow_raw(const crypto::U256& k) const;
  bool operator==(const GTElement&) const = default;

  std::array<std::uint8_t, kEncodedSize> serialize() const;

  const crypto::Fq12& value() const { return v_; }
  explicit GTElement(const crypto::Fq12& v) : v_(v) {}

 private:
  crypto::Fq12 v_;
};

struct GroupParams {
  crypto::U256 prime_order;
  G1Element g1;
  G2Element g2;
  unsigned lambda = 0;

  static const GroupParams& bn254();
};

/// Optimal ate pairing.
GTElement pair(const G1Element& a, const G2Element& b);

/// True iff the product of e(a_k, b_k) is the identity. Shares one final
/// exponentiation across all pairs.
bool pairing_product_is_one(std::span<const std::pair<G1Element, G2Element>> pairs);

/// Deterministic try-and-increment hash onto G1 (cofactor 1, so every curve point is in the group).
G1Element hash_to_g1(std::span<const std::uint8_t> message);

}  // namespace blindmarket
