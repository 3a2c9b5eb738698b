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

#include <algorithm>
#include <vector>

#include "blindmarket/bytes.hpp"

namespace blindmarket {

using crypto::Fq;
using crypto::Fq12;
using crypto::Fq2;
using crypto::Fr;
using crypto::U256;

namespace {

constexpr U256 kOrder = crypto::FrParams::kModulus;

// 6u + 2 for the BN parameter u = 4965661367192848881.
constexpr crypto::u128 kAteLoopCount =
    (static_cast<crypto::u128>(0x1ULL) << 64) | static_cast<crypto::u128>(0x9d797039be763ba8ULL);

mpz_class to_mpz(const U256& v) {
  mpz_class out;
  mpz_import(out.get_mpz_t(), 4, -1, sizeof(std::uint64_t), 0, 0, v.limbs.data());
  return out;
}

// (p^4 - p^2 + 1) / r, the exponent of the hard part of the final exponentiation.
const std::vector<std::uint64_t>& hard_part_exponent() {
  static const std::vector<std::uint64_t> kLimbs = [] {
    const mpz_class p = to_mpz(crypto::FqParams::kModulus);
    const mpz_class r = to_mpz(kOrder);
    const mpz_class p2 = p * p;
    const mpz_class e = (p2 * p2 - p2 + 1) / r;
    std::vector<std::uint64_t> limbs((mpz_sizeinbase(e.get_mpz_t(), 2) + 63) / 64);
    std::size_t count = 0;
    mpz_export(limbs.data(), &count, -1, sizeof(std::uint64_t), 0, 0, e.get_mpz_t());
    limbs.resize(count);
    return limbs;
  }();
  return kLimbs;
}

struct G1Affine {
  Fq x;
  Fq y;
};

struct G2Affine {
  Fq2 x;
  Fq2 y;
};

// Line through untwisted points with twisted slope `lambda`, anchored at
// (x1, y1), evaluated at P: yP - lambda xP w + (lambda x1 - y1) w^3.
Fq12 line_eval(const Fq2& lambda, const Fq2& x1, const Fq2& y1, const G1Affine& p) {
  Fq12 l = Fq12::zero();
  l.c0.c0 = Fq2{p.y, Fq::zero()};
  l.c1.c0 = -(lambda * p.x);
  l.c1.c1 = lambda * x1 - y1;
  return l;
}

Fq12 double_step(G2Affine& t, const G1Affine& p) {
  const Fq2 x2 = t.x.square();
  const Fq2 lambda = (x2 + x2 + x2) * t.y.dbl().inverse();
  const Fq12 l = line_eval(lambda, t.x, t.y, p);
  const Fq2 x3 = lambda.square() - t.x - t.x;
  t.y = lambda * (t.x - x3) - t.y;
  t.x = x3;
  return l;
}

Fq12 add_step(G2Affine& t, bool& t_is_identity, const G2Affine& q, const G1Affine& p) {
  if (t_is_identity) {
    t = q;
    t_is_identity = false;
    return Fq12::one();
  }
  if (t.x == q.x) {
    if (t.y == q.y) {
      return double_step(t, p);
    }
    // Vertical line xP - xT w^2; lies in Fq6 and vanishes under the final exponentiation.
    Fq12 l = Fq12::zero();
    l.c0.c0 = Fq2{p.x, Fq::zero()};
    l.c0.c1 = -t.x;
    t_is_identity = true;
    return l;
  }
  const Fq2 lambda = (q.y - t.y) * (q.x - t.x).inverse();
  const Fq12 l = line_eval(lambda, t.x, t.y, p);
  const Fq2 x3 = lambda.square() - t.x - q.x;
  t.y = lambda * (t.x - x3) - t.y;
  t.x = x3;
  return l;
}

// Frobenius endomorphism on the twist: (conj(x) gamma2, conj(y) gamma3).
G2Affine twist_frobenius(const G2Affine& q) {
  const auto& g = crypto::frobenius_coefficients();
  return {q.x.conjugate() * g[2], q.y.conjugate() * g[3]};
}

Fq12 miller_loop(std::span<const std::pair<G1Element, G2Element>> pairs) {
  struct Lane {
    G1Affine p;
    G2Affine q;
    G2Affine t;
    bool t_identity = false;
  };
  std::vector<Lane> lanes;
  lanes.reserve(pairs.size());
  for (const auto& [a, b] : pairs) {
    Lane lane;
    if (!a.point().to_affine(lane.p.x, lane.p.y) || !b.point().to_affine(lane.q.x, lane.q.y)) {
      continue;  // e(O, Q) = e(P, O) = 1
    }
    lane.t = lane.q;
    lanes.push_back(lane);
  }

  Fq12 f = Fq12::one();
  int top = 127;
  while (((kAteLoopCount >> top) & 1U) == 0) {
    --top;
  }
  for (int i = top - 1; i >= 0; --i) {
    f = f.square();
    for (auto& lane : lanes) {
      f *= double_step(lane.t, lane.p);
    }
    if (((kAteLoopCount >> i) & 1U) != 0) {
      for (auto& lane : lanes) {
        f *= add_step(lane.t, lane.t_identity, lane.q, lane.p);
      }
    }
  }
  for (auto& lane : lanes) {
    const G2Affine q1 = twist_frobenius(lane.q);
    G2Affine q2 = twist_frobenius(q1);
    q2.y = -q2.y;
    f *= add_step(lane.t, lane.t_identity, q1, lane.p);
    f *= add_step(lane.t, lane.t_identity, q2, lane.p);
  }
  return f;
}

Fq12 final_exponentiation(const Fq12& f) {
  // Easy part: f^((p^6 - 1)(p^2 + 1)).
  const Fq12 f1 = f.conjugate() * f.inverse();
  const Fq12 f2 = f1.frobenius().frobenius() * f1;
  return f2.pow(hard_part_exponent());
}

void write_fq(std::uint8_t* out, const Fq& v) {
  v.to_u256().to_be_bytes(std::span<std::uint8_t, 32>(out, 32));
}

std::optional<Fq> read_canonical_fq(const std::uint8_t* in, bool clear_flags) {
  std::array<std::uint8_t, 32> buf{};
  std::copy_n(in, 32, buf.begin());
  if (clear_flags) {
    buf[0] &= 0x3F;
  }
  const U256 v = U256::from_be_bytes(buf);
  if (compare(v, crypto::FqParams::kModulus) >= 0) {
    return std::nullopt;
  }
  return Fq::from_u256(v);
}

}  // namespace

// ---------------------------------------------------------------------------
// Scalar

Scalar Scalar::from_i64(std::int64_t v) {
  if (v >= 0) {
    return from_u64(static_cast<std::uint64_t>(v));
  }
  return -from_u64(static_cast<std::uint64_t>(-(v + 1)) + 1);
}

Scalar Scalar::random(Rng& rng) {
  for (;;) {
    U256 v{{rng.next_u64(), rng.next_u64(), rng.next_u64(), rng.next_u64() & ((1ULL << 62) - 1)}};
    if (compare(v, kOrder) < 0) {
      return Scalar(Fr::from_u256(v));
    }
  }
}

Scalar Scalar::random_nonzero(Rng& rng) {
  for (;;) {
    Scalar s = random(rng);
    if (!s.is_zero()) {
      return s;
    }
  }
}

std::optional<Scalar> Scalar::from_bytes(std::span<const std::uint8_t, 32> bytes) {
  const U256 v = U256::from_be_bytes(bytes);
  if (compare(v, kOrder) >= 0) {
    return std::nullopt;
  }
  return Scalar(Fr::from_u256(v));
}

std::array<std::uint8_t, 32> Scalar::to_bytes() const {
  std::array<std::uint8_t, 32> out{};
  v_.to_u256().to_be_bytes(out);
  return out;
}

// ---------------------------------------------------------------------------
// G1

G1Element G1Element::generator() {
  static const G1Element kGen(crypto::G1Point::from_affine(Fq::from_u64(1), Fq::from_u64(2)));
  return kGen;
}

G1Element::Encoding G1Element::serialize() const {
  Encoding out{};
  Fq x;
  Fq y;
  if (!p_.to_affine(x, y)) {
    out[0] = 0x80;
    return out;
  }
  write_fq(out.data(), x);
  if (y.is_lexicographically_largest()) {
    out[0] |= 0x40;
  }
  return out;
}

std::optional<G1Element> G1Element::deserialize(std::span<const std::uint8_t> bytes) {
  if (bytes.size() != kEncodedSize) {
    return std::nullopt;
  }
  const std::uint8_t flags = bytes[0] & 0xC0;
  if ((flags & 0x80) != 0) {
    const bool rest_zero =
        (bytes[0] & 0x7F) == 0 && std::all_of(bytes.begin() + 1, bytes.end(), [](std::uint8_t b) { return b == 0; });
    return rest_zero ? std::optional<G1Element>(identity()) : std::nullopt;
  }
  const auto x = read_canonical_fq(bytes.data(), true);
  if (!x) {
    return std::nullopt;
  }
  const Fq rhs = x->square() * *x + crypto::G1Curve::b();
  Fq y;
  if (!rhs.sqrt(y)) {
    return std::nullopt;
  }
  if (y.is_lexicographically_largest() != ((flags & 0x40) != 0)) {
    y = -y;
  }
  if (y.is_zero() && (flags & 0x40) != 0) {
    return std::nullopt;
  }
  return G1Element(crypto::G1Point::from_affine(*x, y));
}

// ---------------------------------------------------------------------------
// G2

G2Element G2Element::generator() {
  static const G2Element kGen(crypto::G2Point::from_affine(
      Fq2{Fq::from_hex("1800deef121f1e76426a00665e5c4479674322d4f75edadd46debd5cd992f6ed"),
          Fq::from_hex("198e9393920d483a7260bfb731fb5d25f1aa493335a9e71297e485b7aef312c2")},
      Fq2{Fq::from_hex("12c85ea5db8c6deb4aab71808dcb408fe3d1e7690c43d37b4ce6cc0166fa7daa"),
          Fq::from_hex("090689d0585ff075ec9e99ad690c3395bc4b313370b38ef355acdadcd122975b")}));
  return kGen;
}

bool G2Element::in_subgroup() const { return p_.mul(kOrder).is_identity(); }

G2Element::Encoding G2Element::serialize() const {
  Encoding out{};
  Fq2 x;
  Fq2 y;
  if (!p_.to_affine(x, y)) {
    out[0] = 0x80;
    return out;
  }
  write_fq(out.data(), x.c1);
  write_fq(out.data() + 32, x.c0);
  if (y.is_lexicographically_largest()) {
    out[0] |= 0x40;
  }
  return out;
}

std::optional<G2Element> G2Element::deserialize(std::span<const std::uint8_t> bytes) {
  if (bytes.size() != kEncodedSize) {
    return std::nullopt;
  }
  const std::uint8_t flags = bytes[0] & 0xC0;
  if ((flags & 0x80) != 0) {
    const bool rest_zero =
        (bytes[0] & 0x7F) == 0 && std::all_of(bytes.begin() + 1, bytes.end(), [](std::uint8_t b) { return b == 0; });
    return rest_zero ? std::optional<G2Element>(identity()) : std::nullopt;
  }
  const auto c1 = read_canonical_fq(bytes.data(), true);
  const auto c0 = read_canonical_fq(bytes.data() + 32, false);
  if (!c1 || !c0) {
    return std::nullopt;
  }
  const Fq2 x{*c0, *c1};
  const Fq2 rhs = x.square() * x + crypto::G2Curve::b();
  Fq2 y;
  if (!rhs.sqrt(y)) {
    return std::nullopt;
  }
  if (y.is_lexicographically_largest() != ((flags & 0x40) != 0)) {
    y = -y;
  }
  G2Element out(crypto::G2Point::from_affine(x, y));
  if (!out.in_subgroup()) {
    return std::nullopt;
  }
  return out;
}

// ---------------------------------------------------------------------------
// GT

GTElement GTElement::pow(const Scalar& s) const { return pow_raw(s.to_u256()); }

GTElement GTElement::pow_raw(const U256& k) const { return GTElement(v_.pow(k.limbs)); }

std::array<std::uint8_t, GTElement::kEncodedSize> GTElement::serialize() const {
  std::array<std::uint8_t, kEncodedSize> out{};
  const Fq* coeffs[12] = {&v_.c0.c0.c0, &v_.c0.c0.c1, &v_.c0.c1.c0, &v_.c0.c1.c1, &v_.c0.c2.c0, &v_.c0.c2.c1,
                          &v_.c1.c0.c0, &v_.c1.c0.c1, &v_.c1.c1.c0, &v_.c1.c1.c1, &v_.c1.c2.c0, &v_.c1.c2.c1};
  for (std::size_t i = 0; i < 12; ++i) {
    write_fq(out.data() + 32 * i, *coeffs[i]);
  }
  return out;
}

// ---------------------------------------------------------------------------

const GroupParams& GroupParams::bn254() {
  static const GroupParams kParams{kOrder, G1Element::generator(), G2Element::generator(), 254};
  return kParams;
}

GTElement pair(const G1Element& a, const G2Element& b) {
  const std::pair<G1Element, G2Element> one[] = {{a, b}};
  return GTElement(final_exponentiation(miller_loop(one)));
}

bool pairing_product_is_one(std::span<const std::pair<G1Element, G2Element>> pairs) {
  return final_exponentiation(miller_loop(pairs)).is_one();
}

G1Element hash_to_g1(std::span<const std::uint8_t> message) {
  static constexpr std::string_view kDomain = "blindmarket/hash-to-g1/v1";
  for (std::uint32_t counter = 0;; ++counter) {
    ByteWriter w;
    w.raw(as_bytes(kDomain));
    w.u64(message.size());
    w.raw(message);
    w.u32(counter);
    Digest h = sha256(w.bytes());
    const bool want_largest = (h[31] & 1U) != 0;
    h[0] &= 0x3F;
    const U256 xv = U256::from_be_bytes(h);
    if (compare(xv, crypto::FqParams::kModulus) >= 0) {
      continue;
    }
    const Fq x = Fq::from_u256(xv);
    Fq y;
    if (!(x.square() * x + crypto::G1Curve::b()).sqrt(y)) {
      continue;
    }
    if (y.is_lexicographically_largest() != want_largest) {
      y = -y;
    }
    return G1Element(crypto::G1Point::from_affine(x, y));
  }
}

}  // namespace blindmarket
