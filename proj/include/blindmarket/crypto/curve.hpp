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

#include "blindmarket/crypto/tower.hpp"

namespace blindmarket::crypto {

/// Point on y^2 = x^3 + b in Jacobian coordinates (X/Z^2, Y/Z^3); Z = 0 is the identity.
template <typename Curve>
class JacobianPoint {
 public:
  using Field = typename Curve::Field;

  constexpr JacobianPoint() : x_(Field::one()), y_(Field::one()), z_(Field::zero()) {}

  static constexpr JacobianPoint identity() { return JacobianPoint{}; }

  static constexpr JacobianPoint from_affine(const Field& x, const Field& y) {
    JacobianPoint p;
    p.x_ = x;
    p.y_ = y;
    p.z_ = Field::one();
    return p;
  }

  constexpr bool is_identity() const { return z_.is_zero(); }

  /// Affine coordinates; returns false for the identity.
  bool to_affine(Field& x, Field& y) const {
    if (is_identity()) {
      return false;
    }
    const Field zinv = z_.inverse();
    const Field zinv2 = zinv.square();
    x = x_ * zinv2;
    y = y_ * zinv2 * zinv;
    return true;
  }

  bool is_on_curve() const {
    if (is_identity()) {
      return true;
    }
    // Y^2 = X^3 + b Z^6
    const Field z2 = z_.square();
    const Field z6 = z2.square() * z2;
    return y_.square() == x_.square() * x_ + Curve::b() * z6;
  }

  JacobianPoint dbl() const {
    if (is_identity() || y_.is_zero()) {
      return identity();
    }
    const Field a = x_.square();
    const Field b = y_.square();
    const Field c = b.square();
    Field d = (x_ + b).square() - a - c;
    d = d + d;
    const Field e = a + a + a;
    const Field f = e.square();
    JacobianPoint r;
    r.x_ = f - d - d;
    Field c8 = c + c;
    c8 = c8 + c8;
    c8 = c8 + c8;
    r.y_ = e * (d - r.x_) - c8;
    const Field yz = y_ * z_;
    r.z_ = yz + yz;
    return r;
  }

  JacobianPoint operator+(const JacobianPoint& o) const {
    if (is_identity()) {
      return o;
    }
    if (o.is_identity()) {
      return *this;
    }
    const Field z1z1 = z_.square();
    const Field z2z2 = o.z_.square();
    const Field u1 = x_ * z2z2;
    const Field u2 = o.x_ * z1z1;
    const Field s1 = y_ * o.z_ * z2z2;
    const Field s2 = o.y_ * z_ * z1z1;
    const Field h = u2 - u1;
    Field rr = s2 - s1;
    if (h.is_zero()) {
      return rr.is_zero() ? dbl() : identity();
    }
    rr = rr + rr;
    const Field i = (h + h).square();
    const Field j = h * i;
    const Field v = u1 * i;
    JacobianPoint out;
    out.x_ = rr.square() - j - v - v;
    const Field s1j = s1 * j;
    out.y_ = rr * (v - out.x_) - s1j - s1j;
    out.z_ = ((z_ + o.z_).square() - z1z1 - z2z2) * h;
    return out;
  }

  JacobianPoint operator-() const {
    JacobianPoint r = *this;
    r.y_ = -r.y_;
    return r;
  }

  JacobianPoint operator-(const JacobianPoint& o) const { return *this + (-o); }

  JacobianPoint mul(const U256& k) const {
    JacobianPoint acc;
    for (std::size_t i = k.bit_length(); i-- > 0;) {
      acc = acc.dbl();
      if (k.bit(i)) {
        acc = acc + *this;
      }
    }
    return acc;
  }

  bool operator==(const JacobianPoint& o) const {
    if (is_identity() || o.is_identity()) {
      return is_identity() == o.is_identity();
    }
    const Field z1z1 = z_.square();
    const Field z2z2 = o.z_.square();
    if (x_ * z2z2 != o.x_ * z1z1) {
      return false;
    }
    return y_ * o.z_ * z2z2 == o.y_ * z_ * z1z1;
  }

 private:
  Field x_;
  Field y_;
  Field z_;
};

struct G1Curve {
  using Field = Fq;
  static Fq b() { return Fq::from_u64(3); }
};

struct G2Curve {
  using Field = Fq2;
  /// Twist coefficient 3 / (9 + u).
  static Fq2 b() {
    static const Fq2 kB{
        Fq::from_hex("2b149d40ceb8aaae81be18991be06ac3b5b4c5e559dbefa33267e6dc24a138e5"),
        Fq::from_hex("009713b03af0fed4cd2cafadeed8fdf4a74fa084e52d1852e4a2bd0685c315d2")};
    return kB;
  }
};

using G1Point = JacobianPoint<G1Curve>;
using G2Point = JacobianPoint<G2Curve>;

}  // namespace blindmarket::crypto
