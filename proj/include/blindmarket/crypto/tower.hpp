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

#include "blindmarket/crypto/mont_field.hpp"

namespace blindmarket::crypto {

// Field tower for BN254 (alt_bn128):
//   Fp2  = Fp[u]  / (u^2 + 1)
//   Fp6  = Fp2[v] / (v^3 - xi),  xi = 9 + u
//   Fp12 = Fp6[w] / (w^2 - v)

struct FqParams {
  static constexpr U256 kModulus{
      {0x3c208c16d87cfd47ULL, 0x97816a916871ca8dULL, 0xb85045b68181585dULL, 0x30644e72e131a029ULL}};
};

struct FrParams {
  static constexpr U256 kModulus{
      {0x43e1f593f0000001ULL, 0x2833e84879b97091ULL, 0xb85045b68181585dULL, 0x30644e72e131a029ULL}};
};

using Fq = MontField<FqParams>;
using Fr = MontField<FrParams>;

struct Fq2 {
  Fq c0;
  Fq c1;

  static constexpr Fq2 zero() { return {}; }
  static constexpr Fq2 one() { return {Fq::one(), Fq::zero()}; }

  constexpr bool is_zero() const { return c0.is_zero() && c1.is_zero(); }
  constexpr bool operator==(const Fq2&) const = default;

  constexpr Fq2 operator+(const Fq2& o) const { return {c0 + o.c0, c1 + o.c1}; }
  constexpr Fq2 operator-(const Fq2& o) const { return {c0 - o.c0, c1 - o.c1}; }
  constexpr Fq2 operator-() const { return {-c0, -c1}; }

  constexpr Fq2 operator*(const Fq2& o) const {
    const Fq t0 = c0 * o.c0;
    const Fq t1 = c1 * o.c1;
    return {t0 - t1, (c0 + c1) * (o.c0 + o.c1) - t0 - t1};
  }
  constexpr Fq2 operator*(const Fq& s) const { return {c0 * s, c1 * s}; }

  constexpr Fq2& operator+=(const Fq2& o) { return *this = *this + o; }
  constexpr Fq2& operator-=(const Fq2& o) { return *this = *this - o; }
  constexpr Fq2& operator*=(const Fq2& o) { return *this = *this * o; }

  constexpr Fq2 square() const {
    // (a + bu)^2 = (a+b)(a-b) + 2ab u
    const Fq ab = c0 * c1;
    return {(c0 + c1) * (c0 - c1), ab + ab};
  }
  constexpr Fq2 dbl() const { return *this + *this; }

  constexpr Fq2 conjugate() const { return {c0, -c1}; }

  constexpr Fq2 inverse() const {
    const Fq norm_inv = (c0.square() + c1.square()).inverse();
    return {c0 * norm_inv, -(c1 * norm_inv)};
  }

  /// Multiplication by the non-residue xi = 9 + u.
  constexpr Fq2 mul_by_xi() const {
    const Fq nine = Fq::from_u64(9);
    return {c0 * nine - c1, c0 + c1 * nine};
  }

  constexpr Fq2 pow(const U256& e) const {
    Fq2 acc = one();
    for (std::size_t i = e.bit_length(); i-- > 0;) {
      acc = acc.square();
      if (e.bit(i)) {
        acc *= *this;
      }
    }
    return acc;
  }

  /// Square root in Fq2 for p = 3 mod 4 (Adj & Rodriguez-Henriquez, Alg. 9).
  bool sqrt(Fq2& out) const;

  /// Sign convention for point compression: decided by c1, or by c0 when c1 = 0.
  bool is_lexicographically_largest() const {
    if (!c1.is_zero()) {
      return c1.is_lexicographically_largest();
    }
    return c0.is_lexicographically_largest();
  }
};

struct Fq6 {
  Fq2 c0;
  Fq2 c1;
  Fq2 c2;

  static constexpr Fq6 zero() { return {}; }
  static constexpr Fq6 one() { return {Fq2::one(), Fq2::zero(), Fq2::zero()}; }

  constexpr bool is_zero() const { return c0.is_zero() && c1.is_zero() && c2.is_zero(); }
  constexpr bool operator==(const Fq6&) const = default;

  constexpr Fq6 operator+(const Fq6& o) const { return {c0 + o.c0, c1 + o.c1, c2 + o.c2}; }
  constexpr Fq6 operator-(const Fq6& o) const { return {c0 - o.c0, c1 - o.c1, c2 - o.c2}; }
  constexpr Fq6 operator-() const { return {-c0, -c1, -c2}; }

  constexpr Fq6 operator*(const Fq6& o) const {
    const Fq2 t0 = c0 * o.c0;
    const Fq2 t1 = c1 * o.c1;
    const Fq2 t2 = c2 * o.c2;
    return {
        t0 + ((c1 + c2) * (o.c1 + o.c2) - t1 - t2).mul_by_xi(),
        (c0 + c1) * (o.c0 + o.c1) - t0 - t1 + t2.mul_by_xi(),
        (c0 + c2) * (o.c0 + o.c2) - t0 - t2 + t1,
    };
  }

  constexpr Fq6& operator*=(const Fq6& o) { return *this = *this * o; }

  constexpr Fq6 square() const { return *this * *this; }

  /// Multiplication by v: (a0 + a1 v + a2 v^2) v = xi a2 + a0 v + a1 v^2.
  constexpr Fq6 mul_by_v() const { return {c2.mul_by_xi(), c0, c1}; }

  constexpr Fq6 inverse() const {
    const Fq2 a = c0.square() - (c1 * c2).mul_by_xi();
    const Fq2 b = c2.square().mul_by_xi() - c0 * c1;
    const Fq2 c = c1.square() - c0 * c2;
    const Fq2 f = c0 * a + (c2 * b + c1 * c).mul_by_xi();
    const Fq2 f_inv = f.inverse();
    return {a * f_inv, b * f_inv, c * f_inv};
  }
};

struct Fq12 {
  Fq6 c0;
  Fq6 c1;

  static constexpr Fq12 zero() { return {}; }
  static constexpr Fq12 one() { return {Fq6::one(), Fq6::zero()}; }

  constexpr bool is_zero() const { return c0.is_zero() && c1.is_zero(); }
  constexpr bool is_one() const { return *this == one(); }
  constexpr bool operator==(const Fq12&) const = default;

  constexpr Fq12 operator*(const Fq12& o) const {
    const Fq6 t0 = c0 * o.c0;
    const Fq6 t1 = c1 * o.c1;
    return {t0 + t1.mul_by_v(), (c0 + c1) * (o.c0 + o.c1) - t0 - t1};
  }
  constexpr Fq12& operator*=(const Fq12& o) { return *this = *this * o; }

  constexpr Fq12 square() const {
    // Complex squaring: (a + bw)^2 = (a+b)(a+bv) - ab - abv + 2ab w
    const Fq6 ab = c0 * c1;
    const Fq6 t = (c0 + c1) * (c0 + c1.mul_by_v()) - ab - ab.mul_by_v();
    return {t, ab + ab};
  }

  /// x^(p^6): negates the w coefficient.
  constexpr Fq12 conjugate() const { return {c0, -c1}; }

  constexpr Fq12 inverse() const {
    const Fq6 t = (c0.square() - c1.square().mul_by_v()).inverse();
    return {c0 * t, -(c1 * t)};
  }

  /// x^p.
  Fq12 frobenius() const;

  Fq12 pow(std::span<const std::uint64_t> exponent_limbs) const;
};

/// xi^(k (p - 1) / 6) for k = 0..5.
const std::array<Fq2, 6>& frobenius_coefficients();

}  // namespace blindmarket::crypto
