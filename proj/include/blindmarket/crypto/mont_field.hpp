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
#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace blindmarket::crypto {

__extension__ using u128 = unsigned __int128;

/// 256-bit unsigned integer, four little-endian 64-bit limbs.
struct U256 {
  std::array<std::uint64_t, 4> limbs{};

  constexpr bool operator==(const U256&) const = default;

  constexpr bool is_zero() const { return (limbs[0] | limbs[1] | limbs[2] | limbs[3]) == 0; }

  constexpr bool bit(std::size_t i) const { return ((limbs[i / 64] >> (i % 64)) & 1U) != 0; }

  constexpr std::size_t bit_length() const {
    for (std::size_t l = 4; l-- > 0;) {
      if (limbs[l] != 0) {
        return l * 64 + 64 - static_cast<std::size_t>(__builtin_clzll(limbs[l]));
      }
    }
    return 0;
  }

  static constexpr U256 from_u64(std::uint64_t v) { return U256{{v, 0, 0, 0}}; }

  /// Parses a big-endian hex string (optionally 0x-prefixed). Invalid digits are a programming error.
  static constexpr U256 from_hex(std::string_view hex) {
    if (hex.size() >= 2 && hex[0] == '0' && (hex[1] == 'x' || hex[1] == 'X')) {
      hex.remove_prefix(2);
    }
    U256 out;
    std::size_t nibble = 0;
    for (std::size_t i = hex.size(); i-- > 0; ++nibble) {
      const char c = hex[i];
      std::uint64_t d = 0;
      if (c >= '0' && c <= '9') {
        d = static_cast<std::uint64_t>(c - '0');
      } else if (c >= 'a' && c <= 'f') {
        d = static_cast<std::uint64_t>(c - 'a' + 10);
      } else if (c >= 'A' && c <= 'F') {
        d = static_cast<std::uint64_t>(c - 'A' + 10);
      }
      out.limbs[nibble / 16] |= d << (4 * (nibble % 16));
    }
    return out;
  }

  static U256 from_be_bytes(std::span<const std::uint8_t, 32> bytes) {
    U256 out;
    for (std::size_t i = 0; i < 32; ++i) {
      out.limbs[(31 - i) / 8] |= static_cast<std::uint64_t>(bytes[i]) << (8 * ((31 - i) % 8));
    }
    return out;
  }

  void to_be_bytes(std::span<std::uint8_t, 32> out) const {
    for (std::size_t i = 0; i < 32; ++i) {
      out[i] = static_cast<std::uint8_t>(limbs[(31 - i) / 8] >> (8 * ((31 - i) % 8)));
    }
  }

  std::string to_hex() const {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string s(64, '0');
    for (std::size_t i = 0; i < 64; ++i) {
      s[63 - i] = kDigits[(limbs[i / 16] >> (4 * (i % 16))) & 0xF];
    }
    return s;
  }
};

constexpr std::strong_ordering compare(const U256& a, const U256& b) {
  for (std::size_t l = 4; l-- > 0;) {
    if (a.limbs[l] != b.limbs[l]) {
      return a.limbs[l] < b.limbs[l] ? std::strong_ordering::less : std::strong_ordering::greater;
    }
  }
  return std::strong_ordering::equal;
}

/// a + b, returning the carry out.
constexpr std::uint64_t add_with_carry(U256& out, const U256& a, const U256& b) {
  std::uint64_t carry = 0;
  for (std::size_t i = 0; i < 4; ++i) {
    const u128 s = static_cast<u128>(a.limbs[i]) + b.limbs[i] + carry;
    out.limbs[i] = static_cast<std::uint64_t>(s);
    carry = static_cast<std::uint64_t>(s >> 64);
  }
  return carry;
}

/// a - b, returning the borrow out.
constexpr std::uint64_t sub_with_borrow(U256& out, const U256& a, const U256& b) {
  std::uint64_t borrow = 0;
  for (std::size_t i = 0; i < 4; ++i) {
    const u128 d = static_cast<u128>(a.limbs[i]) - b.limbs[i] - borrow;
    out.limbs[i] = static_cast<std::uint64_t>(d);
    borrow = static_cast<std::uint64_t>(d >> 64) & 1U;
  }
  return borrow;
}

/// Quotient of a by a small divisor; the remainder is discarded.
constexpr U256 div_small(const U256& a, std::uint64_t divisor) {
  U256 q;
  u128 rem = 0;
  for (std::size_t l = 4; l-- > 0;) {
    const u128 cur = (rem << 64) | a.limbs[l];
    q.limbs[l] = static_cast<std::uint64_t>(cur / divisor);
    rem = cur % divisor;
  }
  return q;
}

/// Element of a prime field in Montgomery form. `Params::kModulus` must be
/// an odd prime below 2^254 so that a sum of two reduced values never
/// overflows 256 bits.
template <typename Params>
class MontField {
 public:
  static constexpr U256 kModulus = Params::kModulus;

  constexpr MontField() = default;

  static constexpr MontField zero() { return MontField{}; }
  static constexpr MontField one() { return from_raw(kR1); }

  /// Reduces `v` modulo the field order.
  static constexpr MontField from_u256(U256 v) {
    while (compare(v, kModulus) >= 0) {
      sub_with_borrow(v, v, kModulus);
    }
    MontField out;
    out.v_ = v;
    return out * from_raw(kR2);
  }
  static constexpr MontField from_u64(std::uint64_t v) { return from_u256(U256::from_u64(v)); }
  static constexpr MontField from_hex(std::string_view hex) { return from_u256(U256::from_hex(hex)); }

  /// Canonical (non-Montgomery) representative in [0, modulus).
  constexpr U256 to_u256() const {
    MontField t = *this * from_raw(U256::from_u64(1));
    return t.v_;
  }

  constexpr bool is_zero() const { return v_.is_zero(); }
  constexpr bool operator==(const MontField&) const = default;

  constexpr MontField operator+(const MontField& o) const {
    MontField r;
    add_with_carry(r.v_, v_, o.v_);
    if (compare(r.v_, kModulus) >= 0) {
      sub_with_borrow(r.v_, r.v_, kModulus);
    }
    return r;
  }

  constexpr MontField operator-(const MontField& o) const {
    MontField r;
    if (sub_with_borrow(r.v_, v_, o.v_) != 0) {
      add_with_carry(r.v_, r.v_, kModulus);
    }
    return r;
  }

  constexpr MontField operator-() const { return zero() - *this; }

  constexpr MontField operator*(const MontField& o) const {
    // CIOS Montgomery multiplication.
    std::uint64_t t[6] = {0, 0, 0, 0, 0, 0};
    for (std::size_t i = 0; i < 4; ++i) {
      std::uint64_t carry = 0;
      for (std::size_t j = 0; j < 4; ++j) {
        const u128 s = static_cast<u128>(v_.limbs[j]) * o.v_.limbs[i] + t[j] + carry;
        t[j] = static_cast<std::uint64_t>(s);
        carry = static_cast<std::uint64_t>(s >> 64);
      }
      u128 s = static_cast<u128>(t[4]) + carry;
      t[4] = static_cast<std::uint64_t>(s);
      t[5] = static_cast<std::uint64_t>(s >> 64);

      const std::uint64_t m = t[0] * kInv;
      s = static_cast<u128>(m) * kModulus.limbs[0] + t[0];
      carry = static_cast<std::uint64_t>(s >> 64);
      for (std::size_t j = 1; j < 4; ++j) {
        s = static_cast<u128>(m) * kModulus.limbs[j] + t[j] + carry;
        t[j - 1] = static_cast<std::uint64_t>(s);
        carry = static_cast<std::uint64_t>(s >> 64);
      }
      s = static_cast<u128>(t[4]) + carry;
      t[3] = static_cast<std::uint64_t>(s);
      t[4] = t[5] + static_cast<std::uint64_t>(s >> 64);
    }
    MontField r;
    r.v_ = U256{{t[0], t[1], t[2], t[3]}};
    if (t[4] != 0 || compare(r.v_, kModulus) >= 0) {
      sub_with_borrow(r.v_, r.v_, kModulus);
    }
    return r;
  }

  constexpr MontField& operator+=(const MontField& o) { return *this = *this + o; }
  constexpr MontField& operator-=(const MontField& o) { return *this = *this - o; }
  constexpr MontField& operator*=(const MontField& o) { return *this = *this * o; }

  constexpr MontField square() const { return *this * *this; }
  constexpr MontField dbl() const { return *this + *this; }

  constexpr MontField pow(const U256& e) const {
    MontField acc = one();
    for (std::size_t i = e.bit_length(); i-- > 0;) {
      acc = acc.square();
      if (e.bit(i)) {
        acc *= *this;
      }
    }
    return acc;
  }

  /// Multiplicative inverse via Fermat; the inverse of zero is zero.
  constexpr MontField inverse() const { return pow(kModulusMinus2); }

  /// Square root for moduli congruent to 3 mod 4. Returns false when `*this` is a non-residue.
  constexpr bool sqrt(MontField& out) const {
    static_assert((Params::kModulus.limbs[0] & 3U) == 3U, "sqrt requires p = 3 mod 4");
    const MontField cand = pow(kSqrtExp);
    if (cand.square() != *this) {
      return false;
    }
    out = cand;
    return true;
  }

  /// True when the canonical value exceeds (p-1)/2; used as the sign bit in encodings.
  constexpr bool is_lexicographically_largest() const {
    return compare(to_u256(), kHalfModulus) > 0;
  }

  static constexpr MontField from_raw(const U256& v) {
    MontField r;
    r.v_ = v;
    return r;
  }
  constexpr const U256& raw() const { return v_; }

 private:
  static constexpr std::uint64_t compute_inv() {
    // -p^{-1} mod 2^64 by Newton iteration.
    std::uint64_t inv = 1;
    for (int i = 0; i < 7; ++i) {
      inv *= 2 - kModulus.limbs[0] * inv;
    }
    return ~inv + 1;
  }

  static constexpr U256 compute_r_power(std::size_t doublings) {
    U256 v = U256::from_u64(1);
    for (std::size_t i = 0; i < doublings; ++i) {
      add_with_carry(v, v, v);
      if (compare(v, kModulus) >= 0) {
        sub_with_borrow(v, v, kModulus);
      }
    }
    return v;
  }

  static constexpr U256 minus_small(std::uint64_t k) {
    U256 out;
    sub_with_borrow(out, kModulus, U256::from_u64(k));
    return out;
  }

  static constexpr U256 sqrt_exponent() {
    U256 e;
    add_with_carry(e, kModulus, U256::from_u64(1));
    return div_small(e, 4);
  }

  static constexpr std::uint64_t kInv = compute_inv();
  static constexpr U256 kR1 = compute_r_power(256);
  static constexpr U256 kR2 = compute_r_power(512);
  static constexpr U256 kModulusMinus2 = minus_small(2);
  static constexpr U256 kHalfModulus = div_small(minus_small(1), 2);
  static constexpr U256 kSqrtExp = sqrt_exponent();

  U256 v_{};
};

}  // namespace blindmarket::crypto
