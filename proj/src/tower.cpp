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

#include "blindmarket/crypto/tower.hpp"

#include <array>
#include <vector>

namespace blindmarket::crypto {

namespace {

constexpr U256 p_minus(std::uint64_t k) {
  U256 out;
  sub_with_borrow(out, FqParams::kModulus, U256::from_u64(k));
  return out;
}

}  // namespace

// gamma[k] = xi^(k (p - 1) / 6), so that (a w^k)^p = conj(a) gamma[k] w^k.
const std::array<Fq2, 6>& frobenius_coefficients() {
  static const std::array<Fq2, 6> kGamma = [] {
    const Fq2 xi{Fq::from_u64(9), Fq::one()};
    const Fq2 g1 = xi.pow(div_small(p_minus(1), 6));
    std::array<Fq2, 6> g{};
    g[0] = Fq2::one();
    for (std::size_t k = 1; k < 6; ++k) {
      g[k] = g[k - 1] * g1;
    }
    return g;
  }();
  return kGamma;
}

bool Fq2::sqrt(Fq2& out) const {
  if (is_zero()) {
    out = zero();
    return true;
  }
  const Fq2 a1 = pow(div_small(p_minus(3), 4));
  const Fq2 alpha = a1 * (a1 * *this);
  const Fq2 a0 = alpha.conjugate() * alpha;
  const Fq2 minus_one = -one();
  if (a0 == minus_one) {
    return false;
  }
  const Fq2 x0 = a1 * *this;
  Fq2 cand;
  if (alpha == minus_one) {
    cand = Fq2{-x0.c1, x0.c0};  // u * x0
  } else {
    const Fq2 b = (one() + alpha).pow(div_small(p_minus(1), 2));
    cand = b * x0;
  }
  if (cand.square() != *this) {
    return false;
  }
  out = cand;
  return true;
}

Fq12 Fq12::frobenius() const {
  const auto& g = frobenius_coefficients();
  // Coefficients of w^0..w^5: c0.c0, c1.c0, c0.c1, c1.c1, c0.c2, c1.c2.
  Fq12 r;
  r.c0.c0 = c0.c0.conjugate() * g[0];
  r.c1.c0 = c1.c0.conjugate() * g[1];
  r.c0.c1 = c0.c1.conjugate() * g[2];
  r.c1.c1 = c1.c1.conjugate() * g[3];
  r.c0.c2 = c0.c2.conjugate() * g[4];
  r.c1.c2 = c1.c2.conjugate() * g[5];
  return r;
}

Fq12 Fq12::pow(std::span<const std::uint64_t> exponent_limbs) const {
  // Fixed 4-bit window.
  std::array<Fq12, 16> table{};
  table[0] = one();
  for (std::size_t i = 1; i < 16; ++i) {
    table[i] = table[i - 1] * *this;
  }
  Fq12 acc = one();
  bool started = false;
  for (std::size_t l = exponent_limbs.size(); l-- > 0;) {
    for (int nib = 15; nib >= 0; --nib) {
      const auto d = static_cast<std::size_t>((exponent_limbs[l] >> (4 * nib)) & 0xF);
      if (started) {
        acc = acc.square().square().square().square();
      }
      if (d != 0) {
        acc = started ? acc * table[d] : table[d];
        started = true;
      }
    }
  }
  return acc;
}

}  // namespace blindmarket::crypto
