// Copyright 2026 The xsect Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS-IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#pragma once

// Shared helpers for the test binaries: seeded random inputs and exact
// comparisons through expansion arithmetic.

#include <cmath>
#include <cstdint>
#include <random>

#include "xsect/eft.hpp"
#include "xsect/expansion.hpp"
#include "xsect/geometry.hpp"

namespace xsect::test {

inline constexpr double u = kUnitRoundoff;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : g_(seed) {}

  // Uniform on [0, 1).
  double uniform() { return static_cast<double>(g_() >> 11) * 0x1p-53; }
  double uniform(double lo, double hi) { return lo + uniform() * (hi - lo); }
  std::uint64_t bits() { return g_(); }

  // Random binary64 with a random exponent in [emin, emax] and sign.
  double wide(int emin, int emax) {
    const int e = emin + static_cast<int>(g_() % static_cast<std::uint64_t>(emax - emin + 1));
    const double m = 1.0 + uniform();
    return std::ldexp((g_() & 1) ? -m : m, e);
  }

  Vec3 unit_vector() {
    for (;;) {
      const Vec3 v{uniform(-1, 1), uniform(-1, 1), uniform(-1, 1)};
      const double n2 = v.x * v.x + v.y * v.y + v.z * v.z;
      if (n2 > 0.01 && n2 <= 1.0) {
        const double n = std::sqrt(n2);
        return {v.x / n, v.y / n, v.z / n};
      }
    }
  }

 private:
  std::mt19937_64 g_;
};

inline Expansion ex(double v) { return Expansion(v); }

inline Expansion pair_value(const CompensatedPair& p) { return exp_add(ex(p.hi), ex(p.lo)); }

inline Expansion exact_sum(double a, double b) { return exp_add(ex(a), ex(b)); }

inline Expansion exact_prod(double a, double b) { return exp_mul(ex(a), ex(b)); }

inline Expansion exact_dop(double a, double b, double c, double d) {
  return exp_sub(exact_prod(a, d), exact_prod(b, c));
}

inline bool same_value(const Expansion& a, const Expansion& b) { return compare(a, b) == 0; }

}  // namespace xsect::test
