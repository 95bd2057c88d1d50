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

// Nonoverlapping floating-point expansions: a real number held exactly as the
// unevaluated sum of binary64 components (Priest, Shewchuk). Addition,
// subtraction and multiplication are exact; sqrt and division are computed to
// a requested number of bits by Newton iteration with exact residuals.
//
// Exactness assumes no overflow and no underflow in the partial products.
// Inputs of interest here live within a few hundred binades of 1; exp_sqrt
// and exp_div rescale by powers of two before iterating.

#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <vector>

namespace xsect {

class OracleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Maximum number of components of any stored expansion.
inline constexpr std::size_t kExpansionCapacity = 64;

class Expansion {
 public:
  Expansion() = default;
  Expansion(double v);  // NOLINT: implicit on purpose, exact

  // Components in increasing magnitude, nonoverlapping, zero-free. Throws
  // OracleError if the list violates any of that or exceeds the capacity.
  static Expansion from_components(std::vector<double> components);

  const std::vector<double>& components() const { return c_; }
  std::size_t size() const { return c_.size(); }
  bool is_zero() const { return c_.empty(); }

  // Largest component. Zero for the zero expansion.
  double leading() const { return c_.empty() ? 0.0 : c_.back(); }

 private:
  friend Expansion make_expansion_unchecked(std::vector<double> c);
  std::vector<double> c_;
};

Expansion exp_add(const Expansion& a, const Expansion& b);
Expansion exp_sub(const Expansion& a, const Expansion& b);
Expansion exp_neg(const Expansion& a);
Expansion exp_mul(const Expansion& a, const Expansion& b);
Expansion exp_scale(const Expansion& a, double b);

// a * 2^k, exact barring overflow and underflow.
Expansion scaled_pow2(const Expansion& a, int k);

// -1, 0 or +1; exact.
int sign(const Expansion& a);
Expansion abs(const Expansion& a);
// Exact three-way comparison of the values.
int compare(const Expansion& a, const Expansion& b);

// Sum of the components in binary64, smallest first. Within a few ulps.
double estimate(const Expansion& a);

// The binary64 nearest to the exact value, ties to even. Exact decision.
double round_to_double(const Expansion& a);

// sqrt(a) with relative error <= 2^-target_bits. Throws std::domain_error
// for a < 0.
Expansion exp_sqrt(const Expansion& a, int target_bits = 212);

// a / b with relative error <= 2^-target_bits. Throws std::domain_error for
// b == 0.
Expansion exp_div(const Expansion& a, const Expansion& b, int target_bits = 212);

}  // namespace xsect
