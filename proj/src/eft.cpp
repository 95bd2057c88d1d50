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

#include "xsect/eft.hpp"

#include <cfenv>
#include <stdexcept>

namespace xsect {

bool ensure_round_to_nearest() {
  if (std::fegetround() == FE_TONEAREST) return true;
  std::fesetround(FE_TONEAREST);
  return false;
}

CompensatedPair acc_sqrt(double H, double h) {
  if (H < 0.0 || std::isnan(H)) throw std::domain_error("acc_sqrt: negative leading part");
  return acc_sqrt_unchecked(H, h);
}

double gamma(std::size_t n) {
  const double nu = static_cast<double>(n) * kUnitRoundoff;
  return nu / (1.0 - nu);
}

double compdot_error_bound(std::size_t n, double abs_dot, double dot) {
  if (dot == 0.0) return std::numeric_limits<double>::infinity();
  const double nd = static_cast<double>(n);
  const double factor = nd * kUnitRoundoff / (1.0 - (nd - 1.0) * kUnitRoundoff);
  return gamma(n) * factor * abs_dot / std::abs(dot);
}

}  // namespace xsect
