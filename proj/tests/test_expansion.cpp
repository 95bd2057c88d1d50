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

#include <doctest.h>

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "support.hpp"
#include "xsect/expansion.hpp"

using namespace xsect;
using namespace xsect::test;
using boost::multiprecision::cpp_int;

namespace {

// Exact integer value of v * 2^shift; v must be a multiple of 2^-shift.
cpp_int scaled(double v, int shift) {
  if (v == 0.0) return 0;
  int e = 0;
  const double m = std::frexp(std::abs(v), &e);
  const auto mant = static_cast<std::int64_t>(std::ldexp(m, 53));
  const int k = e - 53 + shift;
  REQUIRE(k >= 0);
  cpp_int r = mant;
  r <<= k;
  return v < 0 ? cpp_int(-r) : r;
}

cpp_int scaled(const Expansion& a, int shift) {
  cpp_int r = 0;
  for (double c : a.components()) r += scaled(c, shift);
  return r;
}

// Random expansion built from a few doubles of spread-out magnitudes.
Expansion random_expansion(Rng& rng, int terms, int emin, int emax) {
  Expansion e;
  for (int i = 0; i < terms; ++i) e = exp_add(e, Expansion(rng.wide(emin, emax)));
  return e;
}

bool well_formed(const Expansion& a) {
  try {
    Expansion::from_components(a.components());
    return true;
  } catch (const OracleError&) {
    return false;
  }
}

constexpr int kShift = 600;

}  // namespace

TEST_CASE("exp_add examples") {
  const Expansion s = exp_add(Expansion(1.0), Expansion(0x1p-60));
  REQUIRE(s.size() == 2);
  CHECK(s.components()[0] == 0x1p-60);
  CHECK(s.components()[1] == 1.0);
  const Expansion a = exp_add(Expansion(0.1), Expansion(0x1p-70));
  CHECK(exp_add(a, Expansion()).components() == a.components());
}

TEST_CASE("exp_add matches scaled-integer arithmetic") {
  Rng rng(21);
  for (int i = 0; i < 3000; ++i) {
    const Expansion a = random_expansion(rng, 4, -200, 200);
    const Expansion b = random_expansion(rng, 4, -200, 200);
    const Expansion s = exp_add(a, b);
    REQUIRE(well_formed(s));
    REQUIRE(scaled(s, kShift) == scaled(a, kShift) + scaled(b, kShift));
    REQUIRE(scaled(exp_sub(a, b), kShift) == scaled(a, kShift) - scaled(b, kShift));
  }
}

TEST_CASE("exp_mul examples") {
  const Expansion a = exp_add(Expansion(0.3), Expansion(0x1p-80));
  CHECK(exp_mul(a, Expansion(1.0)).components() == a.components());
  const Expansion p = exp_mul(Expansion(134217729.0), Expansion(134217729.0));
  REQUIRE(p.size() == 2);
  CHECK(p.components()[0] == 1.0);
  CHECK(p.components()[1] == 18014398777917440.0);
  CHECK(exp_mul(a, Expansion()).is_zero());
}

TEST_CASE("exp_mul matches scaled-integer arithmetic") {
  Rng rng(22);
  for (int i = 0; i < 3000; ++i) {
    const Expansion a = random_expansion(rng, 3, -120, 120);
    const Expansion b = random_expansion(rng, 3, -120, 120);
    const Expansion p = exp_mul(a, b);
    REQUIRE(well_formed(p));
    REQUIRE(scaled(p, 2 * kShift) == scaled(a, kShift) * scaled(b, kShift));
  }
}

TEST_CASE("sign, compare, estimate and round_to_double") {
  const Expansion a = exp_add(Expansion(1.0), Expansion(-0x1p-80));
  CHECK(sign(a) == 1);
  CHECK(sign(exp_neg(a)) == -1);
  CHECK(sign(Expansion()) == 0);
  CHECK(compare(a, Expansion(1.0)) == -1);
  CHECK(round_to_double(a) == 1.0);

  // Exactly halfway between 1 and 1 + 2^-52: ties to even.
  CHECK(round_to_double(exp_add(Expansion(1.0), Expansion(0x1p-53))) == 1.0);
  const double odd = 1.0 + 0x1p-52;
  CHECK(round_to_double(exp_add(Expansion(odd), Expansion(0x1p-53))) == 1.0 + 0x1p-51);
  // Just above the tie rounds up.
  const Expansion above = exp_add(exp_add(Expansion(1.0), Expansion(0x1p-53)), Expansion(0x1p-150));
  CHECK(round_to_double(above) == 1.0 + 0x1p-52);
  // estimate() sums the components in double and may land on either side.
  CHECK(std::abs(estimate(above) - 1.0) <= 0x1p-52);
}

TEST_CASE("round_to_double is the nearest double") {
  Rng rng(23);
  for (int i = 0; i < 3000; ++i) {
    const Expansion a = random_expansion(rng, 5, -60, 10);
    if (a.is_zero()) continue;
    const double r = round_to_double(a);
    const Expansion err = abs(exp_sub(a, Expansion(r)));
    for (double nb : {std::nextafter(r, INFINITY), std::nextafter(r, -INFINITY)}) {
      REQUIRE(compare(err, abs(exp_sub(a, Expansion(nb)))) <= 0);
    }
  }
}

TEST_CASE("exp_sqrt examples") {
  CHECK(exp_sqrt(Expansion(4.0)).components() == std::vector<double>{2.0});
  CHECK(exp_sqrt(Expansion(0.0)).is_zero());
  CHECK_THROWS_AS(exp_sqrt(Expansion(-1.0)), std::domain_error);
}

TEST_CASE("exp_sqrt self-consistency to 2^-210") {
  Rng rng(24);
  for (int i = 0; i < 2000; ++i) {
    const Expansion a = abs(random_expansion(rng, 4, -300, 300));
    if (a.is_zero()) continue;
    const Expansion r = exp_sqrt(a, 212);
    const Expansion res = abs(exp_sub(exp_mul(r, r), a));
    // |r^2 - a| <= 2^-210 a
    REQUIRE(compare(scaled_pow2(res, 210), a) <= 0);
  }
}

TEST_CASE("exp_sqrt at 424 bits") {
  Rng rng(25);
  for (int i = 0; i < 200; ++i) {
    const Expansion a = abs(random_expansion(rng, 4, -50, 50));
    if (a.is_zero()) continue;
    const Expansion r = exp_sqrt(a, 424);
    const Expansion res = abs(exp_sub(exp_mul(r, r), a));
    REQUIRE(compare(scaled_pow2(res, 422), a) <= 0);
  }
}

TEST_CASE("exp_div accuracy") {
  Rng rng(26);
  for (int i = 0; i < 2000; ++i) {
    const Expansion a = random_expansion(rng, 3, -100, 100);
    const Expansion b = random_expansion(rng, 3, -100, 100);
    if (b.is_zero()) continue;
    const Expansion q = exp_div(a, b, 212);
    // |q b - a| <= 2^-211 |a|
    const Expansion res = abs(exp_sub(exp_mul(q, b), a));
    REQUIRE(compare(scaled_pow2(res, 211), abs(a)) <= 0);
  }
  CHECK_THROWS_AS(exp_div(Expansion(1.0), Expansion()), std::domain_error);
  CHECK(exp_div(Expansion(3.0), Expansion(2.0)).components() == std::vector<double>{1.5});
}

TEST_CASE("from_components validation and capacity") {
  CHECK_NOTHROW(Expansion::from_components({0x1p-60, 1.0}));
  CHECK_THROWS_AS(Expansion::from_components({1.0, 0x1p-60}), OracleError);
  CHECK_THROWS_AS(Expansion::from_components({1.5, 3.0}), OracleError);  // bits overlap
  CHECK_THROWS_AS(Expansion::from_components({0.0}), OracleError);
  std::vector<double> many;
  for (int i = 0; i <= static_cast<int>(kExpansionCapacity); ++i) many.push_back(std::ldexp(1.0, 30 * i - 1000));
  CHECK_THROWS_AS(Expansion::from_components(many), OracleError);
  CHECK_THROWS_AS(Expansion{INFINITY}, OracleError);
}
