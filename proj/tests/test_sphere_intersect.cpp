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

#include <cmath>
#include <limits>

#include "support.hpp"
#include "xsect/oracle.hpp"
#include "xsect/sphere_intersect.hpp"

using namespace xsect;
using namespace xsect::test;

namespace {

const Vec3 kX{1, 0, 0};
const Vec3 kY{0, 1, 0};
const Vec3 kZ{0, 0, 1};
constexpr double kSqrt3Over2 = 0x1.bb67ae8584caap-1;

ArcLatQuery meridian(double z0) { return {kX, kZ, z0}; }

bool is_zero_pair(const CompensatedPair& p) { return p.hi == 0.0 && p.lo == 0.0; }

double dist(const Vec3& a, const Vec3& b) {
  return std::hypot(a.x - b.x, a.y - b.y, a.z - b.z);
}

}  // namespace

TEST_CASE("cross_accurate on axis vectors") {
  auto n = cross_accurate(kX, kY);
  CHECK(is_zero_pair(n.nx));
  CHECK(is_zero_pair(n.ny));
  CHECK(n.nz.hi == 1.0);
  CHECK(n.nz.lo == 0.0);

  n = cross_accurate(kX, kZ);
  CHECK(is_zero_pair(n.nx));
  CHECK(n.ny.hi == -1.0);
  CHECK(n.ny.lo == 0.0);
  CHECK(is_zero_pair(n.nz));

  CHECK_THROWS_AS(cross_accurate(kX, Vec3{2, 0, 0}), DegenerateArc);
  CHECK_THROWS_AS(cross_accurate(kX, kX), DegenerateArc);
}

TEST_CASE("cross_accurate components meet the per-component bound") {
  Rng rng(31);
  for (int i = 0; i < 5000; ++i) {
    const Vec3 a = rng.unit_vector();
    const Vec3 b = rng.unit_vector();
    const auto n = cross_accurate(a, b);
    const auto e = exact_cross(a, b);
    const CompensatedPair got[3] = {n.nx, n.ny, n.nz};
    const Expansion* want[3] = {&e.nx, &e.ny, &e.nz};
    for (int c = 0; c < 3; ++c) {
      if (want[c]->is_zero()) continue;
      const double nc = std::abs(estimate(*want[c]));
      REQUIRE(relative_error(pair_value(got[c]), *want[c]) <= (1 + 2 / nc) * u * u * (1 + 64 * u));
    }
  }
}

TEST_CASE("canonicalize keeps an already canonical query") {
  Rng rng(32);
  int found = 0;
  while (found < 50) {
    const ArcLatQuery q{rng.unit_vector(), rng.unit_vector(), rng.uniform(0, 0.1)};
    const auto n = cross_accurate(q.x1, q.x2);
    if (n.nx.hi <= 0 || n.ny.hi <= 0 || n.nz.hi <= 0) continue;
    ++found;
    const CanonicalQuery c = canonicalize(q);
    CHECK(c.transform == SignTransform{});
    CHECK(c.query.x1 == q.x1);
    CHECK(c.query.x2 == q.x2);
    CHECK(c.query.z0 == q.z0);
  }
}

TEST_CASE("canonicalize the meridian arc") {
  const CanonicalQuery c = canonicalize(meridian(0.5));
  const auto n = cross_accurate(c.query.x1, c.query.x2);
  CHECK(n.ny.hi == 1.0);
  CHECK(n.nx.hi == 0.0);
  CHECK(n.nz.hi == 0.0);
  // One flag suffices; reflect_x is the first in the fixed search order.
  CHECK(c.transform.reflect_x);
  CHECK_FALSE(c.transform.swap_endpoints);
  CHECK_FALSE(c.transform.reflect_y);
  CHECK_FALSE(c.transform.reflect_z);
  CHECK(apply(c.transform, c.query).x1 == kX);
}

TEST_CASE("apply_inverse is the identity after apply, for all 16 transforms") {
  const Vec3 p{0.25, -0.5, 0x1.8p-3};
  CHECK(apply_inverse(SignTransform{}, p) == p);
  SignTransform rx;
  rx.reflect_x = true;
  CHECK(apply_inverse(rx, p) == Vec3{-p.x, p.y, p.z});
  for (int bits = 0; bits < 16; ++bits) {
    const SignTransform t{(bits & 1) != 0, (bits & 2) != 0, (bits & 4) != 0, (bits & 8) != 0};
    CHECK(apply_inverse(t, apply(t, p)) == p);
    const ArcLatQuery q{{0.1, 0.2, 0.3}, {-0.3, 0.4, 0.5}, -0.25};
    const ArcLatQuery back = apply(t, apply(t, q));
    CHECK(back.x1 == q.x1);
    CHECK(back.x2 == q.x2);
    CHECK(back.z0 == q.z0);
  }
}

TEST_CASE("classify the meridian arc") {
  CHECK(classify(canonicalize(meridian(1.0)).query) == Classification::Tangent);
  CHECK(classify(canonicalize(meridian(0.5)).query) == Classification::TwoPoints);
  CHECK(classify(canonicalize(meridian(1.0 + 0x1p-50)).query) == Classification::NoIntersection);
  CHECK_THROWS_AS(classify(ArcLatQuery{kX, kY, 0.0}), DegenerateEquatorial);
  CHECK_THROWS_AS(classify(ArcLatQuery{kX, kX, 0.0}), DegenerateArc);
}

TEST_CASE("naive-final on the meridian arc") {
  auto s = solve(Method::NaiveFinal, meridian(0.5));
  REQUIRE(s.classification == Classification::TwoPoints);
  CHECK(dist(*s.p1, Vec3{std::sqrt(0.75), 0, 0.5}) <= 0x1p-40);
  CHECK(s.p1->z == 0.5);
  s = solve(Method::NaiveFinal, meridian(1.0));
  REQUIRE(s.classification == Classification::Tangent);
  CHECK(dist(*s.p1, kZ) == 0.0);
  CHECK_FALSE(s.p2.has_value());
}

TEST_CASE("naive-cdo on the meridian arc") {
  auto s = solve(Method::NaiveCdo, meridian(0.5));
  REQUIRE(s.classification == Classification::TwoPoints);
  CHECK(dist(*s.p1, Vec3{std::sqrt(0.75), 0, 0.5}) <= 0x1p-40);
  s = solve(Method::NaiveCdo, meridian(0.0));
  CHECK(dist(*s.p1, kX) <= 0x1p-45);
}

TEST_CASE("naive-baseline on the meridian arc") {
  auto s = solve(Method::NaiveBaseline, meridian(0.5));
  const auto f = solve(Method::NaiveFinal, meridian(0.5));
  CHECK(dist(*s.p1, *f.p1) <= 0x1p-40);
  s = solve(Method::NaiveBaseline, meridian(0.0));
  CHECK(dist(*s.p1, kX) <= 0x1p-45);
}

TEST_CASE("naive-baseline loses accuracy near the equator") {
  // Endpoints just above the equator: n_hat_z^2 is close to 1.
  const double t = 1e-7;
  const ArcLatQuery q{{1, 0, t}, {0, 1, 2 * t}, 1.5 * t};
  const auto ref = intersect_reference(q);
  REQUIRE(ref.classification == Classification::TwoPoints);
  const double base = relative_point_error(*solve(Method::NaiveBaseline, q).p1, *ref.p1);
  const double fin = relative_point_error(*solve(Method::NaiveFinal, q).p1, *ref.p1);
  CHECK(base >= 100 * std::max(fin, u));
}

TEST_CASE("accux on the meridian arc") {
  auto s = solve(Method::Accux, meridian(0.5));
  REQUIRE(s.classification == Classification::TwoPoints);
  CHECK(s.p1->x == kSqrt3Over2);
  CHECK(s.p1->y == 0.0);
  CHECK(s.p1->z == 0.5);
  CHECK(s.p2->x == -kSqrt3Over2);
  const auto ref = intersect_reference(meridian(0.5));
  CHECK(relative_point_error(*s.p1, *ref.p1) <= 4 * u);

  s = solve(Method::Accux, meridian(1.0));
  REQUIRE(s.classification == Classification::Tangent);
  CHECK(s.p1->x == 0.0);
  CHECK(s.p1->y == 0.0);
  CHECK(s.p1->z == 1.0);

  CHECK(solve(Method::Accux, meridian(1.0 + 0x1p-50)).classification ==
        Classification::NoIntersection);
  CHECK_THROWS_AS(solve(Method::Accux, ArcLatQuery{kX, kX, 0.5}), DegenerateArc);
}

TEST_CASE("solve validates its input") {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(solve(Method::Accux, ArcLatQuery{{nan, 0, 0}, kZ, 0.5}), InvalidQuery);
  CHECK_THROWS_AS(solve(Method::Accux, ArcLatQuery{kX, kZ, INFINITY}), InvalidQuery);
  CHECK_THROWS_AS(solve(Method::Accux, ArcLatQuery{{4, 0, 0}, kZ, 0.5}), InvalidQuery);
  CHECK_THROWS_AS(solve(Method::Accux, ArcLatQuery{{0.25, 0, 0}, kZ, 0.5}), InvalidQuery);
  CHECK_NOTHROW(solve(Method::Accux, ArcLatQuery{{1 + 0x1p-30, 0, 0}, kZ, 0.5}));
}

TEST_CASE("every method returns z == z0 bit-exactly") {
  Rng rng(33);
  for (int i = 0; i < 2000; ++i) {
    const Vec3 a = rng.unit_vector();
    const Vec3 b = rng.unit_vector();
    const double z0 = rng.uniform(-0.2, 0.2);
    for (Method m : {Method::NaiveFinal, Method::NaiveCdo, Method::NaiveBaseline, Method::Accux}) {
      const auto s = solve(m, ArcLatQuery{a, b, z0});
      if (s.p1) REQUIRE(std::bit_cast<std::uint64_t>(s.p1->z) == std::bit_cast<std::uint64_t>(z0));
      if (s.p2) REQUIRE(std::bit_cast<std::uint64_t>(s.p2->z) == std::bit_cast<std::uint64_t>(z0));
    }
  }
}

TEST_CASE("accux points are unit length on well-conditioned input") {
  Rng rng(34);
  for (int i = 0; i < 2000; ++i) {
    const ArcLatQuery q{rng.unit_vector(), rng.unit_vector(), rng.uniform(-0.3, 0.3)};
    const auto s = solve(Method::Accux, q);
    if (s.classification != Classification::TwoPoints) continue;
    for (const Vec3& p : {*s.p1, *s.p2}) {
      const double n = std::sqrt(p.x * p.x + p.y * p.y + p.z * p.z);
      REQUIRE(std::abs(n - 1.0) <= 0x1p-40);
    }
  }
}

TEST_CASE("point_on_arc") {
  const Vec3 mid{std::sqrt(0.5), 0, std::sqrt(0.5)};
  CHECK(point_on_arc(mid, kX, kZ));
  CHECK_FALSE(point_on_arc(Vec3{-mid.x, 0, -mid.z}, kX, kZ));
  CHECK(point_on_arc(kX, kX, kZ));
  CHECK(point_on_arc(kZ, kX, kZ));
  CHECK_FALSE(point_on_arc(Vec3{-1, 0, 0}, kX, kZ));
}

TEST_CASE("error bound evaluators") {
  CHECK(accux_error_bound(0.0) == 3 * u);
  CHECK(accux_error_bound(1.0) == 0.0);
  CHECK(accux_error_bound(0.5) == doctest::Approx(3 * std::sqrt(0.75) * u).epsilon(1e-15));
  const double b = naive_error_bound(meridian(0.5));
  CHECK(b / u == doctest::Approx(21 / std::sqrt(0.75) + 19 * std::sqrt(2.0)).epsilon(1e-14));
  CHECK(b / u == doctest::Approx(51.1).epsilon(1e-3));
  CHECK(std::isinf(naive_error_bound(meridian(1.0))));
}

TEST_CASE("method names") {
  for (Method m : {Method::NaiveFinal, Method::NaiveCdo, Method::NaiveBaseline, Method::Accux}) {
    CHECK(parse_method(to_string(m)) == m);
  }
  CHECK_FALSE(parse_method("fast").has_value());
  CHECK(to_string(Classification::Tangent) == "Tangent");
}
