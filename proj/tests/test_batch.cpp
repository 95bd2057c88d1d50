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

#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "support.hpp"
#include "xsect/batch.hpp"
#include "xsect/sphere_intersect.hpp"

using namespace xsect;
using namespace xsect::test;

namespace {

constexpr Method kMethods[] = {Method::NaiveFinal, Method::NaiveCdo, Method::NaiveBaseline,
                               Method::Accux};

std::vector<ArcLatQuery> mixed_queries(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<ArcLatQuery> qs;
  for (std::size_t i = 0; i < n; ++i) {
    ArcLatQuery q{rng.unit_vector(), rng.unit_vector(), rng.uniform(-0.6, 0.6)};
    switch (i % 23) {
      case 5: q.x2 = q.x1; break;                                          // DegenerateArc
      case 11: q.z0 = std::numeric_limits<double>::quiet_NaN(); break;     // InvalidQuery
      case 17: q.x1 = {1, 0, 0}; q.x2 = {0, 1, 0}; break;                  // DegenerateEquatorial
      default: break;
    }
    qs.push_back(q);
  }
  return qs;
}

bool same_bits(double a, double b) {
  return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
}

bool same_point(const std::optional<Vec3>& a, const std::optional<Vec3>& b) {
  if (a.has_value() != b.has_value()) return false;
  if (!a) return true;
  return same_bits(a->x, b->x) && same_bits(a->y, b->y) && same_bits(a->z, b->z);
}

}  // namespace

TEST_CASE("batch output matches the scalar API bit for bit") {
  const auto qs = mixed_queries(1000, 51);
  const QueryBatch batch = prepare_batch(qs);
  for (Method m : kMethods) {
    const auto entries = finalize(batch, run_batch(m, batch, {}));
    REQUIRE(entries.size() == qs.size());
    for (std::size_t i = 0; i < qs.size(); ++i) {
      CAPTURE(i);
      IntersectionSolution s;
      Outcome expected = Outcome::TwoPoints;
      try {
        s = solve(m, qs[i]);
        expected = s.classification == Classification::TwoPoints ? Outcome::TwoPoints
                   : s.classification == Classification::Tangent ? Outcome::Tangent
                                                                 : Outcome::NoIntersection;
      } catch (const DegenerateArc&) {
        expected = Outcome::DegenerateArc;
      } catch (const DegenerateEquatorial&) {
        expected = Outcome::DegenerateEquatorial;
      } catch (const InvalidQuery&) {
        expected = Outcome::InvalidQuery;
      }
      REQUIRE(entries[i].outcome == expected);
      REQUIRE(same_point(entries[i].p1, s.p1));
      REQUIRE(same_point(entries[i].p2, s.p2));
    }
  }
}

TEST_CASE("lane width, thread count and chunk size do not change results") {
  const auto qs = mixed_queries(3001, 52);  // not a multiple of any lane width
  const QueryBatch batch = prepare_batch(qs);
  for (Method m : kMethods) {
    const std::uint64_t ref = checksum(run_batch(m, batch, {1, 1, 4096}));
    for (std::size_t lanes : {1u, 2u, 4u, 8u}) {
      for (std::size_t threads : {1u, 3u, 8u}) {
        for (std::size_t chunk : {1u, 7u, 4096u}) {
          CAPTURE(lanes);
          CAPTURE(threads);
          CAPTURE(chunk);
          CHECK(checksum(run_batch(m, batch, {lanes, threads, chunk})) == ref);
        }
      }
    }
  }
}

TEST_CASE("tails shorter than the lane width") {
  for (std::size_t n : {1u, 2u, 3u, 5u, 7u, 9u}) {
    const auto qs = mixed_queries(n, 53 + n);
    const QueryBatch batch = prepare_batch(qs);
    const auto a = run_batch(Method::Accux, batch, {1, 1, 4096});
    const auto b = run_batch(Method::Accux, batch, {8, 2, 3});
    REQUIRE(b.size() == n);
    CHECK(checksum(a) == checksum(b));
  }
}

TEST_CASE("empty batch") {
  const QueryBatch batch = prepare_batch({});
  CHECK(batch.size() == 0);
  const auto out = run_batch(Method::Accux, batch, {4, 4, 16});
  CHECK(out.size() == 0);
  CHECK(finalize(batch, out).empty());
  CHECK(accux_batch({}, {}).empty());
}

TEST_CASE("invalid options") {
  const auto qs = mixed_queries(4, 54);
  const QueryBatch batch = prepare_batch(qs);
  CHECK_THROWS_AS(run_batch(Method::Accux, batch, {3, 1, 16}), std::invalid_argument);
  CHECK_THROWS_AS(run_batch(Method::Accux, batch, {1, 0, 16}), std::invalid_argument);
  CHECK_THROWS_AS(run_batch(Method::Accux, batch, {1, 1, 0}), std::invalid_argument);
}

TEST_CASE("degenerate entries are flagged without stopping the batch") {
  const std::vector<ArcLatQuery> qs{
      {{1, 0, 0}, {0, 0, 1}, 0.5},
      {{1, 0, 0}, {1, 0, 0}, 0.5},
      {{1, 0, 0}, {0, 1, 0}, 0.0},
      {{8, 0, 0}, {0, 0, 1}, 0.5},
      {{1, 0, 0}, {0, 0, 1}, 2.0},
      {{1, 0, 0}, {0, 0, 1}, 1.0},
  };
  const auto e = accux_batch(qs, {});
  REQUIRE(e.size() == 6);
  CHECK(e[0].outcome == Outcome::TwoPoints);
  CHECK(e[0].p1->x == 0x1.bb67ae8584caap-1);
  CHECK(e[1].outcome == Outcome::DegenerateArc);
  CHECK(e[2].outcome == Outcome::DegenerateEquatorial);
  CHECK(e[3].outcome == Outcome::InvalidQuery);
  CHECK(e[4].outcome == Outcome::NoIntersection);
  CHECK_FALSE(e[4].p1.has_value());
  CHECK(e[5].outcome == Outcome::Tangent);
  CHECK(e[5].p1.has_value());
  CHECK_FALSE(e[5].p2.has_value());
  CHECK(to_string(Outcome::DegenerateArc) == "DegenerateArc");
}

TEST_CASE("checksum sees every output") {
  const auto qs = mixed_queries(64, 55);
  const QueryBatch batch = prepare_batch(qs);
  auto out = run_batch(Method::Accux, batch, {});
  const std::uint64_t c = checksum(out);
  std::size_t i = 0;
  while (std::isnan(out.p1x[i])) ++i;
  out.p1x[i] = std::nextafter(out.p1x[i], INFINITY);
  CHECK(checksum(out) != c);
}
