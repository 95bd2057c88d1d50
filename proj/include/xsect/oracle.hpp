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

// Reference solutions in expansion arithmetic. Everything up to s^2 is exact;
// the square root and the final division carry a relative error of at most
// 2^-bits each.

#include <array>
#include <optional>

#include "xsect/expansion.hpp"
#include "xsect/geometry.hpp"
#include "xsect/kernels.hpp"

namespace xsect {

struct ExactNormal {
  Expansion nx;
  Expansion ny;
  Expansion nz;
};

// x1 x x2 exactly.
ExactNormal exact_cross(const Vec3& x1, const Vec3& x2);

struct ReferencePoint {
  Expansion px;
  Expansion py;
  double pz = 0.0;  // z0
  Vec3 rounded;     // px, py rounded to nearest
};

struct ReferenceSolution {
  Classification classification = Classification::NoIntersection;
  std::optional<ReferencePoint> p1;
  std::optional<ReferencePoint> p2;
};

inline constexpr int kOracleBits = 212;

// Reference intersection of an arbitrary query. Uses the same canonical frame
// as solve(), so p1 and p2 correspond to the points solve() returns.
// Classification comes from the exact sign of s^2. Throws DegenerateArc when
// x1 x x2 == 0 and DegenerateEquatorial when n_x = n_y = 0, both exactly.
ReferenceSolution intersect_reference(const ArcLatQuery& q, int bits = kOracleBits);

// Same intersection through the unit-normal formula, normalizing n first.
// Used only to cross-check the formula above.
ReferenceSolution intersect_reference_unit_normal(const ArcLatQuery& q, int bits = kOracleBits);

// |computed - ref| over the x and y coordinates, i.e. the relative error for
// a point on the unit sphere. The difference is exact; the root is taken to
// well beyond binary64 precision and rounded.
double relative_point_error(const Vec3& computed, const ReferencePoint& ref);

// |computed - ref| / |ref| for a scalar; infinity when ref == 0 and computed
// differs, 0 when both are zero.
double relative_error(const Expansion& computed, const Expansion& ref);

// Exact values of the traced intermediates for a canonical query, indexed by
// AccuxStage. Only meaningful when s^2 >= 0 and |n_xy|^2 > 0.
std::array<Expansion, kAccuxStageCount> reference_intermediates(const ArcLatQuery& canonical,
                                                                int bits = kOracleBits);

// Exact s^2 = |n_xy|^2 - |n|^2 z0^2 of a query (any frame).
Expansion exact_s2(const ArcLatQuery& q);

}  // namespace xsect
