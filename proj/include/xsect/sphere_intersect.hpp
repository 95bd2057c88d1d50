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

#include "xsect/geometry.hpp"

namespace xsect {

// x1 x x2 with every component from accu_dop. Throws DegenerateArc when all
// three components are exactly zero.
NormalTriple cross_accurate(const Vec3& x1, const Vec3& x2);

struct CanonicalQuery {
  ArcLatQuery query;
  SignTransform transform;
};

// Maps q to the frame with n_x, n_y, n_z >= 0 and z0 >= 0. Component signs are
// read from the accurate cross product (hi part, lo part when hi is zero);
// exactly-zero components may take either sign. Among the valid transforms
// the one with the fewest flags is chosen, so the result is deterministic.
// Throws DegenerateArc.
CanonicalQuery canonicalize(const ArcLatQuery& q);

// Coordinate reflections of t applied to p. Sign flips only, so bit-exact.
Vec3 apply(const SignTransform& t, const Vec3& p);
// Same as apply(): every flag is an involution.
Vec3 apply_inverse(const SignTransform& t, const Vec3& p);
ArcLatQuery apply(const SignTransform& t, const ArcLatQuery& q);

// Intersection count of a canonical query from the sign of the compensated
// s^2 = |n_xy|^2 - |n|^2 z0^2 (exact zero only for Tangent). Throws
// DegenerateEquatorial when |n_xy|^2 rounds to zero and DegenerateArc when
// the normal vanishes.
Classification classify(const ArcLatQuery& canonical);

// The four evaluation methods on a canonical query; points are in the
// canonical frame and have z == z0 exactly. The naive methods classify with
// their own arithmetic, so near tangency they may disagree with classify().
IntersectionSolution intersect_naive_final(const ArcLatQuery& canonical);
IntersectionSolution intersect_naive_cdo(const ArcLatQuery& canonical);
IntersectionSolution intersect_naive_baseline(const ArcLatQuery& canonical);
IntersectionSolution accux(const ArcLatQuery& canonical);

IntersectionSolution intersect_canonical(Method m, const ArcLatQuery& canonical);

// Rejects non-finite input and endpoints with norm outside [1/2, 2].
void validate_query(const ArcLatQuery& q);

// Full pipeline for an arbitrary query: validate, canonicalize, evaluate,
// map the points back to the input frame.
IntersectionSolution solve(Method m, const ArcLatQuery& q);

// True iff p lies on the minor arc from x1 to x2, i.e. (x1 x p).n >= 0 and
// (p x x2).n >= 0 for n = x1 x x2. Endpoints count as inside. Not
// error-analysed: near the endpoints the answer is best effort.
bool point_on_arc(const Vec3& p, const Vec3& x1, const Vec3& x2);

// Combined first-order bound (21/s + 19 sqrt(2)/|n_xy|) u on the point error
// of intersect_naive_final, for unit-length endpoints. s and |n_xy| are
// evaluated with the compensated operators. +infinity when s == 0.
double naive_error_bound(const ArcLatQuery& q);

// First-order AccuX point error bound 3 sqrt(1 - z0^2) u (regime s >> u).
double accux_error_bound(double z0);

}  // namespace xsect
