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

#include "xsect/sphere_intersect.hpp"

#include <cmath>
#include <string>

#include "xsect/kernels.hpp"

namespace xsect {

std::string_view to_string(Classification c) {
  switch (c) {
    case Classification::NoIntersection: return "NoIntersection";
    case Classification::Tangent: return "Tangent";
    case Classification::TwoPoints: return "TwoPoints";
  }
  return "?";
}

std::string_view to_string(Method m) {
  switch (m) {
    case Method::NaiveFinal: return "naive-final";
    case Method::NaiveCdo: return "naive-cdo";
    case Method::NaiveBaseline: return "naive-baseline";
    case Method::Accux: return "accux";
  }
  return "?";
}

std::optional<Method> parse_method(std::string_view name) {
  for (Method m : {Method::NaiveFinal, Method::NaiveCdo, Method::NaiveBaseline, Method::Accux}) {
    if (to_string(m) == name) return m;
  }
  return std::nullopt;
}

namespace {

KernelInput<double> to_input(const ArcLatQuery& q) {
  return {{q.x1.x, q.x1.y, q.x1.z}, {q.x2.x, q.x2.y, q.x2.z}, q.z0};
}

// -1, 0, +1 from a compensated pair, using lo when hi is zero.
int pair_sign(const CompensatedPair& p) {
  const double v = p.hi != 0.0 ? p.hi : p.lo;
  return (v > 0.0) - (v < 0.0);
}

bool is_zero(const CompensatedPair& p) { return p.hi == 0.0 && p.lo == 0.0; }

IntersectionSolution from_kernel(const KernelOutput<double>& k, double z0) {
  if (k.xy2 == 0.0) throw DegenerateEquatorial();
  IntersectionSolution sol;
  if (k.s2 < 0.0 || std::isnan(k.s2)) {
    sol.classification = Classification::NoIntersection;
    return sol;
  }
  sol.p1 = Vec3{k.p1x, k.p1y, z0};
  if (k.s2 == 0.0) {
    sol.classification = Classification::Tangent;
  } else {
    sol.classification = Classification::TwoPoints;
    sol.p2 = Vec3{k.p2x, k.p2y, z0};
  }
  return sol;
}

}  // namespace

NormalTriple cross_accurate(const Vec3& a, const Vec3& b) {
  NormalTriple n{accu_dop(a.y, a.z, b.y, b.z), accu_dop(a.z, a.x, b.z, b.x),
                 accu_dop(a.x, a.y, b.x, b.y)};
  if (is_zero(n.nx) && is_zero(n.ny) && is_zero(n.nz)) throw DegenerateArc();
  return n;
}

Vec3 apply(const SignTransform& t, const Vec3& p) {
  return {t.reflect_x ? -p.x : p.x, t.reflect_y ? -p.y : p.y, t.reflect_z ? -p.z : p.z};
}

Vec3 apply_inverse(const SignTransform& t, const Vec3& p) { return apply(t, p); }

ArcLatQuery apply(const SignTransform& t, const ArcLatQuery& q) {
  ArcLatQuery r;
  r.x1 = apply(t, t.swap_endpoints ? q.x2 : q.x1);
  r.x2 = apply(t, t.swap_endpoints ? q.x1 : q.x2);
  r.z0 = t.reflect_z ? -q.z0 : q.z0;
  return r;
}

CanonicalQuery canonicalize(const ArcLatQuery& q) {
  const NormalTriple n = cross_accurate(q.x1, q.x2);
  SignTransform t;
  t.reflect_z = q.z0 < 0.0;
  // z-reflection negates n_x and n_y.
  const int zf = t.reflect_z ? -1 : 1;
  const int sx = zf * pair_sign(n.nx);
  const int sy = zf * pair_sign(n.ny);
  const int sz = pair_sign(n.nz);

  // Flip pattern of (swap, reflect_x, reflect_y) on (n_x, n_y, n_z):
  // swap flips all three, reflect_x flips y and z, reflect_y flips x and z.
  // Candidates ordered by number of flags.
  static constexpr bool kCandidates[8][3] = {
      {false, false, false}, {false, true, false}, {false, false, true}, {true, false, false},
      {false, true, true},   {true, true, false},  {true, false, true},  {true, true, true}};
  for (const auto& c : kCandidates) {
    const bool swap = c[0], rx = c[1], ry = c[2];
    const bool flip_x = swap != ry;
    const bool flip_y = swap != rx;
    const bool flip_z = swap != (rx != ry);
    auto ok = [](int sign, bool flip) { return sign == 0 || (flip ? sign < 0 : sign > 0); };
    if (ok(sx, flip_x) && ok(sy, flip_y) && ok(sz, flip_z)) {
      t.swap_endpoints = swap;
      t.reflect_x = rx;
      t.reflect_y = ry;
      break;
    }
  }
  return {apply(t, q), t};
}

Classification classify(const ArcLatQuery& canonical) {
  cross_accurate(canonical.x1, canonical.x2);
  const auto k = accux_kernel(to_input(canonical));
  if (k.xy2 == 0.0) throw DegenerateEquatorial();
  if (k.s2 < 0.0) return Classification::NoIntersection;
  if (k.s2 == 0.0) return Classification::Tangent;
  return Classification::TwoPoints;
}

IntersectionSolution intersect_naive_final(const ArcLatQuery& q) {
  return from_kernel(naive_final_kernel(to_input(q)), q.z0);
}

IntersectionSolution intersect_naive_cdo(const ArcLatQuery& q) {
  return from_kernel(naive_cdo_kernel(to_input(q)), q.z0);
}

IntersectionSolution intersect_naive_baseline(const ArcLatQuery& q) {
  return from_kernel(naive_baseline_kernel(to_input(q)), q.z0);
}

IntersectionSolution accux(const ArcLatQuery& q) {
  return from_kernel(accux_kernel(to_input(q)), q.z0);
}

IntersectionSolution intersect_canonical(Method m, const ArcLatQuery& q) {
  switch (m) {
    case Method::NaiveFinal: return intersect_naive_final(q);
    case Method::NaiveCdo: return intersect_naive_cdo(q);
    case Method::NaiveBaseline: return intersect_naive_baseline(q);
    case Method::Accux: return accux(q);
  }
  throw std::invalid_argument("unknown method");
}

void validate_query(const ArcLatQuery& q) {
  for (double v : {q.x1.x, q.x1.y, q.x1.z, q.x2.x, q.x2.y, q.x2.z, q.z0}) {
    if (!std::isfinite(v)) throw InvalidQuery("non-finite input");
  }
  for (const Vec3& p : {q.x1, q.x2}) {
    const auto n2 = sum_of_squares(std::array<double, 3>{p.x, p.y, p.z});
    if (n2.hi < 0.25 || n2.hi > 4.0) throw InvalidQuery("endpoint norm outside [1/2, 2]");
  }
}

IntersectionSolution solve(Method m, const ArcLatQuery& q) {
  validate_query(q);
  const CanonicalQuery c = canonicalize(q);
  IntersectionSolution sol = intersect_canonical(m, c.query);
  if (sol.p1) sol.p1 = apply_inverse(c.transform, *sol.p1);
  if (sol.p2) sol.p2 = apply_inverse(c.transform, *sol.p2);
  // The reflections reproduce the input z0 bit-exactly; keep it explicit.
  if (sol.p1) sol.p1->z = q.z0;
  if (sol.p2) sol.p2->z = q.z0;
  return sol;
}

bool point_on_arc(const Vec3& p, const Vec3& x1, const Vec3& x2) {
  const double nx = kahan_dop(x1.y, x1.z, x2.y, x2.z);
  const double ny = kahan_dop(x1.z, x1.x, x2.z, x2.x);
  const double nz = kahan_dop(x1.x, x1.y, x2.x, x2.y);
  const std::array<double, 3> n{nx, ny, nz};
  const std::array<double, 3> a{kahan_dop(x1.y, x1.z, p.y, p.z), kahan_dop(x1.z, x1.x, p.z, p.x),
                                kahan_dop(x1.x, x1.y, p.x, p.y)};
  const std::array<double, 3> b{kahan_dop(p.y, p.z, x2.y, x2.z), kahan_dop(p.z, p.x, x2.z, x2.x),
                                kahan_dop(p.x, p.y, x2.x, x2.y)};
  return comp_dot(a, n) >= 0.0 && comp_dot(b, n) >= 0.0;
}

double naive_error_bound(const ArcLatQuery& q) {
  const CanonicalQuery c = canonicalize(q);
  const auto k = accux_kernel(to_input(c.query));
  if (k.xy2 == 0.0) throw DegenerateEquatorial();
  if (!(k.s2 > 0.0)) return std::numeric_limits<double>::infinity();
  const double s = std::sqrt(k.s2);
  const double nxy = std::sqrt(k.xy2);
  return (21.0 / s + 19.0 * std::sqrt(2.0) / nxy) * kUnitRoundoff;
}

double accux_error_bound(double z0) {
  return 3.0 * std::sqrt(1.0 - z0 * z0) * kUnitRoundoff;
}

}  // namespace xsect
