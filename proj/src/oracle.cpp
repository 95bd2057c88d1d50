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

#include "xsect/oracle.hpp"

#include <cmath>
#include <limits>

#include "xsect/sphere_intersect.hpp"

namespace xsect {

namespace {

Expansion ex(double v) { return Expansion(v); }

Expansion det2(double a, double b, double c, double d) {
  return exp_sub(exp_mul(ex(a), ex(d)), exp_mul(ex(b), ex(c)));
}

struct ExactTerms {
  ExactNormal n;
  Expansion xy2;
  Expansion n2;
  Expansion s2;
};

ExactTerms exact_terms(const ArcLatQuery& q) {
  ExactTerms t{exact_cross(q.x1, q.x2), {}, {}, {}};
  t.xy2 = exp_add(exp_mul(t.n.nx, t.n.nx), exp_mul(t.n.ny, t.n.ny));
  t.n2 = exp_add(t.xy2, exp_mul(t.n.nz, t.n.nz));
  t.s2 = exp_sub(t.xy2, exp_mul(t.n2, exp_mul(ex(q.z0), ex(q.z0))));
  return t;
}

void check_degenerate(const ExactNormal& n) {
  if (n.nx.is_zero() && n.ny.is_zero() && n.nz.is_zero()) throw DegenerateArc();
  if (n.nx.is_zero() && n.ny.is_zero()) throw DegenerateEquatorial();
}

ReferencePoint make_point(Expansion px, Expansion py, const SignTransform& t, double z0) {
  if (t.reflect_x) px = exp_neg(px);
  if (t.reflect_y) py = exp_neg(py);
  ReferencePoint p;
  p.rounded = Vec3{round_to_double(px), round_to_double(py), z0};
  p.px = std::move(px);
  p.py = std::move(py);
  p.pz = z0;
  return p;
}

Classification classify_sign(const Expansion& s2) {
  const int s = sign(s2);
  if (s < 0) return Classification::NoIntersection;
  if (s == 0) return Classification::Tangent;
  return Classification::TwoPoints;
}

// p = -(z0 nz (nx, ny) +- s (ny, -nx)) / den, the shared tail of both
// formulas. Points are in the canonical frame.
void fill_points(ReferenceSolution& sol, const Expansion& nx, const Expansion& ny,
                 const Expansion& nz, const Expansion& s, const Expansion& den, double z0,
                 const SignTransform& t, double z_out, int bits) {
  const Expansion znz = exp_mul(ex(z0), nz);
  const Expansion zx = exp_mul(znz, nx);
  const Expansion zy = exp_mul(znz, ny);
  const Expansion sx = exp_mul(s, nx);
  const Expansion sy = exp_mul(s, ny);
  auto coord = [&](const Expansion& num) { return exp_neg(exp_div(num, den, bits)); };
  sol.p1 = make_point(coord(exp_add(zx, sy)), coord(exp_sub(zy, sx)), t, z_out);
  if (sol.classification == Classification::TwoPoints) {
    sol.p2 = make_point(coord(exp_sub(zx, sy)), coord(exp_add(zy, sx)), t, z_out);
  }
}

}  // namespace

ExactNormal exact_cross(const Vec3& a, const Vec3& b) {
  return {det2(a.y, a.z, b.y, b.z), det2(a.z, a.x, b.z, b.x), det2(a.x, a.y, b.x, b.y)};
}

Expansion exact_s2(const ArcLatQuery& q) { return exact_terms(q).s2; }

ReferenceSolution intersect_reference(const ArcLatQuery& q, int bits) {
  check_degenerate(exact_cross(q.x1, q.x2));
  const CanonicalQuery c = canonicalize(q);
  const ExactTerms t = exact_terms(c.query);
  ReferenceSolution sol;
  sol.classification = classify_sign(t.s2);
  if (sol.classification == Classification::NoIntersection) return sol;
  const Expansion s = exp_sqrt(t.s2, bits);
  fill_points(sol, t.n.nx, t.n.ny, t.n.nz, s, t.xy2, c.query.z0, c.transform, q.z0, bits);
  return sol;
}

ReferenceSolution intersect_reference_unit_normal(const ArcLatQuery& q, int bits) {
  check_degenerate(exact_cross(q.x1, q.x2));
  const CanonicalQuery c = canonicalize(q);
  const ExactTerms t = exact_terms(c.query);
  ReferenceSolution sol;
  sol.classification = classify_sign(t.s2);
  if (sol.classification == Classification::NoIntersection) return sol;
  const Expansion norm = exp_sqrt(t.n2, bits);
  const Expansion nx = exp_div(t.n.nx, norm, bits);
  const Expansion ny = exp_div(t.n.ny, norm, bits);
  const Expansion nz = exp_div(t.n.nz, norm, bits);
  const Expansion t2 = exp_add(exp_mul(nx, nx), exp_mul(ny, ny));
  const Expansion z02 = exp_mul(ex(c.query.z0), ex(c.query.z0));
  Expansion s_hat2 = exp_sub(t2, z02);
  // The rounded unit normal may push an exact tangency slightly negative.
  if (sign(s_hat2) < 0) s_hat2 = Expansion();
  const Expansion s_hat = exp_sqrt(s_hat2, bits);
  fill_points(sol, nx, ny, nz, s_hat, t2, c.query.z0, c.transform, q.z0, bits);
  return sol;
}

double relative_point_error(const Vec3& computed, const ReferencePoint& ref) {
  const Expansion dx = exp_sub(ex(computed.x), ref.px);
  const Expansion dy = exp_sub(ex(computed.y), ref.py);
  const Expansion d2 = exp_add(exp_mul(dx, dx), exp_mul(dy, dy));
  return round_to_double(exp_sqrt(d2, 80));
}

double relative_error(const Expansion& computed, const Expansion& ref) {
  const Expansion d = exp_sub(computed, ref);
  if (d.is_zero()) return 0.0;
  if (ref.is_zero()) return std::numeric_limits<double>::infinity();
  return std::abs(estimate(exp_div(d, ref, 60)));
}

std::array<Expansion, kAccuxStageCount> reference_intermediates(const ArcLatQuery& canonical,
                                                                int bits) {
  const ExactTerms t = exact_terms(canonical);
  std::array<Expansion, kAccuxStageCount> r;
  auto at = [&r](AccuxStage s) -> Expansion& { return r[static_cast<int>(s)]; };
  at(AccuxStage::Nx) = t.n.nx;
  at(AccuxStage::Ny) = t.n.ny;
  at(AccuxStage::Nz) = t.n.nz;
  at(AccuxStage::NormXy2) = t.xy2;
  at(AccuxStage::Norm2) = t.n2;
  at(AccuxStage::S2) = t.s2;
  const Expansion s = sign(t.s2) > 0 ? exp_sqrt(t.s2, bits) : Expansion();
  at(AccuxStage::S) = s;
  const Expansion num =
      exp_add(exp_mul(exp_mul(ex(canonical.z0), t.n.nx), t.n.nz), exp_mul(s, t.n.ny));
  at(AccuxStage::NumeratorX) = num;
  at(AccuxStage::RoundedNumeratorX) = num;
  at(AccuxStage::RoundedDenominator) = t.xy2;
  at(AccuxStage::CoordX) = t.xy2.is_zero() ? Expansion() : exp_div(num, t.xy2, bits);
  return r;
}

}  // namespace xsect
