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

// Number-type-generic intersection kernels. The scalar API instantiates them
// with double, the batch driver with Lanes<N>; both run the identical
// operation sequence, which is what makes batch output bit-identical to
// scalar output.
//
// Kernels assume a canonicalized query and never branch on data. Callers
// classify from the returned s2 and xy2 fields; points are meaningless (NaN
// or garbage) when s2 < 0 or xy2 == 0.

#include <array>

#include "xsect/eft.hpp"

namespace xsect {

template <typename T>
struct KernelInput {
  std::array<T, 3> x1;
  std::array<T, 3> x2;
  T z0;
};

template <typename T>
struct KernelOutput {
  T s2;   // sign decides the classification
  T xy2;  // zero means an equatorial arc
  T p1x, p1y, p2x, p2y;
};

// Labels for the AccuX intermediates exposed to tracing.
enum class AccuxStage {
  Nx,
  Ny,
  Nz,
  NormXy2,    // |n_xy|^2 as (S2, s2)
  Norm2,      // |n|^2 as (S3, s3)
  S2,         // s^2, normalized
  S,          // s
  NumeratorX, // z0 nx nz + s ny before rounding
  RoundedNumeratorX,
  RoundedDenominator,
  CoordX,     // R_x = -P_x
};

inline constexpr int kAccuxStageCount = 11;

struct NoTrace {
  template <typename T>
  void operator()(AccuxStage, const T&, const T&) const {}
};

template <typename T, typename Trace = NoTrace>
KernelOutput<T> accux_kernel(const KernelInput<T>& in, Trace&& trace = Trace{}) {
  const auto& a = in.x1;
  const auto& b = in.x2;
  const T z0 = in.z0;

  // n = x1 x x2; accu_dop(p, q, r, t) evaluates p t - q r.
  const auto nx = accu_dop(a[1], a[2], b[1], b[2]);
  const auto ny = accu_dop(a[2], a[0], b[2], b[0]);
  const auto nz = accu_dop(a[0], a[1], b[0], b[1]);
  trace(AccuxStage::Nx, nx.hi, nx.lo);
  trace(AccuxStage::Ny, ny.hi, ny.lo);
  trace(AccuxStage::Nz, nz.hi, nz.lo);

  const auto n2 = sum_of_squares_c(std::array<T, 2>{nx.hi, ny.hi}, std::array<T, 2>{nx.lo, ny.lo});
  const auto n3 = sum_of_squares_c(std::array<T, 3>{nx.hi, ny.hi, nz.hi},
                                   std::array<T, 3>{nx.lo, ny.lo, nz.lo});
  trace(AccuxStage::NormXy2, n2.hi, n2.lo);
  trace(AccuxStage::Norm2, n3.hi, n3.lo);

  const auto c = two_prod(z0, z0);
  const auto d = comp_dot_c(std::array<T, 4>{n3.hi, n3.hi, n3.lo, n3.lo},
                            std::array<T, 4>{c.hi, c.lo, c.hi, c.lo});
  const auto e = two_sum(n2.hi, -d.hi);
  const T tail = (n2.lo - d.lo) + e.lo;
  // |tail| can exceed |e.hi| when S2 and D cancel almost completely.
  const auto s2 = fast_two_sum_unchecked(e.hi, tail);
  trace(AccuxStage::S2, s2.hi, s2.lo);

  const auto s = acc_sqrt_unchecked(s2.hi, s2.lo);
  trace(AccuxStage::S, s.hi, s.lo);

  const auto fx = two_prod(nx.hi, nz.hi);
  const T efx = (fx.lo + nx.hi * nz.lo) + nz.hi * nx.lo;
  const auto fy = two_prod(ny.hi, nz.hi);
  const T efy = (fy.lo + ny.hi * nz.lo) + nz.hi * ny.lo;

  const std::array<T, 6> w{z0, z0, s.hi, s.hi, s.lo, s.lo};
  const auto num1x = comp_dot_c(std::array<T, 6>{fx.hi, efx, ny.hi, ny.lo, ny.hi, ny.lo}, w);
  trace(AccuxStage::NumeratorX, num1x.hi, num1x.lo);
  const T x1n = num1x.hi + num1x.lo;
  trace(AccuxStage::RoundedNumeratorX, x1n, T(0.0));
  trace(AccuxStage::RoundedDenominator, n2.hi, T(0.0));
  const T y1n = comp_dot(std::array<T, 6>{fy.hi, efy, -nx.hi, -nx.lo, -nx.hi, -nx.lo}, w);
  // Second point: interchange of the roles of x and y.
  const T x2n = comp_dot(std::array<T, 6>{fx.hi, efx, -ny.hi, -ny.lo, -ny.hi, -ny.lo}, w);
  const T y2n = comp_dot(std::array<T, 6>{fy.hi, efy, nx.hi, nx.lo, nx.hi, nx.lo}, w);

  const T rx = x1n / n2.hi;
  trace(AccuxStage::CoordX, rx, T(0.0));

  KernelOutput<T> out;
  out.s2 = s2.hi;
  out.xy2 = n2.hi;
  out.p1x = -rx;
  out.p1y = -(y1n / n2.hi);
  out.p2x = -(x2n / n2.hi);
  out.p2y = -(y2n / n2.hi);
  return out;
}

// Direct binary64 evaluation of the non-unit-normal formula: every product
// and sum rounded once, no compensation.
// Traces the same stages as accux_kernel, with zero low parts.
template <typename T, typename Trace = NoTrace>
KernelOutput<T> naive_final_kernel(const KernelInput<T>& in, Trace&& trace = Trace{}) {
  const auto& a = in.x1;
  const auto& b = in.x2;
  const T z0 = in.z0;
  const T zero(0.0);
  const T nx = a[1] * b[2] - a[2] * b[1];
  const T ny = a[2] * b[0] - a[0] * b[2];
  const T nz = a[0] * b[1] - a[1] * b[0];
  trace(AccuxStage::Nx, nx, zero);
  trace(AccuxStage::Ny, ny, zero);
  trace(AccuxStage::Nz, nz, zero);
  const T xy2 = nx * nx + ny * ny;
  const T n2 = xy2 + nz * nz;
  trace(AccuxStage::NormXy2, xy2, zero);
  trace(AccuxStage::Norm2, n2, zero);
  const T s2 = xy2 - n2 * (z0 * z0);
  trace(AccuxStage::S2, s2, zero);
  const T s = square_root(s2);
  trace(AccuxStage::S, s, zero);
  const T zx = z0 * nx * nz;
  const T zy = z0 * ny * nz;
  const T x1n = zx + s * ny;
  const T rx = x1n / xy2;
  trace(AccuxStage::NumeratorX, x1n, zero);
  trace(AccuxStage::RoundedNumeratorX, x1n, zero);
  trace(AccuxStage::RoundedDenominator, xy2, zero);
  trace(AccuxStage::CoordX, rx, zero);
  KernelOutput<T> out;
  out.s2 = s2;
  out.xy2 = xy2;
  out.p1x = -rx;
  out.p1y = -(zy - s * nx) / xy2;
  out.p2x = -(zx - s * ny) / xy2;
  out.p2y = -(zy + s * nx) / xy2;
  return out;
}

// Unit-normal formula as found in existing coupler code: normalize n first,
// then s_hat = sqrt(nx^2 + ny^2 - z0^2).
template <typename T>
KernelOutput<T> naive_cdo_kernel(const KernelInput<T>& in) {
  const auto& a = in.x1;
  const auto& b = in.x2;
  const T z0 = in.z0;
  const T nx0 = a[1] * b[2] - a[2] * b[1];
  const T ny0 = a[2] * b[0] - a[0] * b[2];
  const T nz0 = a[0] * b[1] - a[1] * b[0];
  const T norm = square_root(nx0 * nx0 + ny0 * ny0 + nz0 * nz0);
  const T nx = nx0 / norm;
  const T ny = ny0 / norm;
  const T nz = nz0 / norm;
  const T t2 = nx * nx + ny * ny;
  const T s2 = t2 - z0 * z0;
  const T s = square_root(s2);
  const T zx = z0 * nx * nz;
  const T zy = z0 * ny * nz;
  KernelOutput<T> out;
  out.s2 = s2;
  out.xy2 = t2;
  out.p1x = -(zx + s * ny) / t2;
  out.p1y = -(zy - s * nx) / t2;
  out.p2x = -(zx - s * ny) / t2;
  out.p2y = -(zy + s * nx) / t2;
  return out;
}

// Unit-normal formula with the denominator written as 1 - nz_hat^2, which
// cancels catastrophically for arcs near the equator.
template <typename T>
KernelOutput<T> naive_baseline_kernel(const KernelInput<T>& in) {
  const auto& a = in.x1;
  const auto& b = in.x2;
  const T z0 = in.z0;
  const T nx0 = a[1] * b[2] - a[2] * b[1];
  const T ny0 = a[2] * b[0] - a[0] * b[2];
  const T nz0 = a[0] * b[1] - a[1] * b[0];
  const T norm = square_root(nx0 * nx0 + ny0 * ny0 + nz0 * nz0);
  const T nx = nx0 / norm;
  const T ny = ny0 / norm;
  const T nz = nz0 / norm;
  const T den = T(1.0) - nz * nz;
  const T s2 = den - z0 * z0;
  const T s = square_root(s2);
  const T zx = z0 * nx * nz;
  const T zy = z0 * ny * nz;
  KernelOutput<T> out;
  out.s2 = s2;
  out.xy2 = den;
  out.p1x = -(zx + s * ny) / den;
  out.p1y = -(zy - s * nx) / den;
  out.p2x = -(zx - s * ny) / den;
  out.p2y = -(zy + s * nx) / den;
  return out;
}

}  // namespace xsect
