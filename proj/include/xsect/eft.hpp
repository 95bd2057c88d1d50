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

// Error-free transformations and the compensated operators built from them.
//
// Every function here is a fixed sequence of IEEE 754 binary64 operations in
// round-to-nearest-even. The sequence is part of the contract: the error
// bounds quoted below hold only if the compiler neither fuses nor reorders
// anything, which is why the whole project builds with -ffp-contract=off and
// without fast-math. An FMA appears only where written as mul_add().
//
// The templates accept double or Lanes<N>; see lanes.hpp.

#include <array>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <type_traits>

#include "xsect/lanes.hpp"

namespace xsect {

// Unit roundoff of binary64: the relative rounding bound of round-to-nearest.
inline constexpr double kUnitRoundoff = 0x1p-53;

// Unevaluated sum hi + lo. Producers document whether the pair is normalized
// (hi == fl(hi + lo)).
template <typename T>
struct Compensated {
  T hi{};
  T lo{};
};

using CompensatedPair = Compensated<double>;

// Checks that the FPU is in round-to-nearest and switches to it if not.
// Returns false if the mode had to be changed.
bool ensure_round_to_nearest();

// hi = fl(a + b), hi + lo == a + b exactly (Knuth).
template <typename T>
inline Compensated<T> two_sum(T a, T b) {
  T s = a + b;
  T bp = s - a;
  T ap = s - bp;
  T e = (a - ap) + (b - bp);
  return {s, e};
}

// Dekker's variant of two_sum; exact when |a| >= |b| or a == 0. Without
// that, hi == fl(a + b) still holds but lo may be inexact.
template <typename T>
inline Compensated<T> fast_two_sum_unchecked(T a, T b) {
  T s = a + b;
  T e = b - (s - a);
  return {s, e};
}

// fast_two_sum_unchecked with the precondition asserted in debug builds.
template <typename T>
inline Compensated<T> fast_two_sum(T a, T b) {
  if constexpr (std::is_same_v<T, double>) {
    assert(a == 0.0 || !(std::abs(a) < std::abs(b)));
  }
  return fast_two_sum_unchecked(a, b);
}

// hi = fl(a * b), hi + lo == a * b exactly (barring underflow).
template <typename T>
inline Compensated<T> two_prod(T a, T b) {
  T p = a * b;
  T e = mul_add(a, b, -p);
  return {p, e};
}

// Kahan's 2x2 determinant: ad - bc with relative error <= 2u.
template <typename T>
inline T kahan_dop(T a, T b, T c, T d) {
  T bc = b * c;
  T err = mul_add(-b, c, bc);
  T dop = mul_add(a, d, -bc);
  return dop + err;
}

// ad - bc as an (unnormalized) compensated pair, relative error
// (1 + 2(|ad| + |bc|)/|ad - bc|) u^2 + O(u^3).
//
// The exact residual of (p1 + r1) - (p2 + r2) is r1 - r2; adding the two
// residuals instead loses the u^2 bound.
template <typename T>
inline Compensated<T> accu_dop(T a, T b, T c, T d) {
  auto [p1, r1] = two_prod(a, d);
  auto [p2, r2] = two_prod(b, c);
  auto [dop, s] = two_sum(p1, -p2);
  T err = s + (r1 - r2);
  return {dop, err};
}

namespace detail {

template <typename T>
inline Compensated<T> comp_dot_c(const T* x, const T* y, std::size_t n) {
  auto [p, s] = two_prod(x[0], y[0]);
  for (std::size_t i = 1; i < n; ++i) {
    auto [h, r] = two_prod(x[i], y[i]);
    auto [pn, q] = two_sum(p, h);
    p = pn;
    s = s + (q + r);
  }
  return {p, s};
}

}  // namespace detail

// Dot product as an unnormalized pair (Ogita-Rump-Oishi Dot2 without the
// final rounding). Requires n >= 1.
template <typename T, std::size_t N>
inline Compensated<T> comp_dot_c(const std::array<T, N>& x, const std::array<T, N>& y) {
  static_assert(N >= 1);
  return detail::comp_dot_c(x.data(), y.data(), N);
}

inline CompensatedPair comp_dot_c(std::span<const double> x, std::span<const double> y) {
  assert(!x.empty() && x.size() == y.size());
  return detail::comp_dot_c(x.data(), y.data(), x.size());
}

// fl(hi + lo) of comp_dot_c.
template <typename T, std::size_t N>
inline T comp_dot(const std::array<T, N>& x, const std::array<T, N>& y) {
  auto [p, s] = comp_dot_c(x, y);
  return p + s;
}

inline double comp_dot(std::span<const double> x, std::span<const double> y) {
  auto [p, s] = comp_dot_c(x, y);
  return p + s;
}

// Sum of two normalized pairs holding non-negative values; relative error
// <= 3u^2, normalized output.
template <typename T>
inline Compensated<T> sum_non_neg(Compensated<T> A, Compensated<T> B) {
  if constexpr (std::is_same_v<T, double>) {
    assert(!(A.hi < 0.0) && !(B.hi < 0.0));
  }
  auto [H, h] = two_sum(A.hi, B.hi);
  T c = A.lo + B.lo;
  T d = h + c;
  return fast_two_sum(H, d);
}

namespace detail {

template <typename T>
inline Compensated<T> sum_of_squares(const T* x, std::size_t n) {
  Compensated<T> acc{T(0.0), T(0.0)};
  for (std::size_t j = 0; j < n; ++j) acc = sum_non_neg(acc, two_prod(x[j], x[j]));
  return acc;
}

template <typename T>
inline Compensated<T> sum_of_squares_c(const T* x, const T* e, std::size_t n) {
  auto [S, s] = sum_of_squares(x, n);
  auto [p, q] = comp_dot_c(x, e, n);
  T Rstar = p + q;
  T R = mul_add(T(2.0), Rstar, s);
  return fast_two_sum(S, R);
}

}  // namespace detail

// Squared norm of an exact vector (Graillat et al.). Normalized output.
template <typename T, std::size_t N>
inline Compensated<T> sum_of_squares(const std::array<T, N>& x) {
  return detail::sum_of_squares(x.data(), N);
}

inline CompensatedPair sum_of_squares(std::span<const double> x) {
  return detail::sum_of_squares(x.data(), x.size());
}

// Squared norm of the vector x + e, where e holds componentwise compensation
// terms (|e_i| on the order of u |x_i|). Normalized output.
template <typename T, std::size_t N>
inline Compensated<T> sum_of_squares_c(const std::array<T, N>& x, const std::array<T, N>& e) {
  return detail::sum_of_squares_c(x.data(), e.data(), N);
}

inline CompensatedPair sum_of_squares_c(std::span<const double> x, std::span<const double> e) {
  assert(x.size() == e.size() && !x.empty());
  return detail::sum_of_squares_c(x.data(), e.data(), x.size());
}

// sqrt(H + h) for a normalized pair with H >= 0, relative error <= (25/8)u^2.
// No domain check; a negative H yields NaNs.
template <typename T>
inline Compensated<T> acc_sqrt_unchecked(T H, T h) {
  T s = square_root(H);
  T r = mul_add(-s, s, H);
  T lo = (r + h) / (s + s);
  return {s, zero_where_zero(H, lo)};
}

// Checked scalar entry point; throws std::domain_error for H < 0.
CompensatedPair acc_sqrt(double H, double h);

// Ogita-Rump-Oishi bound on the relative error of comp_dot_c:
// gamma_n * n u / (1 - (n-1) u) * abs_dot / |dot|, with abs_dot = |x|.|y|.
// Returns +infinity when dot == 0.
double compdot_error_bound(std::size_t n, double abs_dot, double dot);

// gamma_n = n u / (1 - n u).
double gamma(std::size_t n);

}  // namespace xsect
