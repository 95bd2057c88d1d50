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

#include <array>
#include <cmath>
#include <cstddef>

namespace xsect {

// A fixed-width bundle of binary64 values with element-wise arithmetic.
//
// The numeric kernels are templated on their number type; instantiating them
// with Lanes<N> evaluates N independent inputs in lock step. Every operation
// is the same IEEE operation applied per lane, so a lane computes exactly the
// bits the scalar instantiation would. Under GCC and Clang the storage is a
// native vector type, so the kernels compile to packed instructions.
#if defined(__GNUC__)
namespace detail {
// Spelled out per width: GCC drops vector_size on a dependent size.
template <std::size_t N>
struct VectorOf;
template <>
struct VectorOf<2> {
  using type = double __attribute__((vector_size(16)));
};
template <>
struct VectorOf<4> {
  using type = double __attribute__((vector_size(32)));
};
template <>
struct VectorOf<8> {
  using type = double __attribute__((vector_size(64)));
};
}  // namespace detail
#endif

template <std::size_t N>
struct Lanes {
  static_assert(N > 0);
#if defined(__GNUC__)
  using Storage = typename detail::VectorOf<N>::type;
#else
  using Storage = std::array<double, N>;
#endif
  Storage v{};

  Lanes() = default;
  Lanes(double x) {  // NOLINT: broadcast
    for (std::size_t i = 0; i < N; ++i) v[i] = x;
  }

  static constexpr std::size_t size() { return N; }
  double& operator[](std::size_t i) { return v[i]; }
  double operator[](std::size_t i) const { return v[i]; }

#if defined(__GNUC__)
  friend Lanes operator-(const Lanes& a) { return from(-a.v); }
  friend Lanes operator+(const Lanes& a, const Lanes& b) { return from(a.v + b.v); }
  friend Lanes operator-(const Lanes& a, const Lanes& b) { return from(a.v - b.v); }
  friend Lanes operator*(const Lanes& a, const Lanes& b) { return from(a.v * b.v); }
  friend Lanes operator/(const Lanes& a, const Lanes& b) { return from(a.v / b.v); }

 private:
  static Lanes from(Storage s) {
    Lanes r;
    r.v = s;
    return r;
  }
#else
  friend Lanes operator-(const Lanes& a) {
    Lanes r;
    for (std::size_t i = 0; i < N; ++i) r.v[i] = -a.v[i];
    return r;
  }
#define XSECT_LANES_BINOP(op)                                       \
  friend Lanes operator op(const Lanes& a, const Lanes& b) {        \
    Lanes r;                                                        \
    for (std::size_t i = 0; i < N; ++i) r.v[i] = a.v[i] op b.v[i]; \
    return r;                                                       \
  }
  XSECT_LANES_BINOP(+)
  XSECT_LANES_BINOP(-)
  XSECT_LANES_BINOP(*)
  XSECT_LANES_BINOP(/)
#undef XSECT_LANES_BINOP
#endif
};

// Scalar/lane-generic primitives used by the kernels. Keep these the only
// places where the kernels touch libm.

inline double mul_add(double a, double b, double c) { return std::fma(a, b, c); }
inline double square_root(double x) { return std::sqrt(x); }
// x, except 0 where key == 0.
inline double zero_where_zero(double key, double x) { return key == 0.0 ? 0.0 : x; }

template <std::size_t N>
Lanes<N> mul_add(const Lanes<N>& a, const Lanes<N>& b, const Lanes<N>& c) {
  Lanes<N> r;
  for (std::size_t i = 0; i < N; ++i) r.v[i] = std::fma(a.v[i], b.v[i], c.v[i]);
  return r;
}

template <std::size_t N>
Lanes<N> square_root(const Lanes<N>& x) {
  Lanes<N> r;
  for (std::size_t i = 0; i < N; ++i) r.v[i] = std::sqrt(x.v[i]);
  return r;
}

template <std::size_t N>
Lanes<N> zero_where_zero(const Lanes<N>& key, const Lanes<N>& x) {
  Lanes<N> r;
  for (std::size_t i = 0; i < N; ++i) r.v[i] = key.v[i] == 0.0 ? 0.0 : x.v[i];
  return r;
}

}  // namespace xsect
