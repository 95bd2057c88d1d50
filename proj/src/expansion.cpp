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

#include "xsect/expansion.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <string>

#include "xsect/eft.hpp"

namespace xsect {

namespace {

void check_capacity(std::size_t n) {
  if (n > kExpansionCapacity) {
    throw OracleError("expansion capacity exceeded: " + std::to_string(n) + " components");
  }
}

// Exponent of the lowest set bit of a nonzero finite double.
int lowest_bit_exponent(double x) {
  int e = 0;
  const double m = std::frexp(std::abs(x), &e);  // m in [0.5, 1)
  const auto mant = static_cast<std::uint64_t>(std::ldexp(m, 53));
  return e - 53 + std::countr_zero(mant);
}

// Shewchuk's Grow-Expansion with zero elimination.
std::vector<double> grow(const std::vector<double>& e, double b) {
  std::vector<double> h;
  h.reserve(e.size() + 1);
  double q = b;
  for (double ei : e) {
    const auto [s, err] = two_sum(q, ei);
    if (err != 0.0) h.push_back(err);
    q = s;
  }
  if (q != 0.0) h.push_back(q);
  return h;
}

std::vector<double> sum(const std::vector<double>& e, const std::vector<double>& f) {
  std::vector<double> h = e;
  for (double fi : f) h = grow(h, fi);
  return h;
}

// Shewchuk's Scale-Expansion with zero elimination.
std::vector<double> scale(const std::vector<double>& e, double b) {
  std::vector<double> h;
  if (e.empty() || b == 0.0) return h;
  h.reserve(2 * e.size());
  auto [q, lo] = two_prod(e[0], b);
  if (lo != 0.0) h.push_back(lo);
  for (std::size_t i = 1; i < e.size(); ++i) {
    const auto [p, t] = two_prod(e[i], b);
    const auto [q1, h1] = two_sum(q, t);
    if (h1 != 0.0) h.push_back(h1);
    const auto [q2, h2] = two_sum(p, q1);
    if (h2 != 0.0) h.push_back(h2);
    q = q2;
  }
  if (q != 0.0) h.push_back(q);
  return h;
}

// Shewchuk's Compress: same value, fewer components, largest component
// within one ulp of the value.
std::vector<double> compress(const std::vector<double>& e) {
  if (e.size() <= 1) return e;
  const std::size_t m = e.size();
  std::vector<double> g(m);
  std::size_t bottom = m - 1;
  double q = e[m - 1];
  for (std::size_t i = m - 1; i-- > 0;) {
    const auto [s, err] = two_sum(q, e[i]);
    if (err != 0.0) {
      g[bottom--] = s;
      q = err;
    } else {
      q = s;
    }
  }
  g[bottom] = q;
  std::vector<double> h;
  h.reserve(m - bottom);
  for (std::size_t i = bottom + 1; i < m; ++i) {
    const auto [s, err] = two_sum(g[i], q);
    if (err != 0.0) h.push_back(err);
    q = s;
  }
  if (q != 0.0) h.push_back(q);
  return h;
}

}  // namespace

Expansion make_expansion_unchecked(std::vector<double> c) {
  Expansion r;
  r.c_ = compress(c);
  check_capacity(r.c_.size());
  return r;
}

Expansion::Expansion(double v) {
  if (!std::isfinite(v)) throw OracleError("expansion from non-finite value");
  if (v != 0.0) c_.push_back(v);
}

Expansion Expansion::from_components(std::vector<double> components) {
  check_capacity(components.size());
  for (std::size_t i = 0; i < components.size(); ++i) {
    const double v = components[i];
    if (v == 0.0 || !std::isfinite(v)) throw OracleError("expansion component zero or non-finite");
    if (i > 0 && std::ilogb(components[i - 1]) >= lowest_bit_exponent(v)) {
      throw OracleError("expansion components overlap or are out of order");
    }
  }
  Expansion r;
  r.c_ = std::move(components);
  return r;
}

Expansion exp_add(const Expansion& a, const Expansion& b) {
  return make_expansion_unchecked(sum(a.components(), b.components()));
}

Expansion exp_neg(const Expansion& a) {
  std::vector<double> c = a.components();
  for (double& v : c) v = -v;
  return make_expansion_unchecked(std::move(c));
}

Expansion exp_sub(const Expansion& a, const Expansion& b) { return exp_add(a, exp_neg(b)); }

Expansion exp_scale(const Expansion& a, double b) {
  return make_expansion_unchecked(scale(a.components(), b));
}

Expansion exp_mul(const Expansion& a, const Expansion& b) {
  const auto& bc = b.components();
  std::vector<double> acc;
  for (double bi : bc) acc = compress(sum(acc, scale(a.components(), bi)));
  return make_expansion_unchecked(std::move(acc));
}

Expansion scaled_pow2(const Expansion& a, int k) {
  std::vector<double> c = a.components();
  for (double& v : c) v = std::ldexp(v, k);
  return make_expansion_unchecked(std::move(c));
}

int sign(const Expansion& a) {
  const double v = a.leading();
  return (v > 0.0) - (v < 0.0);
}

Expansion abs(const Expansion& a) { return sign(a) < 0 ? exp_neg(a) : a; }

int compare(const Expansion& a, const Expansion& b) { return sign(exp_sub(a, b)); }

double estimate(const Expansion& a) {
  double s = 0.0;
  for (double v : a.components()) s += v;
  return s;
}

double round_to_double(const Expansion& a) {
  if (a.is_zero()) return 0.0;
  double x = estimate(a);
  for (int iter = 0; iter < 16; ++iter) {
    const Expansion r = exp_sub(a, Expansion(x));
    const int sr = sign(r);
    if (sr == 0) return x;
    const double next = std::nextafter(x, sr > 0 ? INFINITY : -INFINITY);
    const double half = (next - x) * 0.5;
    const int c = compare(abs(r), Expansion(std::abs(half)));
    if (c < 0) return x;
    if (c == 0) {
      const auto bits = std::bit_cast<std::uint64_t>(x);
      return (bits & 1u) == 0 ? x : next;
    }
    x = next;
  }
  throw OracleError("round_to_double did not converge");
}

Expansion exp_sqrt(const Expansion& a, int target_bits) {
  const int s = sign(a);
  if (s < 0) throw std::domain_error("exp_sqrt of a negative expansion");
  if (s == 0) return {};
  // Scale by an even power of two into [1, 4) so nothing underflows.
  const int e = std::ilogb(a.leading());
  const int shift = -(e - (e & 1));
  const Expansion as = scaled_pow2(a, shift);
  const double as_est = estimate(as);

  Expansion y(std::sqrt(as_est));
  const int max_iter = target_bits / 40 + 6;
  for (int iter = 0; iter < max_iter; ++iter) {
    const Expansion res = exp_sub(as, exp_mul(y, y));
    const double r = estimate(res);
    // Relative error of y is about |res| / (2 as).
    if (std::ldexp(std::abs(r), target_bits) <= as_est) return scaled_pow2(y, -shift / 2);
    y = exp_add(y, Expansion(r / (2.0 * estimate(y))));
  }
  throw OracleError("exp_sqrt did not converge");
}

Expansion exp_div(const Expansion& a, const Expansion& b, int target_bits) {
  if (b.is_zero()) throw std::domain_error("exp_div by zero");
  if (a.is_zero()) return {};
  const int ea = std::ilogb(a.leading());
  const int eb = std::ilogb(b.leading());
  const Expansion as = scaled_pow2(a, -ea);
  const Expansion bs = scaled_pow2(b, -eb);
  const double a_est = std::abs(estimate(as));
  const double b_est = estimate(bs);

  Expansion q(estimate(as) / b_est);
  const int max_iter = target_bits / 40 + 6;
  for (int iter = 0; iter < max_iter; ++iter) {
    const Expansion res = exp_sub(as, exp_mul(q, bs));
    const double r = estimate(res);
    // Relative error of q is about |res| / |as|.
    if (std::ldexp(std::abs(r), target_bits + 1) <= a_est) return scaled_pow2(q, ea - eb);
    q = exp_add(q, Expansion(r / b_est));
  }
  throw OracleError("exp_div did not converge");
}

}  // namespace xsect
