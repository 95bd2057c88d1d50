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

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "xsect/eft.hpp"

namespace xsect {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend bool operator==(const Vec3&, const Vec3&) = default;
};

// A great-circle arc through x1 and x2 and the latitude plane z = z0.
// Endpoints need not be exactly unit length: the intersection formula only
// depends on the direction of x1 x x2.
struct ArcLatQuery {
  Vec3 x1;
  Vec3 x2;
  double z0 = 0.0;

  friend bool operator==(const ArcLatQuery&, const ArcLatQuery&) = default;
};

// x1 x x2, each component as a compensated pair.
struct NormalTriple {
  CompensatedPair nx;
  CompensatedPair ny;
  CompensatedPair nz;
};

// Sign changes that map a query into the canonical frame n >= 0, z0 >= 0.
// Swapping the endpoints negates n; reflecting across the x = 0 plane flips
// the signs of n_y and n_z (y = 0: n_x and n_z; z = 0: n_x, n_y and z0).
// All flags are involutions and commute, so the transform is its own inverse.
struct SignTransform {
  bool swap_endpoints = false;
  bool reflect_x = false;
  bool reflect_y = false;
  bool reflect_z = false;

  friend bool operator==(const SignTransform&, const SignTransform&) = default;
};

enum class Classification { NoIntersection, Tangent, TwoPoints };

std::string_view to_string(Classification c);

struct IntersectionSolution {
  Classification classification = Classification::NoIntersection;
  std::optional<Vec3> p1;
  std::optional<Vec3> p2;
};

enum class Method { NaiveFinal, NaiveCdo, NaiveBaseline, Accux };

std::string_view to_string(Method m);
// Accepts "naive-final", "naive-cdo", "naive-baseline", "accux".
std::optional<Method> parse_method(std::string_view name);

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// x1 and x2 are parallel: the cross product vanishes.
class DegenerateArc : public GeometryError {
 public:
  DegenerateArc() : GeometryError("DegenerateArc") {}
};

// The arc lies in the equator plane (n_x = n_y = 0).
class DegenerateEquatorial : public GeometryError {
 public:
  DegenerateEquatorial() : GeometryError("DegenerateEquatorial") {}
};

// Non-finite input or endpoint magnitude outside [1/2, 2].
class InvalidQuery : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

}  // namespace xsect
