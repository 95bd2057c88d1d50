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

// Batch evaluation over many queries: canonicalize once, run a method's
// kernel over structure-of-arrays storage in chunks of `lanes`-wide bundles on
// a fixed number of threads, then map points back to the input frames.
//
// Results are bit-identical to the scalar API for every lane width, thread
// count and chunk size: each element sees the same operation sequence and
// outputs are written by input index.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "xsect/geometry.hpp"

namespace xsect {

enum class Outcome : std::uint8_t {
  TwoPoints,
  Tangent,
  NoIntersection,
  DegenerateArc,
  DegenerateEquatorial,
  InvalidQuery,
};

std::string_view to_string(Outcome o);

// Canonicalized queries in structure-of-arrays form.
struct QueryBatch {
  std::vector<double> x1x, x1y, x1z, x2x, x2y, x2z, z0;
  std::vector<SignTransform> transform;
  // InvalidQuery or DegenerateArc for rejected entries, TwoPoints otherwise.
  std::vector<Outcome> admitted;

  std::size_t size() const { return z0.size(); }
};

QueryBatch prepare_batch(std::span<const ArcLatQuery> queries);

// Kernel output in the canonical frame.
struct BatchOutput {
  std::vector<double> p1x, p1y, p2x, p2y;
  std::vector<Outcome> outcome;

  std::size_t size() const { return outcome.size(); }
};

struct BatchOptions {
  std::size_t lanes = 1;      // 1, 2, 4 or 8
  std::size_t threads = 1;
  std::size_t chunk = 4096;   // queries per work item
};

// Throws std::invalid_argument for unsupported lane widths or zero
// threads/chunk.
void run_batch(Method m, const QueryBatch& batch, const BatchOptions& options, BatchOutput& out);
BatchOutput run_batch(Method m, const QueryBatch& batch, const BatchOptions& options);

struct BatchEntry {
  Outcome outcome = Outcome::NoIntersection;
  std::optional<Vec3> p1;
  std::optional<Vec3> p2;
};

// Points mapped back to each query's input frame.
std::vector<BatchEntry> finalize(const QueryBatch& batch, const BatchOutput& out);

// prepare + run + finalize for AccuX.
std::vector<BatchEntry> accux_batch(std::span<const ArcLatQuery> queries, const BatchOptions& options);

// FNV-1a over the output bit patterns and outcome codes.
std::uint64_t checksum(const BatchOutput& out);

// Thread count from XSECT_THREADS, or 1.
std::size_t default_thread_count();

}  // namespace xsect
