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

#include "xsect/batch.hpp"

#include <atomic>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <thread>

#include "xsect/kernels.hpp"
#include "xsect/lanes.hpp"
#include "xsect/sphere_intersect.hpp"

namespace xsect {

std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::TwoPoints: return "TwoPoints";
    case Outcome::Tangent: return "Tangent";
    case Outcome::NoIntersection: return "NoIntersection";
    case Outcome::DegenerateArc: return "DegenerateArc";
    case Outcome::DegenerateEquatorial: return "DegenerateEquatorial";
    case Outcome::InvalidQuery: return "InvalidQuery";
  }
  return "?";
}

QueryBatch prepare_batch(std::span<const ArcLatQuery> queries) {
  QueryBatch b;
  const std::size_t n = queries.size();
  for (auto* v : {&b.x1x, &b.x1y, &b.x1z, &b.x2x, &b.x2y, &b.x2z, &b.z0}) v->resize(n);
  b.transform.resize(n);
  b.admitted.assign(n, Outcome::TwoPoints);
  for (std::size_t i = 0; i < n; ++i) {
    ArcLatQuery q = queries[i];
    try {
      validate_query(q);
      const CanonicalQuery c = canonicalize(q);
      q = c.query;
      b.transform[i] = c.transform;
    } catch (const DegenerateArc&) {
      b.admitted[i] = Outcome::DegenerateArc;
    } catch (const InvalidQuery&) {
      b.admitted[i] = Outcome::InvalidQuery;
    }
    b.x1x[i] = q.x1.x;
    b.x1y[i] = q.x1.y;
    b.x1z[i] = q.x1.z;
    b.x2x[i] = q.x2.x;
    b.x2y[i] = q.x2.y;
    b.x2z[i] = q.x2.z;
    b.z0[i] = q.z0;
  }
  return b;
}

namespace {

template <typename T>
KernelOutput<T> dispatch_kernel(Method m, const KernelInput<T>& in) {
  switch (m) {
    case Method::NaiveFinal: return naive_final_kernel(in);
    case Method::NaiveCdo: return naive_cdo_kernel(in);
    case Method::NaiveBaseline: return naive_baseline_kernel(in);
    case Method::Accux: return accux_kernel(in);
  }
  return {};
}

Outcome classify_output(Outcome admitted, double xy2, double s2) {
  if (admitted != Outcome::TwoPoints) return admitted;
  if (xy2 == 0.0) return Outcome::DegenerateEquatorial;
  if (s2 > 0.0) return Outcome::TwoPoints;
  if (s2 == 0.0) return Outcome::Tangent;
  return Outcome::NoIntersection;
}

void store(BatchOutput& out, std::size_t i, Outcome o, double p1x, double p1y, double p2x,
           double p2y) {
  constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
  out.outcome[i] = o;
  const bool has1 = o == Outcome::TwoPoints || o == Outcome::Tangent;
  const bool has2 = o == Outcome::TwoPoints;
  out.p1x[i] = has1 ? p1x : kNaN;
  out.p1y[i] = has1 ? p1y : kNaN;
  out.p2x[i] = has2 ? p2x : kNaN;
  out.p2y[i] = has2 ? p2y : kNaN;
}

void run_range_scalar(Method m, const QueryBatch& b, std::size_t begin, std::size_t end,
                      BatchOutput& out) {
  for (std::size_t i = begin; i < end; ++i) {
    const KernelInput<double> in{{b.x1x[i], b.x1y[i], b.x1z[i]}, {b.x2x[i], b.x2y[i], b.x2z[i]}, b.z0[i]};
    const auto k = dispatch_kernel(m, in);
    store(out, i, classify_output(b.admitted[i], k.xy2, k.s2), k.p1x, k.p1y, k.p2x, k.p2y);
  }
}

template <std::size_t N>
void run_range_lanes(Method m, const QueryBatch& b, std::size_t begin, std::size_t end,
                     BatchOutput& out) {
  using L = Lanes<N>;
  for (std::size_t i = begin; i < end; i += N) {
    KernelInput<L> in;
    for (std::size_t l = 0; l < N; ++l) {
      // Pad the tail by repeating the last element; padded lanes are dropped.
      const std::size_t j = i + l < end ? i + l : end - 1;
      in.x1[0][l] = b.x1x[j];
      in.x1[1][l] = b.x1y[j];
      in.x1[2][l] = b.x1z[j];
      in.x2[0][l] = b.x2x[j];
      in.x2[1][l] = b.x2y[j];
      in.x2[2][l] = b.x2z[j];
      in.z0[l] = b.z0[j];
    }
    const auto k = dispatch_kernel(m, in);
    for (std::size_t l = 0; l < N && i + l < end; ++l) {
      const std::size_t j = i + l;
      store(out, j, classify_output(b.admitted[j], k.xy2[l], k.s2[l]), k.p1x[l], k.p1y[l],
            k.p2x[l], k.p2y[l]);
    }
  }
}

void run_range(Method m, const QueryBatch& b, std::size_t lanes, std::size_t begin,
               std::size_t end, BatchOutput& out) {
  switch (lanes) {
    case 1: run_range_scalar(m, b, begin, end, out); break;
    case 2: run_range_lanes<2>(m, b, begin, end, out); break;
    case 4: run_range_lanes<4>(m, b, begin, end, out); break;
    case 8: run_range_lanes<8>(m, b, begin, end, out); break;
    default: throw std::invalid_argument("unsupported lane width " + std::to_string(lanes));
  }
}

}  // namespace

void run_batch(Method m, const QueryBatch& batch, const BatchOptions& options, BatchOutput& out) {
  if (options.lanes != 1 && options.lanes != 2 && options.lanes != 4 && options.lanes != 8) {
    throw std::invalid_argument("unsupported lane width " + std::to_string(options.lanes));
  }
  if (options.threads == 0 || options.chunk == 0) {
    throw std::invalid_argument("threads and chunk must be positive");
  }
  const std::size_t n = batch.size();
  for (auto* v : {&out.p1x, &out.p1y, &out.p2x, &out.p2y}) v->resize(n);
  out.outcome.resize(n);

  const std::size_t chunks = (n + options.chunk - 1) / options.chunk;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t c = next.fetch_add(1); c < chunks; c = next.fetch_add(1)) {
      const std::size_t begin = c * options.chunk;
      const std::size_t end = std::min(n, begin + options.chunk);
      run_range(m, batch, options.lanes, begin, end, out);
    }
  };
  const std::size_t workers = std::min(options.threads, std::max<std::size_t>(chunks, 1));
  if (workers <= 1) {
    worker();
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(worker);
}

BatchOutput run_batch(Method m, const QueryBatch& batch, const BatchOptions& options) {
  BatchOutput out;
  run_batch(m, batch, options, out);
  return out;
}

std::vector<BatchEntry> finalize(const QueryBatch& batch, const BatchOutput& out) {
  std::vector<BatchEntry> entries(out.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    BatchEntry& e = entries[i];
    e.outcome = out.outcome[i];
    const SignTransform& t = batch.transform[i];
    // Undo the z reflection on z0 itself so z matches the input bit-exactly.
    const double z = t.reflect_z ? -batch.z0[i] : batch.z0[i];
    if (e.outcome == Outcome::TwoPoints || e.outcome == Outcome::Tangent) {
      e.p1 = apply_inverse(t, Vec3{out.p1x[i], out.p1y[i], batch.z0[i]});
      e.p1->z = z;
    }
    if (e.outcome == Outcome::TwoPoints) {
      e.p2 = apply_inverse(t, Vec3{out.p2x[i], out.p2y[i], batch.z0[i]});
      e.p2->z = z;
    }
  }
  return entries;
}

std::vector<BatchEntry> accux_batch(std::span<const ArcLatQuery> queries, const BatchOptions& options) {
  const QueryBatch batch = prepare_batch(queries);
  return finalize(batch, run_batch(Method::Accux, batch, options));
}

std::uint64_t checksum(const BatchOutput& out) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  auto mix = [&h](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xffu;
      h *= 0x100000001b3ull;
    }
  };
  for (std::size_t i = 0; i < out.size(); ++i) {
    mix(static_cast<std::uint64_t>(out.outcome[i]));
    for (double v : {out.p1x[i], out.p1y[i], out.p2x[i], out.p2y[i]}) {
      mix(std::bit_cast<std::uint64_t>(v));
    }
  }
  return h;
}

std::size_t default_thread_count() {
  if (const char* env = std::getenv("XSECT_THREADS")) {
    char* endp = nullptr;
    const long v = std::strtol(env, &endp, 10);
    if (endp != env && *endp == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return 1;
}

}  // namespace xsect
