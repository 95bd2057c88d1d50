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

// Library side of the command-line tool: accuracy sweeps against the oracle,
// throughput measurements and intermediate-error profiles. The CLI only
// parses flags and formats output.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "xsect/batch.hpp"
#include "xsect/dataset.hpp"
#include "xsect/geometry.hpp"
#include "xsect/kernels.hpp"

namespace xsect {

inline constexpr std::string_view kAccuracySchema = "xsect.accuracy.v1";
inline constexpr std::string_view kBenchSchema = "xsect.bench.v1";
inline constexpr std::string_view kIntermediatesSchema = "xsect.intermediates.v1";

enum class OutputFormat { Csv, Jsonl };

// Per-record result of one method against the oracle.
struct RecordError {
  double error = 0.0;     // max over the points both sides produced
  bool excluded = false;  // oracle degenerate or no intersection
  bool mismatch = false;  // method classification differs from the oracle
};

// Error of `m` on a single query; computes the reference itself.
RecordError record_error(Method m, const ArcLatQuery& q);

struct AccuracyRow {
  std::string group;
  std::string method;
  double max_rel_err = 0.0;
  double median_rel_err = 0.0;
  std::size_t n = 0;           // records in the statistics
  std::size_t excluded = 0;    // oracle degeneracies and NoIntersection
  std::size_t mismatched = 0;  // classification disagreements, not in n
};

// One row per (group, method), groups in order of first appearance. Oracle
// work is spread over `threads`; the result does not depend on it.
std::vector<AccuracyRow> accuracy_sweep(std::span<const QueryRecord> records,
                                        std::span<const Method> methods, std::size_t threads = 1);

// Per-record errors in record order, for callers that need the raw values.
std::vector<RecordError> record_errors(std::span<const QueryRecord> records, Method m,
                                       std::size_t threads = 1);

void write_accuracy(std::span<const AccuracyRow> rows, OutputFormat format, std::ostream& out);

struct HostInfo {
  std::string cpu;
  unsigned hardware_threads = 0;
  std::string compiler;
  std::string flags;
};

HostInfo host_info();

struct BenchRow {
  std::string method;
  std::size_t lanes = 1;
  std::size_t threads = 1;
  std::size_t n = 0;  // queries evaluated, all passes
  double wall_seconds = 0.0;
  double queries_per_second = 0.0;
  std::uint64_t checksum = 0;
  bool skipped = false;
};

struct BenchConfig {
  std::vector<Method> methods;
  std::vector<std::size_t> lanes{1};
  std::vector<std::size_t> threads{1};
  std::size_t passes = 1;  // repetitions over the batch inside one timing
  std::size_t chunk = 4096;
};

// Times run_batch over a prepared batch, after one untimed warm-up pass.
// Unsupported lane widths produce skipped rows.
std::vector<BenchRow> run_bench(const QueryBatch& batch, const BenchConfig& config);

void write_bench(std::span<const BenchRow> rows, const HostInfo& host, OutputFormat format,
                 std::ostream& out);

struct IntermediateRow {
  std::string method;
  std::string stage;
  double mean_rel_err = 0.0;
  std::size_t n = 0;  // records where the exact value is nonzero
};

std::string_view to_string(AccuxStage s);

// Mean relative error of each traced stage of `m` (accux or naive-final)
// against the exact intermediates, over records with two intersections.
// `excluded` receives the number of records skipped.
std::vector<IntermediateRow> dump_intermediates(std::span<const QueryRecord> records, Method m,
                                                std::size_t threads = 1,
                                                std::size_t* excluded = nullptr);

void write_intermediates(std::span<const IntermediateRow> rows, OutputFormat format,
                         std::ostream& out);

// Decimal shortest round-trip and hex forms of a double.
std::string shortest_decimal(double v);

}  // namespace xsect
