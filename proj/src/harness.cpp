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

#include "xsect/harness.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <thread>

#include <json.hpp>

#include "xsect/oracle.hpp"
#include "xsect/sphere_intersect.hpp"

#ifndef XSECT_BUILD_FLAGS
#define XSECT_BUILD_FLAGS "unknown"
#endif

namespace xsect {

namespace {

// Runs fn(i) for i in [0, n) on up to `threads` threads. fn must only write
// to per-index state.
template <typename Fn>
void parallel_for(std::size_t n, std::size_t threads, Fn&& fn) {
  threads = std::max<std::size_t>(1, std::min(threads, n));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
  };
  std::vector<std::jthread> pool;
  for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
}

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

// Labels in order of first appearance.
std::vector<std::string> group_order(std::span<const QueryRecord> records) {
  std::vector<std::string> groups;
  for (const QueryRecord& r : records) {
    if (std::find(groups.begin(), groups.end(), r.label) == groups.end()) groups.push_back(r.label);
  }
  return groups;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string shortest_decimal(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

RecordError record_error(Method m, const ArcLatQuery& q) {
  RecordError out;
  ReferenceSolution ref;
  try {
    ref = intersect_reference(q);
  } catch (const GeometryError&) {
    out.excluded = true;
    return out;
  }
  if (ref.classification == Classification::NoIntersection) {
    out.excluded = true;
    return out;
  }
  IntersectionSolution sol;
  try {
    sol = solve(m, q);
  } catch (const InvalidQuery&) {
    out.excluded = true;
    return out;
  } catch (const GeometryError&) {
    out.mismatch = true;
    return out;
  }
  if (sol.classification != ref.classification) {
    out.mismatch = true;
    return out;
  }
  out.error = relative_point_error(*sol.p1, *ref.p1);
  if (sol.p2) out.error = std::max(out.error, relative_point_error(*sol.p2, *ref.p2));
  return out;
}

std::vector<RecordError> record_errors(std::span<const QueryRecord> records, Method m,
                                       std::size_t threads) {
  std::vector<RecordError> errs(records.size());
  parallel_for(records.size(), threads,
               [&](std::size_t i) { errs[i] = record_error(m, records[i].query); });
  return errs;
}

std::vector<AccuracyRow> accuracy_sweep(std::span<const QueryRecord> records,
                                        std::span<const Method> methods, std::size_t threads) {
  std::vector<std::vector<RecordError>> errs;
  for (Method m : methods) errs.push_back(record_errors(records, m, threads));

  std::vector<AccuracyRow> rows;
  for (const std::string& g : group_order(records)) {
    for (std::size_t k = 0; k < methods.size(); ++k) {
      AccuracyRow row;
      row.group = g;
      row.method = std::string(to_string(methods[k]));
      std::vector<double> vals;
      for (std::size_t i = 0; i < records.size(); ++i) {
        if (records[i].label != g) continue;
        const RecordError& e = errs[k][i];
        if (e.excluded) {
          ++row.excluded;
        } else if (e.mismatch) {
          ++row.mismatched;
        } else {
          vals.push_back(e.error);
        }
      }
      row.n = vals.size();
      row.max_rel_err = vals.empty() ? 0.0 : *std::max_element(vals.begin(), vals.end());
      row.median_rel_err = median_of(std::move(vals));
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

void write_accuracy(std::span<const AccuracyRow> rows, OutputFormat format, std::ostream& out) {
  if (format == OutputFormat::Csv) {
    out << "# schema: " << kAccuracySchema << '\n';
    out << "group,method,max_rel_err,median_rel_err,n,excluded,mismatched,max_rel_err_hex,"
           "median_rel_err_hex\n";
    for (const AccuracyRow& r : rows) {
      out << csv_field(r.group) << ',' << r.method << ',' << shortest_decimal(r.max_rel_err) << ','
          << shortest_decimal(r.median_rel_err) << ',' << r.n << ',' << r.excluded << ','
          << r.mismatched << ',' << hex_double(r.max_rel_err) << ','
          << hex_double(r.median_rel_err) << '\n';
    }
    return;
  }
  for (const AccuracyRow& r : rows) {
    nlohmann::ordered_json j;
    j["schema"] = kAccuracySchema;
    j["group"] = r.group;
    j["method"] = r.method;
    j["max_rel_err"] = hex_double(r.max_rel_err);
    j["median_rel_err"] = hex_double(r.median_rel_err);
    j["n"] = r.n;
    j["excluded"] = r.excluded;
    j["mismatched"] = r.mismatched;
    out << j.dump() << '\n';
  }
}

HostInfo host_info() {
  HostInfo h;
  h.hardware_threads = std::thread::hardware_concurrency();
  std::ifstream cpuinfo("/proc/cpuinfo");
  std::string line;
  while (std::getline(cpuinfo, line)) {
    if (line.rfind("model name", 0) == 0) {
      const auto colon = line.find(':');
      if (colon != std::string::npos) h.cpu = line.substr(line.find_first_not_of(' ', colon + 1));
      break;
    }
  }
  if (h.cpu.empty()) h.cpu = "unknown";
#if defined(__clang__)
  h.compiler = "clang " __clang_version__;
#elif defined(__GNUC__)
  h.compiler = "gcc " __VERSION__;
#else
  h.compiler = "unknown";
#endif
  h.flags = XSECT_BUILD_FLAGS;
  return h;
}

std::vector<BenchRow> run_bench(const QueryBatch& batch, const BenchConfig& config) {
  std::vector<BenchRow> rows;
  BatchOutput out;
  for (Method m : config.methods) {
    for (std::size_t lanes : config.lanes) {
      for (std::size_t threads : config.threads) {
        BenchRow row;
        row.method = std::string(to_string(m));
        row.lanes = lanes;
        row.threads = threads;
        if (lanes != 1 && lanes != 2 && lanes != 4 && lanes != 8) {
          row.skipped = true;
          rows.push_back(row);
          continue;
        }
        const BatchOptions opts{lanes, threads, config.chunk};
        run_batch(m, batch, opts, out);  // warm-up
        const auto t0 = std::chrono::steady_clock::now();
        for (std::size_t p = 0; p < config.passes; ++p) run_batch(m, batch, opts, out);
        const auto t1 = std::chrono::steady_clock::now();
        row.n = batch.size() * config.passes;
        row.wall_seconds = std::chrono::duration<double>(t1 - t0).count();
        row.queries_per_second =
            row.wall_seconds > 0.0 ? static_cast<double>(row.n) / row.wall_seconds : 0.0;
        row.checksum = checksum(out);
        rows.push_back(row);
      }
    }
  }
  return rows;
}

void write_bench(std::span<const BenchRow> rows, const HostInfo& host, OutputFormat format,
                 std::ostream& out) {
  char sum[32];
  if (format == OutputFormat::Csv) {
    out << "# schema: " << kBenchSchema << '\n';
    out << "# host: cpu=" << host.cpu << "; hardware_threads=" << host.hardware_threads
        << "; compiler=" << host.compiler << "; flags=" << host.flags << '\n';
    out << "method,lanes,threads,n,wall_seconds,queries_per_second,checksum,skipped\n";
    for (const BenchRow& r : rows) {
      std::snprintf(sum, sizeof sum, "%016llx", static_cast<unsigned long long>(r.checksum));
      out << r.method << ',' << r.lanes << ',' << r.threads << ',' << r.n << ','
          << shortest_decimal(r.wall_seconds) << ',' << shortest_decimal(r.queries_per_second)
          << ',' << sum << ',' << (r.skipped ? 1 : 0) << '\n';
    }
    return;
  }
  for (const BenchRow& r : rows) {
    std::snprintf(sum, sizeof sum, "%016llx", static_cast<unsigned long long>(r.checksum));
    nlohmann::ordered_json j;
    j["schema"] = kBenchSchema;
    j["method"] = r.method;
    j["lanes"] = r.lanes;
    j["threads"] = r.threads;
    j["n"] = r.n;
    j["wall_seconds"] = r.wall_seconds;
    j["queries_per_second"] = r.queries_per_second;
    j["checksum"] = sum;
    j["skipped"] = r.skipped;
    j["host"] = {{"cpu", host.cpu},
                 {"hardware_threads", host.hardware_threads},
                 {"compiler", host.compiler},
                 {"flags", host.flags}};
    out << j.dump() << '\n';
  }
}

std::string_view to_string(AccuxStage s) {
  static constexpr std::array<std::string_view, kAccuxStageCount> kNames = {
      "nx", "ny", "nz", "norm_xy2", "norm2", "s2", "s", "numerator_x", "rounded_numerator_x",
      "rounded_denominator", "coord_x"};
  return kNames[static_cast<int>(s)];
}

namespace {

struct StageCapture {
  std::array<std::array<double, 2>, kAccuxStageCount>* values;
  void operator()(AccuxStage s, double hi, double lo) const {
    (*values)[static_cast<int>(s)] = {hi, lo};
  }
};

}  // namespace

std::vector<IntermediateRow> dump_intermediates(std::span<const QueryRecord> records, Method m,
                                                std::size_t threads, std::size_t* excluded) {
  if (m != Method::Accux && m != Method::NaiveFinal) {
    throw std::invalid_argument("intermediates are traced for accux and naive-final only");
  }
  constexpr double kSkip = -1.0;
  std::vector<std::array<double, kAccuxStageCount>> errs(records.size());
  std::vector<char> used(records.size(), 0);
  parallel_for(records.size(), threads, [&](std::size_t i) {
    const ArcLatQuery& q = records[i].query;
    CanonicalQuery c;
    try {
      if (intersect_reference(q).classification != Classification::TwoPoints) return;
      c = canonicalize(q);
    } catch (const GeometryError&) {
      return;
    }
    const KernelInput<double> in{{c.query.x1.x, c.query.x1.y, c.query.x1.z},
                                 {c.query.x2.x, c.query.x2.y, c.query.x2.z},
                                 c.query.z0};
    std::array<std::array<double, 2>, kAccuxStageCount> got{};
    KernelOutput<double> k;
    if (m == Method::Accux) {
      k = accux_kernel(in, StageCapture{&got});
    } else {
      k = naive_final_kernel(in, StageCapture{&got});
    }
    if (!(k.s2 > 0.0)) return;  // classification disagrees; nothing to compare
    const auto ref = reference_intermediates(c.query);
    for (int s = 0; s < kAccuxStageCount; ++s) {
      if (ref[s].is_zero()) {
        errs[i][s] = kSkip;
        continue;
      }
      const Expansion v = exp_add(Expansion(got[s][0]), Expansion(got[s][1]));
      errs[i][s] = relative_error(v, ref[s]);
    }
    used[i] = 1;
  });

  std::vector<IntermediateRow> rows;
  for (int s = 0; s < kAccuxStageCount; ++s) {
    IntermediateRow row;
    row.method = std::string(to_string(m));
    row.stage = std::string(to_string(static_cast<AccuxStage>(s)));
    double total = 0.0;
    for (std::size_t i = 0; i < records.size(); ++i) {
      if (!used[i] || errs[i][s] == kSkip) continue;
      total += errs[i][s];
      ++row.n;
    }
    row.mean_rel_err = row.n ? total / static_cast<double>(row.n) : 0.0;
    rows.push_back(std::move(row));
  }
  if (excluded) {
    *excluded = static_cast<std::size_t>(std::count(used.begin(), used.end(), 0));
  }
  return rows;
}

void write_intermediates(std::span<const IntermediateRow> rows, OutputFormat format,
                         std::ostream& out) {
  if (format == OutputFormat::Csv) {
    out << "# schema: " << kIntermediatesSchema << '\n';
    out << "method,stage,mean_rel_err,mean_rel_err_in_u,n,mean_rel_err_hex\n";
    for (const IntermediateRow& r : rows) {
      out << r.method << ',' << r.stage << ',' << shortest_decimal(r.mean_rel_err) << ','
          << shortest_decimal(r.mean_rel_err / kUnitRoundoff) << ',' << r.n << ','
          << hex_double(r.mean_rel_err) << '\n';
    }
    return;
  }
  for (const IntermediateRow& r : rows) {
    nlohmann::ordered_json j;
    j["schema"] = kIntermediatesSchema;
    j["method"] = r.method;
    j["stage"] = r.stage;
    j["mean_rel_err"] = hex_double(r.mean_rel_err);
    j["n"] = r.n;
    out << j.dump() << '\n';
  }
}

}  // namespace xsect
