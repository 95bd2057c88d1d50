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

// xsect: dataset generation, accuracy sweeps, benchmarks and single-query
// inspection for great-circle-arc / latitude intersections.
//
// Exit codes: 0 success, 1 usage, 2 degenerate single query, 3 I/O.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "xsect/batch.hpp"
#include "xsect/dataset.hpp"
#include "xsect/eft.hpp"
#include "xsect/harness.hpp"
#include "xsect/oracle.hpp"
#include "xsect/sphere_intersect.hpp"

namespace {

using namespace xsect;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitDegenerate = 2;
constexpr int kExitIo = 3;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<Method> parse_methods(const std::vector<std::string>& names) {
  std::vector<Method> out;
  for (const std::string& n : names) {
    const auto m = parse_method(n);
    if (!m) throw UsageError("unknown method '" + n + "'");
    out.push_back(*m);
  }
  if (out.empty()) throw UsageError("no methods given");
  return out;
}

OutputFormat parse_format(const std::string& f) {
  if (f == "csv") return OutputFormat::Csv;
  if (f == "jsonl") return OutputFormat::Jsonl;
  throw UsageError("unknown format '" + f + "'");
}

// Output stream for --out: a file, or stdout for "" and "-".
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (path.empty() || path == "-") return;
    file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
    if (!*file_) throw DatasetError("cannot open " + path + " for writing");
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }
  void finish() {
    stream().flush();
    if (!stream()) throw DatasetError("write failed");
  }

 private:
  std::unique_ptr<std::ofstream> file_;
};

std::vector<QueryRecord> load(const std::string& path) {
  if (path == "-") return read_records(std::cin);
  return read_records(std::filesystem::path(path));
}

std::string both_forms(double v) { return hex_double(v) + " (" + shortest_decimal(v) + ")"; }

void print_point(const char* name, const Vec3& p) {
  std::cout << "  " << name << " = [" << both_forms(p.x) << ", " << both_forms(p.y) << ", "
            << both_forms(p.z) << "]\n";
}

Vec3 parse_vec(const std::vector<std::string>& v, const char* flag) {
  if (v.size() != 3) throw UsageError(std::string(flag) + " needs three numbers");
  try {
    return {parse_double(v[0]), parse_double(v[1]), parse_double(v[2])};
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string(flag) + ": " + e.what());
  }
}

struct Options {
  std::uint64_t seed = 42;
  std::string kind;
  std::size_t per_band = 1000;
  std::size_t per_decade = 500;
  std::vector<std::string> methods;
  std::vector<std::size_t> lanes{1};
  std::vector<std::size_t> threads;
  std::size_t passes = 1;
  std::string out;
  std::string in;
  std::string format = "csv";
  bool oracle = false;
  std::vector<std::string> x1, x2;
  std::string z0;
};

int cmd_gen(const Options& o) {
  std::vector<QueryRecord> records;
  if (o.kind == "primary") {
    std::vector<std::string> warnings;
    records = gen_primary(o.seed, default_band_schedule(), o.per_band, &warnings);
    for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
  } else if (o.kind == "illcond") {
    records = gen_illcond(o.seed, default_decades(), o.per_decade);
  } else {
    throw UsageError("--kind must be primary or illcond");
  }
  Sink sink(o.out);
  write_records(records, sink.stream());
  sink.finish();
  return kExitOk;
}

std::size_t first_thread_count(const Options& o) {
  return o.threads.empty() ? default_thread_count() : o.threads.front();
}

int cmd_accuracy(const Options& o) {
  const auto methods = parse_methods(o.methods);
  const auto format = parse_format(o.format);
  const auto records = load(o.in);
  const auto rows = accuracy_sweep(records, methods, first_thread_count(o));
  Sink sink(o.out);
  write_accuracy(rows, format, sink.stream());
  sink.finish();
  return kExitOk;
}

int cmd_bench(const Options& o) {
  BenchConfig cfg;
  cfg.methods = parse_methods(o.methods);
  cfg.lanes = o.lanes;
  cfg.threads = o.threads.empty() ? std::vector<std::size_t>{default_thread_count()} : o.threads;
  cfg.passes = o.passes;
  for (std::size_t t : cfg.threads) {
    if (t == 0) throw UsageError("--threads must be positive");
  }
  if (cfg.passes == 0) throw UsageError("--passes must be positive");
  const auto format = parse_format(o.format);

  std::vector<QueryRecord> records;
  if (!o.in.empty()) {
    records = load(o.in);
  } else {
    records = gen_primary(o.seed, default_band_schedule(), o.per_band);
  }
  std::vector<ArcLatQuery> queries;
  queries.reserve(records.size());
  for (const auto& r : records) queries.push_back(r.query);
  records.clear();
  records.shrink_to_fit();
  const QueryBatch batch = prepare_batch(queries);

  const auto rows = run_bench(batch, cfg);
  Sink sink(o.out);
  write_bench(rows, host_info(), format, sink.stream());
  sink.finish();
  return kExitOk;
}

int cmd_intersect(const Options& o) {
  ArcLatQuery q;
  if (!o.x1.empty() || !o.x2.empty() || !o.z0.empty()) {
    if (o.z0.empty()) throw UsageError("--z0 is required with --x1/--x2");
    q.x1 = parse_vec(o.x1, "--x1");
    q.x2 = parse_vec(o.x2, "--x2");
    try {
      q.z0 = parse_double(o.z0);
    } catch (const std::invalid_argument& e) {
      throw UsageError(std::string("--z0: ") + e.what());
    }
  } else {
    std::string line;
    while (std::getline(std::cin, line) && line.find_first_not_of(" \t\r") == std::string::npos) {
    }
    try {
      q = parse_record(line, 1, 0).query;
    } catch (const DatasetError& e) {
      throw UsageError(std::string("stdin: ") + e.what());
    }
  }
  const auto methods = parse_methods(o.methods.empty() ? std::vector<std::string>{"accux"} : o.methods);

  std::optional<ReferenceSolution> ref;
  for (Method m : methods) {
    IntersectionSolution sol;
    try {
      sol = solve(m, q);
    } catch (const InvalidQuery& e) {
      throw UsageError(std::string("invalid query: ") + e.what());
    } catch (const GeometryError& e) {
      std::cout << e.what() << '\n';
      return kExitDegenerate;
    }
    std::cout << to_string(m) << ": " << to_string(sol.classification) << '\n';
    if (sol.p1) print_point("p1", *sol.p1);
    if (sol.p2) print_point("p2", *sol.p2);
    if (!o.oracle) continue;
    if (!ref) ref = intersect_reference(q);
    if (ref->classification != sol.classification) {
      std::cout << "  oracle classification differs: " << to_string(ref->classification) << '\n';
      continue;
    }
    if (sol.p1) {
      std::cout << "  err p1 = " << both_forms(relative_point_error(*sol.p1, *ref->p1)) << '\n';
    }
    if (sol.p2) {
      std::cout << "  err p2 = " << both_forms(relative_point_error(*sol.p2, *ref->p2)) << '\n';
    }
  }
  if (o.oracle && ref) {
    std::cout << "oracle: " << to_string(ref->classification) << '\n';
    if (ref->p1) print_point("p1", ref->p1->rounded);
    if (ref->p2) print_point("p2", ref->p2->rounded);
  }
  return kExitOk;
}

int cmd_dump(const Options& o) {
  const auto methods =
      parse_methods(o.methods.empty() ? std::vector<std::string>{"accux"} : o.methods);
  for (Method m : methods) {
    if (m != Method::Accux && m != Method::NaiveFinal) {
      throw UsageError("dump-intermediates supports accux and naive-final");
    }
  }
  const auto format = parse_format(o.format);
  const auto records = load(o.in);
  std::vector<IntermediateRow> rows;
  for (Method m : methods) {
    std::size_t excluded = 0;
    auto r = dump_intermediates(records, m, first_thread_count(o), &excluded);
    if (excluded) std::cerr << to_string(m) << ": " << excluded << " records excluded\n";
    if (!records.empty() && excluded < records.size()) rows.insert(rows.end(), r.begin(), r.end());
  }
  Sink sink(o.out);
  write_intermediates(rows, format, sink.stream());
  sink.finish();
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  ensure_round_to_nearest();
  CLI::App app{"Great-circle arc / constant-latitude intersection toolkit"};
  app.require_subcommand(1);
  Options o;
  const std::vector<std::string> all_methods{"naive-final", "naive-cdo", "naive-baseline", "accux"};

  auto* gen = app.add_subcommand("gen", "Generate a seeded query dataset");
  gen->add_option("--kind", o.kind, "primary or illcond")->required();
  gen->add_option("--seed", o.seed, "64-bit seed")->capture_default_str();
  gen->add_option("--per-band", o.per_band, "Records per latitude band")->capture_default_str();
  gen->add_option("--per-decade", o.per_decade, "Records per offset decade")->capture_default_str();
  gen->add_option("--out", o.out, "Output file (default stdout)");

  auto* acc = app.add_subcommand("accuracy", "Per-group error statistics against the oracle");
  acc->add_option("dataset", o.in, "Dataset file, - for stdin")->required();
  acc->add_option("--methods", o.methods, "Comma-separated methods")->delimiter(',');
  acc->add_option("--threads", o.threads, "Worker threads");
  acc->add_option("--out", o.out, "Output file (default stdout)");
  acc->add_option("--format", o.format, "csv or jsonl")->capture_default_str();

  auto* bench = app.add_subcommand("bench", "Batch throughput");
  bench->add_option("dataset", o.in, "Dataset file; default: generated primary dataset");
  bench->add_option("--seed", o.seed, "Seed for the generated dataset")->capture_default_str();
  bench->add_option("--per-band", o.per_band, "Records per band when generating")
      ->capture_default_str();
  bench->add_option("--methods", o.methods, "Comma-separated methods")->delimiter(',');
  bench->add_option("--lanes", o.lanes, "Comma-separated lane widths")->delimiter(',');
  bench->add_option("--threads", o.threads, "Comma-separated thread counts")->delimiter(',');
  bench->add_option("--passes", o.passes, "Timed passes over the batch")->capture_default_str();
  bench->add_option("--out", o.out, "Output file (default stdout)");
  bench->add_option("--format", o.format, "csv or jsonl")->capture_default_str();

  auto* isect = app.add_subcommand("intersect", "Solve one query (flags or 7 numbers on stdin)");
  isect->add_option("--x1", o.x1, "First endpoint x,y,z")->delimiter(',');
  isect->add_option("--x2", o.x2, "Second endpoint x,y,z")->delimiter(',');
  isect->add_option("--z0", o.z0, "Latitude plane height");
  isect->add_option("--methods", o.methods, "Comma-separated methods")->delimiter(',');
  isect->add_flag("--oracle", o.oracle, "Also print the reference solution and errors");

  auto* dump = app.add_subcommand("dump-intermediates", "Mean relative error per intermediate");
  dump->add_option("dataset", o.in, "Dataset file, - for stdin")->required();
  dump->add_option("--methods", o.methods, "accux and/or naive-final")->delimiter(',');
  dump->add_option("--threads", o.threads, "Worker threads");
  dump->add_option("--out", o.out, "Output file (default stdout)");
  dump->add_option("--format", o.format, "csv or jsonl")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (o.methods.empty() && app.got_subcommand(acc)) o.methods = all_methods;
  if (o.methods.empty() && app.got_subcommand(bench)) o.methods = all_methods;

  try {
    if (app.got_subcommand(gen)) return cmd_gen(o);
    if (app.got_subcommand(acc)) return cmd_accuracy(o);
    if (app.got_subcommand(bench)) return cmd_bench(o);
    if (app.got_subcommand(isect)) return cmd_intersect(o);
    if (app.got_subcommand(dump)) return cmd_dump(o);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DatasetError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitUsage;
}
