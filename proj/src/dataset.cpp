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

#include "xsect/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include <json.hpp>

#include "xsect/expansion.hpp"
#include "xsect/oracle.hpp"

namespace xsect {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ull;
constexpr std::size_t kMaxIllcondDraws = 10'000'000;

std::uint64_t splitmix64(std::uint64_t x) {
  x += kGolden;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

class Stream {
 public:
  Stream(std::uint64_t seed, std::size_t index) : rng_(splitmix64(seed + index * kGolden)) {}

  // Uniform on [0, 1).
  double uniform() { return static_cast<double>(rng_() >> 11) * 0x1p-53; }

 private:
  std::mt19937_64 rng_;
};

Vec3 from_lat_lon(double lat_deg, double lon_deg) {
  constexpr double kDeg = std::numbers::pi / 180.0;
  const double lat = lat_deg * kDeg;
  const double lon = lon_deg * kDeg;
  return {std::cos(lat) * std::cos(lon), std::cos(lat) * std::sin(lon), std::sin(lat)};
}

std::string format_g(double v) {
  char buf[64];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

}  // namespace

std::vector<BandSpec> default_band_schedule() {
  std::vector<BandSpec> s = {{0.0, 1e-4}, {1e-4, 1e-3}, {1e-3, 1e-2}, {1e-2, 0.1}, {0.1, 1.0}};
  for (int lo = 1; lo < 81; lo += 10) s.push_back({double(lo), double(lo + 10)});
  for (const BandSpec b : {BandSpec{81.0, 89.0}, BandSpec{89.0, 89.9}, BandSpec{89.9, 89.99},
                           BandSpec{89.99, 89.999}}) {
    s.push_back(b);
  }
  return s;
}

std::vector<DecadeSpec> default_decades() {
  std::vector<DecadeSpec> d;
  for (int lo = -15; lo <= -3; ++lo) d.push_back({lo, lo + 1});
  return d;
}

std::string band_label(const BandSpec& band) {
  return format_g(band.lat_lo) + "-" + format_g(band.lat_hi);
}

std::string decade_label(const DecadeSpec& decade) {
  return "1e" + std::to_string(decade.lo) + "-1e" + std::to_string(decade.hi);
}

std::vector<QueryRecord> gen_primary(std::uint64_t seed, std::span<const BandSpec> schedule,
                                     std::size_t per_band, std::vector<std::string>* warnings) {
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    const BandSpec& b = schedule[i];
    if (!(b.lat_lo >= 0.0 && b.lat_hi <= 90.0 && b.lat_lo <= b.lat_hi)) {
      throw std::invalid_argument("invalid band " + band_label(b));
    }
    if (i > 0 && b.lat_lo < schedule[i - 1].lat_hi) {
      throw std::invalid_argument("overlapping bands at " + band_label(b));
    }
  }
  std::vector<QueryRecord> out;
  out.reserve(schedule.size() * per_band);
  std::uint64_t id = 0;
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    const BandSpec& b = schedule[i];
    if (b.lat_lo == b.lat_hi) {
      if (warnings) warnings->push_back("skipping empty band " + band_label(b));
      continue;
    }
    Stream rng(seed, i);
    const std::string label = band_label(b);
    for (std::size_t k = 0; k < per_band; ++k) {
      auto endpoint = [&] {
        const double lat = b.lat_lo + rng.uniform() * (b.lat_hi - b.lat_lo);
        const double lon = rng.uniform() * 360.0;
        return from_lat_lon(lat, lon);
      };
      QueryRecord r;
      r.id = id++;
      r.label = label;
      r.query.x1 = endpoint();
      r.query.x2 = endpoint();
      const double zlo = std::min(r.query.x1.z, r.query.x2.z);
      const double zhi = std::max(r.query.x1.z, r.query.x2.z);
      r.query.z0 = std::clamp(zlo + rng.uniform() * (zhi - zlo), zlo, zhi);
      out.push_back(std::move(r));
    }
  }
  return out;
}

std::vector<QueryRecord> gen_illcond(std::uint64_t seed, std::span<const DecadeSpec> decades,
                                     std::size_t per_decade) {
  for (const DecadeSpec& d : decades) {
    if (d.lo < -15 || d.hi > -2 || d.lo >= d.hi) {
      throw std::invalid_argument("invalid decade " + decade_label(d));
    }
  }
  std::vector<QueryRecord> out;
  out.reserve(decades.size() * per_decade);
  std::uint64_t id = 0;
  for (std::size_t i = 0; i < decades.size(); ++i) {
    const DecadeSpec& d = decades[i];
    const double r_lo = std::pow(10.0, d.lo);
    const double r_hi = std::pow(10.0, d.hi);
    Stream rng(seed, i);
    const std::string label = decade_label(d);
    for (std::size_t k = 0; k < per_decade; ++k) {
      QueryRecord rec;
      rec.id = id++;
      rec.label = label;
      std::size_t draws = 0;
      for (;; ++draws) {
        if (draws == kMaxIllcondDraws) {
          throw DatasetError("gen_illcond: no admissible record for decade " + label);
        }
        auto endpoint = [&] {
          const double lat = 1e-4 * (1.0 - rng.uniform());  // (0, 1e-4]
          const double lon = rng.uniform() * 360.0;
          return from_lat_lon(lat, lon);
        };
        const Vec3 x1 = endpoint();
        const Vec3 x2 = endpoint();
        const double r = r_lo + rng.uniform() * (r_hi - r_lo);
        // Cheap binary64 screen before the exact evaluation.
        const double nx = x1.y * x2.z - x1.z * x2.y;
        const double ny = x1.z * x2.x - x1.x * x2.z;
        const double nz = x1.x * x2.y - x1.y * x2.x;
        const double xy2 = nx * nx + ny * ny;
        const double zmax_est = std::sqrt(xy2 / (xy2 + nz * nz));
        if (!(zmax_est > r * (1.0 + 1e-6))) continue;

        const ExactNormal n = exact_cross(x1, x2);
        const Expansion exy2 = exp_add(exp_mul(n.nx, n.nx), exp_mul(n.ny, n.ny));
        const Expansion en2 = exp_add(exy2, exp_mul(n.nz, n.nz));
        const Expansion zmax = exp_sqrt(exp_div(exy2, en2));
        const double z0 = round_to_double(exp_sub(zmax, Expansion(r)));
        rec.query = ArcLatQuery{x1, x2, z0};
        if (z0 > 0.0 && sign(exact_s2(rec.query)) >= 0) break;
      }
      out.push_back(std::move(rec));
    }
  }
  return out;
}

std::string hex_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

double parse_double(std::string_view text) {
  const std::string s(text);
  if (s.empty()) throw std::invalid_argument("empty number");
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) throw std::invalid_argument("invalid number '" + s + "'");
  return v;
}

std::string format_record(const QueryRecord& r) {
  const ArcLatQuery& q = r.query;
  nlohmann::ordered_json j;
  j["id"] = r.id;
  j["band"] = r.label;
  j["x1"] = {hex_double(q.x1.x), hex_double(q.x1.y), hex_double(q.x1.z)};
  j["x2"] = {hex_double(q.x2.x), hex_double(q.x2.y), hex_double(q.x2.z)};
  j["z0"] = hex_double(q.z0);
  return j.dump();
}

namespace {

[[noreturn]] void fail(std::size_t line_no, std::string_view field, std::string_view what) {
  throw DatasetError("line " + std::to_string(line_no) + ", field " + std::string(field) + ": " +
                     std::string(what));
}

double json_number(const nlohmann::json& j, std::size_t line_no, const std::string& field) {
  if (j.is_string()) {
    try {
      return parse_double(j.get<std::string>());
    } catch (const std::invalid_argument& e) {
      fail(line_no, field, e.what());
    }
  }
  if (j.is_number()) return j.get<double>();
  fail(line_no, field, "expected a hex-float string");
}

Vec3 json_vec(const nlohmann::json& obj, std::size_t line_no, const std::string& key) {
  if (!obj.contains(key)) fail(line_no, key, "missing");
  const auto& a = obj[key];
  if (!a.is_array() || a.size() != 3) fail(line_no, key, "expected an array of 3 numbers");
  return {json_number(a[0], line_no, key + "[0]"), json_number(a[1], line_no, key + "[1]"),
          json_number(a[2], line_no, key + "[2]")};
}

}  // namespace

QueryRecord parse_record(std::string_view line, std::size_t line_no, std::uint64_t fallback_id) {
  QueryRecord r;
  r.id = fallback_id;
  const auto first = line.find_first_not_of(" \t\r");
  if (first != std::string_view::npos && line[first] == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      fail(line_no, "<json>", e.what());
    }
    if (!j.is_object()) fail(line_no, "<json>", "expected an object");
    if (j.contains("id")) {
      if (!j["id"].is_number_unsigned()) fail(line_no, "id", "expected a non-negative integer");
      r.id = j["id"].get<std::uint64_t>();
    }
    if (j.contains("band")) {
      if (!j["band"].is_string()) fail(line_no, "band", "expected a string");
      r.label = j["band"].get<std::string>();
    }
    r.query.x1 = json_vec(j, line_no, "x1");
    r.query.x2 = json_vec(j, line_no, "x2");
    if (!j.contains("z0")) fail(line_no, "z0", "missing");
    r.query.z0 = json_number(j["z0"], line_no, "z0");
    return r;
  }

  static constexpr const char* kFields[7] = {"x1x", "x1y", "x1z", "x2x", "x2y", "x2z", "z0"};
  std::istringstream in{std::string(line)};
  double v[7];
  std::string tok;
  for (int i = 0; i < 7; ++i) {
    if (!(in >> tok)) fail(line_no, kFields[i], "missing");
    try {
      v[i] = parse_double(tok);
    } catch (const std::invalid_argument& e) {
      fail(line_no, kFields[i], e.what());
    }
  }
  if (in >> tok) fail(line_no, "<end>", "unexpected extra column '" + tok + "'");
  r.query = ArcLatQuery{{v[0], v[1], v[2]}, {v[3], v[4], v[5]}, v[6]};
  return r;
}

void write_records(std::span<const QueryRecord> records, std::ostream& out) {
  for (const QueryRecord& r : records) out << format_record(r) << '\n';
}

void write_records(std::span<const QueryRecord> records, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DatasetError("cannot open " + path.string() + " for writing");
  write_records(records, out);
  out.flush();
  if (!out) throw DatasetError("write to " + path.string() + " failed");
}

std::vector<QueryRecord> read_records(std::istream& in) {
  std::vector<QueryRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(parse_record(line, line_no, out.size()));
  }
  return out;
}

std::vector<QueryRecord> read_records(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DatasetError("cannot open " + path.string());
  return read_records(in);
}

}  // namespace xsect
