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

// Seeded query datasets and their hex-float file format.
//
// Random streams: one std::mt19937_64 per band (or decade), seeded with
// splitmix64(seed + index * 0x9e3779b97f4a7c15). Uniform doubles are taken
// from the top 53 bits of each draw, so streams are identical on every
// platform with IEEE binary64 and correctly rounded basic operations.
// Trigonometry comes from the host libm.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "xsect/geometry.hpp"

namespace xsect {

struct BandSpec {
  double lat_lo = 0.0;  // degrees
  double lat_hi = 0.0;
  std::size_t samples = 0;
};

// Offsets r drawn from [10^lo, 10^hi).
struct DecadeSpec {
  int lo = -15;
  int hi = -14;
};

struct QueryRecord {
  std::uint64_t id = 0;
  ArcLatQuery query;
  std::string label;  // band or decade

  friend bool operator==(const QueryRecord&, const QueryRecord&) = default;
};

class DatasetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// 0-1e-4, 1e-4-1e-3, ..., 0.1-1, ten-degree bands 1-81, 81-89, 89-89.9,
// 89.9-89.99, 89.99-89.999 degrees. 17 bands, samples = 0.
std::vector<BandSpec> default_band_schedule();

// One decade per exponent from -15 to -3: 13 decades.
std::vector<DecadeSpec> default_decades();

std::string band_label(const BandSpec& band);
std::string decade_label(const DecadeSpec& decade);

// Both endpoints with latitude uniform in the band (northern hemisphere) and
// longitude uniform in [0, 360); z0 uniform between the endpoint z values.
// Zero-width bands are skipped and reported in `warnings`. Throws
// std::invalid_argument for bands outside [0, 90], reversed or overlapping.
std::vector<QueryRecord> gen_primary(std::uint64_t seed, std::span<const BandSpec> schedule,
                                     std::size_t per_band,
                                     std::vector<std::string>* warnings = nullptr);

// Near-equator arcs (endpoint latitudes in (0, 1e-4] degrees) with z0 just
// below the apex height z_max = |n_xy| / |n| of the great circle:
// z0 = round(z_max - r), r uniform in the decade, z_max - r evaluated in
// expansion arithmetic. Endpoint pairs whose apex lies below r are redrawn,
// as are records whose rounded z0 leaves the circle's range. Throws
// DatasetError after too many redraws and std::invalid_argument for decades
// outside [-15, -2].
std::vector<QueryRecord> gen_illcond(std::uint64_t seed, std::span<const DecadeSpec> decades,
                                     std::size_t per_decade);

// Lowercase hex float, e.g. 0x1.8p-1.
std::string hex_double(double v);
// Parses a C99 floating literal (hex or decimal); the whole string must be
// consumed. Throws std::invalid_argument.
double parse_double(std::string_view text);

// One JSON object per line: {"id", "band", "x1", "x2", "z0"} with hex-float
// strings.
std::string format_record(const QueryRecord& r);

// A JSON line as above, or seven whitespace-separated numbers
// x1x x1y x1z x2x x2y x2z z0 (id = fallback_id, empty label).
// Throws DatasetError naming the line and the field.
QueryRecord parse_record(std::string_view line, std::size_t line_no, std::uint64_t fallback_id);

void write_records(std::span<const QueryRecord> records, std::ostream& out);
void write_records(std::span<const QueryRecord> records, const std::filesystem::path& path);
std::vector<QueryRecord> read_records(std::istream& in);
// Throws DatasetError when the file cannot be opened.
std::vector<QueryRecord> read_records(const std::filesystem::path& path);

}  // namespace xsect
