// Copyright 2026 The Demoforge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "demoforge/recording/csv.h"

#include <charconv>
#include <cmath>
#include <string>

#include "demoforge/common/error.h"

namespace demoforge::recording {
namespace {

std::string triple(const Vec3& v) {
  return "\"[" + format_float(v.x) + ", " + format_float(v.y) + ", " +
         format_float(v.z) + "]\"";
}

// Python repr layout for a shortest digit string `sci` in to_chars
// scientific form.
std::string python_layout(std::string_view sci) {
  std::string out;
  if (sci.front() == '-') {
    out.push_back('-');
    sci.remove_prefix(1);
  }
  const auto e = sci.find('e');
  const int exponent = std::stoi(std::string(sci.substr(e + 1)));
  std::string digits;
  for (char c : sci.substr(0, e)) {
    if (c != '.') digits.push_back(c);
  }

  if (exponent >= -4 && exponent < 16) {
    if (exponent >= 0) {
      const auto int_len = static_cast<size_t>(exponent) + 1;
      if (digits.size() <= int_len) {
        out += digits + std::string(int_len - digits.size(), '0') + ".0";
      } else {
        out += digits.substr(0, int_len) + "." + digits.substr(int_len);
      }
    } else {
      out += "0." + std::string(-exponent - 1, '0') + digits;
    }
  } else {
    out += digits.substr(0, 1);
    if (digits.size() > 1) out += "." + digits.substr(1);
    const int mag = std::abs(exponent);
    out += exponent < 0 ? "e-" : "e+";
    if (mag < 10) out.push_back('0');
    out += std::to_string(mag);
  }
  return out;
}

template <typename T>
std::string format_shortest(T value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (value == 0) return std::signbit(value) ? "-0.0" : "0.0";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value,
                                 std::chars_format::scientific);
  return python_layout(std::string_view(buf, res.ptr - buf));
}

double parse_double(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  double v = 0.0;
  if (s == "inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  if (s == "nan") return NAN;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw FormatError("bad number '" + std::string(s) + "'");
  }
  return v;
}

Vec3 parse_triple(std::string_view s) {
  if (s.size() < 2 || s.front() != '[' || s.back() != ']') {
    throw FormatError("expected [x, y, z]");
  }
  s = s.substr(1, s.size() - 2);
  Vec3 v;
  for (int d = 0; d < 3; ++d) {
    const auto comma = s.find(',');
    if ((d < 2) != (comma != std::string_view::npos)) {
      throw FormatError("expected three components");
    }
    v[d] = parse_double(s.substr(0, comma));
    if (d < 2) s.remove_prefix(comma + 1);
  }
  return v;
}

// Splits one CSV line honouring double quotes (no escaped quotes needed).
std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> fields;
  size_t start = 0;
  bool quoted = false;
  for (size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || (line[i] == ',' && !quoted)) {
      auto f = line.substr(start, i - start);
      if (f.size() >= 2 && f.front() == '"' && f.back() == '"') {
        f = f.substr(1, f.size() - 2);
      }
      fields.push_back(f);
      start = i + 1;
    } else if (line[i] == '"') {
      quoted = !quoted;
    }
  }
  return fields;
}

}  // namespace

CsvStyle parse_csv_style(std::string_view name) {
  if (name == "table1") return CsvStyle::kTable1;
  if (name == "long") return CsvStyle::kLong;
  throw InvalidArgumentError("unknown CSV style '" + std::string(name) + "'");
}

std::string format_float(double value) { return format_shortest(value); }

std::string export_csv(const Recording& rec, CsvStyle style) {
  if (rec.frame_count() == 0) {
    throw EmptyExportError("recording has no frames to export");
  }
  const auto& names = rec.header().topology.atom_names;
  std::string out;
  if (style == CsvStyle::kTable1) {
    out += "atom name,time,coordinates,user forces\n";
    for (size_t fi = 0; fi < rec.frame_count(); ++fi) {
      const auto& f = rec.frames()[fi];
      for (size_t a = 0; a < f.positions.size(); ++a) {
        out += names[a] + "," + std::to_string(fi) + "," +
               triple(f.positions[a]) + "," + triple(f.user_forces[a]) + "\n";
      }
    }
  } else {
    out += "atom_name,step,x,y,z,fx,fy,fz\n";
    for (const auto& f : rec.frames()) {
      for (size_t a = 0; a < f.positions.size(); ++a) {
        const auto& p = f.positions[a];
        const auto& u = f.user_forces[a];
        out += names[a] + "," + std::to_string(f.step) + "," +
               format_float(p.x) + "," + format_float(p.y) + "," +
               format_float(p.z) + "," + format_float(u.x) + "," +
               format_float(u.y) + "," + format_float(u.z) + "\n";
      }
    }
  }
  return out;
}

std::vector<Table1Row> parse_table1_csv(std::string_view text) {
  std::vector<Table1Row> rows;
  bool header = true;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const auto line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    if (line.empty()) continue;
    if (header) {
      if (line != "atom name,time,coordinates,user forces") {
        throw FormatError("unexpected table1 header");
      }
      header = false;
      continue;
    }
    const auto fields = split_csv(line);
    if (fields.size() != 4) throw FormatError("expected 4 fields per row");
    Table1Row row;
    row.atom_name = std::string(fields[0]);
    row.frame_index = static_cast<int64_t>(parse_double(fields[1]));
    row.coordinates = parse_triple(fields[2]);
    row.user_forces = parse_triple(fields[3]);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace demoforge::recording
