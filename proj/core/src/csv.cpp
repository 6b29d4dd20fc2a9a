// Copyright 2026 The oph Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "oph/csv.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <limits>
#include <sstream>

#include "oph/errors.hpp"

namespace oph {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  if (res.ec != std::errc{}) throw Error("format_double: conversion failed");
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw InvalidInput("not a number: '" + std::string(s) + "'");
  }
  return v;
}

std::size_t CsvTable::column(std::string_view name) const {
  return static_cast<std::size_t>(std::find(header.begin(), header.end(), name) - header.begin());
}

std::vector<double> CsvTable::values(std::string_view name) const {
  const std::size_t c = column(name);
  if (c == header.size()) throw InvalidInput("CSV has no column '" + std::string(name) + "'");
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r.at(c));
  return out;
}

std::string to_csv_text(const CsvTable& table) {
  std::string out;
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    if (i) out += ',';
    out += table.header[i];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    if (row.size() != table.header.size()) throw InvalidInput("CSV row width differs from header");
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_double(row[i]);
    }
    out += '\n';
  }
  return out;
}

void write_csv(const CsvTable& table, const std::filesystem::path& path) {
  const std::string text = to_csv_text(table);
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("cannot open " + path.string() + " for writing");
  f.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!f) throw Error("write failed: " + path.string());
}

CsvTable parse_csv_text(std::string_view text) {
  CsvTable t;
  auto split = [](std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (;;) {
      const std::size_t comma = line.find(',', start);
      fields.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    return fields;
  };
  bool first = true;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    const auto fields = split(line);
    if (first) {
      for (auto f : fields) t.header.emplace_back(f);
      first = false;
      continue;
    }
    if (fields.size() != t.header.size()) throw InvalidInput("CSV row width differs from header");
    std::vector<double> row;
    row.reserve(fields.size());
    for (auto f : fields) row.push_back(parse_double(f));
    t.rows.push_back(std::move(row));
  }
  return t;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InvalidInput("cannot open " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_csv_text(ss.str());
}

CsvTable evolution_table(const EvolutionResult& r) {
  CsvTable t;
  t.header = {"t", "lambda", "dlambda"};
  for (const auto& l : r.labels) t.header.push_back("h_" + l);
  for (const char* c : {"local_cost", "cum_cost", "fidelity", "angle"}) t.header.emplace_back(c);
  const std::size_t nh = r.labels.size();
  for (std::size_t i = 0; i < r.t.size(); ++i) {
    std::vector<double> row{r.t[i], r.lambda[i], r.dlambda[i]};
    for (std::size_t a = 0; a < nh; ++a) {
      const RealVector& c = r.couplings[i];
      row.push_back(static_cast<Index>(a) < c.size() ? c[static_cast<Index>(a)] : 0.0);
    }
    row.insert(row.end(), {r.local_cost[i], r.cumulative_cost[i], r.fidelity[i], r.angle[i]});
    t.rows.push_back(std::move(row));
  }
  return t;
}

BoundAudit audit_bound(const CsvTable& table) {
  const auto fid = table.values("fidelity");
  const auto cum = table.values("cum_cost");
  BoundAudit a;
  a.rows = fid.size();
  a.worst_margin = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < fid.size(); ++i) {
    const double margin = (1.0 - fid[i]) - 0.5 * cum[i] * cum[i];
    a.worst_margin = std::max(a.worst_margin, margin);
    if (margin > kBoundSlack) ++a.violations;
  }
  if (fid.empty()) a.worst_margin = 0.0;
  return a;
}

}  // namespace oph
