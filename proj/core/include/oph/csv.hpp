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

#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "oph/dynamics.hpp"

namespace oph {

/// Shortest round-trip text with 17 significant digits, locale independent.
std::string format_double(double v);
/// Inverse of format_double; throws InvalidInput on malformed text.
double parse_double(std::string_view s);

/// Header plus numeric rows.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  /// Column position, or header.size() when absent.
  std::size_t column(std::string_view name) const;
  std::vector<double> values(std::string_view name) const;
};

/// Comma separated, LF line endings.
void write_csv(const CsvTable& table, const std::filesystem::path& path);
std::string to_csv_text(const CsvTable& table);
CsvTable read_csv(const std::filesystem::path& path);
CsvTable parse_csv_text(std::string_view text);

/// t, lambda, dlambda, h_<label>..., local_cost, cum_cost, fidelity, angle.
CsvTable evolution_table(const EvolutionResult& r);

/// Post-hoc check of 1 - F <= cum_cost^2 / 2 + slack on every row.
struct BoundAudit {
  std::size_t rows = 0;
  std::size_t violations = 0;
  double worst_margin = 0.0;  // max of (1 - F) - cum^2/2, can be negative
};
BoundAudit audit_bound(const CsvTable& table);

}  // namespace oph
