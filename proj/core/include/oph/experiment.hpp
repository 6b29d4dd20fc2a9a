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

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "oph/operator_algebra.hpp"
#include "oph/state_paths.hpp"

namespace oph {

enum class Model { single_spin, ising, pspin, interpolate, cd_compare };
std::string_view to_string(Model m);
/// Accepts "single-spin", "ising", "pspin", "interpolate", "cd-compare".
Model parse_model(std::string_view s);

struct ExperimentConfig {
  Model model = Model::ising;
  std::vector<int> sizes;              // empty: model default
  int weight = 2;                      // collective models
  std::optional<double> lambda_start;  // empty: model default
  std::optional<double> lambda_end;
  Schedule::Kind schedule = Schedule::Kind::linear;
  int steps = 0;                       // 0: default count, refined until converged
  double tol_rel = 1e-10;
  bool quarter = false;
  double omega = 1.0;                  // single spin
  double duration = 1.0;               // total time T (single spin: ignored, one period)
  bool oracle = false;                 // ising: also emit the closed-form oracle columns
  bool gnuplot = false;                // emit a gnuplot script next to the data
  std::filesystem::path output_dir = ".";
  std::uint64_t seed = 0;              // reserved for randomized probes
};

/// Checks caps and ranges; throws InvalidInput or ResourceLimit.
void validate(const ExperimentConfig& cfg, const Limits& limits = {});

/// Reads a JSON object or flat key=value lines into cfg (keys match the long
/// flag names, e.g. lambda-start, tol-rel). Unknown keys are rejected.
void apply_config_file(const std::filesystem::path& path, ExperimentConfig& cfg);
void apply_config_text(std::string_view text, ExperimentConfig& cfg);

/// Fills in model defaults for sizes and the lambda interval.
ExperimentConfig resolved(const ExperimentConfig& cfg);

struct SizeSummary {
  int size = 0;
  int steps = 0;
  double final_fidelity = 0.0;
  double total_cost = 0.0;
  double max_angle = 0.0;
  bool bound_ok = true;
  int near_cutoff_samples = 0;
  std::string file;
};

struct RunManifest {
  std::string config_json;
  std::string version;
  double wall_seconds = 0.0;
  std::vector<SizeSummary> summaries;
  std::vector<std::pair<std::string, std::string>> checksums;  // file name, sha256 hex
  std::filesystem::path manifest_path;
};

/// Runs every size, writes CSVs plus manifest.json into output_dir. On failure
/// every file written by this call is removed and the error is rethrown.
RunManifest run_experiment(const ExperimentConfig& cfg, const Limits& limits = {}, std::ostream* log = nullptr);

std::string sha256_hex(const std::filesystem::path& file);
std::string library_version();

}  // namespace oph
