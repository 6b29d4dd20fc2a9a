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

#include "oph/experiment.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <memory>
#include <numbers>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "oph/counterdiabatic.hpp"
#include "oph/csv.hpp"
#include "oph/dynamics.hpp"
#include "oph/errors.hpp"

#ifndef OPH_VERSION
#define OPH_VERSION "0.0.0"
#endif

namespace oph {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string normalize_key(std::string k) {
  std::replace(k.begin(), k.end(), '_', '-');
  return k;
}

bool parse_bool(std::string_view v) {
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw InvalidInput("not a boolean: '" + std::string(v) + "'");
}

int parse_int(std::string_view v) {
  const double d = parse_double(v);
  if (d != std::floor(d) || std::abs(d) > 1e9) throw InvalidInput("not an integer: '" + std::string(v) + "'");
  return static_cast<int>(d);
}

std::vector<int> parse_int_list(std::string_view v) {
  std::vector<int> out;
  while (!v.empty()) {
    const std::size_t c = v.find(',');
    const std::string_view item = v.substr(0, c);
    if (!item.empty()) out.push_back(parse_int(item));
    if (c == std::string_view::npos) break;
    v.remove_prefix(c + 1);
  }
  return out;
}

Schedule::Kind parse_schedule(std::string_view s) {
  if (s == "linear") return Schedule::Kind::linear;
  if (s == "smoothstep") return Schedule::Kind::smoothstep;
  throw InvalidInput("unknown schedule '" + std::string(s) + "'");
}

// Applies one setting given as text.
void set_key(ExperimentConfig& cfg, const std::string& raw_key, const std::string& value) {
  const std::string key = normalize_key(raw_key);
  if (key == "model") cfg.model = parse_model(value);
  else if (key == "size") cfg.sizes = {parse_int(value)};
  else if (key == "sizes") cfg.sizes = parse_int_list(value);
  else if (key == "weight") cfg.weight = parse_int(value);
  else if (key == "lambda-start") cfg.lambda_start = parse_double(value);
  else if (key == "lambda-end") cfg.lambda_end = parse_double(value);
  else if (key == "schedule") cfg.schedule = parse_schedule(value);
  else if (key == "steps") cfg.steps = parse_int(value);
  else if (key == "tol-rel") cfg.tol_rel = parse_double(value);
  else if (key == "quarter") cfg.quarter = parse_bool(value);
  else if (key == "omega") cfg.omega = parse_double(value);
  else if (key == "duration") cfg.duration = parse_double(value);
  else if (key == "oracle") cfg.oracle = parse_bool(value);
  else if (key == "gnuplot") cfg.gnuplot = parse_bool(value);
  else if (key == "out") cfg.output_dir = value;
  else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_double(value));
  else throw InvalidInput("unknown configuration key '" + raw_key + "'");
}

std::string json_scalar_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) return format_double(v.get<double>());
  if (v.is_array()) {
    std::string s;
    for (const auto& e : v) {
      if (!s.empty()) s += ',';
      s += json_scalar_text(e);
    }
    return s;
  }
  throw InvalidInput("unsupported configuration value " + v.dump());
}

json config_json(const ExperimentConfig& c) {
  json j;
  j["model"] = std::string(to_string(c.model));
  j["sizes"] = c.sizes;
  j["weight"] = c.weight;
  j["lambda_start"] = c.lambda_start ? json(*c.lambda_start) : json(nullptr);
  j["lambda_end"] = c.lambda_end ? json(*c.lambda_end) : json(nullptr);
  j["schedule"] = std::string(to_string(c.schedule));
  j["steps"] = c.steps;
  j["tol_rel"] = c.tol_rel;
  j["quarter"] = c.quarter;
  j["omega"] = c.omega;
  j["duration"] = c.duration;
  j["oracle"] = c.oracle;
  j["gnuplot"] = c.gnuplot;
  j["output_dir"] = c.output_dir.string();
  j["seed"] = c.seed;
  return j;
}

Schedule make_schedule(const ExperimentConfig& c) {
  const double a = c.lambda_start.value_or(0.0), b = c.lambda_end.value_or(1.0);
  return c.schedule == Schedule::Kind::linear ? Schedule::linear(a, b, c.duration) : Schedule::smoothstep(a, b, c.duration);
}

EvolutionResult run_driver(const StatePath& path, const Schedule& s, const Driver& d, int steps,
                           std::vector<std::string> labels) {
  if (steps > 0) return drive(path, s, steps, d, std::move(labels));
  return drive_converged(path, s, d, 0, 1e-7, 4, std::move(labels)).result;
}

std::string gnuplot_script(const std::string& csv) {
  std::ostringstream os;
  os << "set datafile separator ','\n"
     << "set key autotitle columnhead\n"
     << "set xlabel 'lambda'\n"
     << "set multiplot layout 2,1\n"
     << "plot '" << csv << "' using 'lambda':'fidelity' with lines\n"
     << "plot '" << csv << "' using 'lambda':'local_cost' with lines\n"
     << "unset multiplot\n";
  return os.str();
}

class Emitter {
 public:
  explicit Emitter(fs::path dir) : dir_(std::move(dir)) {}
  ~Emitter() {
    if (!committed_) {
      std::error_code ec;
      for (const auto& f : written_) fs::remove(f, ec);
    }
  }
  std::string csv(const std::string& name, const CsvTable& table) {
    const fs::path p = dir_ / name;
    written_.push_back(p);
    write_csv(table, p);
    return name;
  }
  void text(const std::string& name, const std::string& body) {
    const fs::path p = dir_ / name;
    written_.push_back(p);
    std::ofstream f(p, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot open " + p.string() + " for writing");
    f << body;
    if (!f) throw Error("write failed: " + p.string());
  }
  const std::vector<fs::path>& written() const { return written_; }
  void commit() { committed_ = true; }

 private:
  fs::path dir_;
  std::vector<fs::path> written_;
  bool committed_ = false;
};

SizeSummary summarize(int size, const EvolutionResult& r, std::string file) {
  return SizeSummary{size, r.steps, r.final_fidelity(), r.total_cost(), r.max_angle(), r.bound_holds(),
                     r.near_cutoff_samples, std::move(file)};
}

}  // namespace

std::string_view to_string(Model m) {
  switch (m) {
    case Model::single_spin: return "single-spin";
    case Model::ising: return "ising";
    case Model::pspin: return "pspin";
    case Model::interpolate: return "interpolate";
    case Model::cd_compare: return "cd-compare";
  }
  return "ising";
}

Model parse_model(std::string_view s) {
  for (Model m : {Model::single_spin, Model::ising, Model::pspin, Model::interpolate, Model::cd_compare}) {
    if (s == to_string(m)) return m;
  }
  throw InvalidInput("unknown model '" + std::string(s) + "'");
}

ExperimentConfig resolved(const ExperimentConfig& cfg) {
  ExperimentConfig c = cfg;
  if (c.sizes.empty()) {
    switch (c.model) {
      case Model::single_spin: c.sizes = {1}; break;
      case Model::ising: c.sizes = {8}; break;
      case Model::pspin: c.sizes = {10, 20, 40}; break;
      case Model::interpolate: c.sizes = {10, 20}; break;
      case Model::cd_compare: c.sizes = {6}; break;
    }
  }
  const bool chain = c.model == Model::ising || c.model == Model::cd_compare;
  if (c.model == Model::single_spin) {
    // lambda is time; one full period
    const double period = 2.0 * std::numbers::pi / std::abs(c.omega);
    c.lambda_start = c.lambda_start.value_or(0.0);
    c.lambda_end = c.lambda_end.value_or(period);
    c.duration = *c.lambda_end - *c.lambda_start;
    c.schedule = Schedule::Kind::linear;
  } else {
    c.lambda_start = c.lambda_start.value_or(0.0);
    c.lambda_end = c.lambda_end.value_or(chain ? 3.0 : 1.0);
  }
  return c;
}

void validate(const ExperimentConfig& cfg, const Limits& limits) {
  const ExperimentConfig c = resolved(cfg);
  if (c.steps != 0 && c.steps < 2) throw InvalidInput("steps must be >= 2 (or 0 for automatic refinement)");
  if (!(c.tol_rel > 0.0 && c.tol_rel < 1.0)) throw InvalidInput("tol-rel must lie in (0, 1)");
  if (!(c.duration > 0.0) || !std::isfinite(c.duration)) throw InvalidInput("duration must be positive");
  if (c.model == Model::single_spin && (c.omega == 0.0 || !std::isfinite(c.omega))) {
    throw InvalidInput("omega must be finite and nonzero");
  }
  if (c.weight < 1 || c.weight > 3) throw InvalidInput("weight must be 1, 2 or 3");
  for (int n : c.sizes) {
    switch (c.model) {
      case Model::single_spin:
        if (n != 1) throw InvalidInput("single-spin model has size 1");
        break;
      case Model::ising:
      case Model::cd_compare:
        if (n < 2 || n % 2 != 0) throw InvalidInput("Ising sizes must be even and >= 2");
        if (n > limits.max_sites) throw ResourceLimit("Ising size " + std::to_string(n) + " exceeds the site cap");
        break;
      case Model::pspin:
      case Model::interpolate:
        if (n < 2) throw InvalidInput("collective sizes must be >= 2");
        if (n > limits.max_collective_spins) {
          throw ResourceLimit("spin count " + std::to_string(n) + " exceeds the symmetric-sector cap");
        }
        break;
    }
  }
}

void apply_config_text(std::string_view text, ExperimentConfig& cfg) {
  std::size_t first = text.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && text[first] == '{') {
    json j;
    try {
      j = json::parse(text);
    } catch (const json::exception& e) {
      throw InvalidInput(std::string("malformed JSON configuration: ") + e.what());
    }
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (it.value().is_null()) continue;
      set_key(cfg, it.key(), json_scalar_text(it.value()));
    }
    return;
  }
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::size_t b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) throw InvalidInput("config line " + std::to_string(lineno) + ": expected key=value");
    auto trim = [](std::string s) {
      const std::size_t x = s.find_first_not_of(" \t\r");
      const std::size_t y = s.find_last_not_of(" \t\r");
      return x == std::string::npos ? std::string() : s.substr(x, y - x + 1);
    };
    set_key(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

void apply_config_file(const fs::path& path, ExperimentConfig& cfg) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InvalidInput("cannot open config file " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  apply_config_text(ss.str(), cfg);
}

std::string sha256_hex(const fs::path& file) {
  std::ifstream f(file, std::ios::binary);
  if (!f) throw Error("cannot open " + file.string());
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) throw Error("SHA-256 init failed");
  char buf[1 << 15];
  while (f) {
    f.read(buf, sizeof buf);
    if (f.gcount() > 0 && EVP_DigestUpdate(ctx.get(), buf, static_cast<std::size_t>(f.gcount())) != 1) {
      throw Error("SHA-256 update failed");
    }
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_DigestFinal_ex(ctx.get(), md, &len) != 1) throw Error("SHA-256 final failed");
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return os.str();
}

std::string library_version() { return OPH_VERSION; }

RunManifest run_experiment(const ExperimentConfig& raw, const Limits& limits, std::ostream* log) {
  validate(raw, limits);
  const ExperimentConfig cfg = resolved(raw);
  const auto start = std::chrono::steady_clock::now();
  std::error_code ec;
  fs::create_directories(cfg.output_dir, ec);
  if (ec) throw Error("cannot create output directory " + cfg.output_dir.string() + ": " + ec.message());

  Emitter out(cfg.output_dir);
  RunManifest m;
  m.version = library_version();
  auto emit_run = [&](int size, const std::string& name, const EvolutionResult& r) {
    out.csv(name, evolution_table(r));
    if (cfg.gnuplot) out.text(name.substr(0, name.size() - 4) + ".gp", gnuplot_script(name));
    m.summaries.push_back(summarize(size, r, name));
    if (log) {
      *log << to_string(cfg.model) << " size " << size << ": steps " << r.steps << ", final fidelity "
           << format_double(r.final_fidelity()) << ", total cost " << format_double(r.total_cost());
      if (r.near_cutoff_samples > 0) *log << ", warning: " << r.near_cutoff_samples << " samples near the QCM cutoff";
      *log << '\n';
    }
  };
  const Schedule schedule = make_schedule(cfg);

  for (int size : cfg.sizes) {
    switch (cfg.model) {
      case Model::single_spin: {
        const SingleSpinPath path(cfg.omega);
        const OperatorBasis basis = build_pauli_basis(1, true, limits);
        emit_run(size, "single_spin.csv",
                 run_driver(path, schedule, optimal_driver(basis, cfg.tol_rel), cfg.steps, basis.labels()));
        break;
      }
      case Model::ising: {
        const IsingPath path(size, limits);
        const OperatorBasis basis = build_nearest_neighbor_basis(size, limits);
        const EvolutionResult r =
            run_driver(path, schedule, optimal_driver(basis, cfg.tol_rel), cfg.steps, basis.labels());
        const std::string stem = "ising_L" + std::to_string(size);
        emit_run(size, stem + ".csv", r);
        if (cfg.oracle) {
          CsvTable t;
          t.header = {"t", "lambda", "h_analytic", "fidelity_analytic"};
          std::vector<double> h;
          for (std::size_t i = 0; i < r.t.size(); ++i) h.push_back(ising_h_analytic(size, r.lambda[i], r.dlambda[i]));
          const auto fid = ising_fidelity_analytic(size, r.t, r.lambda, h);
          for (std::size_t i = 0; i < r.t.size(); ++i) t.rows.push_back({r.t[i], r.lambda[i], h[i], fid[i]});
          out.csv(stem + "_oracle.csv", t);
        }
        break;
      }
      case Model::pspin: {
        const PSpinPath path(size, 3, limits);
        const OperatorBasis basis = build_collective_basis(size, cfg.weight, Sector::symmetric, limits);
        emit_run(size, "pspin_N" + std::to_string(size) + "_w" + std::to_string(cfg.weight) + ".csv",
                 run_driver(path, schedule, optimal_driver(basis, cfg.tol_rel), cfg.steps, basis.labels()));
        break;
      }
      case Model::interpolate: {
        const InterpolationPath path(size, cfg.quarter, limits);
        const OperatorBasis basis = build_collective_basis(size, cfg.weight, Sector::symmetric, limits);
        emit_run(size,
                 "interpolate_N" + std::to_string(size) + "_w" + std::to_string(cfg.weight) +
                     (cfg.quarter ? "_quarter" : "") + ".csv",
                 run_driver(path, schedule, optimal_driver(basis, cfg.tol_rel), cfg.steps, basis.labels()));
        break;
      }
      case Model::cd_compare: {
        const IsingPath path(size, limits);
        const OperatorBasis basis = build_nearest_neighbor_basis(size, limits);
        const int steps = cfg.steps > 0 ? cfg.steps : default_steps(schedule);
        const CdComparison cmp = compare_on_path(path, ising_model(size, limits), basis, schedule, steps, cfg.tol_rel);
        const std::string stem = "cd_compare_L" + std::to_string(size);
        emit_run(size, stem + "_opt.csv", cmp.optimal);
        emit_run(size, stem + "_cd.csv", cmp.counterdiabatic);
        break;
      }
    }
  }

  for (const auto& f : out.written()) m.checksums.emplace_back(f.filename().string(), sha256_hex(f));
  m.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  json j;
  j["config"] = config_json(cfg);
  j["version"] = m.version;
  j["wall_clock_seconds"] = m.wall_seconds;
  j["summary"] = json::array();
  for (const auto& s : m.summaries) {
    j["summary"].push_back({{"size", s.size},
                            {"file", s.file},
                            {"steps", s.steps},
                            {"final_fidelity", s.final_fidelity},
                            {"total_cost", s.total_cost},
                            {"max_angle", s.max_angle},
                            {"bound_ok", s.bound_ok},
                            {"near_cutoff_samples", s.near_cutoff_samples}});
  }
  j["checksums"] = json::object();
  for (const auto& [name, sum] : m.checksums) j["checksums"][name] = sum;
  m.config_json = j["config"].dump();
  m.manifest_path = cfg.output_dir / "manifest.json";
  out.text("manifest.json", j.dump(2) + "\n");
  out.commit();
  return m;
}

}  // namespace oph
