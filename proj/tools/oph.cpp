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

// oph: optimal parent Hamiltonian experiments from the command line.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "oph/csv.hpp"
#include "oph/errors.hpp"
#include "oph/experiment.hpp"
#include "selftest.hpp"

namespace {

// Flag values held until parsing finishes, so that only flags the user
// actually typed override the config file.
struct Flags {
  int size = 0;
  std::vector<int> sizes;
  int weight = 2;
  double lambda_start = 0.0, lambda_end = 1.0;
  std::string schedule;
  int steps = 0;
  double tol_rel = 1e-10;
  bool quarter = false;
  double omega = 1.0;
  double duration = 1.0;
  bool oracle = false;
  bool gnuplot = false;
  std::string out;
  std::string config;
  std::uint64_t seed = 0;
};

struct ExperimentCommand {
  CLI::App* app = nullptr;
  oph::Model model{};
  std::vector<std::pair<std::string, CLI::Option*>> options;
};

ExperimentCommand add_experiment(CLI::App& root, const std::string& name, const std::string& help, oph::Model model,
                                 Flags& f) {
  ExperimentCommand c;
  c.model = model;
  c.app = root.add_subcommand(name, help);
  auto add = [&](const std::string& key, CLI::Option* o) { c.options.emplace_back(key, o); };
  add("size", c.app->add_option("-L,--size", f.size, "single system size"));
  add("sizes", c.app->add_option("--sizes", f.sizes, "comma separated sizes")->delimiter(','));
  add("weight", c.app->add_option("--weight", f.weight, "collective interaction weight (1-3)"));
  add("lambda-start", c.app->add_option("--lambda-start", f.lambda_start, "initial lambda"));
  add("lambda-end", c.app->add_option("--lambda-end", f.lambda_end, "final lambda"));
  add("schedule", c.app->add_option("--schedule", f.schedule, "linear or smoothstep")
                      ->check(CLI::IsMember({"linear", "smoothstep"})));
  add("steps", c.app->add_option("--steps", f.steps, "time steps (0 = automatic refinement)"));
  add("tol-rel", c.app->add_option("--tol-rel", f.tol_rel, "relative QCM eigenvalue cutoff"));
  add("quarter", c.app->add_flag("--quarter", f.quarter, "interpolation angle pi*lambda/2"));
  add("omega", c.app->add_option("--omega", f.omega, "single-spin angular frequency"));
  add("duration", c.app->add_option("-T,--duration", f.duration, "total time T"));
  add("oracle", c.app->add_flag("--oracle", f.oracle, "also write closed-form oracle columns (ising)"));
  add("gnuplot", c.app->add_flag("--gnuplot", f.gnuplot, "write a gnuplot script per CSV"));
  add("out", c.app->add_option("--out", f.out, "output directory"));
  add("seed", c.app->add_option("--seed", f.seed, "seed for randomized probes"));
  c.app->add_option("--config", f.config, "config file (JSON or key=value)");
  return c;
}

oph::ExperimentConfig build_config(const ExperimentCommand& c, const Flags& f) {
  oph::ExperimentConfig cfg;
  cfg.model = c.model;
  if (!f.config.empty()) oph::apply_config_file(f.config, cfg);
  cfg.model = c.model;  // the subcommand wins over a model key in the file
  for (const auto& [key, opt] : c.options) {
    if (opt->count() == 0) continue;
    if (key == "size") cfg.sizes = {f.size};
    else if (key == "sizes") cfg.sizes = f.sizes;
    else if (key == "weight") cfg.weight = f.weight;
    else if (key == "lambda-start") cfg.lambda_start = f.lambda_start;
    else if (key == "lambda-end") cfg.lambda_end = f.lambda_end;
    else if (key == "schedule") oph::apply_config_text("schedule=" + f.schedule, cfg);
    else if (key == "steps") cfg.steps = f.steps;
    else if (key == "tol-rel") cfg.tol_rel = f.tol_rel;
    else if (key == "quarter") cfg.quarter = f.quarter;
    else if (key == "omega") cfg.omega = f.omega;
    else if (key == "duration") cfg.duration = f.duration;
    else if (key == "oracle") cfg.oracle = f.oracle;
    else if (key == "gnuplot") cfg.gnuplot = f.gnuplot;
    else if (key == "out") cfg.output_dir = f.out;
    else if (key == "seed") cfg.seed = f.seed;
  }
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal parent Hamiltonians for time-dependent pure states"};
  app.require_subcommand(1);
  app.set_version_flag("--version", oph::library_version());
  Flags flags;

  std::vector<ExperimentCommand> experiments;
  experiments.push_back(add_experiment(app, "single-spin", "rotating single spin, one period", oph::Model::single_spin, flags));
  experiments.push_back(add_experiment(app, "ising", "transverse-field Ising ground-state path", oph::Model::ising, flags));
  experiments.push_back(add_experiment(app, "pspin", "p-spin (p=3) ground-state path", oph::Model::pspin, flags));
  experiments.push_back(add_experiment(app, "interpolate", "interpolation between p-spin endpoint states",
                                       oph::Model::interpolate, flags));
  experiments.push_back(add_experiment(app, "cd-compare", "optimal parent vs counterdiabatic potential (Ising)",
                                       oph::Model::cd_compare, flags));

  std::uint64_t selftest_seed = 0;
  CLI::App* selftest = app.add_subcommand("selftest", "run the invariant self-checks");
  selftest->add_option("--seed", selftest_seed, "seed for randomized probes");

  std::string audit_file;
  CLI::App* audit = app.add_subcommand("audit", "check 1-F <= cum_cost^2/2 on every row of a run CSV");
  audit->add_option("file", audit_file, "CSV written by an experiment")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (selftest->parsed()) {
      const int failures = oph::tools::run_selftest(std::cout, selftest_seed);
      return failures == 0 ? 0 : 1;
    }
    if (audit->parsed()) {
      const oph::BoundAudit a = oph::audit_bound(oph::read_csv(audit_file));
      std::cout << audit_file << ": " << a.rows << " rows, " << a.violations << " violations, worst margin "
                << oph::format_double(a.worst_margin) << '\n';
      return a.violations == 0 ? 0 : 1;
    }
    for (const auto& c : experiments) {
      if (!c.app->parsed()) continue;
      oph::ExperimentConfig cfg;
      try {
        cfg = build_config(c, flags);
        oph::validate(cfg);
      } catch (const oph::InvalidInput& e) {
        std::cerr << "error: " << e.what() << "\n\n" << c.app->help();
        return 2;
      }
      const oph::RunManifest m = oph::run_experiment(cfg, {}, &std::cerr);
      for (const auto& s : m.summaries) {
        std::cout << s.file << "  size=" << s.size << "  steps=" << s.steps
                  << "  final_fidelity=" << oph::format_double(s.final_fidelity)
                  << "  total_cost=" << oph::format_double(s.total_cost)
                  << "  max_angle=" << oph::format_double(s.max_angle) << (s.bound_ok ? "" : "  BOUND VIOLATED")
                  << '\n';
      }
      std::cout << "manifest: " << m.manifest_path.string() << '\n';
      return 0;
    }
  } catch (const oph::ResourceLimit& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const oph::DegeneracyError& e) {
    std::cerr << "error: " << e.what() << " (lambda = " << e.lambda() << ")\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
