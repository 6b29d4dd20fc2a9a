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

#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include "oph/csv.hpp"
#include "oph/errors.hpp"
#include "oph/experiment.hpp"
#include "test_util.hpp"

namespace oph {
namespace {

namespace fs = std::filesystem;
using testing::fresh_dir;

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

TEST(Csv, FormatRoundTripBitExact) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double v = u(rng) * std::pow(10.0, static_cast<int>(u(rng) * 300));
    EXPECT_EQ(parse_double(format_double(v)), v);
  }
  for (double v : {0.0, -0.0, 1.0, 0.1, 1e-310, std::numeric_limits<double>::max()}) {
    EXPECT_EQ(parse_double(format_double(v)), v);
  }
}

TEST(Csv, ParseRejectsGarbage) {
  EXPECT_THROW(parse_double("1.0x"), InvalidInput);
  EXPECT_THROW(parse_double(""), InvalidInput);
  EXPECT_THROW(parse_double("abc"), InvalidInput);
}

TEST(Csv, HeaderOnlyAndSingleRow) {
  CsvTable t;
  t.header = {"t", "fidelity"};
  EXPECT_EQ(to_csv_text(t), "t,fidelity\n");
  t.rows.push_back({0.5, 1.0});
  const std::string text = to_csv_text(t);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 2);
  EXPECT_EQ(text.find('\r'), std::string::npos);
}

TEST(Csv, FileRoundTrip) {
  const fs::path dir = fresh_dir("csv");
  CsvTable t;
  t.header = {"a", "b", "c"};
  std::mt19937_64 rng(2);
  std::normal_distribution<double> n;
  for (int i = 0; i < 20; ++i) t.rows.push_back({n(rng), n(rng) * 1e-12, n(rng) * 1e12});
  write_csv(t, dir / "x.csv");
  const CsvTable back = read_csv(dir / "x.csv");
  EXPECT_EQ(back.header, t.header);
  EXPECT_EQ(back.rows, t.rows);
  fs::remove_all(dir);
}

TEST(Csv, RaggedRowsRejected) { EXPECT_THROW(parse_csv_text("a,b\n1,2\n3\n"), InvalidInput); }

TEST(Csv, EvolutionTableLayout) {
  const SingleSpinPath p(1.0);
  const OperatorBasis b = build_pauli_basis(1);
  const EvolutionResult r = drive(p, Schedule::linear(0.0, 1.0, 1.0), 4, optimal_driver(b), b.labels());
  const CsvTable t = evolution_table(r);
  const std::vector<std::string> expected = {"t",   "lambda", "dlambda",   "h_I",      "h_X",     "h_Y",
                                             "h_Z", "local_cost", "cum_cost", "fidelity", "angle"};
  EXPECT_EQ(t.header, expected);
  EXPECT_EQ(t.rows.size(), 5u);
  const CsvTable empty = evolution_table(EvolutionResult{});
  EXPECT_TRUE(empty.rows.empty());
}

TEST(Audit, FlagsViolations) {
  const CsvTable ok = parse_csv_text("fidelity,cum_cost\n1,0\n0.99,0.2\n");
  EXPECT_EQ(audit_bound(ok).violations, 0u);
  const CsvTable bad = parse_csv_text("fidelity,cum_cost\n1,0\n0.5,0.2\n");
  const BoundAudit a = audit_bound(bad);
  EXPECT_EQ(a.violations, 1u);
  EXPECT_NEAR(a.worst_margin, 0.5 - 0.02, 1e-15);
  EXPECT_THROW(audit_bound(parse_csv_text("x\n1\n")), InvalidInput);
}

TEST(Config, KeyValueText) {
  ExperimentConfig c;
  apply_config_text("# comment\nmodel = pspin\nsizes=10,20\nweight=3\nlambda_start=0.1\nschedule=smoothstep\n"
                    "steps=100\ntol-rel=1e-9\nquarter=true\n",
                    c);
  EXPECT_EQ(c.model, Model::pspin);
  EXPECT_EQ(c.sizes, (std::vector<int>{10, 20}));
  EXPECT_EQ(c.weight, 3);
  EXPECT_EQ(c.lambda_start.value(), 0.1);
  EXPECT_EQ(c.schedule, Schedule::Kind::smoothstep);
  EXPECT_EQ(c.steps, 100);
  EXPECT_EQ(c.tol_rel, 1e-9);
  EXPECT_TRUE(c.quarter);
}

TEST(Config, JsonText) {
  ExperimentConfig c;
  apply_config_text(R"({"model": "ising", "sizes": [4, 6], "lambda_end": 2.5, "oracle": true})", c);
  EXPECT_EQ(c.model, Model::ising);
  EXPECT_EQ(c.sizes, (std::vector<int>{4, 6}));
  EXPECT_EQ(c.lambda_end.value(), 2.5);
  EXPECT_TRUE(c.oracle);
}

TEST(Config, Errors) {
  ExperimentConfig c;
  EXPECT_THROW(apply_config_text("bogus=1\n", c), InvalidInput);
  EXPECT_THROW(apply_config_text("steps\n", c), InvalidInput);
  EXPECT_THROW(apply_config_text("{\"steps\": ", c), InvalidInput);
  EXPECT_THROW(apply_config_text("schedule=cubic\n", c), InvalidInput);
  EXPECT_THROW(apply_config_file("/nonexistent/oph.cfg", c), InvalidInput);
}

TEST(Config, Validation) {
  ExperimentConfig c;
  c.steps = 1;
  EXPECT_THROW(validate(c), InvalidInput);
  c = {};
  c.tol_rel = 1.0;
  EXPECT_THROW(validate(c), InvalidInput);
  c = {};
  c.sizes = {5};
  EXPECT_THROW(validate(c), InvalidInput);
  c.sizes = {14};
  EXPECT_THROW(validate(c), ResourceLimit);
  c = {};
  c.model = Model::pspin;
  c.weight = 4;
  EXPECT_THROW(validate(c), InvalidInput);
  c.weight = 2;
  c.sizes = {500};
  EXPECT_THROW(validate(c), ResourceLimit);
}

TEST(Config, Defaults) {
  ExperimentConfig c;
  c.model = Model::pspin;
  const ExperimentConfig r = resolved(c);
  EXPECT_EQ(r.sizes, (std::vector<int>{10, 20, 40}));
  EXPECT_EQ(r.lambda_start.value(), 0.0);
  EXPECT_EQ(r.lambda_end.value(), 1.0);
  c.model = Model::ising;
  EXPECT_EQ(resolved(c).lambda_end.value(), 3.0);
}

TEST(RunExperiment, SingleSpinExact) {
  const fs::path dir = fresh_dir("single");
  ExperimentConfig c;
  c.model = Model::single_spin;
  c.steps = 1000;
  c.output_dir = dir;
  const RunManifest m = run_experiment(c);
  ASSERT_EQ(m.summaries.size(), 1u);
  EXPECT_GE(m.summaries[0].final_fidelity, 1.0 - 1e-8);
  EXPECT_TRUE(fs::exists(dir / "single_spin.csv"));
  EXPECT_TRUE(fs::exists(dir / "manifest.json"));
  fs::remove_all(dir);
}

TEST(RunExperiment, IsingOracleColumnAndDeterminism) {
  const fs::path a = fresh_dir("ising_a"), b = fresh_dir("ising_b");
  ExperimentConfig c;
  c.model = Model::ising;
  c.sizes = {6};
  c.steps = 300;
  c.oracle = true;
  c.output_dir = a;
  const RunManifest ma = run_experiment(c);
  c.output_dir = b;
  const RunManifest mb = run_experiment(c);
  EXPECT_EQ(ma.checksums, mb.checksums);
  EXPECT_EQ(slurp(a / "ising_L6.csv"), slurp(b / "ising_L6.csv"));
  for (const auto& [name, sum] : ma.checksums) EXPECT_EQ(sha256_hex(a / name), sum) << name;

  const CsvTable data = read_csv(a / "ising_L6.csv");
  const CsvTable oracle = read_csv(a / "ising_L6_oracle.csv");
  const auto h = data.values("h_X0Y1");
  const auto h_yx = data.values("h_Y0X1");
  const auto ha = oracle.values("h_analytic");
  ASSERT_EQ(h.size(), ha.size());
  for (std::size_t i = 0; i < h.size(); ++i) {
    EXPECT_NEAR(h[i], ha[i], 1e-7 * std::max(1.0, std::abs(ha[i])));
    EXPECT_NEAR(h_yx[i], ha[i], 1e-7 * std::max(1.0, std::abs(ha[i])));
  }
  EXPECT_EQ(audit_bound(data).violations, 0u);

  const std::string manifest = slurp(a / "manifest.json");
  for (const char* key : {"\"config\"", "\"version\"", "\"wall_clock_seconds\"", "\"summary\"", "\"checksums\""}) {
    EXPECT_NE(manifest.find(key), std::string::npos) << key;
  }
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(RunExperiment, PSpinSizesEmitOneFileEach) {
  const fs::path dir = fresh_dir("pspin");
  ExperimentConfig c;
  c.model = Model::pspin;
  c.sizes = {4, 6, 8};
  c.steps = 40;
  c.output_dir = dir;
  const RunManifest m = run_experiment(c);
  EXPECT_EQ(m.summaries.size(), 3u);
  for (int n : {4, 6, 8}) EXPECT_TRUE(fs::exists(dir / ("pspin_N" + std::to_string(n) + "_w2.csv")));
  fs::remove_all(dir);
}

TEST(RunExperiment, FailureRemovesPartialOutput) {
  const fs::path dir = fresh_dir("fail");
  fs::create_directories(dir / "manifest.json");  // blocks the final write
  ExperimentConfig c;
  c.model = Model::pspin;
  c.sizes = {4};
  c.steps = 20;
  c.output_dir = dir;
  EXPECT_THROW(run_experiment(c), Error);
  EXPECT_FALSE(fs::exists(dir / "pspin_N4_w2.csv"));
  fs::remove_all(dir);
}

TEST(Sha256, KnownDigest) {
  const fs::path dir = fresh_dir("sha");
  std::ofstream(dir / "abc.txt", std::ios::binary) << "abc";
  EXPECT_EQ(sha256_hex(dir / "abc.txt"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  fs::remove_all(dir);
}

}  // namespace
}  // namespace oph
