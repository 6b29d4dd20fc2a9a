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

#include "selftest.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "oph/counterdiabatic.hpp"
#include "oph/csv.hpp"
#include "oph/dynamics.hpp"
#include "oph/inverse_solver.hpp"
#include "oph/operator_algebra.hpp"
#include "oph/state_paths.hpp"

namespace oph::tools {
namespace {

struct Check {
  std::string name;
  std::function<bool()> run;
};

ComplexVector random_vector(Index d, std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  ComplexVector v(d);
  for (Index i = 0; i < d; ++i) v[i] = Complex(n(rng), n(rng));
  return v / v.norm();
}

}  // namespace

int run_selftest(std::ostream& out, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Check> checks;

  checks.push_back({"pauli strings are HS-orthogonal with norm 2^L", [] {
    const OperatorBasis b = build_pauli_basis(2);
    for (std::size_t i = 0; i < b.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j)
        if (std::abs(hs_inner(b.op(i), b.op(j)) - (i == j ? 4.0 : 0.0)) > 1e-12) return false;
    return true;
  }});

  checks.push_back({"QCM covariance form equals Gram form", [&rng] {
    const PureState psi = PureState::normalize(random_vector(8, rng));
    const OperatorBasis b = build_nearest_neighbor_basis(3);
    const QCMatrix v = build_qcm(psi, b);
    return (v.entries - qcm_gram(psi.density(), b)).cwiseAbs().maxCoeff() < 1e-10 &&
           v.eig.values[v.size() - 1] >= -1e-9;
  }});

  checks.push_back({"single-spin parent has magnitude omega/2 on Z", [] {
    const SingleSpinPath p(1.3);
    const OperatorBasis b = build_pauli_basis(1);
    const OptimalSolve s = solve_optimal(p.psi(0.4), p.drho_dlambda(0.4), b);
    return std::abs(std::abs(s.coupling.values[3]) - 0.65) < 1e-10 && s.coupling.residual < 1e-10;
  }});

  checks.push_back({"Ising optimal coupling matches the closed form (L=4)", [] {
    const IsingPath p(4);
    const OperatorBasis b = build_nearest_neighbor_basis(4);
    const OptimalSolve s = solve_optimal(p.psi(0.7), p.drho_dlambda(0.7), b);
    return std::abs(s.coupling.values[static_cast<Index>(b.find("X0Y1"))] - ising_h_analytic(4, 0.7, 1.0)) < 1e-7;
  }});

  checks.push_back({"fidelity bound holds for the H = 0 control", [] {
    const PSpinPath p(6);
    const EvolutionResult r = drive(p, Schedule::linear(0.0, 1.0, 1.0), 50, zero_driver(p.dim()));
    return r.bound_holds();
  }});

  checks.push_back({"HS norm of drho is twice the Fubini-Study speed", [&rng] {
    const PureState psi = PureState::normalize(random_vector(4, rng));
    ComplexVector dpsi = random_vector(4, rng);
    dpsi -= psi.amplitudes().dot(dpsi).real() * psi.amplitudes();
    const MetricPair m = fs_check(psi, dpsi);
    return std::abs(m.hs_sq - 2.0 * m.fs) < 1e-9;
  }});

  checks.push_back({"three-level counterdiabatic closed form", [] {
    const double e1 = -1.0, e2 = 0.4, e3 = 1.7;
    ComplexMatrix d = ComplexMatrix::Zero(3, 3);
    const Complex i{0.0, 1.0};
    d(0, 1) = i * (e2 - e1);
    d(1, 0) = i * (e1 - e2);
    d(1, 2) = i * 2.0 * (e3 - e2);
    d(2, 1) = i * 2.0 * (e2 - e3);
    ComplexMatrix p = ComplexMatrix::Zero(3, 3);
    p(0, 1) = p(1, 0) = p(1, 2) = p(2, 1) = 1.0;
    const OperatorBasis b({"P"}, {HermitianOperator(p)}, BasisFamily::custom);
    const RealVector diag = (RealVector(3) << e1, e2, e3).finished();
    const HermitianOperator h(diag.cast<Complex>().asDiagonal().toDenseMatrix());
    const double a = (e1 - e2) * (e1 - e2), c = (e3 - e2) * (e3 - e2);
    const CouplingVector v = minimize_cd(h, HermitianOperator(d), b);
    return std::abs(v.values[0] + (a + 2.0 * c) / (a + c)) < 1e-10;
  }});

  checks.push_back({"CSV round trip is bit exact", [&rng] {
    std::uniform_real_distribution<double> u(-1e3, 1e3);
    CsvTable t;
    t.header = {"a", "b"};
    for (int i = 0; i < 20; ++i) t.rows.push_back({u(rng), std::ldexp(u(rng), -40)});
    const CsvTable back = parse_csv_text(to_csv_text(t));
    return back.rows == t.rows;
  }});

  int failures = 0;
  for (const auto& c : checks) {
    bool ok = false;
    try {
      ok = c.run();
    } catch (const std::exception& e) {
      out << "  exception: " << e.what() << '\n';
    }
    out << (ok ? "PASS " : "FAIL ") << c.name << '\n';
    failures += ok ? 0 : 1;
  }
  return failures;
}

}  // namespace oph::tools
