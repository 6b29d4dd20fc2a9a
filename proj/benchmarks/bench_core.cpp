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

#include <benchmark/benchmark.h>

#include <random>

#include "oph/counterdiabatic.hpp"
#include "oph/dynamics.hpp"
#include "oph/inverse_solver.hpp"
#include "oph/linalg.hpp"
#include "oph/state_paths.hpp"

namespace {

using namespace oph;

ComplexVector random_unit(Index d, std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  ComplexVector v(d);
  for (Index i = 0; i < d; ++i) v[i] = Complex(n(rng), n(rng));
  return v / v.norm();
}

void BM_IsingGroundState(benchmark::State& state) {
  const IsingPath p(static_cast<int>(state.range(0)));
  double lambda = 0.1;
  for (auto _ : state) {
    lambda += 1e-7;  // defeat the cache
    benchmark::DoNotOptimize(p.psi(lambda));
  }
}
BENCHMARK(BM_IsingGroundState)->Arg(6)->Arg(8)->Arg(10);

void BM_IsingOptimalSolve(benchmark::State& state) {
  const int l = static_cast<int>(state.range(0));
  const IsingPath p(l);
  const OperatorBasis b = build_nearest_neighbor_basis(l);
  const PureState psi = p.psi(0.7);
  const HermitianOperator d = p.drho_dlambda(0.7);
  for (auto _ : state) benchmark::DoNotOptimize(solve_optimal(psi, d, b));
}
BENCHMARK(BM_IsingOptimalSolve)->Arg(4)->Arg(6)->Arg(8);

void BM_PSpinOptimalSolve(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const PSpinPath p(n);
  const OperatorBasis b = build_collective_basis(n, 3, Sector::symmetric);
  const PureState psi = p.psi(0.6);
  const HermitianOperator d = p.drho_dlambda(0.6);
  for (auto _ : state) benchmark::DoNotOptimize(solve_optimal(psi, d, b));
}
BENCHMARK(BM_PSpinOptimalSolve)->Arg(20)->Arg(40)->Arg(100);

void BM_ExpmDense(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const Index d = state.range(0);
  ComplexMatrix h = ComplexMatrix::Random(d, d);
  h = 0.5 * (h + h.adjoint()).eval();
  const ComplexVector psi = random_unit(d, rng);
  for (auto _ : state) benchmark::DoNotOptimize(expm_apply_dense(h, psi, 0.01));
}
BENCHMARK(BM_ExpmDense)->Arg(16)->Arg(64)->Arg(256);

void BM_ExpmKrylov(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const Index d = state.range(0);
  ComplexMatrix h = ComplexMatrix::Random(d, d);
  h = 0.5 * (h + h.adjoint()).eval();
  const ComplexVector psi = random_unit(d, rng);
  for (auto _ : state) benchmark::DoNotOptimize(expm_apply_krylov(h, psi, 0.01));
}
BENCHMARK(BM_ExpmKrylov)->Arg(64)->Arg(256)->Arg(1024);

void BM_MinimizeCd(benchmark::State& state) {
  const int l = static_cast<int>(state.range(0));
  const AdiabaticModel m = ising_model(l);
  const OperatorBasis b = build_nearest_neighbor_basis(l);
  const HermitianOperator h = m.h(0.8);
  const HermitianOperator dh = m.dh_dlambda(0.8);
  for (auto _ : state) benchmark::DoNotOptimize(minimize_cd(h, dh, b));
}
BENCHMARK(BM_MinimizeCd)->Arg(4)->Arg(6);

}  // namespace

BENCHMARK_MAIN();
