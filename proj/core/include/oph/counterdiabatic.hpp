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

#include <functional>
#include <vector>

#include "oph/dynamics.hpp"
#include "oph/inverse_solver.hpp"
#include "oph/operator_algebra.hpp"
#include "oph/state_paths.hpp"

namespace oph {

/// Spectral data of an adiabatic Hamiltonian and its lambda derivative.
struct AdiabaticFrame {
  HermitianOperator h;
  HermitianOperator dh;  // d H / d lambda
  RealVector energies;   // ascending
  std::vector<HermitianOperator> projectors;
  double min_gap = 0.0;
};
/// Eigendecomposition with rank-one projectors (degenerate levels keep one
/// projector per eigenvector; see min_gap).
AdiabaticFrame make_frame(const HermitianOperator& h, const HermitianOperator& dh);

/// Tr[(dH_t + i[A, H])^2].
double cd_cost(const HermitianOperator& h, const HermitianOperator& dh_dt, const HermitianOperator& a);

/// Minimizer of cd_cost over span(basis). residual = sqrt(cost at the minimizer).
CouplingVector minimize_cd(const HermitianOperator& h, const HermitianOperator& dh_dt, const OperatorBasis& basis,
                           double tol_rel = kDefaultTolRel);

/// Minimizers of the direct form and of the eigenbasis-resummed form
/// || sum_i E_i (d rho_i + i[A, rho_i]) ||^2, built independently.
struct SpEquivalenceReport {
  RealVector direct;
  RealVector resummed;
  double max_difference = 0.0;
  bool degenerate_spectrum = false;  // resummed form is ambiguous; no agreement asserted
  bool agree = false;
};
SpEquivalenceReport sp_equivalence_check(const HermitianOperator& h, const HermitianOperator& dh_dt,
                                         const OperatorBasis& basis, double tol = 1e-8,
                                         double tol_rel = kDefaultTolRel);

/// H_a(lambda) and its lambda derivative.
struct AdiabaticModel {
  std::function<HermitianOperator(double)> h;
  std::function<HermitianOperator(double)> dh_dlambda;
};
AdiabaticModel ising_model(int sites, const Limits& limits = {});
AdiabaticModel pspin_model(int spins, int p = 3, const Limits& limits = {});

/// Drives with the counterdiabatic potential over `basis` alone.
Driver cd_driver(const AdiabaticModel& model, const OperatorBasis& basis, double tol_rel = kDefaultTolRel);

struct CdComparison {
  EvolutionResult optimal;
  EvolutionResult counterdiabatic;
  /// max over grid of f_opt - f_cd (nonpositive up to rounding).
  double max_dominance_gap = 0.0;
};
CdComparison compare_on_path(const StatePath& path, const AdiabaticModel& model, const OperatorBasis& basis,
                             const Schedule& schedule, int steps, double tol_rel = kDefaultTolRel);

}  // namespace oph
