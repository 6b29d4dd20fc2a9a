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
#include <string>
#include <vector>

#include "oph/inverse_solver.hpp"
#include "oph/operator_algebra.hpp"
#include "oph/state_paths.hpp"

namespace oph {

/// Slack of the cost bound 1 - F <= F_cost^2 / 2 + kBoundSlack.
inline constexpr double kBoundSlack = 1e-7;

/// What a driver returns for one path sample.
struct DriveStep {
  RealVector couplings;
  HermitianOperator hamiltonian;
  bool near_cutoff = false;
  bool degenerate = false;
  int rank = 0;
  int kernel_dim = 0;
};
using Driver = std::function<DriveStep(const PathSample&)>;

/// Optimal parent over `basis` (held by reference; it must outlive the driver).
Driver optimal_driver(const OperatorBasis& basis, double tol_rel = kDefaultTolRel);
/// H = 0 control.
Driver zero_driver(Index dim);
/// Fixed combination of basis elements with time-independent coefficients.
Driver fixed_driver(const OperatorBasis& basis, RealVector couplings);

/// States along a time grid under a piecewise-constant midpoint Hamiltonian.
struct Propagation {
  std::vector<PureState> states;
  double max_norm_drift = 0.0;
  int renormalizations = 0;
};
/// psi <- exp(-i H(t_mid) dt) psi on every interval of `grid`.
Propagation propagate(const std::function<HermitianOperator(double)>& h_of_t, const PureState& psi0,
                      const std::vector<double>& grid);

/// ||drho + i[H, rho]||_F.
double local_cost(const HermitianOperator& h, const HermitianOperator& rho, const HermitianOperator& drho);
double local_cost(const HermitianOperator& h, const PureState& psi, const HermitianOperator& drho);

/// Generated motion g = -i[H, rho] against the residual r = drho - g.
struct ProjectionGeometry {
  double cost = 0.0;          // ||r||
  double motion_norm = 0.0;   // ||g||
  double drho_norm = 0.0;
  double overlap = 0.0;       // Tr(g r)
};
ProjectionGeometry projection_geometry(const HermitianOperator& h, const PureState& psi, const HermitianOperator& drho);

/// Trapezoid integral of f over grid.
double total_cost(const std::vector<double>& f, const std::vector<double>& grid);
/// Running trapezoid integral, starting at 0.
std::vector<double> cumulative_cost(const std::vector<double>& f, const std::vector<double>& grid);

/// |<a|b>|^2.
double fidelity(const PureState& a, const PureState& b);

/// 1 - F <= cum^2 / 2 + kBoundSlack, pointwise.
std::vector<bool> bound_check(const std::vector<double>& fid, const std::vector<double>& cum);

struct AccessibilityAngle {
  double value = 0.0;
  bool stationary = false;
};
/// arcsin(clamp(f_opt / ||drho||, 0, 1)); 0 with the stationary flag when ||drho|| <= 1e-12.
AccessibilityAngle accessibility_angle(double drho_norm, double f_opt);
AccessibilityAngle accessibility_angle(const HermitianOperator& drho, double f_opt);

/// ||d rho||_F^2 and the Fubini-Study form <dpsi|dpsi> - |<psi|dpsi>|^2.
struct MetricPair {
  double hs_sq = 0.0;
  double fs = 0.0;
};
/// ||d rho||_F^2 and Re(<dpsi|dpsi> - <dpsi|psi><psi|dpsi>) for a tangent dpsi,
/// i.e. Re<psi|dpsi> = 0 (norm preserving). Other inputs are rejected.
MetricPair fs_check(const PureState& psi, const ComplexVector& dpsi);

/// Full record of a driven run on the schedule grid.
struct EvolutionResult {
  std::vector<std::string> labels;
  std::vector<double> t, lambda, dlambda;
  std::vector<RealVector> couplings;
  std::vector<PureState> states;
  std::vector<double> fidelity, local_cost, cumulative_cost, angle, drho_norm;
  std::vector<bool> stationary, bound_ok;
  int steps = 0;
  double max_norm_drift = 0.0;
  /// max |Tr(g r)| / max(1, ||drho||^2) over every solve, grid and midpoints.
  double max_orthogonality = 0.0;
  int near_cutoff_samples = 0;
  int degenerate_samples = 0;

  double final_fidelity() const { return fidelity.empty() ? 1.0 : fidelity.back(); }
  double total_cost() const { return cumulative_cost.empty() ? 0.0 : cumulative_cost.back(); }
  double max_angle() const;
  bool bound_holds() const;
};

/// Drives psi(lambda0) with `driver` over `steps` uniform time steps and
/// records diagnostics against the target path at every grid point.
EvolutionResult drive(const StatePath& path, const Schedule& schedule, int steps, const Driver& driver,
                      std::vector<std::string> labels = {});

/// Default step count: 400 per unit of |lambda1 - lambda0| (at least 2).
int default_steps(const Schedule& schedule);

/// Doubles the step count from `steps` (0 = default_steps) until the final
/// fidelity changes by less than tol. Returns the finest run.
struct ConvergedRun {
  EvolutionResult result;
  int refinements = 0;
  double last_change = 0.0;
  bool converged = false;
};
ConvergedRun drive_converged(const StatePath& path, const Schedule& schedule, const Driver& driver, int steps = 0,
                             double tol = 1e-7, int max_refinements = 5, std::vector<std::string> labels = {});

}  // namespace oph
