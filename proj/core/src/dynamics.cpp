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

#include "oph/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "oph/errors.hpp"
#include "oph/linalg.hpp"

namespace oph {
namespace {

constexpr Complex kI{0.0, 1.0};

void check_grid(const std::vector<double>& grid) {
  if (grid.size() < 2) throw InvalidInput("time grid needs at least two points");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw InvalidInput("time grid must be strictly increasing");
  }
}

// Keeps the state exactly on the unit sphere only when drift is visible.
PureState settle(ComplexVector v, double& drift, int& renorms) {
  const double d = std::abs(v.norm() - 1.0);
  drift = std::max(drift, d);
  if (d > 1e-12) {
    ++renorms;
    return PureState::normalize(std::move(v));
  }
  return PureState(std::move(v));
}

}  // namespace

Driver optimal_driver(const OperatorBasis& basis, double tol_rel) {
  return [&basis, tol_rel](const PathSample& s) {
    OptimalSolve o = solve_optimal(s.psi, s.drho_dt, basis, tol_rel);
    return DriveStep{std::move(o.coupling.values), std::move(o.hamiltonian), o.coupling.near_cutoff,
                     o.coupling.degenerate, o.coupling.rank, o.coupling.kernel_dim};
  };
}

Driver zero_driver(Index dim) {
  return [dim](const PathSample&) { return DriveStep{RealVector(), HermitianOperator::zero(dim)}; };
}

Driver fixed_driver(const OperatorBasis& basis, RealVector couplings) {
  HermitianOperator h = basis.combine(couplings);
  return [h = std::move(h), c = std::move(couplings)](const PathSample&) { return DriveStep{c, h}; };
}

Propagation propagate(const std::function<HermitianOperator(double)>& h_of_t, const PureState& psi0,
                      const std::vector<double>& grid) {
  check_grid(grid);
  Propagation out;
  out.states.reserve(grid.size());
  out.states.push_back(psi0);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double dt = grid[i] - grid[i - 1];
    const HermitianOperator h = h_of_t(grid[i - 1] + 0.5 * dt);
    if (h.dim() != psi0.dim()) throw InvalidInput("propagate: Hamiltonian dimension mismatch");
    ComplexVector next = expm_apply(h.matrix(), out.states.back().amplitudes(), dt);
    out.states.push_back(settle(std::move(next), out.max_norm_drift, out.renormalizations));
  }
  return out;
}

double local_cost(const HermitianOperator& h, const HermitianOperator& rho, const HermitianOperator& drho) {
  if (h.dim() != rho.dim() || drho.dim() != rho.dim()) throw InvalidInput("local_cost: dimension mismatch");
  const ComplexMatrix hr = h.matrix() * rho.matrix();
  return (drho.matrix() + kI * (hr - hr.adjoint())).norm();
}

double local_cost(const HermitianOperator& h, const PureState& psi, const HermitianOperator& drho) {
  return pure_local_cost(h, psi, drho);
}

ProjectionGeometry projection_geometry(const HermitianOperator& h, const PureState& psi, const HermitianOperator& drho) {
  if (h.dim() != psi.dim() || drho.dim() != psi.dim()) throw InvalidInput("projection_geometry: dimension mismatch");
  const ComplexVector& v = psi.amplitudes();
  const ComplexVector phi = h.matrix() * v;
  const ComplexMatrix g = -kI * (phi * v.adjoint() - v * phi.adjoint());
  const ComplexMatrix r = drho.matrix() - g;
  ProjectionGeometry out;
  out.cost = r.norm();
  out.motion_norm = g.norm();
  out.drho_norm = drho.frobenius_norm();
  out.overlap = (g.array() * r.conjugate().array()).sum().real();
  return out;
}

double total_cost(const std::vector<double>& f, const std::vector<double>& grid) {
  const auto c = cumulative_cost(f, grid);
  return c.empty() ? 0.0 : c.back();
}

std::vector<double> cumulative_cost(const std::vector<double>& f, const std::vector<double>& grid) {
  if (f.size() != grid.size()) throw InvalidInput("cost series and grid differ in length");
  std::vector<double> out(f.size(), 0.0);
  for (std::size_t i = 1; i < f.size(); ++i) out[i] = out[i - 1] + 0.5 * (f[i] + f[i - 1]) * (grid[i] - grid[i - 1]);
  return out;
}

double fidelity(const PureState& a, const PureState& b) {
  if (a.dim() != b.dim()) throw InvalidInput("fidelity: dimension mismatch");
  return std::norm(a.amplitudes().dot(b.amplitudes()));
}

std::vector<bool> bound_check(const std::vector<double>& fid, const std::vector<double>& cum) {
  if (fid.size() != cum.size()) throw InvalidInput("bound_check: series lengths differ");
  std::vector<bool> ok(fid.size());
  for (std::size_t i = 0; i < fid.size(); ++i) ok[i] = 1.0 - fid[i] <= 0.5 * cum[i] * cum[i] + kBoundSlack;
  return ok;
}

AccessibilityAngle accessibility_angle(double drho_norm, double f_opt) {
  if (!(drho_norm > 1e-12)) return {0.0, true};
  return {std::asin(std::clamp(f_opt / drho_norm, 0.0, 1.0)), false};
}

AccessibilityAngle accessibility_angle(const HermitianOperator& drho, double f_opt) {
  return accessibility_angle(drho.frobenius_norm(), f_opt);
}

MetricPair fs_check(const PureState& psi, const ComplexVector& dpsi) {
  if (dpsi.size() != psi.dim()) throw InvalidInput("fs_check: dimension mismatch");
  const ComplexVector& v = psi.amplitudes();
  if (std::abs(v.dot(dpsi).real()) > 1e-10 * std::max(1.0, dpsi.norm())) {
    throw InvalidInput("fs_check: dpsi changes the norm (Re<psi|dpsi> != 0)");
  }
  const ComplexMatrix drho = dpsi * v.adjoint() + v * dpsi.adjoint();
  MetricPair out;
  out.hs_sq = drho.squaredNorm();
  out.fs = dpsi.squaredNorm() - std::norm(v.dot(dpsi));
  return out;
}

double EvolutionResult::max_angle() const {
  return angle.empty() ? 0.0 : *std::max_element(angle.begin(), angle.end());
}

bool EvolutionResult::bound_holds() const {
  return std::all_of(bound_ok.begin(), bound_ok.end(), [](bool b) { return b; });
}

int default_steps(const Schedule& schedule) {
  return std::max(2, static_cast<int>(std::ceil(400.0 * std::abs(schedule.end() - schedule.start()))));
}

EvolutionResult drive(const StatePath& path, const Schedule& schedule, int steps, const Driver& driver,
                      std::vector<std::string> labels) {
  if (steps < 2) throw InvalidInput("steps must be >= 2");
  if (!driver) throw InvalidInput("drive: empty driver");
  const double lo = std::min(schedule.start(), schedule.end());
  const double hi = std::max(schedule.start(), schedule.end());
  {
    const auto [a, b] = path.domain();
    if (lo < a || hi > b) throw InvalidInput(path.name() + ": schedule leaves the path domain");
  }

  EvolutionResult r;
  r.labels = std::move(labels);
  r.steps = steps;
  const double dt = schedule.duration() / steps;
  const std::size_t n = static_cast<std::size_t>(steps) + 1;
  r.t.reserve(n);
  r.states.reserve(n);

  auto run = [&](const PathSample& s, double& cost, double& dnorm) {
    DriveStep step = driver(s);
    if (step.hamiltonian.dim() != path.dim()) throw InvalidInput("driver returned a Hamiltonian of the wrong dimension");
    const ProjectionGeometry g = projection_geometry(step.hamiltonian, s.psi, s.drho_dt);
    r.max_orthogonality = std::max(r.max_orthogonality, std::abs(g.overlap) / std::max(1.0, g.drho_norm * g.drho_norm));
    r.near_cutoff_samples += step.near_cutoff ? 1 : 0;
    r.degenerate_samples += step.degenerate ? 1 : 0;
    cost = g.cost;
    dnorm = g.drho_norm;
    return step;
  };

  ComplexVector psi = path.psi(schedule.start()).amplitudes();
  int renorms = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = i + 1 == n ? schedule.duration() : static_cast<double>(i) * dt;
    const PathSample s = sample_path(path, schedule, t);
    double cost = 0.0, dnorm = 0.0;
    DriveStep step = run(s, cost, dnorm);

    PureState state = i == 0 ? PureState::normalize(psi) : settle(psi, r.max_norm_drift, renorms);
    r.t.push_back(t);
    r.lambda.push_back(s.lambda);
    r.dlambda.push_back(s.dlambda);
    r.couplings.push_back(std::move(step.couplings));
    r.fidelity.push_back(fidelity(state, s.psi));
    r.local_cost.push_back(cost);
    r.drho_norm.push_back(dnorm);
    const AccessibilityAngle ang = accessibility_angle(dnorm, cost);
    r.angle.push_back(ang.value);
    r.stationary.push_back(ang.stationary);
    psi = state.amplitudes();
    r.states.push_back(std::move(state));

    if (i + 1 < n) {
      const double t_next = i + 2 == n ? schedule.duration() : static_cast<double>(i + 1) * dt;
      const PathSample mid = sample_path(path, schedule, 0.5 * (t + t_next));
      double mc = 0.0, md = 0.0;
      const DriveStep ms = run(mid, mc, md);
      psi = expm_apply(ms.hamiltonian.matrix(), psi, t_next - t);
    }
  }
  r.cumulative_cost = cumulative_cost(r.local_cost, r.t);
  r.bound_ok = bound_check(r.fidelity, r.cumulative_cost);
  return r;
}

ConvergedRun drive_converged(const StatePath& path, const Schedule& schedule, const Driver& driver, int steps,
                             double tol, int max_refinements, std::vector<std::string> labels) {
  int n = steps > 0 ? steps : default_steps(schedule);
  ConvergedRun out;
  out.result = drive(path, schedule, n, driver, labels);
  for (int k = 0; k < max_refinements; ++k) {
    n *= 2;
    EvolutionResult finer = drive(path, schedule, n, driver, labels);
    out.last_change = std::abs(finer.final_fidelity() - out.result.final_fidelity());
    out.result = std::move(finer);
    ++out.refinements;
    if (out.last_change < tol) {
      out.converged = true;
      break;
    }
  }
  return out;
}

}  // namespace oph
