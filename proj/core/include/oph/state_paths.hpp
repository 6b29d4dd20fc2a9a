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
#include <limits>
#include <map>
#include <memory>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "oph/operator_algebra.hpp"

namespace oph {

/// lambda(t) on [0, T] with its time derivative.
class Schedule {
 public:
  enum class Kind { linear, smoothstep };

  static Schedule linear(double lambda0, double lambda1, double duration);
  /// lambda0 + (lambda1 - lambda0)(3s^2 - 2s^3), s = t / T.
  static Schedule smoothstep(double lambda0, double lambda1, double duration);

  double lambda(double t) const;
  double dlambda(double t) const;
  double duration() const { return duration_; }
  double start() const { return lambda0_; }
  double end() const { return lambda1_; }
  Kind kind() const { return kind_; }

 private:
  Schedule(Kind kind, double lambda0, double lambda1, double duration);
  Kind kind_;
  double lambda0_, lambda1_, duration_;
};
std::string_view to_string(Schedule::Kind k);

/// A differentiable family of pure states psi(lambda).
class StatePath {
 public:
  virtual ~StatePath() = default;

  virtual Index dim() const = 0;
  virtual PureState psi(double lambda) const = 0;
  virtual std::string name() const = 0;
  /// Model parameters for reporting.
  virtual std::map<std::string, double> parameters() const { return {}; }
  /// Closed interval where psi is defined.
  virtual std::pair<double, double> domain() const {
    return {-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  }
  /// d rho / d lambda; central differences on density matrices unless overridden.
  virtual HermitianOperator drho_dlambda(double lambda) const;

  HermitianOperator rho(double lambda) const { return psi(lambda).density(); }
};

inline constexpr double kDefaultDrhoStep = 1e-6;

/// (rho(l + delta) - rho(l - delta)) / (2 delta), Hermitian-symmetrized.
HermitianOperator numeric_drho(const StatePath& path, double lambda, double delta = kDefaultDrhoStep);

/// Central difference at delta, checked against the delta/2 stencil.
struct DrhoEstimate {
  HermitianOperator value;       // D(delta)
  double step_change = 0.0;      // ||D(delta) - D(delta/2)||_F
  double richardson = 0.0;       // ||D(delta) - (4 D(delta/2) - D(delta)) / 3||_F
};
DrhoEstimate numeric_drho_checked(const StatePath& path, double lambda, double delta = kDefaultDrhoStep);

/// State, time and derivatives at one schedule time.
struct PathSample {
  double t = 0.0;
  double lambda = 0.0;
  double dlambda = 0.0;
  PureState psi;
  HermitianOperator drho_dt;
};
PathSample sample_path(const StatePath& path, const Schedule& schedule, double t);

/// Memo of ground states keyed by the exact lambda value. Read-locked lookups;
/// the only shared mutable state in the library.
class GroundStateCache {
 public:
  explicit GroundStateCache(std::size_t capacity = 8192) : capacity_(capacity) {}
  PureState get_or_compute(double lambda, const std::function<PureState(double)>& compute) const;
  std::size_t size() const;

 private:
  std::size_t capacity_;
  mutable std::shared_mutex mu_;
  mutable std::unordered_map<double, PureState> map_;
};

/// Bloch vector (sin wt, cos wt, 0); lambda plays the role of t.
class SingleSpinPath final : public StatePath {
 public:
  explicit SingleSpinPath(double omega);
  Index dim() const override { return 2; }
  PureState psi(double t) const override;
  HermitianOperator drho_dlambda(double t) const override;
  std::string name() const override { return "single-spin"; }
  std::map<std::string, double> parameters() const override { return {{"omega", omega_}}; }
  double omega() const { return omega_; }

 private:
  double omega_;
};

/// -sum X_i X_{i+1} - lambda sum Z_i with periodic wrap on the full 2^L space.
HermitianOperator ising_hamiltonian(int sites, double lambda, const Limits& limits = {});
/// d/dlambda of the above: -sum Z_i.
HermitianOperator ising_dh_dlambda(int sites, const Limits& limits = {});

/// Ground state of the transverse-field chain in the even sector of prod Z_i.
class IsingPath final : public StatePath {
 public:
  explicit IsingPath(int sites, const Limits& limits = {});
  Index dim() const override { return Index{1} << sites_; }
  PureState psi(double lambda) const override;
  std::string name() const override { return "ising"; }
  std::map<std::string, double> parameters() const override { return {{"L", sites_}}; }
  /// Even-sector ground energy, throws DegeneracyError when the gap is below 1e-10.
  double ground_energy(double lambda) const;
  int sites() const { return sites_; }

 private:
  PureState compute(double lambda) const;
  int sites_;
  std::vector<Index> even_;  // parity-even computational states
  RealMatrix hopping_;       // -sum XX restricted to the even sector
  RealVector field_;         // sum Z on the even sector
  GroundStateCache cache_;
};

/// -(1 - lambda) Sigma_x - lambda Sigma_z^p / N^(p-1).
HermitianOperator pspin_hamiltonian(int spins, double lambda, int p = 3, Sector sector = Sector::symmetric,
                                    const Limits& limits = {});
HermitianOperator pspin_dh_dlambda(int spins, int p = 3, Sector sector = Sector::symmetric, const Limits& limits = {});

/// Ground state of the p-spin model in the (N+1)-dim symmetric sector.
class PSpinPath final : public StatePath {
 public:
  explicit PSpinPath(int spins, int p = 3, const Limits& limits = {});
  Index dim() const override { return spins_ + 1; }
  PureState psi(double lambda) const override;
  std::string name() const override { return "pspin"; }
  std::map<std::string, double> parameters() const override { return {{"N", spins_}, {"p", p_}}; }
  double ground_energy(double lambda) const;
  /// E1 - E0 of the symmetric-sector Hamiltonian.
  double gap(double lambda) const;
  int spins() const { return spins_; }

 private:
  PureState compute(double lambda) const;
  int spins_, p_;
  RealMatrix sx_;
  RealVector szp_;  // diagonal of Sigma_z^p / N^(p-1)
  GroundStateCache cache_;
};

/// Z [cos(a lambda) psi0 + sin(a lambda) psi1] between the p-spin endpoint
/// ground states, a = 2 pi (verbatim) or pi / 2 (quarter variant).
class InterpolationPath final : public StatePath {
 public:
  InterpolationPath(int spins, bool quarter = false, const Limits& limits = {});
  Index dim() const override { return psi0_.size(); }
  PureState psi(double lambda) const override;
  HermitianOperator drho_dlambda(double lambda) const override;
  std::string name() const override { return quarter_ ? "interpolate-quarter" : "interpolate"; }
  std::map<std::string, double> parameters() const override {
    return {{"N", spins_}, {"quarter", quarter_ ? 1.0 : 0.0}};
  }
  const ComplexVector& psi0() const { return psi0_; }
  const ComplexVector& psi1() const { return psi1_; }

 private:
  ComplexVector unnormalized(double lambda, double& norm) const;
  int spins_;
  bool quarter_;
  double rate_;
  ComplexVector psi0_, psi1_;
};

/// Arbitrary user-supplied psi(lambda) on a closed domain (normalized on output).
class FunctionPath final : public StatePath {
 public:
  FunctionPath(Index dim, std::function<ComplexVector(double)> fn, double lo, double hi, std::string name = "custom");
  Index dim() const override { return dim_; }
  PureState psi(double lambda) const override;
  std::string name() const override { return name_; }
  std::pair<double, double> domain() const override { return {lo_, hi_}; }

 private:
  Index dim_;
  std::function<ComplexVector(double)> fn_;
  double lo_, hi_;
  std::string name_;
};

// ---- closed-form transverse-field chain quantities (pseudo-spin picture) ----

/// Positive momenta (2n - 1) pi / L, n = 1..L/2.
std::vector<double> ising_momenta(int sites);
/// 2 sqrt((lambda - cos k)^2 + sin^2 k).
double ising_epsilon(double k, double lambda);
/// -sum_k epsilon_k.
double ising_ground_energy_analytic(int sites, double lambda);
/// -atan2(sin k, lambda - cos k), continuous in lambda for k in (0, pi).
double ising_theta(double k, double lambda);
double ising_dtheta(double k, double lambda);
/// Optimal nearest-neighbour XY and YX coupling.
double ising_h_analytic(int sites, double lambda, double dlambda);
/// prod_k cos^2 alpha_k with alpha_k = 4 sin k int h dt + (theta_k(t) - theta_k(0)) / 2,
/// trapezoid quadrature of h on the given grid.
std::vector<double> ising_fidelity_analytic(int sites, const std::vector<double>& t, const std::vector<double>& lambda,
                                            const std::vector<double>& h);

/// X Z..Z Y + Y Z..Z X strings S_{j j'} for j < j' (no wrap), labeled "S<j>_<j'>".
OperatorBasis ising_string_basis(int sites, const Limits& limits = {});
/// Coefficients over ising_string_basis of the exact parent Hamiltonian,
/// -dlambda omega_{j j'} with omega_{j j'} = (1/2L) sum_k dtheta_k sin k (j' - j).
RealVector ising_exact_parent_coefficients(int sites, double lambda, double dlambda);
HermitianOperator ising_exact_parent(int sites, double lambda, double dlambda, const Limits& limits = {});

}  // namespace oph
