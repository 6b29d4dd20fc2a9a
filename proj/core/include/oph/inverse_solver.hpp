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

#include <optional>
#include <string>
#include <vector>

#include "oph/linalg.hpp"
#include "oph/operator_algebra.hpp"

namespace oph {

inline constexpr double kDefaultTolRel = 1e-10;
/// rho^2 = rho tolerance used to accept a density matrix as pure.
inline constexpr double kPurityTol = 1e-10;

/// Quantum covariance matrix V_ab = Tr(l_a l_b) with its spectrum.
struct QCMatrix {
  RealMatrix entries;
  SymmetricEigen eig;  // descending
  int rank = 0;
  double tol_used = 0.0;  // absolute eigenvalue cutoff
  double tol_rel = kDefaultTolRel;

  Index size() const { return entries.rows(); }
};

/// Coupling vector over an operator basis together with solver diagnostics.
struct CouplingVector {
  RealVector values;
  std::vector<std::string> labels;
  double residual = 0.0;
  int kernel_dim = 0;
  int rank = 0;
  bool near_cutoff = false;
  bool degenerate = false;
};

/// Covariance form <{L_a,L_b}> - 2<L_a><L_b>, streamed over the basis.
QCMatrix build_qcm(const PureState& psi, const OperatorBasis& basis, double tol_rel = kDefaultTolRel);
/// Same from a density matrix; throws InvalidInput unless rho is pure.
QCMatrix build_qcm(const HermitianOperator& rho, const OperatorBasis& basis, double tol_rel = kDefaultTolRel);
/// Gram form Tr(l_a l_b) from materialized tangent vectors (cross-check path).
RealMatrix qcm_gram(const HermitianOperator& rho, const OperatorBasis& basis);

/// b_a = Tr(l_a drho).
RealVector build_rhs(const PureState& psi, const HermitianOperator& drho, const OperatorBasis& basis);
RealVector build_rhs(const HermitianOperator& rho, const HermitianOperator& drho, const OperatorBasis& basis);

/// Minimal-norm solution of V h = b. With drho_norm given, residual is
/// sqrt(max(0, ||drho||^2 - b.h)); otherwise it is ||V h - b||.
CouplingVector solve_min_norm(const QCMatrix& v, const RealVector& b, std::optional<double> drho_norm = std::nullopt,
                              double tol_rel = kDefaultTolRel);

/// Optimal coupling at one state: QCM solve plus the direct local cost
/// ||drho + i[H, rho]||_F stored in residual.
struct OptimalSolve {
  CouplingVector coupling;
  HermitianOperator hamiltonian;
  double drho_norm = 0.0;
};
OptimalSolve solve_optimal(const PureState& psi, const HermitianOperator& drho, const OperatorBasis& basis,
                           double tol_rel = kDefaultTolRel);

/// ||drho + i[H, |psi><psi|]||_F in O(d^2).
double pure_local_cost(const HermitianOperator& h, const PureState& psi, const HermitianOperator& drho);

/// K_{alpha,a} = Tr(O_alpha (-i[L_a, rho])) / Tr(O_alpha^2).
struct CommutatorMatrix {
  RealMatrix entries;  // rows: observables, columns: Hamiltonian terms
};
CommutatorMatrix build_commutator_matrix(const HermitianOperator& rho, const OperatorBasis& ham_basis,
                                         const OperatorBasis& obs_basis);
/// Observable coefficients of an operator: o_alpha = Tr(O_alpha A) / Tr(O_alpha^2).
RealVector observable_coefficients(const HermitianOperator& a, const OperatorBasis& obs_basis);
/// Minimal-norm least squares for K h = do; residual = ||K h - do||.
CouplingVector solve_exact_parent(const CommutatorMatrix& k, const RealVector& d_obs, double tol_rel = kDefaultTolRel);

/// Orthonormal QCM eigenvectors with eigenvalue <= tol_rel * lambda_max.
std::vector<CouplingVector> kernel_basis(const QCMatrix& v, double tol_rel = kDefaultTolRel);
/// ||[sum_a k_a L_a, rho]||_F.
double commutator_defect(const OperatorBasis& basis, const HermitianOperator& rho, const RealVector& coeffs);

/// M = V^+ C with C_{a,alpha} = Tr(l_a l_{O_alpha}); M f is the optimal coupling
/// over `allowed` for the motion generated by sum_alpha f_alpha O_alpha.
struct FilterMatrix {
  RealMatrix entries;  // allowed.size() x full.size()
};
FilterMatrix filter_matrix(const PureState& psi, const OperatorBasis& allowed, const OperatorBasis& full,
                           double tol_rel = kDefaultTolRel);

/// Extracts psi from a pure density matrix; throws InvalidInput otherwise.
PureState pure_state_of(const HermitianOperator& rho);

}  // namespace oph
