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

#include "oph/operator_algebra.hpp"

namespace oph {

/// Eigenpairs of a real symmetric matrix, eigenvalues in descending order.
struct SymmetricEigen {
  RealVector values;
  RealMatrix vectors;  // columns
};
SymmetricEigen symmetric_eigen_desc(const RealMatrix& m);

/// Thresholded spectral solve of V x = b.
struct SpectralSolve {
  RealVector x;
  int rank = 0;
  double cutoff = 0.0;
  bool near_cutoff = false;  // some eigenvalue lies within a factor 10 of the cutoff
  bool degenerate = false;   // V == 0 while b != 0
};
/// Inverts only eigenvalues above tol_rel * lambda_max; the result is orthogonal
/// to every discarded eigenvector.
SpectralSolve spectral_solve(const SymmetricEigen& eig, const RealVector& b, double tol_rel);

/// Lowest two eigenvalues and the lowest eigenvector.
struct GroundState {
  double e0 = 0.0;
  double e1 = 0.0;
  RealVector vector;
};
GroundState real_ground_state(const RealMatrix& h);

/// exp(-i H dt) psi by full Hermitian eigendecomposition.
ComplexVector expm_apply_dense(const ComplexMatrix& h, const ComplexVector& psi, double dt);
/// exp(-i H dt) psi by a Lanczos projection with adaptive substepping.
ComplexVector expm_apply_krylov(const ComplexMatrix& h, const ComplexVector& psi, double dt, double tol = 1e-14);
/// Picks the dense route for small dimensions and Krylov above kDenseExpLimit.
inline constexpr Index kDenseExpLimit = 64;
ComplexVector expm_apply(const ComplexMatrix& h, const ComplexVector& psi, double dt);

}  // namespace oph
