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
#include <random>

#include "oph/errors.hpp"
#include "oph/inverse_solver.hpp"
#include "oph/state_paths.hpp"
#include "test_util.hpp"

namespace oph {
namespace {

using testing::random_hermitian;
using testing::random_state;

HermitianOperator up_state() {
  return HermitianOperator::hermitian_part(0.5 * (ComplexMatrix::Identity(2, 2) + pauli_matrix(Pauli::Z)));
}

TEST(Qcm, IdentityRowAndColumnVanish) {
  std::mt19937_64 rng(1);
  const QCMatrix v = build_qcm(random_state(4, rng), build_pauli_basis(2));
  EXPECT_LT(v.entries.row(0).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LT(v.entries.col(0).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Qcm, PolarizedSpinIsDiag220) {
  const QCMatrix v = build_qcm(up_state(), build_pauli_basis(1, false));
  RealMatrix expected = RealMatrix::Zero(3, 3);
  expected(0, 0) = expected(1, 1) = 2.0;
  EXPECT_LT((v.entries - expected).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_EQ(v.rank, 2);
}

TEST(Qcm, CovarianceEqualsGram) {
  std::mt19937_64 rng(7);
  const OperatorBasis b = build_nearest_neighbor_basis(3);
  for (int k = 0; k < 5; ++k) {
    const PureState psi = random_state(8, rng);
    const QCMatrix v = build_qcm(psi, b);
    EXPECT_LT((v.entries - qcm_gram(psi.density(), b)).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Qcm, PositiveSemidefiniteAndSymmetric) {
  std::mt19937_64 rng(8);
  const OperatorBasis b = build_pauli_basis(3);
  for (int k = 0; k < 10; ++k) {
    const QCMatrix v = build_qcm(random_state(8, rng), b);
    EXPECT_GE(v.eig.values.minCoeff(), -1e-9);
    EXPECT_LT((v.entries - v.entries.transpose()).cwiseAbs().maxCoeff(), 1e-10);
    int rank = 0;
    for (Index i = 0; i < v.size(); ++i) rank += v.eig.values[i] > v.tol_used ? 1 : 0;
    EXPECT_EQ(rank, v.rank);
  }
}

TEST(Qcm, MixedStateRejected) {
  const HermitianOperator mixed = HermitianOperator::identity(2) * 0.5;
  EXPECT_THROW(build_qcm(mixed, build_pauli_basis(1)), InvalidInput);
}

TEST(Rhs, ZeroDerivativeGivesZero) {
  std::mt19937_64 rng(2);
  const PureState psi = random_state(4, rng);
  EXPECT_EQ(build_rhs(psi, HermitianOperator::zero(4), build_pauli_basis(2)).norm(), 0.0);
}

TEST(Rhs, TangentDerivativeGivesQcmColumn) {
  std::mt19937_64 rng(3);
  const PureState psi = random_state(8, rng);
  const OperatorBasis b = build_nearest_neighbor_basis(3);
  const QCMatrix v = build_qcm(psi, b);
  for (std::size_t c : {0u, 7u, 20u}) {
    const HermitianOperator d = commutator_action(b.op(c), psi.density());
    EXPECT_LT((build_rhs(psi, d, b) - v.entries.col(static_cast<Index>(c))).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Rhs, SingleSpinOnlyZRow) {
  const SingleSpinPath p(1.0);
  const RealVector b = build_rhs(p.psi(0.0), p.drho_dlambda(0.0), build_pauli_basis(1, false));
  EXPECT_NEAR(b[0], 0.0, 1e-15);
  EXPECT_NEAR(b[1], 0.0, 1e-15);
  EXPECT_GT(std::abs(b[2]), 0.5);
}

TEST(Rhs, MatchesGramDefinition) {
  std::mt19937_64 rng(4);
  const PureState psi = random_state(8, rng);
  const OperatorBasis b = build_nearest_neighbor_basis(3);
  const HermitianOperator d = commutator_action(random_hermitian(8, rng), psi.density());
  const auto l = tangent_vectors(b, psi.density());
  const RealVector rhs = build_rhs(psi, d, b);
  for (std::size_t a = 0; a < b.size(); ++a) EXPECT_NEAR(rhs[static_cast<Index>(a)], hs_inner(l[a], d), 1e-12);
}

TEST(SolveMinNorm, ZeroRhs) {
  std::mt19937_64 rng(5);
  const QCMatrix v = build_qcm(random_state(4, rng), build_pauli_basis(2));
  const CouplingVector h = solve_min_norm(v, RealVector::Zero(v.size()), 0.0);
  EXPECT_EQ(h.values.norm(), 0.0);
  EXPECT_EQ(h.residual, 0.0);
}

TEST(SolveMinNorm, SingleSpinFullPauliBasis) {
  const double w = 2.3;
  const SingleSpinPath p(w);
  const OperatorBasis b = build_pauli_basis(1);
  const OptimalSolve s = solve_optimal(p.psi(0.0), p.drho_dlambda(0.0), b);
  EXPECT_NEAR(s.coupling.values[0], 0.0, 1e-12);
  EXPECT_NEAR(s.coupling.values[1], 0.0, 1e-12);
  EXPECT_NEAR(s.coupling.values[2], 0.0, 1e-12);
  EXPECT_NEAR(s.coupling.values[3], -w / 2.0, 1e-12);
  EXPECT_LT(s.coupling.residual, 1e-12);
  EXPECT_EQ(s.coupling.kernel_dim, 2);  // identity and the Bloch-vector direction
}

TEST(SolveMinNorm, IsingOnlyUniformXYCouplings) {
  const int l = 6;
  const double lambda = 0.5;
  const IsingPath p(l);
  const OperatorBasis b = build_nearest_neighbor_basis(l);
  const OptimalSolve s = solve_optimal(p.psi(lambda), p.drho_dlambda(lambda), b);
  const double h = ising_h_analytic(l, lambda, 1.0);
  for (std::size_t a = 0; a < b.size(); ++a) {
    const std::string& lab = b.label(a);
    const bool xy = lab.size() == 4 && ((lab[0] == 'X' && lab[2] == 'Y') || (lab[0] == 'Y' && lab[2] == 'X'));
    EXPECT_NEAR(s.coupling.values[static_cast<Index>(a)], xy ? h : 0.0, 1e-8) << lab;
  }
}

TEST(SolveMinNorm, OrthogonalToKernel) {
  std::mt19937_64 rng(6);
  const OperatorBasis b = build_pauli_basis(2);
  for (int k = 0; k < 5; ++k) {
    const PureState psi = random_state(4, rng);
    const HermitianOperator d = commutator_action(random_hermitian(4, rng), psi.density());
    const QCMatrix v = build_qcm(psi, b);
    const CouplingVector h = solve_min_norm(v, build_rhs(psi, d, b));
    for (const auto& kv : kernel_basis(v)) EXPECT_LE(std::abs(kv.values.dot(h.values)), 1e-8 * h.values.norm());
  }
}

TEST(SolveMinNorm, StationaryUnderPerturbation) {
  std::mt19937_64 rng(7);
  const IsingPath p(4);
  const OperatorBasis b = build_nearest_neighbor_basis(4);
  const PureState psi = p.psi(0.8);
  const HermitianOperator d = p.drho_dlambda(0.8);
  const OptimalSolve s = solve_optimal(psi, d, b);
  for (std::size_t a = 0; a < b.size(); ++a) {
    for (double eps : {1e-4, -1e-4}) {
      RealVector h = s.coupling.values;
      h[static_cast<Index>(a)] += eps;
      EXPECT_GE(pure_local_cost(b.combine(h), psi, d), s.coupling.residual - 1e-12);
    }
  }
}

TEST(SolveMinNorm, SqrtResidualMatchesDirectCost) {
  std::mt19937_64 rng(8);
  const OperatorBasis b = build_nearest_neighbor_basis(3);
  const PureState psi = random_state(8, rng);
  const HermitianOperator d = commutator_action(random_hermitian(8, rng), psi.density());
  const QCMatrix v = build_qcm(psi, b);
  const CouplingVector h = solve_min_norm(v, build_rhs(psi, d, b), d.frobenius_norm());
  EXPECT_NEAR(h.residual, pure_local_cost(b.combine(h.values), psi, d), 1e-7);
}

TEST(SolveMinNorm, DegenerateSystemFlagged) {
  QCMatrix v = build_qcm(up_state(), OperatorBasis({"Z"}, {pauli_string("Z")}, BasisFamily::custom));
  RealVector b(1);
  b << 1.0;
  const CouplingVector h = solve_min_norm(v, b);
  EXPECT_TRUE(h.degenerate);
  EXPECT_EQ(h.values[0], 0.0);
}

TEST(SolveMinNorm, NearCutoffWarning) {
  // Eigenvalues 1 and 5e-10 straddle the default 1e-10 cutoff within a factor 10.
  QCMatrix v;
  v.entries = RealMatrix::Zero(2, 2);
  v.entries(0, 0) = 1.0;
  v.entries(1, 1) = 5e-10;
  v.eig = symmetric_eigen_desc(v.entries);
  const CouplingVector h = solve_min_norm(v, RealVector::Ones(2));
  EXPECT_TRUE(h.near_cutoff);
  EXPECT_EQ(h.rank, 2);
}

TEST(CommutatorMatrix, SingleSpinMatchesDisplayedMatrix) {
  // Displayed system at time t, written for the coefficients of 2 rho:
  //   rows x, y: (2 cos wt, -2 sin wt) in the z column;
  //   row z: (-cos wt, sin wt) in the x, y columns (homogeneous, scale free).
  // Ours solves d o = -K h with o the coefficients of rho, so rows x, y are
  // -1/2 of the displayed ones and row z is proportional to it.
  const double w = 1.3, t = 0.4;
  const SingleSpinPath p(w);
  const OperatorBasis b = build_pauli_basis(1);
  const RealMatrix k = build_commutator_matrix(p.rho(t), b, b).entries;
  const double c = std::cos(w * t), s = std::sin(w * t);
  EXPECT_LT(k.row(0).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LT(k.col(0).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_NEAR(k(1, 3), -c, 1e-14);
  EXPECT_NEAR(k(2, 3), s, 1e-14);
  EXPECT_NEAR(k(1, 1), 0.0, 1e-14);
  EXPECT_NEAR(k(2, 2), 0.0, 1e-14);
  EXPECT_NEAR(k(3, 1) * s + k(3, 2) * c, 0.0, 1e-14);  // parallel to (-cos, sin)
  EXPECT_NEAR(k(3, 1), c, 1e-14);
  // The displayed left-hand side is 2 d o; the solution is -w/2 on sigma_z.
  const CouplingVector h = solve_exact_parent(build_commutator_matrix(p.rho(t), b, b),
                                              observable_coefficients(p.drho_dlambda(t), b));
  EXPECT_NEAR(h.values[3], -w / 2.0, 1e-12);
}

TEST(CommutatorMatrix, SymmetryColumnIsZero) {
  const OperatorBasis b = build_pauli_basis(1);
  const CommutatorMatrix k = build_commutator_matrix(up_state(), b, b);
  EXPECT_LT(k.entries.col(3).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LT(k.entries.col(0).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(CommutatorMatrix, ReproducesCommutatorCoefficients) {
  std::mt19937_64 rng(9);
  const OperatorBasis b = build_pauli_basis(2);
  const HermitianOperator rho = random_state(4, rng).density();
  const CommutatorMatrix k = build_commutator_matrix(rho, b, b);
  for (int t = 0; t < 5; ++t) {
    const RealVector h = RealVector::Random(16);
    const RealVector direct = observable_coefficients(commutator_action(b.combine(h), rho), b);
    EXPECT_LT((k.entries * h - direct).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(ExactParent, FullBasisAlwaysExact) {
  const OperatorBasis b = build_pauli_basis(3);
  std::mt19937_64 rng(10);
  // 3-qubit path: rotate a random state with a random time-dependent generator.
  const HermitianOperator a = random_hermitian(8, rng);
  const PureState psi0 = random_state(8, rng);
  const FunctionPath path(8, [&](double s) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(a.matrix());
    ComplexVector c = es.eigenvectors().adjoint() * psi0.amplitudes();
    for (Index i = 0; i < 8; ++i) c[i] *= std::polar(1.0, -es.eigenvalues()[i] * s * s);
    return ComplexVector(es.eigenvectors() * c);
  }, -1.0, 2.0);
  for (double s : {0.3, 0.9}) {
    const CommutatorMatrix k = build_commutator_matrix(path.rho(s), b, b);
    const CouplingVector h = solve_exact_parent(k, observable_coefficients(path.drho_dlambda(s), b));
    EXPECT_LE(h.residual, 1e-8);
  }
}

TEST(ExactParent, SigmaZAloneGeneratesTheSpin) {
  const double w = 1.4;
  const SingleSpinPath p(w);
  const OperatorBasis obs = build_pauli_basis(1);
  const OperatorBasis ham({"Z"}, {pauli_string("Z")}, BasisFamily::custom);
  for (double t : {0.0, 0.7, 2.0}) {
    const CommutatorMatrix k = build_commutator_matrix(p.rho(t), ham, obs);
    const CouplingVector h = solve_exact_parent(k, observable_coefficients(p.drho_dlambda(t), obs));
    EXPECT_LE(h.residual, 1e-8);
    EXPECT_NEAR(h.values[0], -w / 2.0, 1e-10);
  }
}

TEST(ExactParent, SigmaXAloneCannot) {
  const SingleSpinPath p(1.0);
  const OperatorBasis obs = build_pauli_basis(1);
  const OperatorBasis ham({"X"}, {pauli_string("X")}, BasisFamily::custom);
  const CommutatorMatrix k = build_commutator_matrix(p.rho(0.0), ham, obs);
  EXPECT_GT(solve_exact_parent(k, observable_coefficients(p.drho_dlambda(0.0), obs)).residual, 0.1);
}

TEST(Kernel, PolarizedSpinKernelIsZ) {
  const QCMatrix v = build_qcm(up_state(), build_pauli_basis(1, false));
  const auto k = kernel_basis(v);
  ASSERT_EQ(k.size(), 1u);
  EXPECT_NEAR(std::abs(k[0].values[2]), 1.0, 1e-14);
}

TEST(Kernel, IdentityAlwaysInKernel) {
  std::mt19937_64 rng(11);
  const QCMatrix v = build_qcm(random_state(4, rng), build_pauli_basis(2));
  double weight = 0.0;
  for (const auto& k : kernel_basis(v)) weight += k.values[0] * k.values[0];
  EXPECT_NEAR(weight, 1.0, 1e-12);
}

TEST(Kernel, IsingKernelCommutesWithState) {
  const IsingPath p(6);
  const OperatorBasis b = build_nearest_neighbor_basis(6);
  const HermitianOperator rho = p.rho(2.0);
  const QCMatrix v = build_qcm(p.psi(2.0), b);
  const auto kernel = kernel_basis(v);
  EXPECT_FALSE(kernel.empty());
  for (const auto& k : kernel) EXPECT_LE(commutator_defect(b, rho, k.values), 1e-7);
}

TEST(FilterMatrix, FullBasisActsAsProjection) {
  std::mt19937_64 rng(12);
  const OperatorBasis b = build_pauli_basis(2);
  const PureState psi = random_state(4, rng);
  const FilterMatrix m = filter_matrix(psi, b, b);
  const QCMatrix v = build_qcm(psi, b);
  // On the complement of the kernel M is the identity.
  for (Index i = 0; i < v.size(); ++i) {
    if (v.eig.values[i] <= v.tol_used) continue;
    const RealVector u = v.eig.vectors.col(i);
    EXPECT_LT((m.entries * u - u).norm(), 1e-9);
  }
}

TEST(FilterMatrix, OrthogonalAllowedSetGivesZero) {
  const OperatorBasis allowed({"Z"}, {pauli_string("Z")}, BasisFamily::custom);
  const PureState up(ComplexVector::Unit(2, 0));
  const FilterMatrix m = filter_matrix(up, allowed, build_pauli_basis(1));
  EXPECT_EQ(m.entries.cwiseAbs().maxCoeff(), 0.0);
}

TEST(FilterMatrix, MatchesDirectSolve) {
  std::mt19937_64 rng(13);
  const OperatorBasis allowed = build_nearest_neighbor_basis(3);
  const OperatorBasis full = build_pauli_basis(3);
  const PureState psi = random_state(8, rng);
  const FilterMatrix m = filter_matrix(psi, allowed, full);
  const QCMatrix v = build_qcm(psi, allowed);
  for (int t = 0; t < 4; ++t) {
    const RealVector f = RealVector::Random(64);
    const HermitianOperator d = commutator_action(full.combine(f), psi.density());
    const CouplingVector h = solve_min_norm(v, build_rhs(psi, d, allowed));
    EXPECT_LT((m.entries * f - h.values).cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST(FilterMatrix, KernelAdditionsDoNotChangeResult) {
  std::mt19937_64 rng(14);
  const OperatorBasis allowed = build_nearest_neighbor_basis(3);
  const OperatorBasis full = build_pauli_basis(3);
  const PureState psi = random_state(8, rng);
  const FilterMatrix m = filter_matrix(psi, allowed, full);
  const RealVector f = RealVector::Random(64);
  for (const auto& k : kernel_basis(build_qcm(psi, full))) {
    EXPECT_LT((m.entries * (f + 3.0 * k.values) - m.entries * f).cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST(FilterMatrix, IsingExactParentFiltersToClosedForm) {
  const int l = 4;
  const IsingPath p(l);
  const OperatorBasis allowed = build_nearest_neighbor_basis(l);
  const OperatorBasis strings = ising_string_basis(l);
  for (double lambda : {0.4, 1.0, 1.7}) {
    const FilterMatrix m = filter_matrix(p.psi(lambda), allowed, strings);
    const RealVector h = m.entries * ising_exact_parent_coefficients(l, lambda, 1.0);
    const OptimalSolve direct = solve_optimal(p.psi(lambda), p.drho_dlambda(lambda), allowed);
    EXPECT_LT((h - direct.coupling.values).cwiseAbs().maxCoeff(), 1e-8);
    EXPECT_NEAR(h[static_cast<Index>(allowed.find("X0Y1"))], ising_h_analytic(l, lambda, 1.0), 1e-8);
  }
}

TEST(BasisMonotonicity, NestedCollectiveResiduals) {
  const PSpinPath p(12);
  const OperatorBasis b1 = build_collective_basis(12, 1, Sector::symmetric);
  const OperatorBasis b2 = build_collective_basis(12, 2, Sector::symmetric);
  const OperatorBasis b3 = build_collective_basis(12, 3, Sector::symmetric);
  for (double lambda = 0.05; lambda < 1.0; lambda += 0.1) {
    const PureState psi = p.psi(lambda);
    const HermitianOperator d = p.drho_dlambda(lambda);
    const double r1 = solve_optimal(psi, d, b1).coupling.residual;
    const double r2 = solve_optimal(psi, d, b2).coupling.residual;
    const double r3 = solve_optimal(psi, d, b3).coupling.residual;
    EXPECT_GE(r1 + 1e-9, r2) << lambda;
    EXPECT_GE(r2 + 1e-9, r3) << lambda;
  }
}

TEST(SolveOptimal, ResidualOrthogonalWithIllConditionedQcm) {
  // Weight-3 collective operators at N=40: QCM entries near 1e9.
  const PSpinPath path(40);
  const OperatorBasis b = build_collective_basis(40, 3, Sector::symmetric);
  for (double lambda : {0.4005, 0.4323, 0.4339}) {
    const PureState psi = path.psi(lambda);
    const HermitianOperator d = path.drho_dlambda(lambda);
    const OptimalSolve o = solve_optimal(psi, d, b);
    const ComplexMatrix rho = psi.density().matrix();
    const ComplexMatrix g = -Complex(0.0, 1.0) * (o.hamiltonian.matrix() * rho - rho * o.hamiltonian.matrix());
    const ComplexMatrix r = d.matrix() - g;
    const double overlap = (g.array() * r.conjugate().array()).sum().real();
    EXPECT_LE(std::abs(overlap), 1e-10 * d.frobenius_norm() * d.frobenius_norm()) << lambda;
  }
}

}  // namespace
}  // namespace oph
