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
#include <set>

#include "oph/errors.hpp"
#include "oph/operator_algebra.hpp"
#include "test_util.hpp"

namespace oph {
namespace {

using testing::random_hermitian;
using testing::random_state;

constexpr Complex kI{0.0, 1.0};

// Brute-force Kronecker product by scalar indexing, most significant factor first.
ComplexMatrix kron_oracle(const std::vector<ComplexMatrix>& factors) {
  Index d = 1;
  for (const auto& f : factors) d *= f.rows();
  ComplexMatrix out(d, d);
  for (Index r = 0; r < d; ++r) {
    for (Index c = 0; c < d; ++c) {
      Complex v = 1.0;
      Index rr = r, cc = c;
      for (auto it = factors.rbegin(); it != factors.rend(); ++it) {
        v *= (*it)(rr % 2, cc % 2);
        rr /= 2;
        cc /= 2;
      }
      out(r, c) = v;
    }
  }
  return out;
}

ComplexMatrix site_op(int sites, int i, Pauli p) {
  std::vector<ComplexMatrix> f(static_cast<std::size_t>(sites), pauli_matrix(Pauli::I));
  f[static_cast<std::size_t>(i)] = pauli_matrix(p);
  return kron_oracle(f);
}

// Permutation operator exchanging sites i and j.
ComplexMatrix swap_op(int sites, int i, int j) {
  const Index d = Index{1} << sites;
  ComplexMatrix p = ComplexMatrix::Zero(d, d);
  for (Index s = 0; s < d; ++s) {
    const int bi = (s >> (sites - 1 - i)) & 1, bj = (s >> (sites - 1 - j)) & 1;
    Index t = s;
    if (bi != bj) t ^= (Index{1} << (sites - 1 - i)) | (Index{1} << (sites - 1 - j));
    p(t, s) = 1.0;
  }
  return p;
}

TEST(PauliString, SingleZIsDiagonal) {
  const HermitianOperator z = pauli_string("Z");
  EXPECT_EQ(z.dim(), 2);
  EXPECT_EQ(z.matrix()(0, 0), Complex(1.0));
  EXPECT_EQ(z.matrix()(1, 1), Complex(-1.0));
  EXPECT_EQ(z.matrix()(0, 1), Complex(0.0));
}

TEST(PauliString, AllIdentityIsIdentity) {
  for (int l = 1; l <= 5; ++l) {
    const HermitianOperator id = pauli_string(std::string(static_cast<std::size_t>(l), 'I'));
    EXPECT_TRUE(id.matrix().isIdentity(0.0)) << "L=" << l;
  }
}

TEST(PauliString, XYMatchesScalarKronecker) {
  const ComplexMatrix oracle = kron_oracle({pauli_matrix(Pauli::X), pauli_matrix(Pauli::Y)});
  EXPECT_EQ(pauli_string("XY").matrix(), oracle);
}

TEST(PauliString, RandomStringsMatchScalarKronecker) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> pick(0, 3);
  for (int trial = 0; trial < 40; ++trial) {
    const int l = 1 + trial % 4;
    std::string labels;
    std::vector<ComplexMatrix> f;
    for (int i = 0; i < l; ++i) {
      const Pauli p = static_cast<Pauli>(pick(rng));
      labels.push_back(pauli_char(p));
      f.push_back(pauli_matrix(p));
    }
    EXPECT_EQ(pauli_string(labels).matrix(), kron_oracle(f)) << labels;
  }
}

TEST(PauliString, RejectsBadLabel) {
  EXPECT_THROW(pauli_string("XQ"), InvalidInput);
  EXPECT_THROW(pauli_string(""), InvalidInput);
}

TEST(PauliString, OrthogonalWithNormTwoToTheL) {
  const OperatorBasis b = build_pauli_basis(3);
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::size_t> pick(0, b.size() - 1);
  for (int k = 0; k < 300; ++k) {
    const std::size_t a = pick(rng), c = pick(rng);
    EXPECT_NEAR(hs_inner(b.op(a), b.op(c)), a == c ? 8.0 : 0.0, 1e-12);
  }
}

TEST(HsInner, PauliValues) {
  EXPECT_DOUBLE_EQ(hs_inner(pauli_string("X"), pauli_string("X")), 2.0);
  EXPECT_DOUBLE_EQ(hs_inner(pauli_string("X"), pauli_string("Y")), 0.0);
}

TEST(HsInner, SelfProductIsSquaredFrobenius) {
  std::mt19937_64 rng(5);
  for (Index d : {2, 3, 7, 16}) {
    const HermitianOperator a = random_hermitian(d, rng);
    double sum = 0.0;
    for (Index i = 0; i < d; ++i)
      for (Index j = 0; j < d; ++j) sum += std::norm(a.matrix()(i, j));
    EXPECT_NEAR(hs_inner(a, a), sum, 1e-10 * sum);
  }
}

TEST(HsInner, DimensionMismatchRejected) {
  EXPECT_THROW(hs_inner(pauli_string("X"), pauli_string("XX")), InvalidInput);
}

TEST(HermitianOperator, RejectsNonHermitian) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 1) = 1.0;
  EXPECT_THROW(HermitianOperator{m}, InvalidInput);
  m(1, 0) = 1.0 + 1e-11;
  EXPECT_THROW(HermitianOperator{m}, InvalidInput);
  m(1, 0) = 1.0 + 1e-13;
  EXPECT_NO_THROW(HermitianOperator{m});
}

TEST(PureState, NormInvariant) {
  ComplexVector v(2);
  v << 1.0, 0.0;
  EXPECT_NO_THROW(PureState{v});
  v << 1.0, 1e-4;
  EXPECT_THROW(PureState{v}, InvalidInput);
  EXPECT_THROW(PureState::normalize(ComplexVector::Zero(3)), InvalidInput);
}

TEST(CommutatorAction, SelfCommutesToZero) {
  std::mt19937_64 rng(1);
  const HermitianOperator rho = random_state(4, rng).density();
  EXPECT_LT(commutator_action(rho, rho).frobenius_norm(), 1e-14);
}

TEST(CommutatorAction, DiagonalOperatorsCommute) {
  const HermitianOperator rho = HermitianOperator::hermitian_part(0.5 * (ComplexMatrix::Identity(2, 2) + pauli_matrix(Pauli::Z)));
  EXPECT_EQ(commutator_action(pauli_string("Z") * 3.7, rho).frobenius_norm(), 0.0);
}

TEST(CommutatorAction, SingleSpinDerivativeAtZero) {
  // rho(t) = (sin wt X + cos wt Y + I)/2; d rho/dt at 0 = (w/2) X.
  const double w = 1.7;
  const HermitianOperator rho =
      HermitianOperator::hermitian_part(0.5 * (ComplexMatrix::Identity(2, 2) + pauli_matrix(Pauli::Y)));
  const HermitianOperator h = pauli_string("Z") * (-w / 2.0);
  const ComplexMatrix expected = 0.5 * w * pauli_matrix(Pauli::X);
  EXPECT_LT((commutator_action(h, rho).matrix() - expected).norm(), 1e-14);
}

TEST(CommutatorAction, OutputIsTraceless) {
  std::mt19937_64 rng(9);
  for (int k = 0; k < 20; ++k) {
    const HermitianOperator h = random_hermitian(6, rng);
    const HermitianOperator r = random_hermitian(6, rng);
    EXPECT_LT(std::abs(commutator_action(h, r).trace()), 1e-10);
  }
}

TEST(TangentVectors, IdentityGivesZero) {
  std::mt19937_64 rng(2);
  const OperatorBasis b = build_pauli_basis(2);
  const auto l = tangent_vectors(b, random_state(4, rng).density());
  EXPECT_EQ(b.label(0), "II");
  EXPECT_LT(l[0].frobenius_norm(), 1e-15);
}

TEST(TangentVectors, PolarizedSpin) {
  const OperatorBasis b = build_pauli_basis(1, false);
  const HermitianOperator rho =
      HermitianOperator::hermitian_part(0.5 * (ComplexMatrix::Identity(2, 2) + pauli_matrix(Pauli::Z)));
  const auto l = tangent_vectors(b, rho);
  ASSERT_EQ(l.size(), 3u);
  EXPECT_GT(l[0].frobenius_norm(), 0.5);
  EXPECT_GT(l[1].frobenius_norm(), 0.5);
  EXPECT_NEAR(hs_inner(l[0], l[1]), 0.0, 1e-15);
  EXPECT_EQ(l[2].frobenius_norm(), 0.0);
}

TEST(TangentVectors, MaximallyMixedGivesZero) {
  const OperatorBasis b = build_nearest_neighbor_basis(3);
  const HermitianOperator mixed = HermitianOperator::identity(8) * (1.0 / 8.0);
  for (const auto& l : tangent_vectors(b, mixed)) EXPECT_EQ(l.frobenius_norm(), 0.0);
}

TEST(NearestNeighborBasis, TwoSitesDeduplicated) {
  // Independent enumeration: 6 single-site + 18 ordered bond operators, dedup by matrix.
  std::vector<ComplexMatrix> raw;
  const Pauli axes[] = {Pauli::X, Pauli::Y, Pauli::Z};
  for (int i = 0; i < 2; ++i)
    for (Pauli m : axes) raw.push_back(site_op(2, i, m));
  for (int i = 0; i < 2; ++i)
    for (Pauli m : axes)
      for (Pauli n : axes) raw.push_back(site_op(2, i, m) * site_op(2, (i + 1) % 2, n));
  std::vector<ComplexMatrix> distinct;
  for (const auto& m : raw) {
    bool seen = false;
    for (const auto& d : distinct) seen = seen || d == m;
    if (!seen) distinct.push_back(m);
  }
  const OperatorBasis b = build_nearest_neighbor_basis(2);
  EXPECT_EQ(b.size(), distinct.size());
  EXPECT_EQ(b.size(), 15u);
  for (std::size_t a = 0; a < b.size(); ++a)
    for (std::size_t c = a + 1; c < b.size(); ++c) EXPECT_NE(b.op(a).matrix(), b.op(c).matrix());
}

TEST(NearestNeighborBasis, FourSitesHermitianTraceless) {
  const OperatorBasis b = build_nearest_neighbor_basis(4);
  ASSERT_EQ(b.size(), 48u);
  for (const auto& op : b.ops()) {
    EXPECT_LT((op.matrix() - op.matrix().adjoint()).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_EQ(op.trace(), 0.0);
  }
}

TEST(NearestNeighborBasis, ContainsFirstZOnce) {
  for (int l : {2, 3, 4, 6}) {
    const OperatorBasis b = build_nearest_neighbor_basis(l);
    const ComplexMatrix z0 = site_op(l, 0, Pauli::Z);
    int count = 0;
    for (const auto& op : b.ops()) count += op.matrix() == z0 ? 1 : 0;
    EXPECT_EQ(count, 1) << "L=" << l;
    EXPECT_EQ(b.size(), l == 2 ? 15u : static_cast<std::size_t>(12 * l));
  }
}

TEST(NearestNeighborBasis, CapEnforced) {
  EXPECT_THROW(build_nearest_neighbor_basis(13), ResourceLimit);
  Limits small;
  small.max_sites = 4;
  EXPECT_THROW(build_nearest_neighbor_basis(5, small), ResourceLimit);
  EXPECT_THROW(build_nearest_neighbor_basis(1), InvalidInput);
}

TEST(CollectiveBasis, Sizes) {
  EXPECT_EQ(build_collective_basis(6, 1, Sector::symmetric).size(), 1u);
  EXPECT_EQ(build_collective_basis(6, 2, Sector::symmetric).size(), 3u);
  EXPECT_EQ(build_collective_basis(6, 3, Sector::symmetric).size(), 16u);
  EXPECT_THROW(build_collective_basis(6, 4, Sector::symmetric), InvalidInput);
  EXPECT_THROW(build_collective_basis(6, 0, Sector::symmetric), InvalidInput);
  EXPECT_THROW(build_collective_basis(201, 1, Sector::symmetric), ResourceLimit);
}

TEST(CollectiveBasis, SpinOneSigmaY) {
  // Spin-1 ladder in the basis m = 1, 0, -1: S+ = sqrt(2) (|1><0| + |0><-1|).
  ComplexMatrix sp = ComplexMatrix::Zero(3, 3);
  sp(0, 1) = sp(1, 2) = std::sqrt(2.0);
  const ComplexMatrix sy = (sp - sp.adjoint()) / (2.0 * kI);
  const OperatorBasis b = build_collective_basis(2, 1, Sector::symmetric);
  EXPECT_LT((b.op(0).matrix() - 2.0 * sy).norm(), 1e-14);
}

TEST(CollectiveBasis, FullSectorMatchesSiteSums) {
  const int n = 3;
  const CollectiveSpin s = collective_spin(n, Sector::full);
  ComplexMatrix y = ComplexMatrix::Zero(8, 8);
  for (int i = 0; i < n; ++i) y += site_op(n, i, Pauli::Y);
  EXPECT_LT((s.y - y).norm(), 1e-14);
}

TEST(CollectiveBasis, PermutationInvariantOnFullSpace) {
  for (int n = 2; n <= 6; ++n) {
    const OperatorBasis b = build_collective_basis(n, n >= 3 ? 3 : 2, Sector::full);
    for (int i = 0; i + 1 < n; ++i) {
      const ComplexMatrix p = swap_op(n, i, i + 1);
      for (const auto& op : b.ops()) EXPECT_LT((p * op.matrix() - op.matrix() * p).norm(), 1e-9) << "N=" << n;
    }
  }
}

TEST(CollectiveBasis, WeightThreeElementsHermitianNonzero) {
  const OperatorBasis b = build_collective_basis(5, 3, Sector::symmetric);
  std::set<std::string> labels(b.labels().begin(), b.labels().end());
  EXPECT_EQ(labels.size(), 16u);
  for (const auto& op : b.ops()) EXPECT_GT(op.frobenius_norm(), 1e-6);
}

TEST(OperatorBasis, InvariantsChecked) {
  EXPECT_THROW(OperatorBasis({"a", "b"}, {pauli_string("X")}, BasisFamily::custom), InvalidInput);
  EXPECT_THROW(OperatorBasis({"a", "b"}, {pauli_string("X"), pauli_string("XX")}, BasisFamily::custom), InvalidInput);
  EXPECT_THROW(OperatorBasis({"z"}, {HermitianOperator::zero(2)}, BasisFamily::custom), InvalidInput);
  EXPECT_THROW(OperatorBasis({"x", "x2"}, {pauli_string("X"), pauli_string("X") * 2.0}, BasisFamily::pauli_string),
               InvalidInput);
}

TEST(OperatorBasis, CombineAndApply) {
  std::mt19937_64 rng(4);
  const OperatorBasis b = build_nearest_neighbor_basis(3);
  RealVector c = RealVector::Random(static_cast<Index>(b.size()));
  ComplexMatrix h = ComplexMatrix::Zero(8, 8);
  for (std::size_t a = 0; a < b.size(); ++a) h += c[static_cast<Index>(a)] * b.op(a).matrix();
  EXPECT_LT((b.combine(c).matrix() - h).norm(), 1e-13);
  const PureState psi = random_state(8, rng);
  EXPECT_LT((b.apply(5, psi.amplitudes()) - b.op(5).matrix() * psi.amplitudes()).norm(), 1e-14);
  EXPECT_EQ(b.find("Z0"), 2u);
  EXPECT_EQ(b.find("nope"), b.size());
}

}  // namespace
}  // namespace oph
