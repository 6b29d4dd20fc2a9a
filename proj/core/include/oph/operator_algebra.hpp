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

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace oph {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using SparseOperator = Eigen::SparseMatrix<Complex, Eigen::RowMajor>;
using Index = Eigen::Index;

/// Per-entry absolute tolerance of the Hermiticity check.
inline constexpr double kHermiticityTol = 1e-12;
/// Tolerance on the Euclidean norm of a PureState.
inline constexpr double kNormTol = 1e-10;

/// Size caps for dense construction. Defaults keep every object desk-sized.
struct Limits {
  int max_sites = 12;                 // full tensor-product space, 2^L
  int max_collective_spins = 200;     // symmetric sector, N + 1
  std::size_t max_basis_bytes = std::size_t{2} << 30;  // dense storage of one basis
};

/// Dense d x d Hermitian matrix. Immutable once built.
class HermitianOperator {
 public:
  /// Validates Hermiticity to kHermiticityTol per entry; throws InvalidInput.
  explicit HermitianOperator(ComplexMatrix m);

  /// (m + m^dagger) / 2 without validation, for numerically produced matrices.
  static HermitianOperator hermitian_part(const ComplexMatrix& m);
  static HermitianOperator zero(Index dim);
  static HermitianOperator identity(Index dim);
  /// |psi><psi| for an arbitrary (not necessarily normalized) vector.
  static HermitianOperator projector(const ComplexVector& psi);

  Index dim() const { return m_.rows(); }
  const ComplexMatrix& matrix() const { return m_; }
  double frobenius_norm() const { return m_.norm(); }
  double trace() const { return m_.trace().real(); }

  HermitianOperator operator+(const HermitianOperator& o) const;
  HermitianOperator operator-(const HermitianOperator& o) const;
  HermitianOperator operator*(double s) const;

 private:
  struct Unchecked {};
  HermitianOperator(ComplexMatrix m, Unchecked) : m_(std::move(m)) {}
  ComplexMatrix m_;
};

/// Unit-norm state vector.
class PureState {
 public:
  /// Throws InvalidInput unless | ||v|| - 1 | <= kNormTol.
  explicit PureState(ComplexVector v);
  /// Rescales v to unit norm; throws InvalidInput for the zero vector.
  static PureState normalize(ComplexVector v);

  Index dim() const { return v_.size(); }
  const ComplexVector& amplitudes() const { return v_; }
  HermitianOperator density() const { return HermitianOperator::projector(v_); }
  /// <psi|A|psi>, real for Hermitian A.
  double expectation(const HermitianOperator& a) const;

 private:
  ComplexVector v_;
};

enum class Pauli : std::uint8_t { I, X, Y, Z };

/// Parses one of 'I', 'X', 'Y', 'Z' (upper or lower case).
Pauli parse_pauli(char c);
char pauli_char(Pauli p);
/// Unnormalized 2x2 Pauli matrix.
ComplexMatrix pauli_matrix(Pauli p);

/// Tensor product of single-site Pauli matrices. Site 0 is the leftmost
/// Kronecker factor, i.e. the most significant bit of the basis index, and
/// bit value 0 is spin up (sigma_z = +1).
HermitianOperator pauli_string(std::span<const Pauli> sites);
/// Same, from a label string such as "XIZY". Throws InvalidInput on bad labels.
HermitianOperator pauli_string(std::string_view labels);

/// Tr(AB). The imaginary residue of Hermitian inputs is discarded.
double hs_inner(const HermitianOperator& a, const HermitianOperator& b);

/// -i[H, rho].
HermitianOperator commutator_action(const HermitianOperator& h, const HermitianOperator& rho);

enum class BasisFamily { pauli_string, nearest_neighbor, collective_w1, collective_w2, collective_w3, custom };
std::string_view to_string(BasisFamily f);

/// Ordered, labeled set of allowed interactions sharing one Hilbert space.
class OperatorBasis {
 public:
  OperatorBasis(std::vector<std::string> labels, std::vector<HermitianOperator> ops, BasisFamily family);

  std::size_t size() const { return ops_.size(); }
  bool empty() const { return ops_.empty(); }
  Index dim() const { return dim_; }
  BasisFamily family() const { return family_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(std::size_t a) const { return labels_[a]; }
  const HermitianOperator& op(std::size_t a) const { return ops_[a]; }
  const std::vector<HermitianOperator>& ops() const { return ops_; }

  /// Compressed copy of element a (exact zeros dropped) used for fast products.
  const SparseOperator& sparse(std::size_t a) const { return sparse_[a]; }
  /// L_a |psi>.
  ComplexVector apply(std::size_t a, const ComplexVector& psi) const;
  /// sum_a c_a L_a.
  HermitianOperator combine(const RealVector& coeffs) const;
  /// Position of a label, or size() when absent.
  std::size_t find(std::string_view label) const;

 private:
  std::vector<std::string> labels_;
  std::vector<HermitianOperator> ops_;
  std::vector<SparseOperator> sparse_;
  BasisFamily family_;
  Index dim_ = 0;
};

/// l_a = -i[L_a, rho] for every basis element, in basis order.
std::vector<HermitianOperator> tangent_vectors(const OperatorBasis& basis, const HermitianOperator& rho);

/// All 4^L Pauli strings (identity first when included).
OperatorBasis build_pauli_basis(int sites, bool include_identity = true, const Limits& limits = {});

/// {sigma_{i,mu}} U {sigma_{i,mu} sigma_{i+1,nu}} with periodic wrap. 12L elements
/// for L >= 3; for L = 2 the coinciding bond operators are deduplicated.
OperatorBasis build_nearest_neighbor_basis(int sites, const Limits& limits = {});

enum class Sector { full, symmetric };

/// Collective operators Sigma_mu = sum_i sigma_{i,mu} (= 2 S_mu).
struct CollectiveSpin {
  ComplexMatrix x, y, z;
};
/// In the symmetric sector the basis is |N/2, m> ordered m = N/2, ..., -N/2.
CollectiveSpin collective_spin(int spins, Sector sector, const Limits& limits = {});

/// Weight-w permutation-invariant interactions: w=1 {Sy}; w=2 adds {Sxy, Syz};
/// w=3 adds 13 symmetrized (S...) and anti-symmetrized (G...) triple products.
OperatorBasis build_collective_basis(int spins, int weight, Sector sector, const Limits& limits = {});

}  // namespace oph
