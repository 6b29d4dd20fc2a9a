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

#include "oph/operator_algebra.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "oph/errors.hpp"

namespace oph {
namespace {

constexpr Complex kI{0.0, 1.0};

void require_same_dim(Index a, Index b, const char* where) {
  if (a != b) {
    std::ostringstream os;
    os << where << ": dimension mismatch (" << a << " vs " << b << ")";
    throw InvalidInput(os.str());
  }
}

double max_hermiticity_defect(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

void check_sites(int sites, const Limits& limits) {
  if (sites < 1) throw InvalidInput("site count must be >= 1");
  if (sites > limits.max_sites) {
    throw ResourceLimit("site count " + std::to_string(sites) + " exceeds cap " + std::to_string(limits.max_sites));
  }
}

void check_basis_bytes(std::size_t count, Index dim, const Limits& limits) {
  const double bytes = static_cast<double>(count) * static_cast<double>(dim) * static_cast<double>(dim) * sizeof(Complex);
  if (bytes > static_cast<double>(limits.max_basis_bytes)) {
    throw ResourceLimit("dense basis of " + std::to_string(count) + " operators at dim " + std::to_string(dim) +
                        " exceeds the memory budget");
  }
}

SparseOperator to_sparse(const ComplexMatrix& m) {
  std::vector<Eigen::Triplet<Complex>> entries;
  for (Index j = 0; j < m.cols(); ++j) {
    for (Index i = 0; i < m.rows(); ++i) {
      if (m(i, j) != Complex{}) entries.emplace_back(i, j, m(i, j));
    }
  }
  SparseOperator s(m.rows(), m.cols());
  s.setFromTriplets(entries.begin(), entries.end());
  return s;
}

// Pauli product on chosen sites of an L-site register (identity elsewhere).
HermitianOperator site_product(int sites, std::initializer_list<std::pair<int, Pauli>> factors) {
  std::vector<Pauli> labels(static_cast<std::size_t>(sites), Pauli::I);
  for (auto [site, p] : factors) labels[static_cast<std::size_t>(site)] = p;
  return pauli_string(labels);
}

}  // namespace

// --- HermitianOperator ------------------------------------------------------

HermitianOperator::HermitianOperator(ComplexMatrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) throw InvalidInput("operator matrix must be square");
  if (m_.rows() == 0) throw InvalidInput("operator dimension must be positive");
  const double defect = max_hermiticity_defect(m_);
  if (defect > kHermiticityTol) {
    std::ostringstream os;
    os << "matrix is not Hermitian (max |A - A^dagger| = " << defect << ")";
    throw InvalidInput(os.str());
  }
}

HermitianOperator HermitianOperator::hermitian_part(const ComplexMatrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) throw InvalidInput("operator matrix must be square and non-empty");
  return HermitianOperator(ComplexMatrix(0.5 * (m + m.adjoint())), Unchecked{});
}

HermitianOperator HermitianOperator::zero(Index dim) {
  if (dim <= 0) throw InvalidInput("operator dimension must be positive");
  return HermitianOperator(ComplexMatrix::Zero(dim, dim), Unchecked{});
}

HermitianOperator HermitianOperator::identity(Index dim) {
  if (dim <= 0) throw InvalidInput("operator dimension must be positive");
  return HermitianOperator(ComplexMatrix::Identity(dim, dim), Unchecked{});
}

HermitianOperator HermitianOperator::projector(const ComplexVector& psi) {
  if (psi.size() == 0) throw InvalidInput("empty state vector");
  return HermitianOperator(ComplexMatrix(psi * psi.adjoint()), Unchecked{});
}

HermitianOperator HermitianOperator::operator+(const HermitianOperator& o) const {
  require_same_dim(dim(), o.dim(), "operator+");
  return HermitianOperator(ComplexMatrix(m_ + o.m_), Unchecked{});
}

HermitianOperator HermitianOperator::operator-(const HermitianOperator& o) const {
  require_same_dim(dim(), o.dim(), "operator-");
  return HermitianOperator(ComplexMatrix(m_ - o.m_), Unchecked{});
}

HermitianOperator HermitianOperator::operator*(double s) const {
  return HermitianOperator(ComplexMatrix(m_ * s), Unchecked{});
}

// --- PureState --------------------------------------------------------------

PureState::PureState(ComplexVector v) : v_(std::move(v)) {
  if (v_.size() == 0) throw InvalidInput("state dimension must be positive");
  const double n = v_.norm();
  if (std::abs(n - 1.0) > kNormTol) {
    std::ostringstream os;
    os << "state is not normalized (norm = " << n << ")";
    throw InvalidInput(os.str());
  }
}

PureState PureState::normalize(ComplexVector v) {
  const double n = v.norm();
  if (!(n > 0.0)) throw InvalidInput("cannot normalize the zero vector");
  v /= n;
  return PureState(std::move(v));
}

double PureState::expectation(const HermitianOperator& a) const {
  require_same_dim(dim(), a.dim(), "expectation");
  return v_.dot(a.matrix() * v_).real();
}

// --- Pauli strings ----------------------------------------------------------

Pauli parse_pauli(char c) {
  switch (c) {
    case 'I': case 'i': return Pauli::I;
    case 'X': case 'x': return Pauli::X;
    case 'Y': case 'y': return Pauli::Y;
    case 'Z': case 'z': return Pauli::Z;
    default: break;
  }
  throw InvalidInput(std::string("invalid Pauli label '") + c + "'");
}

char pauli_char(Pauli p) {
  static constexpr std::array<char, 4> kChars{'I', 'X', 'Y', 'Z'};
  return kChars[static_cast<std::size_t>(p)];
}

ComplexMatrix pauli_matrix(Pauli p) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  switch (p) {
    case Pauli::I: m(0, 0) = 1.0; m(1, 1) = 1.0; break;
    case Pauli::X: m(0, 1) = 1.0; m(1, 0) = 1.0; break;
    case Pauli::Y: m(0, 1) = -kI; m(1, 0) = kI; break;
    case Pauli::Z: m(0, 0) = 1.0; m(1, 1) = -1.0; break;
  }
  return m;
}

HermitianOperator pauli_string(std::span<const Pauli> sites) {
  const int n = static_cast<int>(sites.size());
  if (n < 1) throw InvalidInput("Pauli string needs at least one site");
  if (n > 30) throw ResourceLimit("Pauli string too long for a dense matrix");
  const Index dim = Index{1} << n;

  // Each string is a signed permutation: |s> -> phase(s) |s ^ flip>.
  Index flip = 0;
  for (int i = 0; i < n; ++i) {
    const Pauli p = sites[static_cast<std::size_t>(i)];
    if (p == Pauli::X || p == Pauli::Y) flip |= Index{1} << (n - 1 - i);
  }
  ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
  for (Index s = 0; s < dim; ++s) {
    Complex phase{1.0, 0.0};
    for (int i = 0; i < n; ++i) {
      const bool down = (s >> (n - 1 - i)) & 1;
      switch (sites[static_cast<std::size_t>(i)]) {
        case Pauli::I: case Pauli::X: break;
        case Pauli::Y: phase *= down ? -kI : kI; break;
        case Pauli::Z: if (down) phase = -phase; break;
      }
    }
    m(s ^ flip, s) = phase;
  }
  return HermitianOperator(std::move(m));
}

HermitianOperator pauli_string(std::string_view labels) {
  std::vector<Pauli> sites;
  sites.reserve(labels.size());
  for (char c : labels) sites.push_back(parse_pauli(c));
  return pauli_string(sites);
}

// --- Inner products and commutators -----------------------------------------

double hs_inner(const HermitianOperator& a, const HermitianOperator& b) {
  require_same_dim(a.dim(), b.dim(), "hs_inner");
  // Tr(AB) = sum_ij A_ij B_ji = sum_ij A_ij conj(B_ij) for Hermitian B.
  return (a.matrix().array() * b.matrix().conjugate().array()).sum().real();
}

HermitianOperator commutator_action(const HermitianOperator& h, const HermitianOperator& rho) {
  require_same_dim(h.dim(), rho.dim(), "commutator_action");
  const ComplexMatrix hr = h.matrix() * rho.matrix();
  // -i(H rho - rho H) = -i(hr - hr^dagger)
  ComplexMatrix out = -kI * (hr - hr.adjoint());
  return HermitianOperator(std::move(out));
}

std::vector<HermitianOperator> tangent_vectors(const OperatorBasis& basis, const HermitianOperator& rho) {
  require_same_dim(basis.dim(), rho.dim(), "tangent_vectors");
  std::vector<HermitianOperator> out;
  out.reserve(basis.size());
  for (std::size_t a = 0; a < basis.size(); ++a) {
    const ComplexMatrix lr = basis.sparse(a) * rho.matrix();
    out.push_back(HermitianOperator::hermitian_part(-kI * (lr - lr.adjoint())));
  }
  return out;
}

// --- OperatorBasis ----------------------------------------------------------

std::string_view to_string(BasisFamily f) {
  switch (f) {
    case BasisFamily::pauli_string: return "pauli-string";
    case BasisFamily::nearest_neighbor: return "nearest-neighbor";
    case BasisFamily::collective_w1: return "collective-w1";
    case BasisFamily::collective_w2: return "collective-w2";
    case BasisFamily::collective_w3: return "collective-w3";
    case BasisFamily::custom: return "custom";
  }
  return "custom";
}

OperatorBasis::OperatorBasis(std::vector<std::string> labels, std::vector<HermitianOperator> ops, BasisFamily family)
    : labels_(std::move(labels)), ops_(std::move(ops)), family_(family) {
  if (labels_.size() != ops_.size()) throw InvalidInput("basis: label count differs from operator count");
  if (!ops_.empty()) dim_ = ops_.front().dim();
  sparse_.reserve(ops_.size());
  for (std::size_t a = 0; a < ops_.size(); ++a) {
    if (ops_[a].dim() != dim_) throw InvalidInput("basis: element '" + labels_[a] + "' has a different dimension");
    if (ops_[a].frobenius_norm() <= 1e-12) throw InvalidInput("basis: element '" + labels_[a] + "' is the zero operator");
    sparse_.push_back(to_sparse(ops_[a].matrix()));
  }
  if (family_ == BasisFamily::pauli_string) {
    for (std::size_t a = 0; a < ops_.size(); ++a) {
      for (std::size_t b = a + 1; b < ops_.size(); ++b) {
        if (std::abs(hs_inner(ops_[a], ops_[b])) > 1e-9) {
          throw InvalidInput("basis: Pauli-string elements '" + labels_[a] + "' and '" + labels_[b] + "' are not orthogonal");
        }
      }
    }
  }
}

ComplexVector OperatorBasis::apply(std::size_t a, const ComplexVector& psi) const {
  require_same_dim(dim_, psi.size(), "OperatorBasis::apply");
  return sparse_[a] * psi;
}

HermitianOperator OperatorBasis::combine(const RealVector& coeffs) const {
  if (static_cast<std::size_t>(coeffs.size()) != size()) throw InvalidInput("basis: coefficient count mismatch");
  if (empty()) throw InvalidInput("basis: cannot combine an empty basis");
  ComplexMatrix h = ComplexMatrix::Zero(dim_, dim_);
  for (std::size_t a = 0; a < size(); ++a) {
    const double c = coeffs[static_cast<Index>(a)];
    if (c == 0.0) continue;
    for (Index r = 0; r < sparse_[a].outerSize(); ++r) {
      for (SparseOperator::InnerIterator it(sparse_[a], r); it; ++it) h(it.row(), it.col()) += c * it.value();
    }
  }
  return HermitianOperator::hermitian_part(h);
}

std::size_t OperatorBasis::find(std::string_view label) const {
  const auto it = std::find(labels_.begin(), labels_.end(), label);
  return static_cast<std::size_t>(it - labels_.begin());
}

// --- Basis builders ---------------------------------------------------------

OperatorBasis build_pauli_basis(int sites, bool include_identity, const Limits& limits) {
  check_sites(sites, limits);
  const std::size_t count = std::size_t{1} << (2 * sites);
  check_basis_bytes(count, Index{1} << sites, limits);
  std::vector<std::string> labels;
  std::vector<HermitianOperator> ops;
  std::vector<Pauli> word(static_cast<std::size_t>(sites));
  for (std::size_t code = include_identity ? 0 : 1; code < count; ++code) {
    std::string label;
    for (int i = 0; i < sites; ++i) {
      word[static_cast<std::size_t>(i)] = static_cast<Pauli>((code >> (2 * (sites - 1 - i))) & 3);
      label.push_back(pauli_char(word[static_cast<std::size_t>(i)]));
    }
    labels.push_back(std::move(label));
    ops.push_back(pauli_string(word));
  }
  return OperatorBasis(std::move(labels), std::move(ops), BasisFamily::pauli_string);
}

OperatorBasis build_nearest_neighbor_basis(int sites, const Limits& limits) {
  if (sites < 2) throw InvalidInput("nearest-neighbor basis needs L >= 2");
  check_sites(sites, limits);
  check_basis_bytes(static_cast<std::size_t>(12 * sites), Index{1} << sites, limits);
  static constexpr std::array<Pauli, 3> kAxes{Pauli::X, Pauli::Y, Pauli::Z};

  std::vector<std::string> labels;
  std::vector<HermitianOperator> ops;
  auto add_unique = [&](std::string label, HermitianOperator op) {
    for (const auto& existing : ops) {
      if (existing.matrix() == op.matrix()) return;
    }
    labels.push_back(std::move(label));
    ops.push_back(std::move(op));
  };
  for (int i = 0; i < sites; ++i) {
    for (Pauli mu : kAxes) add_unique(std::string(1, pauli_char(mu)) + std::to_string(i), site_product(sites, {{i, mu}}));
  }
  for (int i = 0; i < sites; ++i) {
    const int j = (i + 1) % sites;
    for (Pauli mu : kAxes) {
      for (Pauli nu : kAxes) {
        std::string label = std::string(1, pauli_char(mu)) + std::to_string(i) + pauli_char(nu) + std::to_string(j);
        add_unique(std::move(label), site_product(sites, {{i, mu}, {j, nu}}));
      }
    }
  }
  return OperatorBasis(std::move(labels), std::move(ops), BasisFamily::nearest_neighbor);
}

CollectiveSpin collective_spin(int spins, Sector sector, const Limits& limits) {
  if (spins < 1) throw InvalidInput("collective operators need N >= 1");
  CollectiveSpin out;
  if (sector == Sector::symmetric) {
    if (spins > limits.max_collective_spins) {
      throw ResourceLimit("spin count " + std::to_string(spins) + " exceeds symmetric-sector cap " +
                          std::to_string(limits.max_collective_spins));
    }
    const Index d = spins + 1;
    const double s = 0.5 * spins;
    ComplexMatrix raise = ComplexMatrix::Zero(d, d);
    ComplexMatrix z = ComplexMatrix::Zero(d, d);
    for (Index k = 0; k < d; ++k) {
      const double m = s - static_cast<double>(k);
      z(k, k) = 2.0 * m;
      // S+ |s, m> = sqrt(s(s+1) - m(m+1)) |s, m+1>, and m+1 sits at index k-1.
      if (k > 0) raise(k - 1, k) = std::sqrt(s * (s + 1.0) - m * (m + 1.0));
    }
    out.x = raise + raise.adjoint();           // 2 S_x
    out.y = -kI * (raise - raise.adjoint());   // 2 S_y
    out.z = std::move(z);
    return out;
  }
  check_sites(spins, limits);
  const Index d = Index{1} << spins;
  out.x = ComplexMatrix::Zero(d, d);
  out.y = ComplexMatrix::Zero(d, d);
  out.z = ComplexMatrix::Zero(d, d);
  for (int i = 0; i < spins; ++i) {
    out.x += site_product(spins, {{i, Pauli::X}}).matrix();
    out.y += site_product(spins, {{i, Pauli::Y}}).matrix();
    out.z += site_product(spins, {{i, Pauli::Z}}).matrix();
  }
  return out;
}

OperatorBasis build_collective_basis(int spins, int weight, Sector sector, const Limits& limits) {
  if (weight < 1 || weight > 3) throw InvalidInput("collective basis weight must be 1, 2 or 3");
  if (spins < 2) throw InvalidInput("collective basis needs N >= 2");
  const CollectiveSpin sigma = collective_spin(spins, sector, limits);
  const Index d = sigma.x.rows();
  check_basis_bytes(weight == 1 ? 1 : weight == 2 ? 3 : 16, d, limits);

  auto axis = [&](char c) -> const ComplexMatrix& {
    return c == 'x' ? sigma.x : c == 'y' ? sigma.y : sigma.z;
  };
  auto product = [&](std::string_view axes) {
    ComplexMatrix p = ComplexMatrix::Identity(d, d);
    for (char c : axes) p = p * axis(c);
    return p;
  };
  std::vector<std::string> labels;
  std::vector<HermitianOperator> ops;
  // Sigma_{mu...} = (A + A^dagger)/2, Gamma_{mu...} = i(A - A^dagger)/2.
  auto sym = [&](std::string_view axes) {
    const ComplexMatrix p = product(axes);
    labels.push_back("S" + std::string(axes));
    ops.push_back(HermitianOperator::hermitian_part(0.5 * (p + p.adjoint())));
  };
  auto anti = [&](std::string_view axes) {
    const ComplexMatrix p = product(axes);
    labels.push_back("G" + std::string(axes));
    ops.push_back(HermitianOperator::hermitian_part(0.5 * kI * (p - p.adjoint())));
  };

  sym("y");
  if (weight >= 2) {
    sym("xy");
    sym("yz");
  }
  if (weight >= 3) {
    sym("yyy"); sym("xyx"); sym("zyz"); sym("xxy"); sym("yzz");
    anti("xxy"); anti("yzz");
    sym("xyz"); sym("xzy"); sym("yxz");
    anti("xyz"); anti("xzy"); anti("yxz");
  }
  const BasisFamily family = weight == 1   ? BasisFamily::collective_w1
                             : weight == 2 ? BasisFamily::collective_w2
                                           : BasisFamily::collective_w3;
  return OperatorBasis(std::move(labels), std::move(ops), family);
}

}  // namespace oph
