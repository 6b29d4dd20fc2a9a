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

#include "oph/counterdiabatic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "oph/errors.hpp"
#include "oph/linalg.hpp"

namespace oph {
namespace {

constexpr Complex kI{0.0, 1.0};

void require_same(Index a, Index b, const char* where) {
  if (a != b) throw InvalidInput(std::string(where) + ": dimension mismatch");
}

// Column k holds the flattened Hermitian matrix i[P_k, H].
ComplexMatrix generated_directions(const OperatorBasis& basis, const ComplexMatrix& h) {
  const Index d = h.rows();
  ComplexMatrix y(d * d, static_cast<Index>(basis.size()));
  for (std::size_t k = 0; k < basis.size(); ++k) {
    const ComplexMatrix ph = basis.sparse(k) * h;
    const ComplexMatrix c = kI * (ph - ph.adjoint());  // i[P, H] with (PH)^dagger = HP
    y.col(static_cast<Index>(k)) = Eigen::Map<const ComplexVector>(c.data(), d * d);
  }
  return y;
}

CouplingVector least_squares(const ComplexMatrix& y, const ComplexVector& target, double tol_rel) {
  // minimize || target + Y c ||^2
  const RealMatrix g = (y.adjoint() * y).real();
  const RealVector r = -(y.adjoint() * target).real();
  const SymmetricEigen eig = symmetric_eigen_desc(0.5 * (g + g.transpose()));
  const SpectralSolve s = spectral_solve(eig, r, tol_rel);
  CouplingVector out;
  out.values = s.x;
  out.rank = s.rank;
  out.kernel_dim = static_cast<int>(g.rows()) - s.rank;
  out.near_cutoff = s.near_cutoff;
  out.degenerate = s.degenerate;
  out.residual = (target + y * s.x).norm();
  return out;
}

}  // namespace

AdiabaticFrame make_frame(const HermitianOperator& h, const HermitianOperator& dh) {
  require_same(h.dim(), dh.dim(), "make_frame");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h.matrix());
  if (es.info() != Eigen::Success) throw Error("Hermitian eigensolver did not converge");
  AdiabaticFrame f{h, dh, es.eigenvalues(), {}, 0.0};
  f.projectors.reserve(static_cast<std::size_t>(h.dim()));
  for (Index i = 0; i < h.dim(); ++i) f.projectors.push_back(HermitianOperator::projector(es.eigenvectors().col(i)));
  f.min_gap = std::numeric_limits<double>::infinity();
  for (Index i = 1; i < h.dim(); ++i) f.min_gap = std::min(f.min_gap, f.energies[i] - f.energies[i - 1]);
  return f;
}

double cd_cost(const HermitianOperator& h, const HermitianOperator& dh_dt, const HermitianOperator& a) {
  require_same(h.dim(), dh_dt.dim(), "cd_cost");
  require_same(h.dim(), a.dim(), "cd_cost");
  const ComplexMatrix ah = a.matrix() * h.matrix();
  // Tr(X^2) = ||X||_F^2 for Hermitian X
  return (dh_dt.matrix() + kI * (ah - ah.adjoint())).squaredNorm();
}

CouplingVector minimize_cd(const HermitianOperator& h, const HermitianOperator& dh_dt, const OperatorBasis& basis,
                           double tol_rel) {
  require_same(h.dim(), dh_dt.dim(), "minimize_cd");
  if (!basis.empty()) require_same(h.dim(), basis.dim(), "minimize_cd");
  const Index d = h.dim();
  const ComplexMatrix y = generated_directions(basis, h.matrix());
  const ComplexVector target = Eigen::Map<const ComplexVector>(dh_dt.matrix().data(), d * d);
  CouplingVector out = least_squares(y, target, tol_rel);
  out.labels = basis.labels();
  return out;
}

SpEquivalenceReport sp_equivalence_check(const HermitianOperator& h, const HermitianOperator& dh_dt,
                                         const OperatorBasis& basis, double tol, double tol_rel) {
  SpEquivalenceReport rep;
  rep.direct = minimize_cd(h, dh_dt, basis, tol_rel).values;
  const AdiabaticFrame f = make_frame(h, dh_dt);
  const double scale = std::max(1.0, f.energies.cwiseAbs().maxCoeff());
  if (h.dim() > 1 && f.min_gap < 1e-8 * scale) {
    rep.degenerate_spectrum = true;
    return rep;
  }
  const Index d = h.dim();
  const std::size_t levels = f.projectors.size();
  const ComplexMatrix& dm = dh_dt.matrix();

  // sum_i E_i d rho_i with d rho_i = sum_{j != i} (P_j D P_i + P_i D P_j) / (E_i - E_j)
  ComplexMatrix y0 = ComplexMatrix::Zero(d, d);
  for (std::size_t i = 0; i < levels; ++i) {
    const ComplexMatrix& pi = f.projectors[i].matrix();
    ComplexMatrix drho = ComplexMatrix::Zero(d, d);
    for (std::size_t j = 0; j < levels; ++j) {
      if (j == i) continue;
      const ComplexMatrix& pj = f.projectors[j].matrix();
      drho += (pj * dm * pi + pi * dm * pj) / (f.energies[static_cast<Index>(i)] - f.energies[static_cast<Index>(j)]);
    }
    y0 += f.energies[static_cast<Index>(i)] * drho;
  }
  ComplexMatrix y(d * d, static_cast<Index>(basis.size()));
  for (std::size_t k = 0; k < basis.size(); ++k) {
    const ComplexMatrix& p = basis.op(k).matrix();
    ComplexMatrix col = ComplexMatrix::Zero(d, d);
    for (std::size_t i = 0; i < levels; ++i) {
      const ComplexMatrix& pi = f.projectors[i].matrix();
      col += f.energies[static_cast<Index>(i)] * kI * (p * pi - pi * p);
    }
    y.col(static_cast<Index>(k)) = Eigen::Map<const ComplexVector>(col.data(), d * d);
  }
  rep.resummed = least_squares(y, Eigen::Map<const ComplexVector>(y0.data(), d * d), tol_rel).values;
  rep.max_difference = rep.direct.size() == 0 ? 0.0 : (rep.direct - rep.resummed).cwiseAbs().maxCoeff();
  rep.agree = rep.max_difference <= tol;
  return rep;
}

AdiabaticModel ising_model(int sites, const Limits& limits) {
  auto dh = std::make_shared<HermitianOperator>(ising_dh_dlambda(sites, limits));
  return AdiabaticModel{[sites, limits](double l) { return ising_hamiltonian(sites, l, limits); },
                        [dh](double) { return *dh; }};
}

AdiabaticModel pspin_model(int spins, int p, const Limits& limits) {
  auto dh = std::make_shared<HermitianOperator>(pspin_dh_dlambda(spins, p, Sector::symmetric, limits));
  return AdiabaticModel{
      [spins, p, limits](double l) { return pspin_hamiltonian(spins, l, p, Sector::symmetric, limits); },
      [dh](double) { return *dh; }};
}

Driver cd_driver(const AdiabaticModel& model, const OperatorBasis& basis, double tol_rel) {
  if (!model.h || !model.dh_dlambda) throw InvalidInput("cd_driver: incomplete adiabatic model");
  return [model, &basis, tol_rel](const PathSample& s) {
    const HermitianOperator h = model.h(s.lambda);
    const HermitianOperator dh = model.dh_dlambda(s.lambda) * s.dlambda;
    CouplingVector c = minimize_cd(h, dh, basis, tol_rel);
    HermitianOperator a = basis.combine(c.values);
    return DriveStep{std::move(c.values), std::move(a), c.near_cutoff, c.degenerate, c.rank, c.kernel_dim};
  };
}

CdComparison compare_on_path(const StatePath& path, const AdiabaticModel& model, const OperatorBasis& basis,
                             const Schedule& schedule, int steps, double tol_rel) {
  CdComparison out;
  out.optimal = drive(path, schedule, steps, optimal_driver(basis, tol_rel), basis.labels());
  out.counterdiabatic = drive(path, schedule, steps, cd_driver(model, basis, tol_rel), basis.labels());
  out.max_dominance_gap = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < out.optimal.local_cost.size(); ++i) {
    out.max_dominance_gap = std::max(out.max_dominance_gap, out.optimal.local_cost[i] - out.counterdiabatic.local_cost[i]);
  }
  return out;
}

}  // namespace oph
