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

#include "oph/inverse_solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "oph/errors.hpp"

namespace oph {
namespace {

constexpr Complex kI{0.0, 1.0};

void require_dim(Index expected, Index got, const char* where) {
  if (expected != got) {
    std::ostringstream os;
    os << where << ": dimension mismatch (" << expected << " vs " << got << ")";
    throw InvalidInput(os.str());
  }
}

// Columns L_a psi.
ComplexMatrix apply_all(const OperatorBasis& basis, const ComplexVector& psi) {
  ComplexMatrix w(psi.size(), static_cast<Index>(basis.size()));
  for (std::size_t a = 0; a < basis.size(); ++a) w.col(static_cast<Index>(a)) = basis.sparse(a) * psi;
  return w;
}

RealVector expectations(const ComplexMatrix& w, const ComplexVector& psi) {
  return (psi.adjoint() * w).real().transpose();
}

// 2 Re(A^dagger B) - 2 e_a f_b^T: cross covariance of two operator families.
RealMatrix covariance(const ComplexMatrix& wa, const RealVector& ea, const ComplexMatrix& wb, const RealVector& eb) {
  return 2.0 * (wa.adjoint() * wb).real() - 2.0 * ea * eb.transpose();
}

// Same with A = B. Re(W^dagger W) = Re(W)^T Re(W) + Im(W)^T Im(W) as one real rank update.
RealMatrix covariance(const ComplexMatrix& w, const RealVector& e) {
  const Index d = w.rows(), n = w.cols();
  RealMatrix x(2 * d, n);
  x.topRows(d) = w.real();
  x.bottomRows(d) = w.imag();
  RealMatrix g = RealMatrix::Zero(n, n);
  g.selfadjointView<Eigen::Lower>().rankUpdate(x.transpose(), 2.0);
  g.selfadjointView<Eigen::Lower>().rankUpdate(e, -2.0);
  return g.selfadjointView<Eigen::Lower>();
}

// Tr(-i[L_a, rho] D) = 2 Im(<D psi | L_a psi>); only D psi is needed.
RealVector rhs_from(const ComplexVector& dpsi, const PureState& psi, const OperatorBasis& basis) {
  RealVector b(static_cast<Index>(basis.size()));
  for (std::size_t a = 0; a < basis.size(); ++a) {
    const ComplexVector w = basis.sparse(a) * psi.amplitudes();
    b[static_cast<Index>(a)] = 2.0 * dpsi.dot(w).imag();
  }
  return b;
}

QCMatrix finish_qcm(RealMatrix v, double tol_rel) {
  if (!(tol_rel > 0.0 && tol_rel < 1.0)) throw InvalidInput("tol_rel must lie in (0, 1)");
  QCMatrix out;
  out.entries = 0.5 * (v + v.transpose());
  out.eig = symmetric_eigen_desc(out.entries);
  out.tol_rel = tol_rel;
  if (out.size() > 0) {
    const double lmax = out.eig.values[0];
    const double lmin = out.eig.values[out.size() - 1];
    if (lmin < -1e-9 * std::max(1.0, lmax)) {
      std::ostringstream os;
      os << "QCM is not positive semidefinite (min eigenvalue " << lmin << ")";
      throw Error(os.str());
    }
    out.tol_used = lmax > 0.0 ? tol_rel * lmax : 0.0;
    for (Index i = 0; i < out.size(); ++i) out.rank += out.eig.values[i] > out.tol_used && lmax > 0.0 ? 1 : 0;
  }
  return out;
}

}  // namespace

PureState pure_state_of(const HermitianOperator& rho) {
  const ComplexMatrix& r = rho.matrix();
  const double defect = (r * r - r).cwiseAbs().maxCoeff();
  if (defect > kPurityTol || std::abs(rho.trace() - 1.0) > kPurityTol) {
    std::ostringstream os;
    os << "density matrix is not a pure state (max |rho^2 - rho| = " << defect << ")";
    throw InvalidInput(os.str());
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(r);
  ComplexVector v = es.eigenvectors().col(r.rows() - 1);
  Index k = 0;
  v.cwiseAbs().maxCoeff(&k);
  v *= std::polar(1.0, -std::arg(v[k]));
  return PureState::normalize(std::move(v));
}

QCMatrix build_qcm(const PureState& psi, const OperatorBasis& basis, double tol_rel) {
  if (!basis.empty()) require_dim(basis.dim(), psi.dim(), "build_qcm");
  const ComplexMatrix w = apply_all(basis, psi.amplitudes());
  const RealVector e = expectations(w, psi.amplitudes());
  QCMatrix out = finish_qcm(covariance(w, e), tol_rel);
#ifndef NDEBUG
  if (psi.dim() <= 64 && !basis.empty()) {
    const RealMatrix gram = qcm_gram(psi.density(), basis);
    const double diff = (gram - out.entries).cwiseAbs().maxCoeff();
    if (diff > 1e-10 * std::max(1.0, gram.cwiseAbs().maxCoeff())) throw Error("QCM covariance and Gram forms disagree");
  }
#endif
  return out;
}

QCMatrix build_qcm(const HermitianOperator& rho, const OperatorBasis& basis, double tol_rel) {
  return build_qcm(pure_state_of(rho), basis, tol_rel);
}

RealMatrix qcm_gram(const HermitianOperator& rho, const OperatorBasis& basis) {
  const auto l = tangent_vectors(basis, rho);
  const Index n = static_cast<Index>(l.size());
  RealMatrix g(n, n);
  for (Index a = 0; a < n; ++a) {
    for (Index b = a; b < n; ++b) g(a, b) = g(b, a) = hs_inner(l[static_cast<std::size_t>(a)], l[static_cast<std::size_t>(b)]);
  }
  return g;
}

RealVector build_rhs(const PureState& psi, const HermitianOperator& drho, const OperatorBasis& basis) {
  require_dim(psi.dim(), drho.dim(), "build_rhs");
  if (!basis.empty()) require_dim(basis.dim(), psi.dim(), "build_rhs");
  if (std::abs(drho.trace()) > 1e-8 * std::max(1.0, drho.frobenius_norm())) {
    throw InvalidInput("build_rhs: state derivative is not traceless");
  }
  return rhs_from(drho.matrix() * psi.amplitudes(), psi, basis);
}

RealVector build_rhs(const HermitianOperator& rho, const HermitianOperator& drho, const OperatorBasis& basis) {
  return build_rhs(pure_state_of(rho), drho, basis);
}

CouplingVector solve_min_norm(const QCMatrix& v, const RealVector& b, std::optional<double> drho_norm, double tol_rel) {
  if (b.size() != v.size()) throw InvalidInput("solve_min_norm: rhs length mismatch");
  const SpectralSolve s = spectral_solve(v.eig, b, tol_rel);
  CouplingVector out;
  out.values = s.x;
  out.rank = s.rank;
  out.kernel_dim = static_cast<int>(v.size()) - s.rank;
  out.near_cutoff = s.near_cutoff;
  out.degenerate = s.degenerate;
  if (drho_norm) {
    out.residual = std::sqrt(std::max(0.0, (*drho_norm) * (*drho_norm) - b.dot(s.x)));
  } else {
    out.residual = (v.entries * s.x - b).norm();
  }
  return out;
}

double pure_local_cost(const HermitianOperator& h, const PureState& psi, const HermitianOperator& drho) {
  require_dim(h.dim(), psi.dim(), "local_cost");
  require_dim(drho.dim(), psi.dim(), "local_cost");
  const ComplexVector& v = psi.amplitudes();
  const ComplexVector phi = h.matrix() * v;
  // D + i[H, rho] with [H, rho] = phi psi^dagger - psi phi^dagger
  const ComplexMatrix m = drho.matrix() + kI * (phi * v.adjoint() - v * phi.adjoint());
  return m.norm();
}

OptimalSolve solve_optimal(const PureState& psi, const HermitianOperator& drho, const OperatorBasis& basis,
                           double tol_rel) {
  require_dim(psi.dim(), drho.dim(), "solve_optimal");
  const double dn = drho.frobenius_norm();
  if (basis.empty()) {
    OptimalSolve out{CouplingVector{}, HermitianOperator::zero(psi.dim()), dn};
    out.coupling.residual = dn;
    return out;
  }
  const QCMatrix v = build_qcm(psi, basis, tol_rel);
  const RealVector b = build_rhs(psi, drho, basis);
  CouplingVector c = solve_min_norm(v, b, dn, tol_rel);
  // Iterative refinement. V carries rounding of order eps * ||V||, which with
  // unnormalized many-body operators (||V|| ~ 1e9) visibly breaks the
  // orthogonality of motion and residual. The residual tangent is formed from
  // psi and H directly and mapped back through the same truncated inverse.
  const ComplexVector& x = psi.amplitudes();
  const ComplexVector dpsi = drho.matrix() * x;
  for (int pass = 0; pass < 2; ++pass) {
    const ComplexVector phi = basis.combine(c.values).matrix() * x;
    // (D - g) psi with g = -i[H, rho]
    const ComplexVector rpsi = dpsi + kI * (phi - x * phi.dot(x));
    c.values += spectral_solve(v.eig, rhs_from(rpsi, psi, basis), tol_rel).x;
  }
  c.labels = basis.labels();
  HermitianOperator h = basis.combine(c.values);
  c.residual = pure_local_cost(h, psi, drho);
  return OptimalSolve{std::move(c), std::move(h), dn};
}

CommutatorMatrix build_commutator_matrix(const HermitianOperator& rho, const OperatorBasis& ham_basis,
                                         const OperatorBasis& obs_basis) {
  if (!ham_basis.empty()) require_dim(ham_basis.dim(), rho.dim(), "build_commutator_matrix");
  if (!obs_basis.empty()) require_dim(obs_basis.dim(), rho.dim(), "build_commutator_matrix");
  const auto l = tangent_vectors(ham_basis, rho);
  CommutatorMatrix k;
  k.entries.resize(static_cast<Index>(obs_basis.size()), static_cast<Index>(ham_basis.size()));
  for (std::size_t al = 0; al < obs_basis.size(); ++al) {
    const HermitianOperator& o = obs_basis.op(al);
    const double norm2 = hs_inner(o, o);
    for (std::size_t a = 0; a < ham_basis.size(); ++a) {
      k.entries(static_cast<Index>(al), static_cast<Index>(a)) = hs_inner(o, l[a]) / norm2;
    }
  }
  return k;
}

RealVector observable_coefficients(const HermitianOperator& a, const OperatorBasis& obs_basis) {
  RealVector o(static_cast<Index>(obs_basis.size()));
  for (std::size_t al = 0; al < obs_basis.size(); ++al) {
    const HermitianOperator& op = obs_basis.op(al);
    o[static_cast<Index>(al)] = hs_inner(op, a) / hs_inner(op, op);
  }
  return o;
}

CouplingVector solve_exact_parent(const CommutatorMatrix& k, const RealVector& d_obs, double tol_rel) {
  if (d_obs.size() != k.entries.rows()) throw InvalidInput("solve_exact_parent: rhs length mismatch");
  if (!(tol_rel > 0.0 && tol_rel < 1.0)) throw InvalidInput("tol_rel must lie in (0, 1)");
  CouplingVector out;
  const Index n = k.entries.cols();
  out.values = RealVector::Zero(n);
  if (n == 0 || k.entries.rows() == 0) {
    out.residual = d_obs.norm();
    return out;
  }
  Eigen::BDCSVD<RealMatrix> svd(k.entries, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RealVector& s = svd.singularValues();
  // same relative policy as the QCM solve: sigma^2 > tol_rel * sigma_max^2
  const double cut = std::sqrt(tol_rel) * (s.size() > 0 ? s[0] : 0.0);
  const RealVector ub = svd.matrixU().transpose() * d_obs;
  for (Index i = 0; i < s.size(); ++i) {
    if (s[i] > cut && s[i] > 0.0) {
      out.values += (ub[i] / s[i]) * svd.matrixV().col(i);
      ++out.rank;
    }
  }
  out.kernel_dim = static_cast<int>(n) - out.rank;
  out.degenerate = out.rank == 0 && d_obs.norm() > 0.0;
  out.residual = (k.entries * out.values - d_obs).norm();
  return out;
}

std::vector<CouplingVector> kernel_basis(const QCMatrix& v, double tol_rel) {
  if (!(tol_rel > 0.0 && tol_rel < 1.0)) throw InvalidInput("tol_rel must lie in (0, 1)");
  std::vector<CouplingVector> out;
  if (v.size() == 0) return out;
  const double cut = tol_rel * std::max(0.0, v.eig.values[0]);
  for (Index i = 0; i < v.size(); ++i) {
    if (v.eig.values[i] <= cut) {
      CouplingVector k;
      k.values = v.eig.vectors.col(i);
      k.residual = std::max(0.0, v.eig.values[i]);
      out.push_back(std::move(k));
    }
  }
  return out;
}

double commutator_defect(const OperatorBasis& basis, const HermitianOperator& rho, const RealVector& coeffs) {
  const HermitianOperator h = basis.combine(coeffs);
  require_dim(h.dim(), rho.dim(), "commutator_defect");
  const ComplexMatrix hr = h.matrix() * rho.matrix();
  return (hr - hr.adjoint()).norm();
}

FilterMatrix filter_matrix(const PureState& psi, const OperatorBasis& allowed, const OperatorBasis& full,
                           double tol_rel) {
  if (!allowed.empty()) require_dim(allowed.dim(), psi.dim(), "filter_matrix");
  if (!full.empty()) require_dim(full.dim(), psi.dim(), "filter_matrix");
  const ComplexMatrix wa = apply_all(allowed, psi.amplitudes());
  const ComplexMatrix wf = apply_all(full, psi.amplitudes());
  const RealVector ea = expectations(wa, psi.amplitudes());
  const RealVector ef = expectations(wf, psi.amplitudes());
  const QCMatrix v = finish_qcm(covariance(wa, ea), tol_rel);
  const RealMatrix c = covariance(wa, ea, wf, ef);

  FilterMatrix m;
  m.entries = RealMatrix::Zero(v.size(), c.cols());
  for (Index i = 0; i < v.size(); ++i) {
    const double ev = v.eig.values[i];
    if (v.eig.values[0] > 0.0 && ev > v.tol_used) {
      const auto u = v.eig.vectors.col(i);
      m.entries += (u / ev) * (u.transpose() * c);
    }
  }
  return m;
}

}  // namespace oph
