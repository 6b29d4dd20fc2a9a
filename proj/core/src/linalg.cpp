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

#include "oph/linalg.hpp"

#include <algorithm>
#include <cstdint>
#include <cmath>
#include <vector>

#include "oph/errors.hpp"

namespace oph {

SymmetricEigen symmetric_eigen_desc(const RealMatrix& m) {
  if (m.rows() != m.cols()) throw InvalidInput("symmetric_eigen_desc: matrix must be square");
  SymmetricEigen out;
  if (m.rows() == 0) return out;
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(m);
  if (es.info() != Eigen::Success) throw Error("symmetric eigensolver did not converge");
  out.values = es.eigenvalues().reverse();
  out.vectors = es.eigenvectors().rowwise().reverse();
  return out;
}

SpectralSolve spectral_solve(const SymmetricEigen& eig, const RealVector& b, double tol_rel) {
  if (!(tol_rel > 0.0 && tol_rel < 1.0)) throw InvalidInput("tol_rel must lie in (0, 1)");
  const Index n = eig.values.size();
  if (b.size() != n) throw InvalidInput("spectral_solve: rhs length mismatch");
  SpectralSolve out;
  out.x = RealVector::Zero(n);
  if (n == 0) return out;
  const double lmax = eig.values[0];
  if (!(lmax > 0.0)) {
    out.degenerate = b.norm() > 0.0;
    return out;
  }
  out.cutoff = tol_rel * lmax;
  const RealVector proj = eig.vectors.transpose() * b;
  for (Index i = 0; i < n; ++i) {
    const double ev = eig.values[i];
    if (ev > out.cutoff) {
      out.x += (proj[i] / ev) * eig.vectors.col(i);
      ++out.rank;
    }
    if (ev > 0.1 * out.cutoff && ev < 10.0 * out.cutoff) out.near_cutoff = true;
  }
  return out;
}

namespace {

// Full decomposition; used for tiny matrices and when inverse iteration stalls.
GroundState ground_state_dense(const RealMatrix& h) {
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(h);
  if (es.info() != Eigen::Success) throw Error("symmetric eigensolver did not converge");
  GroundState g;
  g.e0 = es.eigenvalues()[0];
  g.e1 = h.rows() > 1 ? es.eigenvalues()[1] : g.e0;
  g.vector = es.eigenvectors().col(0);
  return g;
}

}  // namespace

GroundState real_ground_state(const RealMatrix& h) {
  if (h.rows() != h.cols() || h.rows() == 0) throw InvalidInput("real_ground_state: matrix must be square and non-empty");
  const Index n = h.rows();
  if (n < 16) return ground_state_dense(h);

  // Eigenvalues only, then inverse iteration below the spectrum: H - sigma is
  // positive definite, so a Cholesky factorization is safe.
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(h, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw Error("symmetric eigensolver did not converge");
  GroundState g;
  g.e0 = es.eigenvalues()[0];
  g.e1 = es.eigenvalues()[1];
  const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  const double gap = g.e1 - g.e0;
  if (!(gap > 1e-12 * scale)) return ground_state_dense(h);
  const double shift = std::max(1e-3 * gap, 1e-12 * scale);
  RealMatrix m = h;
  m.diagonal().array() -= g.e0 - shift;
  const Eigen::LLT<RealMatrix> llt(m);
  if (llt.info() != Eigen::Success) return ground_state_dense(h);

  RealVector v(n);
  std::uint64_t x = 0x9e3779b97f4a7c15ULL;  // fixed start, generic direction
  for (Index i = 0; i < n; ++i) {
    x ^= x << 13;
    x ^= x >> 7;
    x ^= x << 17;
    v[i] = 0.5 + static_cast<double>(x >> 11) * 0x1.0p-53;
  }
  v.normalize();
  for (int it = 0; it < 60; ++it) {
    RealVector w = llt.solve(v);
    w.normalize();
    if (w.dot(v) < 0.0) w = -w;
    const double change = (w - v).norm();
    v = std::move(w);
    if (it >= 2 && change < 1e-14) {
      g.vector = std::move(v);
      return g;
    }
  }
  return ground_state_dense(h);
}

ComplexVector expm_apply_dense(const ComplexMatrix& h, const ComplexVector& psi, double dt) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
  if (es.info() != Eigen::Success) throw Error("Hermitian eigensolver did not converge");
  const ComplexMatrix& u = es.eigenvectors();
  ComplexVector c = u.adjoint() * psi;
  for (Index i = 0; i < c.size(); ++i) c[i] *= std::polar(1.0, -es.eigenvalues()[i] * dt);
  return u * c;
}

namespace {

// One Lanczos step of length tau; returns false if the error estimate exceeds tol.
bool lanczos_step(const ComplexMatrix& h, ComplexVector& psi, double tau, double tol, int max_dim) {
  const Index d = psi.size();
  const int m_max = static_cast<int>(std::min<Index>(max_dim, d));
  const double beta0 = psi.norm();
  std::vector<ComplexVector> q;
  q.reserve(static_cast<std::size_t>(m_max) + 1);
  q.push_back(psi / beta0);
  std::vector<double> alpha, beta;

  for (int j = 0; j < m_max; ++j) {
    ComplexVector w = h * q.back();
    alpha.push_back(q.back().dot(w).real());
    // full reorthogonalization; the subspace is tiny
    for (const auto& v : q) w -= v.dot(w) * v;
    for (const auto& v : q) w -= v.dot(w) * v;
    const double b = w.norm();

    const int m = j + 1;
    RealMatrix t = RealMatrix::Zero(m, m);
    for (int i = 0; i < m; ++i) {
      t(i, i) = alpha[static_cast<std::size_t>(i)];
      if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[static_cast<std::size_t>(i)];
    }
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(t);
    ComplexVector y = ComplexVector::Zero(m);
    for (int k = 0; k < m; ++k) {
      const Complex ph = std::polar(1.0, -es.eigenvalues()[k] * tau);
      y += (ph * es.eigenvectors()(0, k)) * es.eigenvectors().col(k).cast<Complex>();
    }
    const bool invariant = b < 1e-13 * std::max(1.0, std::abs(alpha.back()));
    const double err = b * std::abs(y[m - 1]);
    if (invariant || err < tol || m == d) {
      ComplexVector out = ComplexVector::Zero(d);
      for (int k = 0; k < m; ++k) out += y[k] * q[static_cast<std::size_t>(k)];
      psi = beta0 * out;
      return true;
    }
    beta.push_back(b);
    q.push_back(w / b);
  }
  return false;
}

}  // namespace

ComplexVector expm_apply_krylov(const ComplexMatrix& h, const ComplexVector& psi, double dt, double tol) {
  if (h.rows() != psi.size()) throw InvalidInput("expm_apply_krylov: dimension mismatch");
  if (dt == 0.0 || psi.norm() == 0.0) return psi;
  constexpr int kMaxDim = 40;
  int pieces = 1;
  for (int attempt = 0; attempt < 30; ++attempt) {
    ComplexVector trial = psi;
    bool ok = true;
    const double tau = dt / pieces;
    for (int p = 0; p < pieces && ok; ++p) ok = lanczos_step(h, trial, tau, tol / pieces, kMaxDim);
    if (ok) return trial;
    pieces *= 2;
  }
  throw Error("Krylov exponential failed to converge");
}

ComplexVector expm_apply(const ComplexMatrix& h, const ComplexVector& psi, double dt) {
  if (h.rows() != h.cols() || h.rows() != psi.size()) throw InvalidInput("expm_apply: dimension mismatch");
  if (h.rows() <= kDenseExpLimit) return expm_apply_dense(h, psi, dt);
  return expm_apply_krylov(h, psi, dt);
}

}  // namespace oph
