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

#include "oph/state_paths.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <mutex>
#include <numbers>
#include <sstream>

#include "oph/errors.hpp"
#include "oph/linalg.hpp"

namespace oph {
namespace {

constexpr double kPi = std::numbers::pi;

// Largest-magnitude amplitude made real positive.
ComplexVector fix_gauge(ComplexVector v) {
  Index k = 0;
  v.cwiseAbs().maxCoeff(&k);
  v *= std::polar(1.0, -std::arg(v[k]));
  return v;
}

void check_range(const StatePath& path, double lo, double hi) {
  const auto [a, b] = path.domain();
  if (lo < a || hi > b) {
    std::ostringstream os;
    os << path.name() << ": lambda interval [" << lo << ", " << hi << "] outside the path domain [" << a << ", " << b
       << "]";
    throw InvalidInput(os.str());
  }
}

ComplexMatrix central_difference(const StatePath& path, double lambda, double delta) {
  const ComplexVector p = path.psi(lambda + delta).amplitudes();
  const ComplexVector m = path.psi(lambda - delta).amplitudes();
  const ComplexMatrix pp = p * p.adjoint();
  const ComplexMatrix mm = m * m.adjoint();
  ComplexMatrix d = (pp - mm) / (2.0 * delta);
  // Norm rounding of the two states, divided by 2 delta, leaves a trace of order
  // sqrt(dim) * 1e-10. It sits along rho, so remove it there.
  d -= d.trace().real() * (0.5 * (pp + mm));
  return 0.5 * (d + d.adjoint());
}

}  // namespace

// --- Schedule ---------------------------------------------------------------

Schedule::Schedule(Kind kind, double lambda0, double lambda1, double duration)
    : kind_(kind), lambda0_(lambda0), lambda1_(lambda1), duration_(duration) {
  if (!(duration > 0.0) || !std::isfinite(duration)) throw InvalidInput("schedule duration must be positive");
  if (!std::isfinite(lambda0) || !std::isfinite(lambda1)) throw InvalidInput("schedule endpoints must be finite");
}

Schedule Schedule::linear(double lambda0, double lambda1, double duration) {
  return Schedule(Kind::linear, lambda0, lambda1, duration);
}

Schedule Schedule::smoothstep(double lambda0, double lambda1, double duration) {
  return Schedule(Kind::smoothstep, lambda0, lambda1, duration);
}

double Schedule::lambda(double t) const {
  if (t <= 0.0) return lambda0_;
  if (t >= duration_) return lambda1_;
  const double s = t / duration_;
  const double g = kind_ == Kind::linear ? s : s * s * (3.0 - 2.0 * s);
  return lambda0_ + (lambda1_ - lambda0_) * g;
}

double Schedule::dlambda(double t) const {
  const double rate = (lambda1_ - lambda0_) / duration_;
  if (kind_ == Kind::linear) return rate;
  const double s = std::clamp(t / duration_, 0.0, 1.0);
  return rate * 6.0 * s * (1.0 - s);
}

std::string_view to_string(Schedule::Kind k) { return k == Schedule::Kind::linear ? "linear" : "smoothstep"; }

// --- generic path machinery -------------------------------------------------

HermitianOperator StatePath::drho_dlambda(double lambda) const { return numeric_drho(*this, lambda); }

HermitianOperator numeric_drho(const StatePath& path, double lambda, double delta) {
  if (!(delta > 0.0)) throw InvalidInput("finite-difference step must be positive");
  check_range(path, lambda - delta, lambda + delta);
  return HermitianOperator::hermitian_part(central_difference(path, lambda, delta));
}

DrhoEstimate numeric_drho_checked(const StatePath& path, double lambda, double delta) {
  if (!(delta > 0.0)) throw InvalidInput("finite-difference step must be positive");
  check_range(path, lambda - delta, lambda + delta);
  const ComplexMatrix d1 = central_difference(path, lambda, delta);
  const ComplexMatrix d2 = central_difference(path, lambda, 0.5 * delta);
  const ComplexMatrix rich = (4.0 * d2 - d1) / 3.0;
  return DrhoEstimate{HermitianOperator::hermitian_part(d1), (d1 - d2).norm(), (d1 - rich).norm()};
}

PathSample sample_path(const StatePath& path, const Schedule& schedule, double t) {
  const double lambda = schedule.lambda(t);
  const double rate = schedule.dlambda(t);
  PureState psi = path.psi(lambda);
  HermitianOperator d = rate == 0.0 ? HermitianOperator::zero(path.dim()) : path.drho_dlambda(lambda) * rate;
  return PathSample{t, lambda, rate, std::move(psi), std::move(d)};
}

PureState GroundStateCache::get_or_compute(double lambda, const std::function<PureState(double)>& compute) const {
  {
    std::shared_lock lock(mu_);
    const auto it = map_.find(lambda);
    if (it != map_.end()) return it->second;
  }
  PureState fresh = compute(lambda);
  std::unique_lock lock(mu_);
  if (map_.size() >= capacity_) map_.clear();
  map_.emplace(lambda, fresh);
  return fresh;
}

std::size_t GroundStateCache::size() const {
  std::shared_lock lock(mu_);
  return map_.size();
}

// --- single spin ------------------------------------------------------------

SingleSpinPath::SingleSpinPath(double omega) : omega_(omega) {
  if (omega == 0.0 || !std::isfinite(omega)) throw InvalidInput("single-spin path needs a finite nonzero omega");
}

PureState SingleSpinPath::psi(double t) const {
  // Bloch vector (sin wt, cos wt, 0) has azimuth pi/2 - wt.
  ComplexVector v(2);
  v << 1.0 / std::sqrt(2.0), std::polar(1.0 / std::sqrt(2.0), kPi / 2.0 - omega_ * t);
  return PureState::normalize(std::move(v));
}

HermitianOperator SingleSpinPath::drho_dlambda(double t) const {
  const double c = std::cos(omega_ * t), s = std::sin(omega_ * t);
  return HermitianOperator::hermitian_part(0.5 * omega_ * (c * pauli_matrix(Pauli::X) - s * pauli_matrix(Pauli::Y)));
}

// --- transverse-field Ising -------------------------------------------------

namespace {

void check_ising_sites(int sites, const Limits& limits) {
  if (sites < 2 || sites % 2 != 0) throw InvalidInput("Ising chain needs an even L >= 2");
  if (sites > limits.max_sites) throw ResourceLimit("Ising chain length exceeds the site cap");
}

// bit (L-1-i) of s holds site i; bit 0 is spin up.
inline int z_value(Index s, int sites, int i) { return ((s >> (sites - 1 - i)) & 1) ? -1 : 1; }
inline Index bond_flip(int sites, int i) {
  const int j = (i + 1) % sites;
  return (Index{1} << (sites - 1 - i)) | (Index{1} << (sites - 1 - j));
}

}  // namespace

HermitianOperator ising_hamiltonian(int sites, double lambda, const Limits& limits) {
  check_ising_sites(sites, limits);
  const Index d = Index{1} << sites;
  ComplexMatrix h = ComplexMatrix::Zero(d, d);
  for (Index s = 0; s < d; ++s) {
    double z = 0.0;
    for (int i = 0; i < sites; ++i) {
      z += z_value(s, sites, i);
      h(s ^ bond_flip(sites, i), s) -= 1.0;
    }
    h(s, s) -= lambda * z;
  }
  return HermitianOperator(std::move(h));
}

HermitianOperator ising_dh_dlambda(int sites, const Limits& limits) {
  check_ising_sites(sites, limits);
  const Index d = Index{1} << sites;
  ComplexMatrix h = ComplexMatrix::Zero(d, d);
  for (Index s = 0; s < d; ++s) {
    for (int i = 0; i < sites; ++i) h(s, s) -= z_value(s, sites, i);
  }
  return HermitianOperator(std::move(h));
}

IsingPath::IsingPath(int sites, const Limits& limits) : sites_(sites) {
  check_ising_sites(sites, limits);
  const Index d = Index{1} << sites;
  std::vector<Index> position(static_cast<std::size_t>(d), -1);
  for (Index s = 0; s < d; ++s) {
    if (std::popcount(static_cast<unsigned long long>(s)) % 2 == 0) {
      position[static_cast<std::size_t>(s)] = static_cast<Index>(even_.size());
      even_.push_back(s);
    }
  }
  const Index n = static_cast<Index>(even_.size());
  hopping_ = RealMatrix::Zero(n, n);
  field_ = RealVector::Zero(n);
  for (Index r = 0; r < n; ++r) {
    const Index s = even_[static_cast<std::size_t>(r)];
    for (int i = 0; i < sites; ++i) {
      field_[r] += z_value(s, sites, i);
      hopping_(position[static_cast<std::size_t>(s ^ bond_flip(sites, i))], r) -= 1.0;
    }
  }
}

PureState IsingPath::compute(double lambda) const {
  RealMatrix h = hopping_;
  h.diagonal() -= lambda * field_;
  const GroundState g = real_ground_state(h);
  if (g.e1 - g.e0 < 1e-10) {
    std::ostringstream os;
    os << "Ising even-sector ground state is degenerate at lambda = " << lambda;
    throw DegeneracyError(os.str(), lambda);
  }
  ComplexVector v = ComplexVector::Zero(dim());
  for (std::size_t r = 0; r < even_.size(); ++r) v[even_[r]] = g.vector[static_cast<Index>(r)];
  return PureState::normalize(fix_gauge(std::move(v)));
}

PureState IsingPath::psi(double lambda) const {
  return cache_.get_or_compute(lambda, [this](double l) { return compute(l); });
}

double IsingPath::ground_energy(double lambda) const {
  RealMatrix h = hopping_;
  h.diagonal() -= lambda * field_;
  const GroundState g = real_ground_state(h);
  if (g.e1 - g.e0 < 1e-10) throw DegeneracyError("Ising even-sector ground state is degenerate", lambda);
  return g.e0;
}

// --- p-spin -----------------------------------------------------------------

namespace {

void check_pspin(int spins, int p) {
  if (spins < 2) throw InvalidInput("p-spin model needs N >= 2");
  if (p < 1 || p % 2 == 0) throw InvalidInput("p-spin exponent must be odd and positive");
}

ComplexMatrix sigma_z_power(const ComplexMatrix& z, int spins, int p) {
  // Sigma_z is diagonal in both sectors.
  ComplexMatrix out = ComplexMatrix::Zero(z.rows(), z.cols());
  const double scale = std::pow(static_cast<double>(spins), p - 1);
  for (Index i = 0; i < z.rows(); ++i) out(i, i) = std::pow(z(i, i).real(), p) / scale;
  return out;
}

}  // namespace

HermitianOperator pspin_hamiltonian(int spins, double lambda, int p, Sector sector, const Limits& limits) {
  check_pspin(spins, p);
  const CollectiveSpin s = collective_spin(spins, sector, limits);
  return HermitianOperator::hermitian_part(-(1.0 - lambda) * s.x - lambda * sigma_z_power(s.z, spins, p));
}

HermitianOperator pspin_dh_dlambda(int spins, int p, Sector sector, const Limits& limits) {
  check_pspin(spins, p);
  const CollectiveSpin s = collective_spin(spins, sector, limits);
  return HermitianOperator::hermitian_part(s.x - sigma_z_power(s.z, spins, p));
}

PSpinPath::PSpinPath(int spins, int p, const Limits& limits) : spins_(spins), p_(p) {
  check_pspin(spins, p);
  const CollectiveSpin s = collective_spin(spins, Sector::symmetric, limits);
  sx_ = s.x.real();
  szp_ = sigma_z_power(s.z, spins, p).diagonal().real();
}

PureState PSpinPath::compute(double lambda) const {
  RealMatrix h = -(1.0 - lambda) * sx_;
  h.diagonal() -= lambda * szp_;
  const GroundState g = real_ground_state(h);
  if (g.e1 - g.e0 < 1e-12) {
    std::ostringstream os;
    os << "p-spin ground state is degenerate at lambda = " << lambda;
    throw DegeneracyError(os.str(), lambda);
  }
  return PureState::normalize(fix_gauge(g.vector.cast<Complex>()));
}

PureState PSpinPath::psi(double lambda) const {
  return cache_.get_or_compute(lambda, [this](double l) { return compute(l); });
}

double PSpinPath::ground_energy(double lambda) const {
  RealMatrix h = -(1.0 - lambda) * sx_;
  h.diagonal() -= lambda * szp_;
  return real_ground_state(h).e0;
}

double PSpinPath::gap(double lambda) const {
  RealMatrix h = -(1.0 - lambda) * sx_;
  h.diagonal() -= lambda * szp_;
  const GroundState g = real_ground_state(h);
  return g.e1 - g.e0;
}

// --- interpolation ----------------------------------------------------------

InterpolationPath::InterpolationPath(int spins, bool quarter, const Limits& limits)
    : spins_(spins), quarter_(quarter), rate_(quarter ? kPi / 2.0 : 2.0 * kPi) {
  const PSpinPath ground(spins, 3, limits);
  psi0_ = ground.psi(0.0).amplitudes();
  psi1_ = ground.psi(1.0).amplitudes();
}

ComplexVector InterpolationPath::unnormalized(double lambda, double& norm) const {
  const double a = rate_ * lambda;
  ComplexVector u = std::cos(a) * psi0_ + std::sin(a) * psi1_;
  norm = u.norm();
  if (norm < 1e-8) {
    std::ostringstream os;
    os << "interpolation path vanishes before normalization at lambda = " << lambda;
    throw SingularPathError(os.str(), lambda);
  }
  return u;
}

PureState InterpolationPath::psi(double lambda) const {
  double n = 0.0;
  ComplexVector u = unnormalized(lambda, n);
  return PureState::normalize(std::move(u));
}

HermitianOperator InterpolationPath::drho_dlambda(double lambda) const {
  double n = 0.0;
  const ComplexVector u = unnormalized(lambda, n);
  const double a = rate_ * lambda;
  const ComplexVector du = rate_ * (-std::sin(a) * psi0_ + std::cos(a) * psi1_);
  // d(u/|u|) = du/|u| - u Re<u,du>/|u|^3
  const ComplexVector psi = u / n;
  const ComplexVector dpsi = du / n - u * (u.dot(du).real() / (n * n * n));
  return HermitianOperator::hermitian_part(dpsi * psi.adjoint() + psi * dpsi.adjoint());
}

// --- custom -----------------------------------------------------------------

FunctionPath::FunctionPath(Index dim, std::function<ComplexVector(double)> fn, double lo, double hi, std::string name)
    : dim_(dim), fn_(std::move(fn)), lo_(lo), hi_(hi), name_(std::move(name)) {
  if (dim <= 0) throw InvalidInput("path dimension must be positive");
  if (!(lo < hi)) throw InvalidInput("path domain must be a nonempty interval");
  if (!fn_) throw InvalidInput("path function is empty");
}

PureState FunctionPath::psi(double lambda) const {
  if (lambda < lo_ || lambda > hi_) {
    std::ostringstream os;
    os << name_ << ": lambda = " << lambda << " outside [" << lo_ << ", " << hi_ << "]";
    throw InvalidInput(os.str());
  }
  ComplexVector v = fn_(lambda);
  if (v.size() != dim_) throw InvalidInput(name_ + ": path function returned a vector of the wrong dimension");
  return PureState::normalize(std::move(v));
}

// --- pseudo-spin oracles ----------------------------------------------------

std::vector<double> ising_momenta(int sites) {
  if (sites < 2 || sites % 2 != 0) throw InvalidInput("Ising chain needs an even L >= 2");
  std::vector<double> k;
  for (int n = 1; n <= sites / 2; ++n) k.push_back((2.0 * n - 1.0) * kPi / sites);
  return k;
}

double ising_epsilon(double k, double lambda) {
  const double a = lambda - std::cos(k), b = std::sin(k);
  return 2.0 * std::sqrt(a * a + b * b);
}

double ising_ground_energy_analytic(int sites, double lambda) {
  double e = 0.0;
  for (double k : ising_momenta(sites)) e -= ising_epsilon(k, lambda);
  return e;
}

double ising_theta(double k, double lambda) { return -std::atan2(std::sin(k), lambda - std::cos(k)); }

double ising_dtheta(double k, double lambda) {
  const double a = lambda - std::cos(k), b = std::sin(k);
  return b / (a * a + b * b);
}

double ising_h_analytic(int sites, double lambda, double dlambda) {
  double num = 0.0, den = 0.0;
  for (double k : ising_momenta(sites)) {
    num += ising_dtheta(k, lambda) * std::sin(k);
    den += std::sin(k) * std::sin(k);
  }
  return -(dlambda / 8.0) * num / den;
}

std::vector<double> ising_fidelity_analytic(int sites, const std::vector<double>& t, const std::vector<double>& lambda,
                                            const std::vector<double>& h) {
  if (t.size() != lambda.size() || t.size() != h.size()) throw InvalidInput("fidelity oracle: grid length mismatch");
  const auto ks = ising_momenta(sites);
  std::vector<double> out(t.size(), 1.0);
  double integral = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i > 0) integral += 0.5 * (h[i] + h[i - 1]) * (t[i] - t[i - 1]);
    double f = 1.0;
    for (double k : ks) {
      const double alpha = 4.0 * std::sin(k) * integral + 0.5 * (ising_theta(k, lambda[i]) - ising_theta(k, lambda[0]));
      f *= std::cos(alpha) * std::cos(alpha);
    }
    out[i] = f;
  }
  return out;
}

OperatorBasis ising_string_basis(int sites, const Limits& limits) {
  check_ising_sites(sites, limits);
  std::vector<std::string> labels;
  std::vector<HermitianOperator> ops;
  for (int j = 0; j < sites; ++j) {
    for (int jp = j + 1; jp < sites; ++jp) {
      std::string a(static_cast<std::size_t>(sites), 'I'), b(static_cast<std::size_t>(sites), 'I');
      for (int m = j + 1; m < jp; ++m) a[static_cast<std::size_t>(m)] = b[static_cast<std::size_t>(m)] = 'Z';
      a[static_cast<std::size_t>(j)] = 'X';
      a[static_cast<std::size_t>(jp)] = 'Y';
      b[static_cast<std::size_t>(j)] = 'Y';
      b[static_cast<std::size_t>(jp)] = 'X';
      labels.push_back("S" + std::to_string(j) + "_" + std::to_string(jp));
      ops.push_back(pauli_string(a) + pauli_string(b));
    }
  }
  return OperatorBasis(std::move(labels), std::move(ops), BasisFamily::custom);
}

RealVector ising_exact_parent_coefficients(int sites, double lambda, double dlambda) {
  const auto ks = ising_momenta(sites);
  RealVector c(sites * (sites - 1) / 2);
  Index idx = 0;
  for (int j = 0; j < sites; ++j) {
    for (int jp = j + 1; jp < sites; ++jp) {
      double w = 0.0;
      for (double k : ks) w += ising_dtheta(k, lambda) * std::sin(k * (jp - j));
      c[idx++] = -dlambda * w / (2.0 * sites);
    }
  }
  return c;
}

HermitianOperator ising_exact_parent(int sites, double lambda, double dlambda, const Limits& limits) {
  if (sites > 10) throw ResourceLimit("dense exact-parent strings are limited to L <= 10");
  return ising_string_basis(sites, limits).combine(ising_exact_parent_coefficients(sites, lambda, dlambda));
}

}  // namespace oph
