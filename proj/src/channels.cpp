// Copyright 2026 The sqpt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sqpt/channels.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sqpt/errors.hpp"

namespace sqpt {

namespace {

void require_unit_interval(double v, const char* what) {
  if (!(v >= 0.0 && v <= 1.0)) throw DomainError(std::string(what) + " must lie in [0, 1]");
}

// T^{n/2} as a diagonal operator.
FockOperator attenuation(double transmittance, int cutoff) {
  CMatrix m = CMatrix::Zero(cutoff + 1, cutoff + 1);
  for (int n = 0; n <= cutoff; ++n) m(n, n) = std::pow(transmittance, 0.5 * n);
  return {cutoff, std::move(m)};
}

Eigen::Matrix2d rotation(double angle) {
  Eigen::Matrix2d r;
  r << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  return r;
}

double binomial(int n, int k) {
  return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0));
}

}  // namespace

GaussianState GaussianAction::apply(const GaussianState& state) const {
  if (state.modes != 1) throw DomainError("Gaussian channel action expects a single-mode state");
  return {1, x * state.mean, x * state.cov * x.transpose() + y};
}

ChoiMatrix::ChoiMatrix(int k_max) : k_max_(k_max) {
  if (k_max < 0) throw DomainError("k_max must be >= 0");
  const std::size_t d = static_cast<std::size_t>(k_max) + 1;
  data_.assign(d * d * d * d, Complex(0.0));
}

CMatrix ChoiMatrix::as_matrix() const {
  const int d = dim();
  CMatrix m(d * d, d * d);
  for (int k = 0; k < d; ++k)
    for (int mm = 0; mm < d; ++mm)
      for (int l = 0; l < d; ++l)
        for (int n = 0; n < d; ++n) m(k * d + mm, l * d + n) = (*this)(k, mm, l, n);
  return m;
}

double ChoiMatrix::hermiticity_residual() const {
  const CMatrix m = as_matrix();
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double ChoiMatrix::min_eigenvalue() const {
  const CMatrix m = as_matrix();
  const CMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

FockOperator apply_channel(const KrausChannel& channel, const FockOperator& rho_in) {
  if (channel.kraus_ops.empty()) throw DomainError("channel has no Kraus operators");
  if (channel.cutoff() != rho_in.cutoff()) throw DomainError("cutoff mismatch between channel and state");
  CMatrix out = CMatrix::Zero(rho_in.dim(), rho_in.dim());
  for (const FockOperator& a : channel.kraus_ops)
    out.noalias() += a.matrix() * rho_in.matrix() * a.matrix().adjoint();
  return {rho_in.cutoff(), std::move(out)};
}

FockOperator apply_choi(const ChoiMatrix& chi, const FockOperator& rho_in) {
  if (chi.k_max() != rho_in.cutoff()) throw DomainError("Choi dimension does not match the state cutoff");
  const int d = chi.dim();
  CMatrix out = CMatrix::Zero(d, d);
  for (int m = 0; m < d; ++m)
    for (int n = 0; n < d; ++n) {
      Complex acc = 0.0;
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) acc += chi(k, m, l, n) * rho_in(k, l);
      out(m, n) = acc;
    }
  return {rho_in.cutoff(), std::move(out)};
}

ChoiMatrix choi_from_kraus(const KrausChannel& channel, int k_max) {
  if (channel.kraus_ops.empty()) throw DomainError("channel has no Kraus operators");
  if (k_max > channel.cutoff()) throw DomainError("k_max exceeds the channel cutoff");
  ChoiMatrix chi(k_max);
  const int d = k_max + 1;
  for (const FockOperator& a : channel.kraus_ops) {
    const CMatrix& m = a.matrix();
    for (int k = 0; k < d; ++k)
      for (int mm = 0; mm < d; ++mm) {
        const Complex left = m(mm, k);
        if (left == Complex(0.0)) continue;
        for (int l = 0; l < d; ++l)
          for (int n = 0; n < d; ++n) chi(k, mm, l, n) += left * std::conj(m(n, l));
      }
  }
  return chi;
}

KrausChannel identity_channel(int cutoff) {
  KrausChannel c;
  c.name = "identity";
  c.kraus_ops.push_back(FockOperator::identity(cutoff));
  c.gaussian = GaussianAction{};
  return c;
}

KrausChannel loss_channel(double transmittance, int cutoff) {
  require_unit_interval(transmittance, "transmittance");
  KrausChannel c;
  c.name = "loss";
  const FockOperator att = attenuation(transmittance, cutoff);
  const FockOperator a = annihilation(cutoff);
  FockOperator a_pow = FockOperator::identity(cutoff);
  double inv_sqrt_fact = 1.0;
  for (int j = 0; j <= cutoff; ++j) {
    if (j > 0) {
      a_pow = a_pow * a;
      inv_sqrt_fact /= std::sqrt(static_cast<double>(j));
    }
    const double coeff = std::pow(1.0 - transmittance, 0.5 * j) * inv_sqrt_fact;
    if (coeff == 0.0 && j > 0) break;
    c.kraus_ops.push_back(Complex(coeff) * (att * a_pow));
  }
  GaussianAction g;
  g.x = std::sqrt(transmittance) * Eigen::Matrix2d::Identity();
  g.y = (1.0 - transmittance) * Eigen::Matrix2d::Identity();
  c.gaussian = g;
  return c;
}

KrausChannel phase_channel(double phi0, int cutoff) {
  KrausChannel c;
  c.name = "phase";
  c.kraus_ops.push_back(phase_operator(phi0, cutoff));
  GaussianAction g;
  g.x = rotation(-phi0);
  c.gaussian = g;
  return c;
}

KrausChannel photon_subtraction(double transmittance, int cutoff) {
  require_unit_interval(transmittance, "transmittance");
  KrausChannel c;
  c.name = "photon-subtraction";
  c.trace_preserving = false;
  c.kraus_ops.push_back(Complex(std::sqrt(1.0 - transmittance)) *
                        (attenuation(transmittance, cutoff) * annihilation(cutoff)));
  return c;
}

Povm onoff_detector(double eta_d, double p_dark, int cutoff) {
  require_unit_interval(eta_d, "detector efficiency");
  if (!(p_dark >= 0.0 && p_dark < 1.0)) throw DomainError("dark-count probability must lie in [0, 1)");
  Povm p;
  p.name = "onoff";
  CMatrix no_click = CMatrix::Zero(cutoff + 1, cutoff + 1);
  for (int n = 0; n <= cutoff; ++n) no_click(n, n) = (1.0 - p_dark) * std::pow(1.0 - eta_d, n);
  FockOperator pi0(cutoff, no_click);
  p.elements.push_back(pi0);
  p.elements.push_back(FockOperator::identity(cutoff) - pi0);
  p.gaussian_form = std::vector<std::vector<PowerTerm>>{
      {{1.0 - p_dark, 1.0 - eta_d}},
      {{1.0, 1.0}, {-(1.0 - p_dark), 1.0 - eta_d}},
  };
  return p;
}

Povm pnr_detector(double eta_d, int k_max, int cutoff) {
  require_unit_interval(eta_d, "detector efficiency");
  if (k_max < 1) throw DomainError("PNR detector needs k_max >= 1");
  Povm p;
  p.name = "pnr";
  std::vector<CMatrix> el(k_max + 1, CMatrix::Zero(cutoff + 1, cutoff + 1));
  for (int n = 0; n <= cutoff; ++n)
    for (int k = 0; k <= n; ++k) {
      const double w = binomial(n, k) * std::pow(eta_d, k) * std::pow(1.0 - eta_d, n - k);
      el[std::min(k, k_max)](n, n) += w;
    }
  for (auto& m : el) p.elements.emplace_back(cutoff, std::move(m));
  return p;
}

std::vector<double> outcome_probabilities(const Povm& povm, const FockOperator& rho) {
  if (povm.elements.empty()) throw DomainError("POVM has no elements");
  if (povm.cutoff() != rho.cutoff()) throw DomainError("cutoff mismatch between POVM and state");
  if (std::abs(rho.trace() - 1.0) > 1e-8) throw DomainError("outcome_probabilities expects a normalized state");
  std::vector<double> p;
  p.reserve(povm.elements.size());
  for (const FockOperator& e : povm.elements) {
    const double v = (e.matrix().cwiseProduct(rho.matrix().transpose())).sum().real();
    p.push_back(std::clamp(v, 0.0, 1.0));
  }
  return p;
}

double power_expectation(const GaussianState& state, double tau) {
  if (state.modes != 1) throw DomainError("power_expectation expects a single-mode state");
  if (!(tau >= 0.0 && tau <= 1.0)) throw DomainError("tau must lie in [0, 1]");
  // tau^n = (1 - tau)^{-1} rho_th with mean photon number tau / (1 - tau);
  // the trace is then a Gaussian overlap.
  const Eigen::Matrix2d m = (1.0 - tau) * state.cov + (1.0 + tau) * Eigen::Matrix2d::Identity();
  const double quad = state.mean.dot(m.inverse() * state.mean);
  return 2.0 / std::sqrt(m.determinant()) * std::exp(-(1.0 - tau) * quad);
}

std::vector<double> outcome_probabilities(const Povm& povm, const GaussianState& state) {
  if (!povm.gaussian_form) throw DomainError("POVM '" + povm.name + "' has no Gaussian closed form");
  std::vector<double> p;
  for (const auto& terms : *povm.gaussian_form) {
    double v = 0.0;
    for (const PowerTerm& t : terms) v += t.coefficient * power_expectation(state, t.tau);
    p.push_back(std::clamp(v, 0.0, 1.0));
  }
  return p;
}

}  // namespace sqpt
