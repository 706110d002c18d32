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

#include "sqpt/probe.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "sqpt/errors.hpp"

namespace sqpt {

ProbeSetting ProbeSetting::from_outcome(const ProbeEnsembleParams& params, double theta, double x_a) {
  return {theta, x_a, params.d_coeff * x_a, params.v_minus, params.v_plus};
}

SqueezedThermal squeezed_thermal_decomposition(double v_minus, double v_plus) {
  if (!(v_minus > 0.0) || !(v_plus > 0.0)) throw DomainError("variances must be positive");
  if (v_plus * v_minus < 0.25 * (1.0 - kPurityRoundingAllowance)) throw DomainError("unphysical variances: V+ V- < 1/4");
  if (!(v_minus < v_plus)) throw DomainError("squeezed thermal decomposition needs V- < V+");
  const double n_bar = std::max(0.0, std::sqrt(v_plus * v_minus) - 0.5);
  const double s = 0.25 * std::log(v_plus / v_minus);
  return {n_bar, s};
}

GaussianState probe_gaussian_state(const ProbeSetting& setting) {
  GaussianState g = GaussianState::vacuum(1);
  g.mean << setting.d, 0.0;
  g.cov << 2.0 * setting.v_minus, 0.0, 0.0, 2.0 * setting.v_plus;
  return rotate(g, -setting.theta);
}

TruncationReport truncation_check(const FockOperator& rho, double epsilon) {
  const int top = rho.cutoff();
  double edge = 0.0;
  for (int n = std::max(0, top - 2); n <= top; ++n) edge += std::abs(rho(n, n).real());
  const double trace_defect = std::abs(1.0 - rho.trace().real());
  return {edge < epsilon && trace_defect < epsilon, edge + trace_defect};
}

FockOperator probe_fock_state(const ProbeSetting& setting, int cutoff, double epsilon) {
  const SqueezedThermal st = squeezed_thermal_decomposition(setting.v_minus, setting.v_plus);
  const FockOperator sq = squeeze_operator(st.s, cutoff);
  const FockOperator disp = displacement_operator(Complex(setting.d / std::numbers::sqrt2), cutoff);
  const FockOperator rot = phase_operator(setting.theta, cutoff);
  const FockOperator u = rot * disp * sq;
  FockOperator rho = u * thermal_state(st.n_bar, cutoff) * u.adjoint();
  const TruncationReport report = truncation_check(rho, epsilon);
  if (!report.ok)
    throw TruncationError("probe state leaks " + std::to_string(report.leaked) +
                          " population to the Fock cutoff " + std::to_string(cutoff));
  return rho;
}

GaussianState gaussian_moments(const FockOperator& rho) {
  const int c = rho.cutoff();
  const CMatrix x = position_operator(c).matrix();
  const CMatrix p = momentum_operator(c).matrix();
  const CMatrix& r = rho.matrix();
  auto expect = [&](const CMatrix& op) { return (r * op).trace().real(); };
  const double mx = expect(x);
  const double mp = expect(p);
  GaussianState g = GaussianState::vacuum(1);
  g.mean << mx, mp;
  g.cov(0, 0) = 2.0 * (expect(x * x) - mx * mx);
  g.cov(1, 1) = 2.0 * (expect(p * p) - mp * mp);
  g.cov(0, 1) = g.cov(1, 0) = expect(x * p + p * x) - 2.0 * mx * mp;
  return g;
}

ProbeFactory::ProbeFactory(double v_minus, double v_plus, int cutoff) : cutoff_(cutoff) {
  const SqueezedThermal st = squeezed_thermal_decomposition(v_minus, v_plus);
  const FockOperator sq = squeeze_operator(st.s, cutoff);
  core_ = (sq * thermal_state(st.n_bar, cutoff) * sq.adjoint()).matrix();
  // D(alpha) = exp(alpha (a^dagger - a)) = exp(-i alpha H), H = i (a^dagger - a).
  const FockOperator a = annihilation(cutoff);
  const CMatrix h = Complex(0.0, 1.0) * (a.adjoint() - a).matrix();
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h);
  basis_ = solver.eigenvectors();
  generator_eigenvalues_ = solver.eigenvalues();
}

FockOperator ProbeFactory::build(double theta, double d) const {
  const double alpha = d / std::numbers::sqrt2;
  const int dim = cutoff_ + 1;
  CVector phases(dim);
  for (int j = 0; j < dim; ++j) phases(j) = std::polar(1.0, -alpha * generator_eigenvalues_(j));
  const CMatrix disp = basis_ * phases.asDiagonal() * basis_.adjoint();
  CMatrix rho = disp * core_ * disp.adjoint();
  for (int m = 0; m < dim; ++m)
    for (int n = 0; n < dim; ++n) rho(m, n) *= std::polar(1.0, -theta * (m - n));
  return {cutoff_, std::move(rho)};
}

}  // namespace sqpt
