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

#include "sqpt/gaussian.hpp"

#include <cmath>
#include <string>

#include "sqpt/errors.hpp"

namespace sqpt {

namespace {

Eigen::Matrix2d rotation(double angle) {
  Eigen::Matrix2d r;
  r << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  return r;
}

void require_efficiency(double eta) {
  if (!(eta > 0.0 && eta <= 1.0))
    throw DomainError("efficiency must lie in (0, 1], got " + std::to_string(eta));
}

}  // namespace

GaussianState GaussianState::vacuum(int modes) {
  if (modes != 1 && modes != 2) throw DomainError("GaussianState supports 1 or 2 modes");
  return {modes, Eigen::VectorXd::Zero(2 * modes), Eigen::MatrixXd::Identity(2 * modes, 2 * modes)};
}

bool GaussianState::is_physical(double tol) const {
  const int n = 2 * modes;
  if (mean.size() != n || cov.rows() != n || cov.cols() != n) return false;
  if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > tol) return false;
  Eigen::MatrixXcd m = cov.cast<std::complex<double>>();
  for (int k = 0; k < modes; ++k) {
    m(2 * k, 2 * k + 1) += std::complex<double>(0.0, 1.0);
    m(2 * k + 1, 2 * k) -= std::complex<double>(0.0, 1.0);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff() >= -tol;
}

GaussianState rotate(const GaussianState& state, double angle) {
  if (state.modes != 1) throw DomainError("rotate expects a single-mode state");
  const Eigen::Matrix2d r = rotation(angle);
  return {1, r * state.mean, r * state.cov * r.transpose()};
}

QuadratureMoments rotated_quadrature(const GaussianState& state, double phi) {
  if (state.modes != 1) throw DomainError("rotated_quadrature expects a single-mode state");
  const Eigen::Vector2d u(std::cos(phi), std::sin(phi));
  return {u.dot(state.mean), 0.5 * u.dot(state.cov * u)};
}

double mode_a_variance(double r, double eta_a) {
  return 0.5 * (eta_a * std::cosh(2.0 * r) + 1.0 - eta_a);
}

double antisqueezed_variance(double r) { return 0.5 * std::cosh(2.0 * r); }

double squeezed_variance(double r, double eta_a) {
  const double c = std::cosh(2.0 * r);
  return 0.5 * (eta_a + (1.0 - eta_a) * c) / (eta_a * c + 1.0 - eta_a);
}

double displacement_gain(double r, double eta_a) {
  return std::sqrt(eta_a) * std::sinh(2.0 * r) / (eta_a * std::cosh(2.0 * r) + 1.0 - eta_a);
}

GaussianState tmsv_covariance(double r, double eta_a) {
  if (!(r >= 0.0)) throw DomainError("squeezing constant must be >= 0");
  require_efficiency(eta_a);
  const double two_va = 2.0 * mode_a_variance(r, eta_a);
  const double two_vb = std::cosh(2.0 * r);
  const double k = std::sqrt(eta_a) * std::sinh(2.0 * r);
  GaussianState s = GaussianState::vacuum(2);
  s.cov << two_va, 0, k, 0,
           0, two_va, 0, -k,
           k, 0, two_vb, 0,
           0, -k, 0, two_vb;
  return s;
}

GaussianState condition_on_homodyne(const GaussianState& state, double x_meas, double theta) {
  if (state.modes != 2) throw DomainError("condition_on_homodyne expects a two-mode state");
  const Eigen::Vector2d u(std::cos(theta), std::sin(theta));
  const Eigen::Matrix2d gaa = state.cov.topLeftCorner<2, 2>();
  const Eigen::Matrix2d gba = state.cov.bottomLeftCorner<2, 2>();
  const Eigen::Matrix2d gbb = state.cov.bottomRightCorner<2, 2>();
  const double two_var = u.dot(gaa * u);
  if (two_var < 1e-12) throw NumericalError("homodyne conditioning on a quadrature with vanishing variance");
  const Eigen::Vector2d c = gba * u;
  const double innovation = x_meas - u.dot(state.mean.head<2>());
  GaussianState out;
  out.modes = 1;
  out.mean = state.mean.tail<2>() + c * (innovation / two_var);
  out.cov = gbb - c * c.transpose() / two_var;
  return out;
}

double ProbeEnsembleParams::squeezing() const { return std::atanh(lambda); }

ProbeEnsembleParams probe_params_from_variances(double v_minus, double v_plus) {
  if (!(v_minus > 0.0)) throw DomainError("squeezed variance must be positive");
  if (!(v_minus < 0.5))
    throw DomainError("probe not squeezed: V- must be below the vacuum level 1/2 (pattern functions diverge at eta_A = 1/2)");
  if (!(v_plus > 0.5)) throw DomainError("anti-squeezed variance must exceed 1/2");
  // Measured variances are typically quoted to ~6 digits; allow that much
  // rounding below the uncertainty bound and treat it as a pure probe.
  if (v_plus * v_minus < 0.25 * (1.0 - kPurityRoundingAllowance))
    throw DomainError("unphysical probe: V+ V- < 1/4 violates the uncertainty relation");
  ProbeEnsembleParams p;
  p.v_minus = v_minus;
  p.v_plus = v_plus;
  p.eta_a = 2.0 * (v_plus - v_minus) / ((2.0 * v_plus - 1.0) * (2.0 * v_minus + 1.0));
  if (p.eta_a > 1.0 && (p.eta_a < 1.0 + 1e-9 || v_plus * v_minus <= 0.25)) p.eta_a = 1.0;
  if (p.eta_a > 1.0) throw DomainError("inverted efficiency exceeds 1");
  p.lambda = std::sqrt((2.0 * v_plus - 1.0) / (2.0 * v_plus + 1.0));
  p.v_a = 0.5 * (2.0 * p.eta_a * v_plus + 1.0 - p.eta_a);
  p.d_coeff = std::sqrt(2.0 * (v_plus - v_minus)) * std::sqrt((2.0 * v_minus + 1.0) / (2.0 * v_plus + 1.0));
  return p;
}

ProbeEnsembleParams probe_params_from_tmsv(double r, double eta_a) {
  if (!(r > 0.0)) throw DomainError("squeezing constant must be > 0");
  require_efficiency(eta_a);
  return probe_params_from_variances(squeezed_variance(r, eta_a), antisqueezed_variance(r));
}

}  // namespace sqpt
