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

#ifndef SQPT_GAUSSIAN_HPP
#define SQPT_GAUSSIAN_HPP

#include <Eigen/Dense>

namespace sqpt {

// Gaussian state of one or two modes. Quadratures are ordered
// (x_A, p_A, x_B, p_B) and cov_jk = <dz_j dz_k + dz_k dz_j>, so the vacuum
// covariance is the identity and every variance is cov_jj / 2.
struct GaussianState {
  int modes = 1;
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;

  static GaussianState vacuum(int modes);

  // Symmetric within tol and cov + i Omega >= 0 within tol.
  bool is_physical(double tol = 1e-9) const;
};

// Rotation of a single-mode state in phase space by `angle`
// (x, p) -> (x cos a - p sin a, x sin a + p cos a).
GaussianState rotate(const GaussianState& state, double angle);

// Mean and variance of the quadrature x cos(phi) + p sin(phi) of a
// single-mode state.
struct QuadratureMoments {
  double mean;
  double variance;
};
QuadratureMoments rotated_quadrature(const GaussianState& state, double phi);

// Two-mode squeezed vacuum with squeezing r whose mode A passed a lossy
// channel of transmittance eta_a.
GaussianState tmsv_covariance(double r, double eta_a);

// State of mode B after an ideal homodyne measurement of
// x_A cos(theta) + p_A sin(theta) on mode A returned x_meas.
GaussianState condition_on_homodyne(const GaussianState& state, double x_meas, double theta);

// Closed forms for the conditionally prepared probe.
double mode_a_variance(double r, double eta_a);       // V_A
double antisqueezed_variance(double r);               // V_+
double squeezed_variance(double r, double eta_a);     // V_-
double displacement_gain(double r, double eta_a);     // d / x_A

// Parameters of the squeezed-probe ensemble implied by the measured probe
// variances.
struct ProbeEnsembleParams {
  double v_minus = 0.0;
  double v_plus = 0.0;
  double eta_a = 1.0;
  double lambda = 0.0;
  double v_a = 0.0;
  double d_coeff = 0.0;

  // r with tanh r = lambda.
  double squeezing() const;
};

// Relative slack on V+ V- >= 1/4 for rounded input variances.
inline constexpr double kPurityRoundingAllowance = 1e-5;

// Throws DomainError unless 0 < v_minus < 1/2 < v_plus and v_minus v_plus >= 1/4.
ProbeEnsembleParams probe_params_from_variances(double v_minus, double v_plus);

// Convenience: the ensemble produced by a TMSV with squeezing r and virtual
// mode-A efficiency eta_a.
ProbeEnsembleParams probe_params_from_tmsv(double r, double eta_a);

}  // namespace sqpt

#endif  // SQPT_GAUSSIAN_HPP
