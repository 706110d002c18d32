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

#ifndef SQPT_PROBE_HPP
#define SQPT_PROBE_HPP

#include "sqpt/fock.hpp"
#include "sqpt/gaussian.hpp"

namespace sqpt {

inline constexpr double kDefaultTruncationTolerance = 1e-6;

// One member of the squeezed-probe ensemble: a squeezed thermal state with
// x-variance v_minus and p-variance v_plus, displaced by d along x, then
// rotated in phase space by -theta.
struct ProbeSetting {
  double theta = 0.0;
  double x_a = 0.0;
  double d = 0.0;
  double v_minus = 0.5;
  double v_plus = 0.5;

  static ProbeSetting from_outcome(const ProbeEnsembleParams& params, double theta, double x_a);
};

struct SqueezedThermal {
  double n_bar;
  double s;
};

// S(s) rho_th(n_bar) S(s)^dagger has x-variance v_minus and p-variance v_plus.
SqueezedThermal squeezed_thermal_decomposition(double v_minus, double v_plus);

GaussianState probe_gaussian_state(const ProbeSetting& setting);

struct TruncationReport {
  bool ok;
  // Population of the top three Fock levels plus |1 - trace|.
  double leaked;
};

TruncationReport truncation_check(const FockOperator& rho, double epsilon);

// Throws TruncationError when truncation_check fails at `epsilon`.
FockOperator probe_fock_state(const ProbeSetting& setting, int cutoff,
                              double epsilon = kDefaultTruncationTolerance);

// First and second quadrature moments of a single-mode Fock-space state.
GaussianState gaussian_moments(const FockOperator& rho);

// Builds probe density matrices for one ensemble quickly: the squeezed thermal
// core is computed once and displacements use a fixed eigenbasis of
// i(a^dagger - a). Immutable after construction.
class ProbeFactory {
 public:
  ProbeFactory(double v_minus, double v_plus, int cutoff);

  int cutoff() const { return cutoff_; }
  // No truncation check; callers validate representative settings.
  FockOperator build(double theta, double d) const;

 private:
  int cutoff_;
  CMatrix core_;
  CMatrix basis_;
  Eigen::VectorXd generator_eigenvalues_;
};

}  // namespace sqpt

#endif  // SQPT_PROBE_HPP
