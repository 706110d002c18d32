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

#include "sqpt/validate.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <ostream>
#include <sstream>

#include "sqpt/channels.hpp"
#include "sqpt/estimators.hpp"
#include "sqpt/fock.hpp"
#include "sqpt/gaussian.hpp"
#include "sqpt/homodyne.hpp"
#include "sqpt/pattern.hpp"
#include "sqpt/probe.hpp"
#include "sqpt/rng.hpp"

namespace sqpt {

namespace {

struct Check {
  std::string module;
  std::string name;
  // Returns the observed error; the check passes when it is below `tol`.
  std::function<double()> measure;
  double tol;
};

FockOperator random_state(int cutoff, RngStream& rng) {
  CMatrix g(cutoff + 1, cutoff + 1);
  for (int i = 0; i <= cutoff; ++i)
    for (int j = 0; j <= cutoff; ++j) g(i, j) = Complex(rng.normal(), rng.normal());
  CMatrix rho = g * g.adjoint();
  rho /= rho.trace();
  return FockOperator(cutoff, rho);
}

double hermite_orthonormality() {
  const int n_max = 15;
  const int points = 4001;
  const double a = -12.0, h = 24.0 / (points - 1);
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(n_max + 1, n_max + 1);
  std::vector<double> psi(n_max + 1);
  for (int i = 0; i < points; ++i) {
    hermite_wavefunctions(a + h * i, psi);
    const double w = (i == 0 || i == points - 1) ? h / 2 : h;
    for (int m = 0; m <= n_max; ++m)
      for (int n = 0; n <= n_max; ++n) gram(m, n) += w * psi[m] * psi[n];
  }
  return (gram - Eigen::MatrixXd::Identity(n_max + 1, n_max + 1)).cwiseAbs().maxCoeff();
}

double displacement_vs_coherent() {
  const int cutoff = 40;
  const Complex alpha(0.7, 0.3);
  const CVector direct = displacement_operator(alpha, cutoff).matrix().col(0);
  return (direct - coherent_amplitudes(alpha, cutoff)).cwiseAbs().maxCoeff();
}

double tmsv_round_trip() {
  const auto a = probe_params_from_tmsv(0.5, 0.8);
  const auto b = probe_params_from_variances(a.v_minus, a.v_plus);
  return std::max({std::abs(a.eta_a - b.eta_a), std::abs(a.lambda - b.lambda), std::abs(a.d_coeff - b.d_coeff)});
}

double kraus_vs_choi() {
  const int cutoff = 10;
  RngStream rng(7, 0);
  const auto channel = loss_channel(0.7, cutoff);
  const auto chi = choi_from_kraus(channel, cutoff);
  double worst = 0.0;
  for (int t = 0; t < 5; ++t) {
    const auto rho = random_state(cutoff, rng);
    worst = std::max(worst, (apply_channel(channel, rho).matrix() - apply_choi(chi, rho).matrix()).cwiseAbs().maxCoeff());
  }
  return worst;
}

double povm_completeness() {
  const int cutoff = 20;
  double worst = 0.0;
  for (const auto& povm : {onoff_detector(0.6, 0.01, cutoff), pnr_detector(0.8, 3, cutoff)}) {
    CMatrix sum = CMatrix::Zero(cutoff + 1, cutoff + 1);
    for (const auto& e : povm.elements) sum += e.matrix();
    worst = std::max(worst, (sum - CMatrix::Identity(cutoff + 1, cutoff + 1)).cwiseAbs().maxCoeff());
  }
  return worst;
}

double probe_moments() {
  const auto params = probe_params_from_variances(0.386421, 0.771540);
  const auto setting = ProbeSetting::from_outcome(params, 0.9, 0.8);
  const auto rho = probe_fock_state(setting, 40);
  const auto fock = gaussian_moments(rho);
  const auto gauss = probe_gaussian_state(setting);
  return std::max((fock.mean - gauss.mean).cwiseAbs().maxCoeff(), (fock.cov - gauss.cov).cwiseAbs().maxCoeff());
}

double vacuum_quadrature() {
  const auto q = quadrature_distribution(FockOperator::projector(0, 8), 0.4, 0.8);
  return std::max(std::abs(q.mass() - 1.0), std::abs(q.moment(2) - 0.5));
}

double pattern_unbiasedness() {
  const auto table = build_table(3, 0.8, GridSpec{-9.0, 9.0, 1201}, 1);
  return verify_unbiasedness(table, thermal_state(0.4, 12), 0.8);
}

double deterministic_estimator() {
  const auto params = probe_params_from_tmsv(0.5, 1.0);
  const auto chi = estimate_choi_quadrature(identity_channel(30), params, 0.9, 1);
  double worst = 0.0;
  for (int k = 0; k <= 1; ++k)
    for (int m = 0; m <= 1; ++m)
      for (int l = 0; l <= 1; ++l)
        for (int n = 0; n <= 1; ++n)
          worst = std::max(worst, std::abs(chi(k, m, l, n) - Complex((k == m && l == n) ? 1.0 : 0.0)));
  return worst;
}

double worker_independence() {
  const auto params = probe_params_from_tmsv(0.5, 1.0);
  const auto channel = loss_channel(0.7, 20);
  SimulationOptions one, four;
  four.workers = 4;
  const auto a = simulate_process_run(channel, params, 0.9, 20000, 11, one);
  const auto b = simulate_process_run(channel, params, 0.9, 20000, 11, four);
  double mismatches = 0;
  for (std::size_t i = 0; i < a.records.size(); ++i)
    if (a.records[i].x_b != b.records[i].x_b || a.records[i].theta != b.records[i].theta) ++mismatches;
  return mismatches + (a.records.size() == b.records.size() ? 0.0 : 1.0);
}

}  // namespace

std::vector<CheckResult> run_validation(std::ostream* log, bool stop_on_failure) {
  const std::vector<Check> checks = {
      {"fock", "hermite functions orthonormal", hermite_orthonormality, 1e-9},
      {"fock", "D(alpha)|0> equals coherent amplitudes", displacement_vs_coherent, 1e-10},
      {"gaussian", "TMSV parameters round-trip through variances", tmsv_round_trip, 1e-12},
      {"channels", "Kraus and Choi actions agree", kraus_vs_choi, 1e-12},
      {"channels", "POVM elements sum to identity", povm_completeness, 1e-12},
      {"probe", "Fock probe moments match Gaussian picture", probe_moments, 1e-7},
      {"homodyne", "vacuum quadrature mass and variance", vacuum_quadrature, 2e-5},
      {"pattern", "pattern functions unbiased on thermal state", pattern_unbiasedness, 1e-8},
      {"estimators", "deterministic identity reconstruction", deterministic_estimator, 1e-8},
      {"estimators", "sampling independent of worker count", worker_independence, 0.5},
  };
  std::vector<CheckResult> results;
  for (const auto& c : checks) {
    CheckResult r{c.module, c.name, false, ""};
    try {
      const double err = c.measure();
      r.passed = err <= c.tol;
      std::ostringstream s;
      s << "error " << err << " (tolerance " << c.tol << ")";
      r.detail = s.str();
    } catch (const std::exception& e) {
      r.detail = std::string("threw: ") + e.what();
    }
    if (log) *log << (r.passed ? "PASS " : "FAIL ") << r.module << ": " << r.name << ": " << r.detail << "\n";
    results.push_back(r);
    if (!r.passed && stop_on_failure) break;
  }
  return results;
}

}  // namespace sqpt
