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

#include <cmath>
#include <numbers>

#include "doctest.h"
#include "sqpt/errors.hpp"
#include "sqpt/gaussian.hpp"
#include "sqpt/probe.hpp"
#include "support.hpp"

using namespace sqpt;
using sqpt::testing::max_abs;

TEST_CASE("squeezed thermal decomposition") {
  const auto pure = squeezed_thermal_decomposition(std::exp(-1.0) / 2, std::exp(1.0) / 2);
  CHECK(std::abs(pure.n_bar) < 1e-12);
  CHECK(pure.s == doctest::Approx(0.5).epsilon(1e-12));

  const auto mixed = squeezed_thermal_decomposition(0.386421, 0.771540);
  CHECK(mixed.n_bar == doctest::Approx((2 * std::sqrt(0.386421 * 0.771540) - 1) / 2).epsilon(1e-12));
  CHECK(mixed.n_bar == doctest::Approx(0.046065).epsilon(1e-4));
  CHECK(std::exp(2 * mixed.s) == doctest::Approx(std::sqrt(0.771540 / 0.386421)).epsilon(1e-12));

  CHECK_THROWS_AS(squeezed_thermal_decomposition(0.5, 0.5), DomainError);
  CHECK_THROWS_AS(squeezed_thermal_decomposition(0.2, 0.9), DomainError);
}

TEST_CASE("undisplaced pure probe is a squeezed vacuum") {
  ProbeSetting s;
  s.v_minus = std::exp(-1.0) / 2;
  s.v_plus = std::exp(1.0) / 2;
  const auto rho = probe_fock_state(s, 40);
  CHECK(rho(0, 0).real() == doctest::Approx(1.0 / std::cosh(0.5)).epsilon(1e-10));
  CHECK(rho(0, 0).real() == doctest::Approx(0.886819).epsilon(1e-6));
  CHECK(std::abs(rho(1, 1)) < 1e-14);
  CHECK(rho.hermiticity_residual() < 1e-10);
  CHECK(rho.min_eigenvalue() > -1e-8);
}

TEST_CASE("quarter-turn rotation swaps the quadrature variances") {
  ProbeSetting s;
  s.v_minus = 0.3;
  s.v_plus = 0.9;
  s.theta = std::numbers::pi / 2;
  const auto m = gaussian_moments(probe_fock_state(s, 40));
  CHECK(m.cov(0, 0) / 2 == doctest::Approx(0.9).epsilon(1e-9));
  CHECK(m.cov(1, 1) / 2 == doctest::Approx(0.3).epsilon(1e-9));
}

TEST_CASE("displacement coefficient links d to x_a") {
  const auto p = probe_params_from_tmsv(0.5, 0.8);
  const auto s = ProbeSetting::from_outcome(p, 1.2, -0.7);
  CHECK(std::abs(s.d - p.d_coeff * -0.7) < 1e-12);
  CHECK(s.v_minus == p.v_minus);
  CHECK(s.v_plus == p.v_plus);
}

TEST_CASE("Fock probes reproduce the conditional Gaussian state") {
  RngStream rng(2024, 0);
  for (int t = 0; t < 50; ++t) {
    const double r = 0.2 + 0.6 * rng.uniform();
    const double eta = 0.6 + 0.4 * rng.uniform();
    const auto params = probe_params_from_tmsv(r, eta);
    const double theta = 2 * std::numbers::pi * rng.uniform();
    const double x_a = std::clamp(rng.normal() * std::sqrt(params.v_a), -2.5 * std::sqrt(params.v_a),
                                  2.5 * std::sqrt(params.v_a));
    const auto conditional = condition_on_homodyne(tmsv_covariance(r, eta), x_a, theta);
    const auto setting = ProbeSetting::from_outcome(params, theta, x_a);
    const auto fock = gaussian_moments(probe_fock_state(setting, 40));
    CHECK((fock.mean - conditional.mean).cwiseAbs().maxCoeff() < 1e-6);
    CHECK((fock.cov - conditional.cov).cwiseAbs().maxCoeff() < 1e-6);
    const auto gauss = probe_gaussian_state(setting);
    CHECK((gauss.mean - conditional.mean).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((gauss.cov - conditional.cov).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("probe covariance does not depend on x_a") {
  const auto p = probe_params_from_variances(0.3864, 0.7715);
  const auto a = probe_gaussian_state(ProbeSetting::from_outcome(p, 0.8, -1.5));
  const auto b = probe_gaussian_state(ProbeSetting::from_outcome(p, 0.8, 2.0));
  CHECK((a.cov - b.cov).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.mean - b.mean).cwiseAbs().maxCoeff() > 1.0);
}

TEST_CASE("truncation check") {
  const auto vac = truncation_check(FockOperator::projector(0, 10), 1e-6);
  CHECK(vac.ok);
  CHECK(vac.leaked == 0.0);

  ProbeSetting squeezed;
  squeezed.v_minus = std::exp(-2.4) / 2;
  squeezed.v_plus = std::exp(2.4) / 2;
  CHECK_THROWS_AS(probe_fock_state(squeezed, 10), TruncationError);

  ProbeSetting displaced;
  displaced.v_minus = 0.3;
  displaced.v_plus = 0.25 / 0.3;
  displaced.d = 6.0;
  CHECK_THROWS_AS(probe_fock_state(displaced, 15), TruncationError);
  // A generous cutoff holds the same probe.
  CHECK_NOTHROW(probe_fock_state(displaced, 60));
}

TEST_CASE("probe factory matches direct construction") {
  const auto p = probe_params_from_variances(0.3864, 0.7715);
  const ProbeFactory factory(p.v_minus, p.v_plus, 35);
  RngStream rng(9, 0);
  for (int t = 0; t < 10; ++t) {
    const auto s = ProbeSetting::from_outcome(p, 2 * std::numbers::pi * rng.uniform(), rng.normal());
    const auto direct = probe_fock_state(s, 35);
    CHECK(max_abs((factory.build(s.theta, s.d) - direct).matrix()) < 1e-10);
  }
}
