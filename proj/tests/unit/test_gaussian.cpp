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
#include "sqpt/rng.hpp"

using namespace sqpt;

TEST_CASE("tmsv covariance closed forms") {
  const auto vac = tmsv_covariance(0.0, 0.7);
  CHECK((vac.cov - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-15);

  const auto s = tmsv_covariance(0.5, 1.0);
  CHECK(s.cov(0, 0) == doctest::Approx(1.543081).epsilon(1e-6));
  CHECK(s.cov(2, 2) == doctest::Approx(std::cosh(1.0)).epsilon(1e-14));
  CHECK(s.cov(0, 2) == doctest::Approx(1.175201).epsilon(1e-6));
  CHECK(s.cov(1, 3) == doctest::Approx(-std::sinh(1.0)).epsilon(1e-14));
  CHECK(s.is_physical());

  const auto lossy = tmsv_covariance(0.5, 0.8);
  CHECK(lossy.cov(0, 0) == doctest::Approx(1.434465).epsilon(1e-6));
  CHECK(lossy.cov(0, 2) == doctest::Approx(1.051132).epsilon(1e-6));
  CHECK(lossy.is_physical());
}

TEST_CASE("conditioning the pure tmsv on x_A") {
  const auto s = tmsv_covariance(0.5, 1.0);
  const auto at0 = condition_on_homodyne(s, 0.0, 0.0);
  CHECK(std::abs(at0.mean(0)) < 1e-15);
  CHECK(std::abs(at0.mean(1)) < 1e-15);
  CHECK(at0.cov(0, 0) == doctest::Approx(1.0 / std::cosh(1.0)).epsilon(1e-12));
  CHECK(at0.cov(0, 0) == doctest::Approx(0.648054).epsilon(1e-6));
  CHECK(at0.cov(1, 1) == doctest::Approx(1.543081).epsilon(1e-6));
  const auto at1 = condition_on_homodyne(s, 1.0, 0.0);
  CHECK(at1.mean(0) == doctest::Approx(std::tanh(1.0)).epsilon(1e-12));
  CHECK(at1.mean(0) == doctest::Approx(0.761594).epsilon(1e-6));
  CHECK((at1.cov - at0.cov).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("unsqueezed modes are uncorrelated") {
  const auto s = tmsv_covariance(0.0, 1.0);
  for (double x : {-2.0, 0.3, 5.0}) {
    const auto b = condition_on_homodyne(s, x, 0.7);
    CHECK(b.mean.cwiseAbs().maxCoeff() < 1e-15);
    CHECK((b.cov - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-15);
  }
}

TEST_CASE("conditional covariance does not depend on the outcome") {
  RngStream rng(5, 0);
  const auto s = tmsv_covariance(0.7, 0.85);
  for (int t = 0; t < 20; ++t) {
    const double theta = 2 * std::numbers::pi * rng.uniform();
    const auto a = condition_on_homodyne(s, 3 * rng.normal(), theta);
    const auto b = condition_on_homodyne(s, 3 * rng.normal(), theta);
    CHECK((a.cov - b.cov).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("conditional state agrees with the closed-form probe") {
  for (double r : {0.2, 0.5, 0.9}) {
    for (double eta : {0.6, 0.8, 1.0}) {
      const auto s = tmsv_covariance(r, eta);
      const auto b = condition_on_homodyne(s, 0.9, 0.0);
      CHECK(b.cov(0, 0) / 2 == doctest::Approx(squeezed_variance(r, eta)).epsilon(1e-12));
      CHECK(b.cov(1, 1) / 2 == doctest::Approx(antisqueezed_variance(r)).epsilon(1e-12));
      CHECK(b.mean(0) == doctest::Approx(0.9 * displacement_gain(r, eta)).epsilon(1e-12));
      CHECK(mode_a_variance(r, eta) == doctest::Approx(s.cov(0, 0) / 2).epsilon(1e-14));
    }
  }
}

TEST_CASE("rotation and rotated quadratures") {
  GaussianState g = GaussianState::vacuum(1);
  g.mean << 1.0, 0.0;
  g.cov << 0.6, 0.0, 0.0, 1.8;
  const auto q = rotate(g, std::numbers::pi / 2);
  CHECK(q.cov(0, 0) == doctest::Approx(1.8).epsilon(1e-14));
  CHECK(q.cov(1, 1) == doctest::Approx(0.6).epsilon(1e-14));
  CHECK(q.mean(1) == doctest::Approx(1.0).epsilon(1e-14));
  const auto m = rotated_quadrature(g, 0.0);
  CHECK(m.mean == doctest::Approx(1.0));
  CHECK(m.variance == doctest::Approx(0.3));
  const auto m2 = rotated_quadrature(g, std::numbers::pi / 2);
  CHECK(m2.variance == doctest::Approx(0.9));
  CHECK(std::abs(m2.mean) < 1e-15);
}

TEST_CASE("probe parameters of a pure probe") {
  const auto p = probe_params_from_variances(0.324027, 0.771540);
  CHECK(std::abs(p.eta_a - 1.0) < 1e-6);
  CHECK(p.lambda == doctest::Approx(std::tanh(0.5)).epsilon(1e-6));
  CHECK(p.lambda == doctest::Approx(0.462117).epsilon(1e-6));
  // Exact purity lands on eta_A = 1 rather than 1 + epsilon.
  const double vp = std::cosh(1.0) / 2;
  const auto exact = probe_params_from_variances(0.25 / vp, vp);
  CHECK(exact.eta_a <= 1.0);
  CHECK(exact.eta_a == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("probe parameters of a mixed probe") {
  const auto p = probe_params_from_variances(0.386421, 0.771540);
  CHECK(std::abs(p.eta_a - 0.8) < 1e-5);
  CHECK(p.lambda == doctest::Approx(std::tanh(0.5)).epsilon(1e-5));
}

TEST_CASE("efficiency approaches 1/(1 + 2 V-) for large V+") {
  const auto p = probe_params_from_variances(0.25, 1e9);
  CHECK(p.eta_a == doctest::Approx(2.0 / 3.0).epsilon(1e-8));
}

TEST_CASE("inversion round trip over the (r, eta_A) grid") {
  for (int i = 1; i <= 10; ++i) {
    const double r = 0.1 * i;
    for (int j = 0; j < 10; ++j) {
      const double eta = 0.55 + 0.05 * j;
      const auto p = probe_params_from_variances(squeezed_variance(r, eta), antisqueezed_variance(r));
      CHECK(std::abs(p.eta_a - eta) < 1e-9);
      CHECK(std::abs(p.lambda - std::tanh(r)) < 1e-9);
      CHECK(std::abs(p.d_coeff - displacement_gain(r, eta)) < 1e-9);
      CHECK(std::abs(p.v_a - mode_a_variance(r, eta)) < 1e-9);
    }
  }
}

TEST_CASE("unphysical variances are rejected") {
  CHECK_THROWS_AS(probe_params_from_variances(0.3, 0.3), DomainError);
  CHECK_THROWS_AS(probe_params_from_variances(0.2, 0.9), DomainError);  // V+V- < 1/4
  CHECK_THROWS_AS(probe_params_from_variances(0.6, 0.9), DomainError);  // not squeezed
  CHECK_THROWS_AS(probe_params_from_variances(-0.1, 0.9), DomainError);
  CHECK_THROWS_AS(tmsv_covariance(-0.1, 1.0), DomainError);
  CHECK_THROWS_AS(tmsv_covariance(0.5, 1.2), DomainError);
}

TEST_CASE("conditioning on a quadrature of zero variance fails loudly") {
  GaussianState g = GaussianState::vacuum(2);
  g.cov(0, 0) = 0.0;
  CHECK_THROWS_AS(condition_on_homodyne(g, 0.0, 0.0), NumericalError);
}
