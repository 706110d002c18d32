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

#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "sqpt/errors.hpp"
#include "sqpt/gaussian.hpp"
#include "sqpt/homodyne.hpp"
#include "sqpt/probe.hpp"
#include "support.hpp"

using namespace sqpt;

namespace {

const double kSqrtPi = std::sqrt(std::numbers::pi);

double normal_cdf(double x, double mean, double var) { return 0.5 * std::erfc(-(x - mean) / std::sqrt(2 * var)); }

// CDF of |1>: 2 x^2 e^{-x^2} / sqrt(pi).
double one_photon_cdf(double x) { return 0.5 * (1 + std::erf(x)) - x * std::exp(-x * x) / kSqrtPi; }

template <typename Cdf>
double ks_statistic(std::vector<double> samples, Cdf cdf) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, std::abs(f - i / n), std::abs(f - (i + 1) / n)});
  }
  return d;
}

struct Moments {
  double mean, var;
};
Moments sample_moments(const std::vector<double>& v) {
  double s = 0, s2 = 0;
  for (double x : v) s += x;
  const double m = s / v.size();
  for (double x : v) s2 += (x - m) * (x - m);
  return {m, s2 / (v.size() - 1)};
}

}  // namespace

TEST_CASE("vacuum density") {
  const GridSpec grid{-8.0, 8.0, 2001};
  for (double phi : {0.0, 1.0, 2.5}) {
    const auto q = quadrature_distribution(FockOperator::projector(0, 6), phi, 1.0, grid);
    CHECK(q.values[1000] == doctest::Approx(1.0 / kSqrtPi).epsilon(1e-12));
    CHECK(q.values[1000] == doctest::Approx(0.564190).epsilon(1e-6));
    CHECK(q.mass() == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("single-photon density has a node at the origin") {
  const GridSpec grid{-8.0, 8.0, 2001};
  const auto q = quadrature_distribution(FockOperator::projector(1, 6), 0.3, 1.0, grid);
  CHECK(std::abs(q.values[1000]) < 1e-15);
  for (int i : {200, 700, 1300, 1650}) {
    const double x = grid.x(i);
    CHECK(q.values[i] == doctest::Approx(2 * x * x * std::exp(-x * x) / kSqrtPi).epsilon(1e-12));
  }
}

TEST_CASE("single-photon variance under loss") {
  const GridSpec grid{-10.0, 10.0, 8001};
  const auto q = quadrature_distribution(FockOperator::projector(1, 6), 0.0, 0.8, grid);
  CHECK(q.moment(2) == doctest::Approx(1.3).epsilon(1e-5));
  CHECK(q.mass() == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("moment consistency for random states") {
  RngStream rng(77, 0);
  const int c = 6;
  const GridSpec grid{-11.0, 11.0, 16001};
  const auto x = position_operator(c + 2);
  const auto p = momentum_operator(c + 2);
  for (int t = 0; t < 20; ++t) {
    const auto rho = sqpt::testing::random_density(c, rng);
    const double phi = 2 * std::numbers::pi * rng.uniform();
    const double eta = 0.6 + 0.4 * rng.uniform();
    // Pad so x and p act exactly on the support.
    CMatrix padded = CMatrix::Zero(c + 3, c + 3);
    padded.topLeftCorner(c + 1, c + 1) = rho.matrix();
    const FockOperator big(c + 2, padded);
    const auto xphi = Complex(std::cos(phi)) * x + Complex(std::sin(phi)) * p;
    const double m1 = (big * xphi).trace().real();
    const double m2 = (big * xphi * xphi).trace().real();
    const auto q = quadrature_distribution(rho, phi, eta, grid);
    CHECK(std::abs(q.mass() - 1.0) < 1e-6);
    CHECK(std::abs(q.moment(1) - std::sqrt(eta) * m1) < 1e-6);
    CHECK(std::abs(q.moment(2) - (eta * m2 + (1 - eta) / 2)) < 1e-6);
    for (double v : q.values) CHECK(v >= -1e-10);
  }
}

TEST_CASE("invalid efficiencies are rejected") {
  CHECK_THROWS_AS(quadrature_distribution(FockOperator::projector(0, 4), 0.0, 0.0), DomainError);
  CHECK_THROWS_AS(quadrature_distribution(FockOperator::projector(0, 4), 0.0, 1.5), DomainError);
}

TEST_CASE("grid too narrow for the state fails loudly") {
  const auto rho = FockOperator::projector(12, 14);
  CHECK_THROWS_AS(quadrature_distribution(rho, 0.0, 1.0, GridSpec{-2.0, 2.0, 401}), NumericalError);
}

TEST_CASE("generic sampler on the vacuum") {
  const auto ideal = QuadratureBasis(GridSpec::for_state(6), 6).ideal(FockOperator::projector(0, 6), 0.0);
  const QuadratureSampler sampler(ideal);
  RngStream rng(1, 0);
  std::vector<double> xs(100000);
  for (double& x : xs) x = sampler.sample(1.0, rng);
  const auto m = sample_moments(xs);
  CHECK(std::abs(m.var - 0.5) < 0.01);
  CHECK(std::abs(m.mean) < 3 * std::sqrt(0.5 / xs.size()));
}

TEST_CASE("generic sampler on |1> avoids the node") {
  const auto ideal = QuadratureBasis(GridSpec::for_state(6), 6).ideal(FockOperator::projector(1, 6), 0.0);
  const QuadratureSampler sampler(ideal);
  RngStream rng(2, 0);
  int near = 0;
  std::vector<double> xs(100000);
  for (double& x : xs) {
    x = sampler.sample(1.0, rng);
    near += std::abs(x) < 0.1;
  }
  CHECK(near / 1e5 < 0.002);
  xs.resize(10000);
  CHECK(ks_statistic(xs, one_photon_cdf) < 0.02);
}

TEST_CASE("generic sampler agrees with the Gaussian path on probes") {
  const auto params = probe_params_from_variances(0.3864, 0.7715);
  const auto setting = ProbeSetting::from_outcome(params, 0.9, 0.6);
  const auto rho = probe_fock_state(setting, 30);
  const auto gauss = probe_gaussian_state(setting);
  const double phi = 0.7, eta = 0.85;
  const auto q = rotated_quadrature(gauss, phi);
  const QuadratureSampler sampler(QuadratureBasis(GridSpec::for_state(30, 1.0), 30).ideal(rho, phi));
  RngStream rng(3, 0);
  std::vector<double> xs(10000);
  for (double& x : xs) x = sampler.sample(eta, rng);
  const double mean = std::sqrt(eta) * q.mean, var = eta * q.variance + (1 - eta) / 2;
  CHECK(ks_statistic(xs, [&](double x) { return normal_cdf(x, mean, var); }) < 0.02);

  // The one-shot entry point draws from the same law.
  RngStream a(4, 0);
  std::vector<double> ys(2000);
  for (double& y : ys) y = sample_quadrature_generic(rho, phi, eta, a);
  CHECK(ks_statistic(ys, [&](double x) { return normal_cdf(x, mean, var); }) < 0.045);
}

TEST_CASE("Gaussian quadrature sampler") {
  RngStream rng(5, 0);
  auto draw = [&](const GaussianState& g, double phi, double eta) {
    std::vector<double> xs(100000);
    for (double& x : xs) x = sample_quadrature_gaussian(g, phi, eta, rng);
    return sample_moments(xs);
  };
  CHECK(std::abs(draw(GaussianState::vacuum(1), 0.4, 1.0).var - 0.5) < 0.01);
  GaussianState sq = GaussianState::vacuum(1);
  sq.cov << 0.6, 0.0, 0.0, 0.25 / 0.3 * 2;
  CHECK(std::abs(draw(sq, 0.0, 1.0).var - 0.3) < 0.006);
  CHECK(std::abs(draw(sq, 0.0, 0.8).var - 0.34) < 0.007);
}

TEST_CASE("virtual mode-A outcomes") {
  const auto params = probe_params_from_tmsv(0.5, 1.0);
  RngStream rng(6, 0);
  std::vector<double> xs(100000);
  for (double& x : xs) x = sample_xa(params, rng);
  const auto m = sample_moments(xs);
  CHECK(std::abs(m.var - 0.771540) < 0.01);
  CHECK(std::abs(m.mean) < 3 * std::sqrt(params.v_a / xs.size()));
}

TEST_CASE("RNG streams are reproducible and distinct") {
  RngStream a(42, 3), b(42, 3), c(42, 4), d(43, 3);
  bool differ_c = false, differ_d = false;
  for (int i = 0; i < 100; ++i) {
    const double x = a.normal();
    CHECK(x == b.normal());
    differ_c |= x != c.normal();
    differ_d |= x != d.normal();
  }
  CHECK(differ_c);
  CHECK(differ_d);
  RngStream u(1, 0);
  for (int i = 0; i < 1000; ++i) {
    const double v = u.uniform();
    CHECK(v >= 0.0);
    CHECK(v < 1.0);
  }
}
