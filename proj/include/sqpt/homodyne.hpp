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

#ifndef SQPT_HOMODYNE_HPP
#define SQPT_HOMODYNE_HPP

#include <vector>

#include <Eigen/Dense>

#include "sqpt/fock.hpp"
#include "sqpt/gaussian.hpp"
#include "sqpt/rng.hpp"

namespace sqpt {

struct GridSpec {
  double x_min = -8.0;
  double x_max = 8.0;
  int n_points = 2048;

  double step() const { return (x_max - x_min) / (n_points - 1); }
  double x(int i) const { return x_min + step() * i; }

  // Symmetric grid covering Fock states up to `cutoff` displaced by up to
  // `mean_abs`: half-width 3 + sqrt(2 cutoff) + mean_abs.
  static GridSpec for_state(int cutoff, double mean_abs = 0.0, int n_points = 2048);
};

// Tabulated density of a homodyne outcome.
struct QuadratureGrid {
  GridSpec grid;
  std::vector<double> values;

  double mass() const;
  double moment(int order) const;
};

// Hermite functions tabulated on a grid; evaluates the ideal (eta = 1)
// quadrature density of any state with the same cutoff.
class QuadratureBasis {
 public:
  QuadratureBasis(const GridSpec& grid, int cutoff);

  const GridSpec& grid() const { return grid_; }
  int cutoff() const { return cutoff_; }

  // p(y, phi) = sum_{mn} rho_mn e^{-i(m-n)phi} psi_m(y) psi_n(y), the density
  // of x cos(phi) + p sin(phi).
  QuadratureGrid ideal(const FockOperator& rho, double phi) const;

 private:
  GridSpec grid_;
  int cutoff_;
  Eigen::MatrixXd psi_;  // n_points x (cutoff + 1)
};

// Density of sqrt(eta) x_phi + sqrt(1 - eta) x_vac: the ideal density
// convolved on the grid with N(x; sqrt(eta) y, (1 - eta)/2). Throws
// NumericalError if the grid mass falls below 0.999.
QuadratureGrid quadrature_distribution(const FockOperator& rho, double phi, double eta, const GridSpec& grid);
QuadratureGrid quadrature_distribution(const FockOperator& rho, double phi, double eta);

// Inverse-CDF sampler over a tabulated ideal density. Detection loss is
// applied as sqrt(eta) y + N(0, (1 - eta)/2).
class QuadratureSampler {
 public:
  explicit QuadratureSampler(const QuadratureGrid& ideal);

  double sample(double eta, RngStream& rng) const;

 private:
  GridSpec grid_;
  std::vector<double> cdf_;
};

double sample_quadrature_generic(const FockOperator& rho, double phi, double eta, RngStream& rng);

// Fast path for Gaussian states: N(sqrt(eta) mu_phi, eta var_phi + (1 - eta)/2).
double sample_quadrature_gaussian(const GaussianState& state, double phi, double eta, RngStream& rng);

// Virtual mode-A homodyne outcome, N(0, V_A). Independent of theta.
double sample_xa(const ProbeEnsembleParams& params, RngStream& rng);

}  // namespace sqpt

#endif  // SQPT_HOMODYNE_HPP
