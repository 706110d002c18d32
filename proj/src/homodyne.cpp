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

#include "sqpt/homodyne.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "sqpt/errors.hpp"

namespace sqpt {

namespace {

void require_eta(double eta) {
  if (!(eta > 0.0 && eta <= 1.0)) throw DomainError("homodyne efficiency must lie in (0, 1]");
}

double std_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }
double std_normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }

}  // namespace

GridSpec GridSpec::for_state(int cutoff, double mean_abs, int n_points) {
  const double half = 3.0 + std::sqrt(2.0 * cutoff) + std::abs(mean_abs);
  return {-half, half, n_points};
}

double QuadratureGrid::mass() const { return moment(0); }

double QuadratureGrid::moment(int order) const {
  const int n = grid.n_points;
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const double w = (i == 0 || i == n - 1) ? 0.5 : 1.0;
    acc += w * values[i] * std::pow(grid.x(i), order);
  }
  return acc * grid.step();
}

QuadratureBasis::QuadratureBasis(const GridSpec& grid, int cutoff)
    : grid_(grid), cutoff_(cutoff), psi_(grid.n_points, cutoff + 1) {
  if (grid.n_points < 2 || !(grid.x_max > grid.x_min)) throw DomainError("invalid quadrature grid");
  std::vector<double> buf(cutoff + 1);
  for (int i = 0; i < grid.n_points; ++i) {
    hermite_wavefunctions(grid.x(i), buf);
    for (int n = 0; n <= cutoff; ++n) psi_(i, n) = buf[n];
  }
}

QuadratureGrid QuadratureBasis::ideal(const FockOperator& rho, double phi) const {
  if (rho.cutoff() != cutoff_) throw DomainError("cutoff mismatch in quadrature basis");
  const int dim = cutoff_ + 1;
  // Only the real symmetric part of the rotated density matrix contributes.
  Eigen::MatrixXd sym(dim, dim);
  for (int m = 0; m < dim; ++m)
    for (int n = 0; n < dim; ++n) sym(m, n) = (rho(m, n) * std::polar(1.0, -phi * (m - n))).real();
  sym = 0.5 * (sym + sym.transpose()).eval();
  const Eigen::MatrixXd t = psi_ * sym;
  QuadratureGrid out{grid_, std::vector<double>(grid_.n_points)};
  for (int i = 0; i < grid_.n_points; ++i) out.values[i] = t.row(i).dot(psi_.row(i));
  return out;
}

QuadratureGrid quadrature_distribution(const FockOperator& rho, double phi, double eta, const GridSpec& grid) {
  require_eta(eta);
  const QuadratureGrid ideal = QuadratureBasis(grid, rho.cutoff()).ideal(rho, phi);
  QuadratureGrid out = ideal;
  if (eta < 1.0) {
    // Piecewise-linear interpolant of the ideal density integrated exactly
    // against the Gaussian kernel, written as a density in y.
    const double h = grid.step();
    const double s = std::sqrt((1.0 - eta) / (2.0 * eta));
    const double inv_sqrt_eta = 1.0 / std::sqrt(eta);
    const int n = grid.n_points;
    for (int i = 0; i < n; ++i) {
      const double mu = grid.x(i) * inv_sqrt_eta;
      const int j_lo = std::max(0, static_cast<int>(std::floor((mu - 9.0 * s - grid.x_min) / h)));
      const int j_hi = std::min(n - 1, static_cast<int>(std::ceil((mu + 9.0 * s - grid.x_min) / h)));
      double acc = 0.0;
      for (int j = j_lo; j < j_hi; ++j) {
        const double y0 = grid.x(j);
        const double za = (y0 - mu) / s;
        const double zb = (y0 + h - mu) / s;
        const double mass = std_normal_cdf(zb) - std_normal_cdf(za);
        const double first = mu * mass - s * (std_normal_pdf(zb) - std_normal_pdf(za));
        const double slope = (ideal.values[j + 1] - ideal.values[j]) / h;
        acc += ideal.values[j] * mass + slope * (first - y0 * mass);
      }
      out.values[i] = acc * inv_sqrt_eta;
    }
  }
  for (double& v : out.values) {
    if (v < -1e-10) throw NumericalError("negative quadrature density " + std::to_string(v));
    v = std::max(v, 0.0);
  }
  const double mass = out.mass();
  if (mass < 0.999) throw NumericalError("quadrature grid captures only " + std::to_string(mass) + " of the mass");
  return out;
}

QuadratureGrid quadrature_distribution(const FockOperator& rho, double phi, double eta) {
  return quadrature_distribution(rho, phi, eta, GridSpec::for_state(rho.cutoff()));
}

QuadratureSampler::QuadratureSampler(const QuadratureGrid& ideal) : grid_(ideal.grid) {
  const int n = grid_.n_points;
  cdf_.assign(n, 0.0);
  const double h = grid_.step();
  for (int i = 1; i < n; ++i)
    cdf_[i] = cdf_[i - 1] + 0.5 * h * (std::max(ideal.values[i - 1], 0.0) + std::max(ideal.values[i], 0.0));
  const double total = cdf_.back();
  if (total < 0.999) throw NumericalError("quadrature grid captures only " + std::to_string(total) + " of the mass");
  for (double& c : cdf_) c /= total;
}

double QuadratureSampler::sample(double eta, RngStream& rng) const {
  const double u = rng.uniform();
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  int j = static_cast<int>(it - cdf_.begin());
  j = std::clamp(j, 1, grid_.n_points - 1);
  const double c0 = cdf_[j - 1];
  const double c1 = cdf_[j];
  const double frac = c1 > c0 ? (u - c0) / (c1 - c0) : 0.5;
  const double y = grid_.x(j - 1) + frac * grid_.step();
  if (eta >= 1.0) return y;
  return std::sqrt(eta) * y + std::sqrt(0.5 * (1.0 - eta)) * rng.normal();
}

double sample_quadrature_generic(const FockOperator& rho, double phi, double eta, RngStream& rng) {
  require_eta(eta);
  const QuadratureBasis basis(GridSpec::for_state(rho.cutoff()), rho.cutoff());
  return QuadratureSampler(basis.ideal(rho, phi)).sample(eta, rng);
}

double sample_quadrature_gaussian(const GaussianState& state, double phi, double eta, RngStream& rng) {
  require_eta(eta);
  const QuadratureMoments q = rotated_quadrature(state, phi);
  return rng.normal(std::sqrt(eta) * q.mean, std::sqrt(eta * q.variance + 0.5 * (1.0 - eta)));
}

double sample_xa(const ProbeEnsembleParams& params, RngStream& rng) {
  return rng.normal(0.0, std::sqrt(params.v_a));
}

}  // namespace sqpt
