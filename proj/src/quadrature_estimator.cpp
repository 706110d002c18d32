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

#include "sqpt/errors.hpp"
#include "sqpt/estimators.hpp"
#include "sqpt/probe.hpp"

namespace sqpt {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double gaussian_pdf(double x, double mean, double var) {
  const double z = x - mean;
  return std::exp(-0.5 * z * z / var) / std::sqrt(kTwoPi * var);
}

}  // namespace

ChoiMatrix estimate_choi_quadrature(const KrausChannel& channel, const ProbeEnsembleParams& params, double eta_b,
                                    int k_max, const QuadratureEstimatorOptions& options) {
  if (!channel.gaussian) throw DomainError("quadrature estimator needs a Gaussian channel");
  if (!(eta_b > kEfficiencyFloor && eta_b <= 1.0)) throw DomainError("eta_B must lie in (1/2, 1]");
  if (k_max < 0) throw DomainError("k_max must be >= 0");
  if (options.theta_points < 1 || options.phi_points < 1 || options.xa_points < 3)
    throw DomainError("quadrature estimator needs positive point counts");
  const GaussianAction& action = *channel.gaussian;

  const double sd_a = std::sqrt(params.v_a);
  const double xa_ext = options.xa_sigmas * sd_a;
  const GridSpec grid_a{-xa_ext, xa_ext, options.xa_points};
  const PatternTable table_a = build_table(k_max, params.eta_a, grid_a, options.workers, kEfficiencyFloor);

  // Bound the spread of every conditional output quadrature to size the x_b grid.
  const double gain = action.x.norm();
  const double mean_max = std::sqrt(eta_b) * gain * params.d_coeff * xa_ext;
  const double var_max = eta_b * 0.5 * (gain * gain * 2.0 * params.v_plus + action.y.norm()) + 0.5 * (1.0 - eta_b);
  const double xb_ext = mean_max + 11.0 * std::sqrt(var_max) + 0.5;
  const double xb_step = 0.02;
  const GridSpec grid_b{-xb_ext, xb_ext, static_cast<int>(std::ceil(2.0 * xb_ext / xb_step)) + 1};
  const PatternTable table_b = build_table(k_max, eta_b, grid_b, options.workers, kEfficiencyFloor);

  const int d = k_max + 1;
  const int pairs = PatternKernel::pair_count(k_max);
  const std::size_t elements = static_cast<std::size_t>(d) * d * d * d;
  const int n_theta = options.theta_points;
  std::vector<std::vector<Complex>> partial(n_theta, std::vector<Complex>(elements, 0.0));

#pragma omp parallel for schedule(dynamic, 1) num_threads(std::max(1, options.workers))
  for (int ti = 0; ti < n_theta; ++ti) {
    const double theta = kTwoPi * ti / n_theta;
    std::vector<Complex> j_mn(static_cast<std::size_t>(d) * d);
    std::vector<double> inner(pairs);
    auto& acc = partial[ti];
    for (int xi = 0; xi < grid_a.n_points; ++xi) {
      const double x_a = grid_a.x(xi);
      const double trap = (xi == 0 || xi == grid_a.n_points - 1) ? 0.5 : 1.0;
      const double weight_a = trap * grid_a.step() * gaussian_pdf(x_a, 0.0, params.v_a);
      const GaussianState out =
          action.apply(probe_gaussian_state(ProbeSetting::from_outcome(params, theta, x_a)));
      std::fill(j_mn.begin(), j_mn.end(), Complex(0.0));
      for (int pi = 0; pi < options.phi_points; ++pi) {
        const double phi = kTwoPi * pi / options.phi_points;
        const QuadratureMoments q = rotated_quadrature(out, phi);
        const double mu = std::sqrt(eta_b) * q.mean;
        const double var = eta_b * q.variance + 0.5 * (1.0 - eta_b);
        const double half = 11.0 * std::sqrt(var);
        const int lo = std::max(0, static_cast<int>(std::floor((mu - half - grid_b.x_min) / grid_b.step())));
        const int hi = std::min(grid_b.n_points - 1, static_cast<int>(std::ceil((mu + half - grid_b.x_min) / grid_b.step())));
        std::fill(inner.begin(), inner.end(), 0.0);
        for (int i = lo; i <= hi; ++i) {
          const double w = gaussian_pdf(grid_b.x(i), mu, var);
          for (int p = 0; p < pairs; ++p) inner[p] += w * table_b.values[static_cast<std::size_t>(p) * grid_b.n_points + i];
        }
        for (int m = 0; m < d; ++m)
          for (int n = 0; n < d; ++n)
            j_mn[m * d + n] += inner[PatternKernel::pair_index(m, n)] * grid_b.step() * std::polar(1.0, phi * (m - n));
      }
      std::size_t idx = 0;
      for (int k = 0; k < d; ++k)
        for (int m = 0; m < d; ++m)
          for (int l = 0; l < d; ++l) {
            const Complex a = weight_a * table_a.node_value(k, l, xi) * std::polar(1.0, theta * (k - l)) /
                              static_cast<double>(options.phi_points);
            for (int n = 0; n < d; ++n, ++idx) acc[idx] += a * j_mn[m * d + n];
          }
    }
  }

  ChoiMatrix chi(k_max);
  const double lambda = params.lambda;
  std::size_t idx = 0;
  for (int k = 0; k < d; ++k)
    for (int m = 0; m < d; ++m)
      for (int l = 0; l < d; ++l)
        for (int n = 0; n < d; ++n, ++idx) {
          Complex sum = 0.0;
          for (int ti = 0; ti < n_theta; ++ti) sum += partial[ti][idx];
          chi(k, m, l, n) = sum / static_cast<double>(n_theta) / ((1.0 - lambda * lambda) * std::pow(lambda, k + l));
        }
  return chi;
}

}  // namespace sqpt
