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

#ifndef SQPT_PATTERN_HPP
#define SQPT_PATTERN_HPP

#include <filesystem>
#include <span>
#include <vector>

#include "sqpt/fock.hpp"
#include "sqpt/homodyne.hpp"

namespace sqpt {

// Efficiencies at or below 1/2 make the kernels diverge; this floor is the
// hard limit, kDefaultMinEfficiency the default policy.
inline constexpr double kEfficiencyFloor = 0.5 + 1e-6;
inline constexpr double kDefaultMinEfficiency = 0.55;

// Loss-compensating pattern functions f_mn(x, eta), m, n <= m_max, such that
//   rho_mn = (1/2pi) int_0^{2pi} dtheta e^{i(m-n)theta} int dx p_eta(x, theta) f_mn(x, eta)
// for homodyne data of efficiency eta. Realized as
//   f_mn(x, eta) = (eta/2) int dq |q| e^{iqx} e^{q^2(1-eta)/4} <m|exp(-i sqrt(eta) q x)|n>.
// With the e^{i(m-n)theta} phase convention the kernels are real and
// f_nm = f_mn.
class PatternKernel {
 public:
  // `x_extent` bounds |x| for which the q-quadrature is refined.
  PatternKernel(int m_max, double eta, double x_extent = 12.0, double min_eta = kDefaultMinEfficiency);

  int m_max() const { return m_max_; }
  double eta() const { return eta_; }
  std::size_t node_count() const { return nodes_.size(); }
  double q_max() const { return q_max_; }

  double value(int m, int n, double x) const;
  double derivative(int m, int n, double x) const;

  // Values and x-derivatives of every pair m >= n at x, packed by
  // pair_index(m, n).
  void evaluate_all(double x, std::span<double> values, std::span<double> derivatives) const;

  static int pair_count(int m_max) { return (m_max + 1) * (m_max + 2) / 2; }
  static int pair_index(int m, int n) { return m >= n ? m * (m + 1) / 2 + n : n * (n + 1) / 2 + m; }

 private:
  void build_nodes(int panels);

  int m_max_;
  double eta_;
  double x_extent_;
  double q_max_ = 0.0;
  std::vector<double> nodes_;
  // weights_[pair * nodes + j]: quadrature weight times q^{d+1} G(q) times the pair prefactor.
  std::vector<double> weights_;
};

double pattern_value(int m, int n, double x, double eta);

struct PatternTable {
  double eta = 1.0;
  int m_max = 0;
  GridSpec grid;
  // [pair][i] packed row-major, pair = PatternKernel::pair_index(m, n).
  std::vector<double> values;
  std::vector<double> derivatives;

  // Cubic Hermite interpolation; x outside the grid throws DomainError.
  double lookup(int m, int n, double x) const;
  bool covers(double x) const { return x >= grid.x_min && x <= grid.x_max; }
  // All pairs at x, packed by pair_index.
  void lookup_all(double x, std::span<double> out) const;
  double node_value(int m, int n, int i) const {
    return values[static_cast<std::size_t>(PatternKernel::pair_index(m, n)) * grid.n_points + i];
  }
};

// Tabulates the kernels on `grid`; parallel over grid points.
PatternTable build_table(int m_max, double eta, const GridSpec& grid, int workers = 1,
                         double min_eta = kDefaultMinEfficiency);
// Serial reference build.
PatternTable build_table_serial(int m_max, double eta, const GridSpec& grid,
                                double min_eta = kDefaultMinEfficiency);

// max_{m,n <= m_max} |(1/2pi) int dtheta int dx p_eta(x,theta) f_mn(x) e^{i(m-n)theta} - rho_mn|
// by quadrature on the table grid. p_eta is the ideal quadrature density of
// the state after a loss channel of transmittance eta.
double verify_unbiasedness(const PatternTable& table, const FockOperator& rho, double eta);

inline constexpr int kPatternTableVersion = 1;

void save_pattern_table(const PatternTable& table, const std::filesystem::path& path);
// Rejects files whose version, m_max, eta or grid differ from the request.
PatternTable load_pattern_table(const std::filesystem::path& path, int m_max, double eta, const GridSpec& grid);
PatternTable load_pattern_table(const std::filesystem::path& path);

}  // namespace sqpt

#endif  // SQPT_PATTERN_HPP
