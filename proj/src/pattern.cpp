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

#include "sqpt/pattern.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/laguerre.hpp>
#include "json.hpp"

#include "sqpt/channels.hpp"
#include "sqpt/errors.hpp"

namespace sqpt {

namespace {

using GaussRule = boost::math::quadrature::gauss<double, 20>;

// log|q^{d+1} exp(q^2 (1 - 2 eta)/4) L_n^{(d)}(eta q^2 / 2)|
double log_envelope(int m, int n, double q, double eta) {
  const int d = m - n;
  const double lag = boost::math::laguerre(static_cast<unsigned>(n), static_cast<unsigned>(d), 0.5 * eta * q * q);
  if (lag == 0.0 || q == 0.0) return -std::numeric_limits<double>::infinity();
  return (d + 1) * std::log(q) + 0.25 * q * q * (1.0 - 2.0 * eta) + std::log(std::abs(lag));
}

double pair_prefactor(int m, int n, double eta) {
  const int d = m - n;
  const double sign = (d % 4 == 0 || d % 4 == 1) ? 1.0 : -1.0;
  const double log_fact = 0.5 * (std::lgamma(n + 1.0) - std::lgamma(m + 1.0));
  return sign * eta * std::pow(0.5 * eta, 0.5 * d) * std::exp(log_fact);
}

}  // namespace

PatternKernel::PatternKernel(int m_max, double eta, double x_extent, double min_eta)
    : m_max_(m_max), eta_(eta), x_extent_(std::max(1.0, x_extent)) {
  if (m_max < 0) throw DomainError("m_max must be >= 0");
  if (!(min_eta >= kEfficiencyFloor)) throw DomainError("minimum efficiency cannot be below 1/2");
  if (!(eta > kEfficiencyFloor) || !(eta <= 1.0))
    throw DomainError("pattern functions require 1/2 < eta <= 1, got " + std::to_string(eta));
  if (eta < min_eta)
    throw DomainError("efficiency " + std::to_string(eta) + " below the configured minimum " +
                      std::to_string(min_eta) + " (kernels diverge as eta -> 1/2)");

  // Integration range: beyond q_max every integrand is below e^-40 of its peak.
  const double decay = 0.25 * (2.0 * eta - 1.0);
  const double scan_max = std::sqrt(900.0 / decay);
  const double step = 0.02;
  double peak = -std::numeric_limits<double>::infinity();
  std::vector<double> qs;
  for (double q = step; q <= scan_max; q += step) qs.push_back(q);
  for (int m = 0; m <= m_max; ++m)
    for (int n = 0; n <= m; ++n)
      for (double q : qs) peak = std::max(peak, log_envelope(m, n, q, eta));
  if (peak > std::log(1e15))
    throw NumericalError("pattern kernels exceed the double-precision budget at eta = " + std::to_string(eta));
  for (int m = 0; m <= m_max; ++m)
    for (int n = 0; n <= m; ++n)
      for (auto it = qs.rbegin(); it != qs.rend(); ++it)
        if (log_envelope(m, n, *it, eta) > peak - 40.0) {
          q_max_ = std::max(q_max_, *it + step);
          break;
        }

  // Panel refinement: double the panel count until kernel values at probe
  // points stop changing.
  const std::vector<double> probes = {0.0, 0.37 * x_extent_, 0.71 * x_extent_, x_extent_};
  auto snapshot = [&] {
    std::vector<double> out;
    for (double x : probes)
      for (int m = 0; m <= m_max_; ++m)
        for (int n = 0; n <= m; ++n) out.push_back(value(m, n, x));
    return out;
  };
  int panels = std::max(8, static_cast<int>(std::ceil(q_max_ * (1.0 + x_extent_) / 6.0)));
  build_nodes(panels);
  std::vector<double> previous = snapshot();
  for (int iter = 0; iter < 8; ++iter) {
    panels *= 2;
    build_nodes(panels);
    std::vector<double> current = snapshot();
    double scale = 1.0;
    double diff = 0.0;
    for (std::size_t i = 0; i < current.size(); ++i) {
      scale = std::max(scale, std::abs(current[i]));
      diff = std::max(diff, std::abs(current[i] - previous[i]));
    }
    if (diff <= 1e-13 * scale) return;
    previous = std::move(current);
  }
  throw NumericalError("pattern kernel quadrature did not converge");
}

void PatternKernel::build_nodes(int panels) {
  nodes_.clear();
  std::vector<double> base_weights;
  const double h = q_max_ / panels;
  const auto& abscissa = GaussRule::abscissa();
  const auto& gw = GaussRule::weights();
  for (int p = 0; p < panels; ++p) {
    const double mid = (p + 0.5) * h;
    for (std::size_t j = 0; j < abscissa.size(); ++j) {
      // 20-point rule: abscissa holds the non-negative half.
      nodes_.push_back(mid + 0.5 * h * abscissa[j]);
      base_weights.push_back(0.5 * h * gw[j]);
      nodes_.push_back(mid - 0.5 * h * abscissa[j]);
      base_weights.push_back(0.5 * h * gw[j]);
    }
  }
  const std::size_t count = nodes_.size();
  weights_.assign(pair_count(m_max_) * count, 0.0);
  for (int m = 0; m <= m_max_; ++m)
    for (int n = 0; n <= m; ++n) {
      const int d = m - n;
      const double pref = pair_prefactor(m, n, eta_);
      double* w = &weights_[pair_index(m, n) * count];
      for (std::size_t j = 0; j < count; ++j) {
        const double q = nodes_[j];
        const double lag =
            boost::math::laguerre(static_cast<unsigned>(n), static_cast<unsigned>(d), 0.5 * eta_ * q * q);
        w[j] = base_weights[j] * pref * std::pow(q, d + 1) * std::exp(0.25 * q * q * (1.0 - 2.0 * eta_)) * lag;
      }
    }
}

double PatternKernel::value(int m, int n, double x) const {
  if (m < 0 || n < 0 || m > m_max_ || n > m_max_) throw DomainError("pattern index outside m_max");
  const int d = std::abs(m - n);
  const std::size_t count = nodes_.size();
  const double* w = &weights_[pair_index(m, n) * count];
  double acc = 0.0;
  if (d % 2 == 0)
    for (std::size_t j = 0; j < count; ++j) acc += w[j] * std::cos(nodes_[j] * x);
  else
    for (std::size_t j = 0; j < count; ++j) acc += w[j] * std::sin(nodes_[j] * x);
  return acc;
}

double PatternKernel::derivative(int m, int n, double x) const {
  if (m < 0 || n < 0 || m > m_max_ || n > m_max_) throw DomainError("pattern index outside m_max");
  const int d = std::abs(m - n);
  const std::size_t count = nodes_.size();
  const double* w = &weights_[pair_index(m, n) * count];
  double acc = 0.0;
  if (d % 2 == 0)
    for (std::size_t j = 0; j < count; ++j) acc -= w[j] * nodes_[j] * std::sin(nodes_[j] * x);
  else
    for (std::size_t j = 0; j < count; ++j) acc += w[j] * nodes_[j] * std::cos(nodes_[j] * x);
  return acc;
}

void PatternKernel::evaluate_all(double x, std::span<double> values, std::span<double> derivatives) const {
  const std::size_t count = nodes_.size();
  std::vector<double> c(count), s(count);
  for (std::size_t j = 0; j < count; ++j) {
    c[j] = std::cos(nodes_[j] * x);
    s[j] = std::sin(nodes_[j] * x);
  }
  for (int m = 0; m <= m_max_; ++m)
    for (int n = 0; n <= m; ++n) {
      const int p = pair_index(m, n);
      const double* w = &weights_[p * count];
      double v = 0.0, dv = 0.0;
      if ((m - n) % 2 == 0) {
        for (std::size_t j = 0; j < count; ++j) {
          v += w[j] * c[j];
          dv -= w[j] * nodes_[j] * s[j];
        }
      } else {
        for (std::size_t j = 0; j < count; ++j) {
          v += w[j] * s[j];
          dv += w[j] * nodes_[j] * c[j];
        }
      }
      values[p] = v;
      derivatives[p] = dv;
    }
}

double pattern_value(int m, int n, double x, double eta) {
  const PatternKernel kernel(std::max(m, n), eta, std::max(12.0, std::abs(x)), kEfficiencyFloor);
  return kernel.value(m, n, x);
}

double PatternTable::lookup(int m, int n, double x) const {
  if (m < 0 || n < 0 || m > m_max || n > m_max) throw DomainError("pattern index outside table");
  if (!covers(x)) throw DomainError("quadrature value " + std::to_string(x) + " outside the pattern table grid");
  const double h = grid.step();
  const double t = (x - grid.x_min) / h;
  const int i = std::min(static_cast<int>(t), grid.n_points - 2);
  const double u = t - i;
  const std::size_t base = static_cast<std::size_t>(PatternKernel::pair_index(m, n)) * grid.n_points + i;
  const double u2 = u * u, u3 = u2 * u;
  return (2 * u3 - 3 * u2 + 1) * values[base] + (u3 - 2 * u2 + u) * h * derivatives[base] +
         (-2 * u3 + 3 * u2) * values[base + 1] + (u3 - u2) * h * derivatives[base + 1];
}

void PatternTable::lookup_all(double x, std::span<double> out) const {
  if (!covers(x)) throw DomainError("quadrature value " + std::to_string(x) + " outside the pattern table grid");
  const double h = grid.step();
  const double t = (x - grid.x_min) / h;
  const int i = std::min(static_cast<int>(t), grid.n_points - 2);
  const double u = t - i;
  const double u2 = u * u, u3 = u2 * u;
  const double h00 = 2 * u3 - 3 * u2 + 1, h10 = (u3 - 2 * u2 + u) * h;
  const double h01 = -2 * u3 + 3 * u2, h11 = (u3 - u2) * h;
  const int pairs = PatternKernel::pair_count(m_max);
  for (int p = 0; p < pairs; ++p) {
    const std::size_t base = static_cast<std::size_t>(p) * grid.n_points + i;
    out[p] = h00 * values[base] + h10 * derivatives[base] + h01 * values[base + 1] + h11 * derivatives[base + 1];
  }
}

namespace {

PatternTable make_table_shell(int m_max, double eta, const GridSpec& grid) {
  if (grid.n_points < 2 || !(grid.x_max > grid.x_min)) throw DomainError("invalid pattern table grid");
  PatternTable t;
  t.eta = eta;
  t.m_max = m_max;
  t.grid = grid;
  const std::size_t size = static_cast<std::size_t>(PatternKernel::pair_count(m_max)) * grid.n_points;
  t.values.assign(size, 0.0);
  t.derivatives.assign(size, 0.0);
  return t;
}

void fill_point(const PatternKernel& kernel, PatternTable& t, int i, std::span<double> v, std::span<double> dv) {
  kernel.evaluate_all(t.grid.x(i), v, dv);
  const int pairs = PatternKernel::pair_count(t.m_max);
  for (int p = 0; p < pairs; ++p) {
    t.values[static_cast<std::size_t>(p) * t.grid.n_points + i] = v[p];
    t.derivatives[static_cast<std::size_t>(p) * t.grid.n_points + i] = dv[p];
  }
}

}  // namespace

PatternTable build_table(int m_max, double eta, const GridSpec& grid, int workers, double min_eta) {
  PatternTable t = make_table_shell(m_max, eta, grid);
  const double extent = std::max(std::abs(grid.x_min), std::abs(grid.x_max));
  const PatternKernel kernel(m_max, eta, extent, min_eta);
  const int pairs = PatternKernel::pair_count(m_max);
#pragma omp parallel num_threads(std::max(1, workers))
  {
    std::vector<double> v(pairs), dv(pairs);
#pragma omp for schedule(static)
    for (int i = 0; i < grid.n_points; ++i) fill_point(kernel, t, i, v, dv);
  }
  return t;
}

PatternTable build_table_serial(int m_max, double eta, const GridSpec& grid, double min_eta) {
  PatternTable t = make_table_shell(m_max, eta, grid);
  const double extent = std::max(std::abs(grid.x_min), std::abs(grid.x_max));
  const PatternKernel kernel(m_max, eta, extent, min_eta);
  const int pairs = PatternKernel::pair_count(m_max);
  std::vector<double> v(pairs), dv(pairs);
  for (int i = 0; i < grid.n_points; ++i) fill_point(kernel, t, i, v, dv);
  return t;
}

double verify_unbiasedness(const PatternTable& table, const FockOperator& rho, double eta) {
  if (std::abs(eta - table.eta) > 1e-15) throw DomainError("table efficiency does not match eta");
  const int cutoff = rho.cutoff();
  const FockOperator lossy = eta < 1.0 ? apply_channel(loss_channel(eta, cutoff), rho) : rho;
  const QuadratureBasis basis(table.grid, cutoff);
  const int n_theta = 2 * (cutoff + table.m_max) + 2;
  const int dim = table.m_max + 1;
  CMatrix estimate = CMatrix::Zero(dim, dim);
  const double h = table.grid.step();
  for (int t = 0; t < n_theta; ++t) {
    const double theta = 2.0 * std::numbers::pi * t / n_theta;
    const QuadratureGrid p = basis.ideal(lossy, theta);
    for (int m = 0; m < dim; ++m)
      for (int n = 0; n < dim; ++n) {
        double acc = 0.0;
        for (int i = 0; i < table.grid.n_points; ++i) {
          const double w = (i == 0 || i == table.grid.n_points - 1) ? 0.5 : 1.0;
          acc += w * p.values[i] * table.node_value(m, n, i);
        }
        estimate(m, n) += acc * h * std::polar(1.0, theta * (m - n));
      }
  }
  estimate /= static_cast<double>(n_theta);
  double err = 0.0;
  for (int m = 0; m < dim; ++m)
    for (int n = 0; n < dim; ++n) {
      const Complex truth = (m <= cutoff && n <= cutoff) ? rho(m, n) : Complex(0.0);
      err = std::max(err, std::abs(estimate(m, n) - truth));
    }
  return err;
}

void save_pattern_table(const PatternTable& table, const std::filesystem::path& path) {
  nlohmann::json j;
  j["format"] = "sqpt-pattern-table";
  j["version"] = kPatternTableVersion;
  j["key"] = {{"m_max", table.m_max},
              {"eta", table.eta},
              {"grid", {{"x_min", table.grid.x_min}, {"x_max", table.grid.x_max}, {"n_points", table.grid.n_points}}}};
  j["pair_order"] = "pair = m(m+1)/2 + n for m >= n; values[pair][i] at x_min + i*(x_max-x_min)/(n_points-1)";
  j["values"] = table.values;
  j["derivatives"] = table.derivatives;
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw ConfigError("cannot write " + tmp.string());
    out << j.dump();
  }
  std::filesystem::rename(tmp, path);
}

PatternTable load_pattern_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read pattern table " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("malformed pattern table " + path.string() + ": " + e.what());
  }
  if (j.value("format", "") != "sqpt-pattern-table") throw ConfigError("not a pattern table: " + path.string());
  if (j.value("version", -1) != kPatternTableVersion)
    throw ConfigError("pattern table version mismatch in " + path.string());
  PatternTable t;
  const auto& key = j.at("key");
  t.m_max = key.at("m_max").get<int>();
  t.eta = key.at("eta").get<double>();
  t.grid = {key.at("grid").at("x_min").get<double>(), key.at("grid").at("x_max").get<double>(),
            key.at("grid").at("n_points").get<int>()};
  t.values = j.at("values").get<std::vector<double>>();
  t.derivatives = j.at("derivatives").get<std::vector<double>>();
  const std::size_t expected = static_cast<std::size_t>(PatternKernel::pair_count(t.m_max)) * t.grid.n_points;
  if (t.values.size() != expected || t.derivatives.size() != expected)
    throw ConfigError("pattern table payload has the wrong size");
  return t;
}

PatternTable load_pattern_table(const std::filesystem::path& path, int m_max, double eta, const GridSpec& grid) {
  PatternTable t = load_pattern_table(path);
  if (t.m_max != m_max || t.eta != eta || t.grid.x_min != grid.x_min || t.grid.x_max != grid.x_max ||
      t.grid.n_points != grid.n_points)
    throw ConfigError("pattern table key mismatch in " + path.string());
  return t;
}

}  // namespace sqpt
