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

#ifndef SQPT_CHANNELS_HPP
#define SQPT_CHANNELS_HPP

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sqpt/fock.hpp"
#include "sqpt/gaussian.hpp"

namespace sqpt {

// Affine action of a Gaussian channel on (mean, cov):
// mean -> X mean, cov -> X cov X^T + Y.
struct GaussianAction {
  Eigen::Matrix2d x = Eigen::Matrix2d::Identity();
  Eigen::Matrix2d y = Eigen::Matrix2d::Zero();

  GaussianState apply(const GaussianState& state) const;
};

struct KrausChannel {
  std::string name;
  std::vector<FockOperator> kraus_ops;
  bool trace_preserving = true;
  // Present when the channel maps Gaussian states to Gaussian states.
  std::optional<GaussianAction> gaussian;

  int cutoff() const { return kraus_ops.front().cutoff(); }
};

// Choi matrix chi_{km,ln} = <k m|chi|l n>, all indices in [0, k_max].
class ChoiMatrix {
 public:
  explicit ChoiMatrix(int k_max);

  int k_max() const { return k_max_; }
  int dim() const { return k_max_ + 1; }

  Complex& operator()(int k, int m, int l, int n) { return data_[index(k, m, l, n)]; }
  Complex operator()(int k, int m, int l, int n) const { return data_[index(k, m, l, n)]; }

  // Matrix over joint row index (k, m) and column index (l, n).
  CMatrix as_matrix() const;

  double hermiticity_residual() const;
  double min_eigenvalue() const;

  const std::vector<Complex>& data() const { return data_; }

 private:
  std::size_t index(int k, int m, int l, int n) const {
    const std::size_t d = static_cast<std::size_t>(k_max_) + 1;
    return ((static_cast<std::size_t>(k) * d + m) * d + l) * d + n;
  }

  int k_max_;
  std::vector<Complex> data_;
};

// A term c * tau^n (tau in [0, 1]); used to express diagonal Gaussian POVM
// elements such as the on/off detector.
struct PowerTerm {
  double coefficient;
  double tau;
};

struct Povm {
  std::string name;
  std::vector<FockOperator> elements;
  // Optional closed form: element k = sum of PowerTerms in gaussian_form[k].
  std::optional<std::vector<std::vector<PowerTerm>>> gaussian_form;

  int cutoff() const { return elements.front().cutoff(); }
  int outcomes() const { return static_cast<int>(elements.size()); }
};

// sum_j A_j rho A_j^dagger
FockOperator apply_channel(const KrausChannel& channel, const FockOperator& rho_in);

// rho_out,mn = sum_{kl} chi_{km,ln} rho_in,kl
FockOperator apply_choi(const ChoiMatrix& chi, const FockOperator& rho_in);

ChoiMatrix choi_from_kraus(const KrausChannel& channel, int k_max);

KrausChannel identity_channel(int cutoff);
KrausChannel loss_channel(double transmittance, int cutoff);
// Single unitary Kraus exp(-i n phi0).
KrausChannel phase_channel(double phi0, int cutoff);
// Single Kraus sqrt(1-T) T^{n/2} a: a photon tapped off by a beam splitter of
// transmittance T and detected. Trace decreasing.
KrausChannel photon_subtraction(double transmittance, int cutoff);

// No-click element (1 - p_dark)(1 - eta_d)^n, click = I - no-click.
Povm onoff_detector(double eta_d, double p_dark, int cutoff);
// Photon-number resolving detector with binomial loss; the last element
// collects all counts >= k_max.
Povm pnr_detector(double eta_d, int k_max, int cutoff);

// p_k = Tr[Pi^k rho], clipped to [0, 1]. Throws DomainError unless Tr rho = 1
// within 1e-8.
std::vector<double> outcome_probabilities(const Povm& povm, const FockOperator& rho);

// Same from the closed form of a Gaussian-diagonal POVM and a Gaussian state.
std::vector<double> outcome_probabilities(const Povm& povm, const GaussianState& state);

// Tr[rho tau^n] for a single-mode Gaussian state.
double power_expectation(const GaussianState& state, double tau);

}  // namespace sqpt

#endif  // SQPT_CHANNELS_HPP
