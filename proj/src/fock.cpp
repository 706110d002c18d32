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

#include "sqpt/fock.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

#include <unsupported/Eigen/MatrixFunctions>

#include "sqpt/errors.hpp"

namespace sqpt {

namespace {

void require_cutoff(int cutoff) {
  if (cutoff < 1) throw DomainError("Fock cutoff must be >= 1");
}

void require_same_cutoff(const FockOperator& a, const FockOperator& b) {
  if (a.cutoff() != b.cutoff()) throw DomainError("Fock cutoff mismatch");
}

}  // namespace

FockOperator::FockOperator(int cutoff) : cutoff_(cutoff) {
  require_cutoff(cutoff);
  entries_ = CMatrix::Zero(cutoff + 1, cutoff + 1);
}

FockOperator::FockOperator(int cutoff, CMatrix entries)
    : cutoff_(cutoff), entries_(std::move(entries)) {
  require_cutoff(cutoff);
  if (entries_.rows() != cutoff + 1 || entries_.cols() != cutoff + 1)
    throw DomainError("FockOperator entries must be (cutoff+1) x (cutoff+1)");
}

FockOperator FockOperator::identity(int cutoff) {
  require_cutoff(cutoff);
  return {cutoff, CMatrix::Identity(cutoff + 1, cutoff + 1)};
}

FockOperator FockOperator::projector(int n, int cutoff) {
  FockOperator p(cutoff);
  if (n < 0 || n > cutoff) throw DomainError("projector index outside truncated space");
  p.entries_(n, n) = 1.0;
  return p;
}

FockOperator FockOperator::pure(const CVector& psi) {
  const int cutoff = static_cast<int>(psi.size()) - 1;
  return {cutoff, psi * psi.adjoint()};
}

FockOperator FockOperator::adjoint() const { return {cutoff_, entries_.adjoint()}; }

FockOperator FockOperator::transpose() const { return {cutoff_, entries_.transpose()}; }

double FockOperator::hermiticity_residual() const {
  return (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
}

double FockOperator::min_eigenvalue() const {
  const CMatrix h = 0.5 * (entries_ + entries_.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

FockOperator operator*(const FockOperator& a, const FockOperator& b) {
  require_same_cutoff(a, b);
  return {a.cutoff_, a.entries_ * b.entries_};
}

FockOperator operator+(const FockOperator& a, const FockOperator& b) {
  require_same_cutoff(a, b);
  return {a.cutoff_, a.entries_ + b.entries_};
}

FockOperator operator-(const FockOperator& a, const FockOperator& b) {
  require_same_cutoff(a, b);
  return {a.cutoff_, a.entries_ - b.entries_};
}

FockOperator operator*(Complex c, const FockOperator& a) { return {a.cutoff_, c * a.entries_}; }

FockOperator annihilation(int cutoff) {
  FockOperator a(cutoff);
  CMatrix m = CMatrix::Zero(cutoff + 1, cutoff + 1);
  for (int n = 1; n <= cutoff; ++n) m(n - 1, n) = std::sqrt(static_cast<double>(n));
  return {cutoff, std::move(m)};
}

FockOperator creation(int cutoff) { return annihilation(cutoff).adjoint(); }

FockOperator number_operator(int cutoff) {
  CMatrix m = CMatrix::Zero(cutoff + 1, cutoff + 1);
  for (int n = 0; n <= cutoff; ++n) m(n, n) = static_cast<double>(n);
  return {cutoff, std::move(m)};
}

FockOperator position_operator(int cutoff) {
  const FockOperator a = annihilation(cutoff);
  return Complex(std::numbers::sqrt2 / 2.0) * (a + a.adjoint());
}

FockOperator momentum_operator(int cutoff) {
  const FockOperator a = annihilation(cutoff);
  return Complex(0.0, -std::numbers::sqrt2 / 2.0) * (a - a.adjoint());
}

FockOperator expm(const FockOperator& generator) {
  CMatrix out = generator.matrix().exp();
  return {generator.cutoff(), std::move(out)};
}

FockOperator phase_operator(double theta, int cutoff) {
  CMatrix m = CMatrix::Zero(cutoff + 1, cutoff + 1);
  for (int n = 0; n <= cutoff; ++n) m(n, n) = std::polar(1.0, -theta * n);
  return {cutoff, std::move(m)};
}

FockOperator displacement_operator(Complex alpha, int cutoff) {
  if (alpha == Complex(0.0)) return FockOperator::identity(cutoff);
  const FockOperator a = annihilation(cutoff);
  return expm(alpha * a.adjoint() - std::conj(alpha) * a);
}

FockOperator squeeze_operator(double s, int cutoff) {
  if (s == 0.0) return FockOperator::identity(cutoff);
  const FockOperator a = annihilation(cutoff);
  const FockOperator a2 = a * a;
  return expm(Complex(s / 2.0) * (a2 - a2.adjoint()));
}

FockOperator thermal_state(double n_bar, int cutoff) {
  if (!(n_bar >= 0.0)) throw DomainError("thermal mean photon number must be >= 0");
  CMatrix m = CMatrix::Zero(cutoff + 1, cutoff + 1);
  if (n_bar == 0.0) {
    m(0, 0) = 1.0;
    return {cutoff, std::move(m)};
  }
  const double ratio = n_bar / (n_bar + 1.0);
  double p = 1.0 / (n_bar + 1.0);
  double total = 0.0;
  for (int n = 0; n <= cutoff; ++n) {
    m(n, n) = p;
    total += p;
    p *= ratio;
  }
  m /= total;
  return {cutoff, std::move(m)};
}

CVector coherent_amplitudes(Complex alpha, int cutoff) {
  CVector v(cutoff + 1);
  Complex c = std::exp(-0.5 * std::norm(alpha));
  v(0) = c;
  for (int n = 1; n <= cutoff; ++n) {
    c *= alpha / std::sqrt(static_cast<double>(n));
    v(n) = c;
  }
  return v;
}

double hermite_wavefunction(int n, double x) {
  if (n < 0) throw DomainError("Hermite index must be >= 0");
  std::vector<double> buf(n + 1);
  hermite_wavefunctions(x, buf);
  return buf[n];
}

void hermite_wavefunctions(double x, std::span<double> out) {
  if (out.empty()) return;
  // Normalized recurrence: psi_{n+1} = sqrt(2/(n+1)) x psi_n - sqrt(n/(n+1)) psi_{n-1}.
  out[0] = std::exp(-0.5 * x * x) / std::sqrt(std::sqrt(std::numbers::pi));
  if (out.size() == 1) return;
  out[1] = std::numbers::sqrt2 * x * out[0];
  for (std::size_t n = 1; n + 1 < out.size(); ++n) {
    const double nd = static_cast<double>(n);
    out[n + 1] = std::sqrt(2.0 / (nd + 1.0)) * x * out[n] - std::sqrt(nd / (nd + 1.0)) * out[n - 1];
  }
}

Complex husimi_q(const FockOperator& a, Complex alpha) {
  const CVector v = coherent_amplitudes(alpha, a.cutoff());
  return v.dot(a.matrix() * v) / std::numbers::pi;
}

}  // namespace sqpt
