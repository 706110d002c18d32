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

#ifndef SQPT_FOCK_HPP
#define SQPT_FOCK_HPP

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace sqpt {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

// Operator on the truncated Fock space span{|0>, ..., |cutoff>}.
// Entry (m, n) is <m|A|n>.
class FockOperator {
 public:
  explicit FockOperator(int cutoff);
  FockOperator(int cutoff, CMatrix entries);

  static FockOperator identity(int cutoff);
  static FockOperator projector(int n, int cutoff);
  // |psi><psi| for a state vector of length cutoff + 1.
  static FockOperator pure(const CVector& psi);

  int cutoff() const { return cutoff_; }
  int dim() const { return cutoff_ + 1; }
  const CMatrix& matrix() const { return entries_; }
  Complex operator()(int m, int n) const { return entries_(m, n); }

  FockOperator adjoint() const;
  FockOperator transpose() const;
  Complex trace() const { return entries_.trace(); }

  // max_{m,n} |A - A^dagger|
  double hermiticity_residual() const;
  // Smallest eigenvalue of the Hermitian part.
  double min_eigenvalue() const;

  friend FockOperator operator*(const FockOperator& a, const FockOperator& b);
  friend FockOperator operator+(const FockOperator& a, const FockOperator& b);
  friend FockOperator operator-(const FockOperator& a, const FockOperator& b);
  friend FockOperator operator*(Complex c, const FockOperator& a);

 private:
  int cutoff_;
  CMatrix entries_;
};

FockOperator annihilation(int cutoff);
FockOperator creation(int cutoff);
FockOperator number_operator(int cutoff);

// x = (a + a^dagger)/sqrt(2), p = (a - a^dagger)/(i sqrt(2)); vacuum variance 1/2.
FockOperator position_operator(int cutoff);
FockOperator momentum_operator(int cutoff);

// Matrix exponential (scaling and squaring with Pade approximant).
FockOperator expm(const FockOperator& generator);

// U(theta) = exp(-i n theta). Conjugation rho -> U rho U^dagger rotates the
// phase-space picture of rho by -theta.
FockOperator phase_operator(double theta, int cutoff);

// exp(alpha a^dagger - conj(alpha) a) on the truncated space.
FockOperator displacement_operator(Complex alpha, int cutoff);

// exp((s/2)(a^2 - a^dagger^2)); S(s)|0> has x-variance exp(-2s)/2.
FockOperator squeeze_operator(double s, int cutoff);

// Thermal state with mean photon number n_bar, truncated and renormalized.
FockOperator thermal_state(double n_bar, int cutoff);

// Coherent state amplitudes <n|alpha>, n = 0..cutoff (not renormalized).
CVector coherent_amplitudes(Complex alpha, int cutoff);

// psi_n(x) = (2^n n! sqrt(pi))^{-1/2} H_n(x) exp(-x^2/2).
double hermite_wavefunction(int n, double x);
// Fills out[0..n_max] with psi_0(x) ... psi_n_max(x) by upward recurrence.
void hermite_wavefunctions(double x, std::span<double> out);

// Q(alpha) = <alpha|A|alpha>/pi, coherent state expanded to the cutoff of A.
Complex husimi_q(const FockOperator& a, Complex alpha);

}  // namespace sqpt

#endif  // SQPT_FOCK_HPP
