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

#ifndef SQPT_TESTS_SUPPORT_HPP
#define SQPT_TESTS_SUPPORT_HPP

#include <complex>

#include "sqpt/fock.hpp"
#include "sqpt/rng.hpp"

namespace sqpt::testing {

// Random density matrix G G^dagger / Tr, optionally confined to the lowest
// `support + 1` levels.
inline FockOperator random_density(int cutoff, RngStream& rng, int support = -1) {
  const int s = support < 0 ? cutoff : support;
  CMatrix g = CMatrix::Zero(cutoff + 1, cutoff + 1);
  for (int i = 0; i <= s; ++i)
    for (int j = 0; j <= s; ++j) g(i, j) = Complex(rng.normal(), rng.normal());
  CMatrix rho = g * g.adjoint();
  rho /= rho.trace();
  return FockOperator(cutoff, rho);
}

inline double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace sqpt::testing

#endif  // SQPT_TESTS_SUPPORT_HPP
