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

#ifndef SQPT_RNG_HPP
#define SQPT_RNG_HPP

#include <cstdint>
#include <random>

namespace sqpt {

// Seedable random stream. Streams built from the same (seed, stream_id) emit
// identical sequences; different stream ids give statistically independent
// substreams. Only exactly specified standard components are used so that
// outputs are reproducible across standard library implementations.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  // Standard normal (Box-Muller; the second variate is cached).
  double normal();
  double normal(double mean, double stddev) { return mean + stddev * normal(); }

 private:
  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace sqpt

#endif  // SQPT_RNG_HPP
