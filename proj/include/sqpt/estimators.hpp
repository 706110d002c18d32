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

#ifndef SQPT_ESTIMATORS_HPP
#define SQPT_ESTIMATORS_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sqpt/channels.hpp"
#include "sqpt/gaussian.hpp"
#include "sqpt/pattern.hpp"

namespace sqpt {

struct ProcessSampleRecord {
  double theta;
  double x_a;
  double phi;
  double x_b;
};

struct DetectorSampleRecord {
  double theta;
  double x_a;
  int outcome;
};

// Shots are generated and reduced in fixed-size blocks; block b draws from
// RngStream(seed, b). Results therefore depend on the seed and block size but
// never on the number of workers.
inline constexpr std::size_t kDefaultBlockSize = 4096;

struct SimulationOptions {
  int cutoff = 30;
  int workers = 1;
  std::size_t block_size = kDefaultBlockSize;
  double truncation_tolerance = 1e-6;
  // x_a is clamped to +-clamp_sigmas sqrt(V_A).
  double clamp_sigmas = 5.0;
  // Grid for the generic (Fock-space) homodyne sampler.
  int quadrature_points = 1024;
  // Skip the Gaussian fast path even for Gaussian channels/detectors.
  bool force_fock_path = false;
};

struct RunMetadata {
  std::string source;
  ProbeEnsembleParams params;
  double eta_b = 1.0;
  std::uint64_t seed = 0;
  std::size_t block_size = kDefaultBlockSize;
  std::size_t attempted = 0;
  std::size_t kept = 0;
  std::size_t clamped = 0;
  int outcomes = 0;
  bool gaussian_path = false;

  double clamp_rate() const { return attempted ? static_cast<double>(clamped) / attempted : 0.0; }
  double acceptance_rate() const { return attempted ? static_cast<double>(kept) / attempted : 0.0; }
};

struct ProcessRun {
  std::vector<ProcessSampleRecord> records;
  RunMetadata meta;
};

struct DetectorRun {
  std::vector<DetectorSampleRecord> records;
  RunMetadata meta;
};

// Squeezed-probe process tomography run with `shots` attempted shots. For
// trace-decreasing channels only post-selected shots are returned; the
// attempted count stays in the metadata.
ProcessRun simulate_process_run(const KrausChannel& channel, const ProbeEnsembleParams& params, double eta_b,
                                std::size_t shots, std::uint64_t seed, const SimulationOptions& options = {});

DetectorRun simulate_detector_run(const Povm& povm, const ProbeEnsembleParams& params, std::size_t shots,
                                  std::uint64_t seed, const SimulationOptions& options = {});

struct EstimatorOptions {
  int workers = 1;
  std::size_t block_size = kDefaultBlockSize;
  // Pattern-table grid spacing.
  double table_step = 0.01;
  double min_eta = kDefaultMinEfficiency;
  // Warn when an element's rescaled standard error exceeds this bound.
  double noise_bound = 1.0;
  // Highest Fock level used when estimating Tr rho^k; negative means m_max + 5.
  int trace_cutoff = -1;
};

// Sum, sum of squared moduli and count per tensor element. Merging is
// associative; merging in a fixed order is bit-reproducible.
struct MomentAccumulator {
  std::vector<Complex> sum;
  std::vector<double> sum_sq;
  std::uint64_t count = 0;

  explicit MomentAccumulator(std::size_t elements = 0) : sum(elements, 0.0), sum_sq(elements, 0.0) {}
  void merge(const MomentAccumulator& other);
};

struct ChoiEstimate {
  ChoiMatrix value{0};   // Hermitian-symmetrized
  ChoiMatrix raw{0};
  std::vector<double> std_error;  // indexed like ChoiMatrix::data()
  std::vector<double> rescaling;  // (1 - lambda^2)^-1 lambda^-(k+l) per element
  double raw_asymmetry = 0.0;     // max |raw_{km,ln} - conj(raw_{ln,km})|
  std::size_t n_samples = 0;
  std::vector<std::string> warnings;
  RunMetadata meta;

  double se(int k, int m, int l, int n) const;
};

// Double-pattern-function estimate of chi_{km,ln} from process samples.
// Each shot contributes f_kl(x_a, eta_A) f_mn(x_b, eta_B) e^{i(k-l)theta}
// e^{i(m-n)phi}; the mean is rescaled by (1 - lambda^2)^-1 lambda^-(k+l).
// The average runs over all attempted shots (rejected post-selection shots
// count as zero).
ChoiEstimate estimate_choi(std::span<const ProcessSampleRecord> samples, const RunMetadata& meta, int k_max,
                           const EstimatorOptions& options = {});
ChoiEstimate estimate_choi(std::span<const ProcessSampleRecord> samples, const ProbeEnsembleParams& params,
                           double eta_b, int k_max, const EstimatorOptions& options = {});
// Serial, unblocked reference used to check the parallel kernel.
ChoiEstimate estimate_choi_serial(std::span<const ProcessSampleRecord> samples, const RunMetadata& meta, int k_max,
                                  const EstimatorOptions& options = {});

struct PovmEstimate {
  int outcome = 0;
  CMatrix value;          // Pi^k_{mn}
  Eigen::MatrixXd std_error;
  CMatrix rho;            // conditional state rho^k_{mn} of mode A
  Eigen::MatrixXd rho_std_error;
  double trace = 0.0;     // estimate of Tr rho^k up to the trace cutoff
  double frequency = 0.0; // empirical outcome frequency
  double frequency_se = 0.0;
  // Paired per-shot difference between the two outcome-probability estimates.
  double trace_minus_frequency = 0.0;
  double trace_minus_frequency_se = 0.0;
  std::size_t n_samples = 0;
  std::vector<std::string> warnings;
  RunMetadata meta;
};

// rho^k_{mn} = mean over all shots of 1{outcome = k} f_mn(x_a, eta_A) e^{i(m-n)theta},
// Pi^k_{mn} = lambda^-(m+n) (1 - lambda^2)^-1 rho^k_{nm}.
PovmEstimate estimate_povm(std::span<const DetectorSampleRecord> samples, const RunMetadata& meta, int outcome_k,
                           int m_max, const EstimatorOptions& options = {});

// Deterministic counterpart of estimate_choi for Gaussian channels: the
// Monte-Carlo averages over (theta, x_a, phi, x_b) are replaced by
// quadrature. Parallel over theta.
struct QuadratureEstimatorOptions {
  int theta_points = 48;
  int phi_points = 48;
  int xa_points = 321;
  double xa_sigmas = 9.0;
  int workers = 1;
};
ChoiMatrix estimate_choi_quadrature(const KrausChannel& channel, const ProbeEnsembleParams& params, double eta_b,
                                    int k_max, const QuadratureEstimatorOptions& options = {});

}  // namespace sqpt

#endif  // SQPT_ESTIMATORS_HPP
