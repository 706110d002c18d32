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

#include "sqpt/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <optional>
#include <sstream>

#include "sqpt/errors.hpp"
#include "sqpt/homodyne.hpp"
#include "sqpt/probe.hpp"
#include "sqpt/rng.hpp"

namespace sqpt {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Runs fn(b) for b in [0, n_blocks) on `workers` threads. The first exception
// thrown by any block is rethrown on the calling thread.
template <typename Fn>
void for_each_block(std::size_t n_blocks, int workers, Fn&& fn) {
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const long long count = static_cast<long long>(n_blocks);
#pragma omp parallel for schedule(dynamic, 1) num_threads(std::max(1, workers))
  for (long long b = 0; b < count; ++b) {
    try {
      fn(static_cast<std::size_t>(b));
    } catch (...) {
      std::lock_guard<std::mutex> lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

std::size_t block_count(std::size_t n, std::size_t block_size) { return (n + block_size - 1) / block_size; }

void require_block_size(std::size_t block_size) {
  if (block_size == 0) throw DomainError("block size must be positive");
}

void require_params(const ProbeEnsembleParams& params) {
  if (!(params.eta_a > kEfficiencyFloor && params.eta_a <= 1.0))
    throw DomainError("probe ensemble efficiency eta_A must lie in (1/2, 1]");
  if (!(params.lambda > 0.0 && params.lambda < 1.0)) throw DomainError("probe ensemble lambda must lie in (0, 1)");
}

// Output quadrature moments of a Gaussian channel acting on one probe, with
// fixed-size arithmetic; this runs once per shot.
class GaussianShotModel {
 public:
  GaussianShotModel(const GaussianAction& action, const ProbeEnsembleParams& params)
      : x_(action.x), y_(action.y) {
    core_ << 2.0 * params.v_minus, 0.0, 0.0, 2.0 * params.v_plus;
  }

  QuadratureMoments output(double theta, double d, double phi) const {
    const double c = std::cos(theta), s = std::sin(theta);
    Eigen::Matrix2d r;  // rotation by -theta
    r << c, s, -s, c;
    const Eigen::Matrix2d xr = x_ * r;
    const Eigen::Vector2d mean = xr.col(0) * d;
    const Eigen::Matrix2d cov = xr * core_ * xr.transpose() + y_;
    const Eigen::Vector2d u(std::cos(phi), std::sin(phi));
    return {u.dot(mean), 0.5 * u.dot(cov * u)};
  }

 private:
  Eigen::Matrix2d x_, y_, core_;
};

struct ShotAngles {
  double theta;
  double x_a;
  bool clamped;
};

ShotAngles draw_probe(const ProbeEnsembleParams& params, double xa_limit, RngStream& rng) {
  const double theta = kTwoPi * rng.uniform();
  double x_a = sample_xa(params, rng);
  bool clamped = false;
  if (std::abs(x_a) > xa_limit) {
    x_a = std::copysign(xa_limit, x_a);
    clamped = true;
  }
  return {theta, x_a, clamped};
}

// Fock-space machinery for channels or detectors without a Gaussian shortcut.
struct FockPath {
  ProbeFactory factory;
  QuadratureBasis basis;
};

std::optional<FockPath> make_fock_path(const ProbeEnsembleParams& params, int cutoff, double xa_limit,
                                       const SimulationOptions& options) {
  // Representative extreme probe: largest displacement after clamping.
  const ProbeSetting extreme = ProbeSetting::from_outcome(params, 0.0, xa_limit);
  probe_fock_state(extreme, cutoff, options.truncation_tolerance);
  const double mean_abs = std::abs(extreme.d);
  return FockPath{ProbeFactory(params.v_minus, params.v_plus, cutoff),
                  QuadratureBasis(GridSpec::for_state(cutoff, mean_abs, options.quadrature_points), cutoff)};
}

int pair(int m, int n) { return PatternKernel::pair_index(m, n); }

GridSpec table_grid(double extent, double step) {
  extent = std::max(1.0, extent + 0.25);
  const int points = std::max(64, static_cast<int>(std::ceil(2.0 * extent / step)) + 1);
  return {-extent, extent, points};
}

struct ProcessScratch {
  int dim;
  std::vector<double> fa, fb;
  std::vector<Complex> a, b;
  std::vector<double> a2, b2;

  explicit ProcessScratch(int k_max)
      : dim(k_max + 1),
        fa(PatternKernel::pair_count(k_max)),
        fb(PatternKernel::pair_count(k_max)),
        a(dim * dim),
        b(dim * dim),
        a2(dim * dim),
        b2(dim * dim) {}
};

void fill_phased(std::span<const double> f, double angle, int dim, std::span<Complex> out, std::span<double> out_sq) {
  for (int k = 0; k < dim; ++k)
    for (int l = 0; l < dim; ++l) {
      const Complex v = f[pair(k, l)] * std::polar(1.0, angle * (k - l));
      out[k * dim + l] = v;
      out_sq[k * dim + l] = std::norm(v);
    }
}

void accumulate_process(const ProcessSampleRecord& r, const PatternTable& table_a, const PatternTable& table_b,
                        ProcessScratch& s, MomentAccumulator& acc) {
  const int d = s.dim;
  table_a.lookup_all(r.x_a, s.fa);
  table_b.lookup_all(r.x_b, s.fb);
  fill_phased(s.fa, r.theta, d, s.a, s.a2);
  fill_phased(s.fb, r.phi, d, s.b, s.b2);
  std::size_t idx = 0;
  for (int k = 0; k < d; ++k)
    for (int m = 0; m < d; ++m)
      for (int l = 0; l < d; ++l) {
        const Complex akl = s.a[k * d + l];
        const double akl2 = s.a2[k * d + l];
        for (int n = 0; n < d; ++n, ++idx) {
          acc.sum[idx] += akl * s.b[m * d + n];
          acc.sum_sq[idx] += akl2 * s.b2[m * d + n];
        }
      }
  ++acc.count;
}

struct ProcessTables {
  PatternTable a;
  PatternTable b;
};

ProcessTables make_process_tables(std::span<const ProcessSampleRecord> samples, const RunMetadata& meta, int k_max,
                                  const EstimatorOptions& options) {
  double ext_a = 0.0, ext_b = 0.0;
  for (const auto& r : samples) {
    if (!std::isfinite(r.x_a) || !std::isfinite(r.x_b)) throw DomainError("non-finite quadrature sample");
    ext_a = std::max(ext_a, std::abs(r.x_a));
    ext_b = std::max(ext_b, std::abs(r.x_b));
  }
  return {build_table(k_max, meta.params.eta_a, table_grid(ext_a, options.table_step), options.workers,
                      options.min_eta),
          build_table(k_max, meta.eta_b, table_grid(ext_b, options.table_step), options.workers, options.min_eta)};
}

double rescale_factor(double lambda, int k, int l) {
  return 1.0 / ((1.0 - lambda * lambda) * std::pow(lambda, k + l));
}

std::size_t attempted_shots(std::size_t kept, const RunMetadata& meta) {
  if (meta.attempted == 0) return kept;
  if (meta.attempted < kept) throw DomainError("metadata reports fewer attempted shots than samples");
  return meta.attempted;
}

ChoiEstimate finalize_choi(const MomentAccumulator& acc, std::size_t total, const RunMetadata& meta, int k_max,
                           const EstimatorOptions& options) {
  ChoiEstimate est;
  est.value = ChoiMatrix(k_max);
  est.raw = ChoiMatrix(k_max);
  est.meta = meta;
  est.n_samples = total;
  const int d = k_max + 1;
  const std::size_t elements = static_cast<std::size_t>(d) * d * d * d;
  est.std_error.assign(elements, 0.0);
  est.rescaling.assign(elements, 0.0);
  const double n = static_cast<double>(total);
  std::size_t idx = 0;
  for (int k = 0; k < d; ++k)
    for (int m = 0; m < d; ++m)
      for (int l = 0; l < d; ++l)
        for (int nn = 0; nn < d; ++nn, ++idx) {
          const double c = rescale_factor(meta.params.lambda, k, l);
          const Complex mean = acc.sum[idx] / n;
          const double var = total > 1 ? std::max(0.0, (acc.sum_sq[idx] - n * std::norm(mean)) / (n - 1.0)) : 0.0;
          est.raw(k, m, l, nn) = c * mean;
          est.rescaling[idx] = c;
          est.std_error[idx] = c * std::sqrt(var / n);
          if (est.std_error[idx] > options.noise_bound) {
            std::ostringstream w;
            w << "chi[" << k << "][" << m << "][" << l << "][" << nn << "]: rescaled standard error "
              << est.std_error[idx] << " exceeds bound " << options.noise_bound << " (lambda^-(k+l) amplification "
              << c << ")";
            est.warnings.push_back(w.str());
          }
        }
  for (int k = 0; k < d; ++k)
    for (int m = 0; m < d; ++m)
      for (int l = 0; l < d; ++l)
        for (int nn = 0; nn < d; ++nn) {
          const Complex mirror = std::conj(est.raw(l, nn, k, m));
          est.raw_asymmetry = std::max(est.raw_asymmetry, std::abs(est.raw(k, m, l, nn) - mirror));
          est.value(k, m, l, nn) = 0.5 * (est.raw(k, m, l, nn) + mirror);
        }
  return est;
}

}  // namespace

void MomentAccumulator::merge(const MomentAccumulator& other) {
  if (other.sum.size() != sum.size()) throw DomainError("accumulator shape mismatch");
  for (std::size_t i = 0; i < sum.size(); ++i) {
    sum[i] += other.sum[i];
    sum_sq[i] += other.sum_sq[i];
  }
  count += other.count;
}

double ChoiEstimate::se(int k, int m, int l, int n) const {
  const std::size_t d = static_cast<std::size_t>(value.dim());
  return std_error[((k * d + m) * d + l) * d + n];
}

ProcessRun simulate_process_run(const KrausChannel& channel, const ProbeEnsembleParams& params, double eta_b,
                                std::size_t shots, std::uint64_t seed, const SimulationOptions& options) {
  require_params(params);
  require_block_size(options.block_size);
  if (!(eta_b > kEfficiencyFloor && eta_b <= 1.0)) throw DomainError("eta_B must lie in (1/2, 1]");
  if (shots == 0) throw DomainError("a process run needs at least one shot");
  if (channel.kraus_ops.empty()) throw DomainError("channel has no Kraus operators");

  const bool gaussian = channel.gaussian.has_value() && !options.force_fock_path;
  const double xa_limit = options.clamp_sigmas * std::sqrt(params.v_a);
  std::optional<FockPath> fock;
  std::optional<GaussianShotModel> shot_model;
  if (gaussian) {
    shot_model.emplace(*channel.gaussian, params);
  } else {
    fock = make_fock_path(params, channel.cutoff(), xa_limit, options);
  }
  const double sqrt_eta_b = std::sqrt(eta_b);

  const std::size_t n_blocks = block_count(shots, options.block_size);
  std::vector<std::vector<ProcessSampleRecord>> blocks(n_blocks);
  std::vector<std::size_t> clamped(n_blocks, 0);

  for_each_block(n_blocks, options.workers, [&](std::size_t b) {
    RngStream rng(seed, b);
    const std::size_t begin = b * options.block_size;
    const std::size_t end = std::min(shots, begin + options.block_size);
    auto& out = blocks[b];
    out.reserve(end - begin);
    for (std::size_t i = begin; i < end; ++i) {
      const ShotAngles probe = draw_probe(params, xa_limit, rng);
      clamped[b] += probe.clamped;
      const double phi = kTwoPi * rng.uniform();
      const ProbeSetting setting = ProbeSetting::from_outcome(params, probe.theta, probe.x_a);
      double x_b;
      if (gaussian) {
        const QuadratureMoments q = shot_model->output(setting.theta, setting.d, phi);
        x_b = rng.normal(sqrt_eta_b * q.mean, std::sqrt(eta_b * q.variance + 0.5 * (1.0 - eta_b)));
      } else {
        FockOperator rho = apply_channel(channel, fock->factory.build(setting.theta, setting.d));
        if (!channel.trace_preserving) {
          const double success = rho.trace().real();
          if (rng.uniform() >= success) continue;
          rho = Complex(1.0 / success) * rho;
        }
        x_b = QuadratureSampler(fock->basis.ideal(rho, phi)).sample(eta_b, rng);
      }
      out.push_back({probe.theta, probe.x_a, phi, x_b});
    }
  });

  ProcessRun run;
  run.meta.source = channel.name;
  run.meta.params = params;
  run.meta.eta_b = eta_b;
  run.meta.seed = seed;
  run.meta.block_size = options.block_size;
  run.meta.attempted = shots;
  run.meta.gaussian_path = gaussian;
  std::size_t total = 0;
  for (const auto& b : blocks) total += b.size();
  run.records.reserve(total);
  for (std::size_t b = 0; b < n_blocks; ++b) {
    run.records.insert(run.records.end(), blocks[b].begin(), blocks[b].end());
    run.meta.clamped += clamped[b];
  }
  run.meta.kept = run.records.size();
  return run;
}

DetectorRun simulate_detector_run(const Povm& povm, const ProbeEnsembleParams& params, std::size_t shots,
                                  std::uint64_t seed, const SimulationOptions& options) {
  require_params(params);
  require_block_size(options.block_size);
  if (shots == 0) throw DomainError("a detector run needs at least one shot");
  if (povm.elements.empty()) throw DomainError("POVM has no elements");

  const bool gaussian = povm.gaussian_form.has_value() && !options.force_fock_path;
  const double xa_limit = options.clamp_sigmas * std::sqrt(params.v_a);
  std::optional<FockPath> fock;
  if (!gaussian) fock = make_fock_path(params, povm.cutoff(), xa_limit, options);

  const std::size_t n_blocks = block_count(shots, options.block_size);
  std::vector<std::vector<DetectorSampleRecord>> blocks(n_blocks);
  std::vector<std::size_t> clamped(n_blocks, 0);

  for_each_block(n_blocks, options.workers, [&](std::size_t b) {
    RngStream rng(seed, b);
    const std::size_t begin = b * options.block_size;
    const std::size_t end = std::min(shots, begin + options.block_size);
    auto& out = blocks[b];
    out.reserve(end - begin);
    for (std::size_t i = begin; i < end; ++i) {
      const ShotAngles probe = draw_probe(params, xa_limit, rng);
      clamped[b] += probe.clamped;
      const ProbeSetting setting = ProbeSetting::from_outcome(params, probe.theta, probe.x_a);
      const std::vector<double> p = gaussian
                                        ? outcome_probabilities(povm, probe_gaussian_state(setting))
                                        : outcome_probabilities(povm, fock->factory.build(setting.theta, setting.d));
      double total = 0.0;
      for (double v : p) total += v;
      const double u = rng.uniform() * total;
      int k = 0;
      double cumulative = p[0];
      while (u >= cumulative && k + 1 < static_cast<int>(p.size())) cumulative += p[++k];
      out.push_back({probe.theta, probe.x_a, k});
    }
  });

  DetectorRun run;
  run.meta.source = povm.name;
  run.meta.params = params;
  run.meta.seed = seed;
  run.meta.block_size = options.block_size;
  run.meta.attempted = shots;
  run.meta.outcomes = povm.outcomes();
  run.meta.gaussian_path = gaussian;
  run.records.reserve(shots);
  for (std::size_t b = 0; b < n_blocks; ++b) {
    run.records.insert(run.records.end(), blocks[b].begin(), blocks[b].end());
    run.meta.clamped += clamped[b];
  }
  run.meta.kept = run.records.size();
  return run;
}

ChoiEstimate estimate_choi(std::span<const ProcessSampleRecord> samples, const RunMetadata& meta, int k_max,
                           const EstimatorOptions& options) {
  if (samples.empty()) throw DomainError("estimate_choi needs at least one sample");
  if (k_max < 0) throw DomainError("k_max must be >= 0");
  require_params(meta.params);
  require_block_size(options.block_size);
  const std::size_t total = attempted_shots(samples.size(), meta);
  const ProcessTables tables = make_process_tables(samples, meta, k_max, options);

  const std::size_t d = static_cast<std::size_t>(k_max) + 1;
  const std::size_t elements = d * d * d * d;
  const std::size_t n_blocks = block_count(samples.size(), options.block_size);
  std::vector<MomentAccumulator> partial(n_blocks, MomentAccumulator(elements));
  for_each_block(n_blocks, options.workers, [&](std::size_t b) {
    ProcessScratch scratch(k_max);
    const std::size_t begin = b * options.block_size;
    const std::size_t end = std::min(samples.size(), begin + options.block_size);
    for (std::size_t i = begin; i < end; ++i) accumulate_process(samples[i], tables.a, tables.b, scratch, partial[b]);
  });
  MomentAccumulator acc(elements);
  for (const auto& p : partial) acc.merge(p);
  return finalize_choi(acc, total, meta, k_max, options);
}

ChoiEstimate estimate_choi(std::span<const ProcessSampleRecord> samples, const ProbeEnsembleParams& params,
                           double eta_b, int k_max, const EstimatorOptions& options) {
  RunMetadata meta;
  meta.params = params;
  meta.eta_b = eta_b;
  meta.attempted = samples.size();
  meta.kept = samples.size();
  return estimate_choi(samples, meta, k_max, options);
}

ChoiEstimate estimate_choi_serial(std::span<const ProcessSampleRecord> samples, const RunMetadata& meta, int k_max,
                                  const EstimatorOptions& options) {
  if (samples.empty()) throw DomainError("estimate_choi needs at least one sample");
  if (k_max < 0) throw DomainError("k_max must be >= 0");
  require_params(meta.params);
  const std::size_t total = attempted_shots(samples.size(), meta);
  EstimatorOptions serial = options;
  serial.workers = 1;
  const ProcessTables tables = make_process_tables(samples, meta, k_max, serial);
  const std::size_t d = static_cast<std::size_t>(k_max) + 1;
  MomentAccumulator acc(d * d * d * d);
  ProcessScratch scratch(k_max);
  for (const auto& r : samples) accumulate_process(r, tables.a, tables.b, scratch, acc);
  return finalize_choi(acc, total, meta, k_max, options);
}

PovmEstimate estimate_povm(std::span<const DetectorSampleRecord> samples, const RunMetadata& meta, int outcome_k,
                           int m_max, const EstimatorOptions& options) {
  if (samples.empty()) throw DomainError("estimate_povm needs at least one sample");
  if (m_max < 0) throw DomainError("m_max must be >= 0");
  require_params(meta.params);
  require_block_size(options.block_size);
  int outcomes = meta.outcomes;
  if (outcomes <= 0)
    for (const auto& r : samples) outcomes = std::max(outcomes, r.outcome + 1);
  if (outcome_k < 0 || outcome_k >= outcomes)
    throw DomainError("unknown outcome label " + std::to_string(outcome_k));
  double extent = 0.0;
  for (const auto& r : samples) {
    if (r.outcome < 0 || r.outcome >= outcomes)
      throw DomainError("sample carries unknown outcome label " + std::to_string(r.outcome));
    if (!std::isfinite(r.x_a)) throw DomainError("non-finite quadrature sample");
    extent = std::max(extent, std::abs(r.x_a));
  }
  const int trace_cutoff = options.trace_cutoff < 0 ? m_max + 5 : std::max(m_max, options.trace_cutoff);
  const int table_m = std::max(m_max, trace_cutoff);
  const PatternTable table = build_table(table_m, meta.params.eta_a, table_grid(extent, options.table_step),
                                         options.workers, options.min_eta);

  const int d = m_max + 1;
  const std::size_t elements = static_cast<std::size_t>(d) * d + 3;  // rho, trace, trace - 1, indicator
  const std::size_t total = attempted_shots(samples.size(), meta);
  const std::size_t n_blocks = block_count(samples.size(), options.block_size);
  std::vector<MomentAccumulator> partial(n_blocks, MomentAccumulator(elements));
  for_each_block(n_blocks, options.workers, [&](std::size_t b) {
    std::vector<double> f(PatternKernel::pair_count(table_m));
    auto& acc = partial[b];
    const std::size_t begin = b * options.block_size;
    const std::size_t end = std::min(samples.size(), begin + options.block_size);
    for (std::size_t i = begin; i < end; ++i) {
      const DetectorSampleRecord& r = samples[i];
      ++acc.count;
      if (r.outcome != outcome_k) continue;
      table.lookup_all(r.x_a, f);
      for (int m = 0; m < d; ++m)
        for (int n = 0; n < d; ++n) {
          const Complex v = f[pair(m, n)] * std::polar(1.0, r.theta * (m - n));
          acc.sum[m * d + n] += v;
          acc.sum_sq[m * d + n] += std::norm(v);
        }
      double tr = 0.0;
      for (int m = 0; m <= trace_cutoff; ++m) tr += f[pair(m, m)];
      const std::size_t base = static_cast<std::size_t>(d) * d;
      acc.sum[base] += tr;
      acc.sum_sq[base] += tr * tr;
      acc.sum[base + 1] += tr - 1.0;
      acc.sum_sq[base + 1] += (tr - 1.0) * (tr - 1.0);
      acc.sum[base + 2] += 1.0;
      acc.sum_sq[base + 2] += 1.0;
    }
  });
  MomentAccumulator acc(elements);
  for (const auto& p : partial) acc.merge(p);

  const double n = static_cast<double>(total);
  auto mean_se = [&](std::size_t idx) {
    const Complex mean = acc.sum[idx] / n;
    const double var = total > 1 ? std::max(0.0, (acc.sum_sq[idx] - n * std::norm(mean)) / (n - 1.0)) : 0.0;
    return std::pair<Complex, double>(mean, std::sqrt(var / n));
  };

  PovmEstimate est;
  est.outcome = outcome_k;
  est.meta = meta;
  est.meta.outcomes = outcomes;
  est.n_samples = total;
  est.rho = CMatrix::Zero(d, d);
  est.rho_std_error = Eigen::MatrixXd::Zero(d, d);
  est.value = CMatrix::Zero(d, d);
  est.std_error = Eigen::MatrixXd::Zero(d, d);
  const double lambda = meta.params.lambda;
  for (int m = 0; m < d; ++m)
    for (int nn = 0; nn < d; ++nn) {
      const auto [mean, se] = mean_se(static_cast<std::size_t>(m) * d + nn);
      est.rho(m, nn) = mean;
      est.rho_std_error(m, nn) = se;
    }
  for (int m = 0; m < d; ++m)
    for (int nn = 0; nn < d; ++nn) {
      const double c = rescale_factor(lambda, m, nn);
      est.value(m, nn) = c * est.rho(nn, m);
      est.std_error(m, nn) = c * est.rho_std_error(nn, m);
      if (est.std_error(m, nn) > options.noise_bound) {
        std::ostringstream w;
        w << "Pi[" << m << "][" << nn << "]: rescaled standard error " << est.std_error(m, nn) << " exceeds bound "
          << options.noise_bound;
        est.warnings.push_back(w.str());
      }
    }
  const std::size_t base = static_cast<std::size_t>(d) * d;
  est.trace = mean_se(base).first.real();
  const auto [diff, diff_se] = mean_se(base + 1);
  est.trace_minus_frequency = diff.real();
  est.trace_minus_frequency_se = diff_se;
  est.frequency = mean_se(base + 2).first.real();
  est.frequency_se = std::sqrt(std::max(0.0, est.frequency * (1.0 - est.frequency)) / n);
  return est;
}

}  // namespace sqpt
