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

#include "sqpt/harness.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <ostream>

#include "sqpt/errors.hpp"
#include "sqpt/estimators.hpp"
#include "sqpt/gaussian.hpp"
#include "sqpt/pattern.hpp"
#include "sqpt/validate.hpp"

namespace sqpt {

namespace fs = std::filesystem;

namespace {

std::string dump(const Json& j) { return j.dump(1) + "\n"; }

// Timestamps and wall time go to a side file so that the result itself is
// reproducible byte for byte.
void write_run_log(const fs::path& result, std::chrono::steady_clock::time_point start, int workers) {
  const auto wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const std::time_t now = std::time(nullptr);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  Json j{{"result", result.filename().string()}, {"finished_utc", stamp}, {"wall_seconds", wall}, {"workers", workers}};
  atomic_write(result.string() + ".run.json", dump(j));
}

fs::path out_file(const RunConfig& c, const std::string& name) { return fs::path(c.paths.out) / name; }

fs::path samples_file(const RunConfig& c) {
  return c.paths.samples.empty() ? out_file(c, "samples.csv") : fs::path(c.paths.samples);
}

SimulationOptions simulation_options(const RunConfig& c) {
  SimulationOptions o;
  o.cutoff = c.cutoff;
  o.workers = c.workers;
  o.truncation_tolerance = c.truncation_tolerance;
  return o;
}

EstimatorOptions estimator_options(const RunConfig& c) {
  EstimatorOptions o;
  o.workers = c.workers;
  o.min_eta = c.min_eta;
  return o;
}

RunMetadata load_metadata(const RunConfig& c, const fs::path& csv, int outcomes) {
  const fs::path mp = metadata_path(csv);
  if (fs::exists(mp)) return metadata_from_json(read_json_file(mp).at("metadata"));
  // Samples from elsewhere: the config has to describe the ensemble.
  if (!c.probe) throw ConfigError("no " + mp.string() + " and no probe section to describe the samples");
  RunMetadata meta;
  meta.source = "external";
  meta.params = probe_params_from_variances(c.probe->v_minus, c.probe->v_plus);
  meta.eta_b = c.eta_b;
  meta.outcomes = outcomes;
  return meta;
}

int task_simulate(const RunConfig& c, std::ostream& log) {
  const auto params = probe_params_from_variances(c.probe->v_minus, c.probe->v_plus);
  const fs::path csv = samples_file(c);
  Json meta_json;
  if (c.task == "simulate-process") {
    const auto channel = make_channel(*c.channel, c.cutoff);
    const auto run = simulate_process_run(channel, params, c.eta_b, c.samples, c.seed, simulation_options(c));
    write_process_csv(csv, run.records);
    meta_json["metadata"] = metadata_to_json(run.meta);
    log << "simulated " << run.meta.attempted << " shots, kept " << run.meta.kept << ", clamped " << run.meta.clamped
        << "\n";
  } else {
    const auto povm = make_detector(*c.detector, c.cutoff);
    const auto run = simulate_detector_run(povm, params, c.samples, c.seed, simulation_options(c));
    write_detector_csv(csv, run.records);
    meta_json["metadata"] = metadata_to_json(run.meta);
    log << "simulated " << run.meta.attempted << " detector shots, clamped " << run.meta.clamped << "\n";
  }
  meta_json["config"] = effective_config(c);
  atomic_write(metadata_path(csv), dump(meta_json));
  log << "wrote " << csv.string() << "\n";
  return kExitOk;
}

int task_reconstruct(const RunConfig& c, std::ostream& log) {
  const fs::path csv = c.paths.samples;
  Json result;
  result["config"] = effective_config(c);
  std::optional<Json> oracle;
  if (sniff_sample_kind(csv) == SampleKind::kProcess) {
    const auto samples = read_process_csv(csv);
    const auto meta = load_metadata(c, csv, 0);
    const auto est = estimate_choi(samples, meta, c.k_max, estimator_options(c));
    result["kind"] = "choi";
    const Json body = choi_estimate_to_json(est);
    for (const auto& [k, v] : body.items()) result[k] = v;
    for (const auto& w : est.warnings) log << "warning: " << w << "\n";
    if (c.channel) oracle = choi_oracle_json(*c.channel, c.k_max, c.cutoff);
  } else {
    const auto samples = read_detector_csv(csv);
    int observed = 0;
    for (const auto& s : samples) observed = std::max(observed, s.outcome + 1);
    auto meta = load_metadata(c, csv, observed);
    const int outcomes = std::max(meta.outcomes, observed);
    result["kind"] = "povm";
    result["m_max"] = c.m_max;
    result["metadata"] = metadata_to_json(meta);
    Json povm = Json::array();
    for (int k = 0; k < outcomes; ++k) {
      const auto est = estimate_povm(samples, meta, k, c.m_max, estimator_options(c));
      for (const auto& w : est.warnings) log << "warning: outcome " << k << ": " << w << "\n";
      povm.push_back(povm_estimate_to_json(est));
    }
    result["povm"] = povm;
    if (c.detector) oracle = povm_oracle_json(*c.detector, c.m_max, c.cutoff);
  }
  const fs::path out = out_file(c, "estimate.json");
  atomic_write(out, dump(result));
  log << "wrote " << out.string() << "\n";
  if (oracle) {
    const auto report = compare_report(result, *oracle, c.compare);
    Json rj = report.to_json();
    rj["config"] = effective_config(c);
    const fs::path rp = out_file(c, "report.json");
    atomic_write(rp, dump(rj));
    log << "max |estimate - oracle| = " << report.max_abs_error << ", max error/SE = " << report.max_ratio
        << (report.pass ? " (pass)" : " (FAIL)") << "\n";
    log << "wrote " << rp.string() << "\n";
  }
  return kExitOk;
}

int task_oracle(const RunConfig& c, std::ostream& log) {
  Json j = c.channel ? choi_oracle_json(*c.channel, c.k_max, c.cutoff) : povm_oracle_json(*c.detector, c.m_max, c.cutoff);
  j["config"] = effective_config(c);
  const fs::path out = out_file(c, "oracle.json");
  atomic_write(out, dump(j));
  log << "wrote " << out.string() << "\n";
  return kExitOk;
}

int task_pattern_table(const RunConfig& c, std::ostream& log) {
  const auto table = build_table(c.table->m_max, c.table->eta, c.table->grid, c.workers, c.min_eta);
  const fs::path out = out_file(c, "pattern_table.json");
  save_pattern_table(table, out);
  log << "wrote " << out.string() << "\n";
  return kExitOk;
}

int task_validate(std::ostream& log) {
  const auto results = run_validation(&log, true);
  for (const auto& r : results)
    if (!r.passed) return kExitNumerical;
  return kExitOk;
}

int task_compare(const RunConfig& c, std::ostream& log) {
  const auto report = compare_report(read_json_file(c.paths.estimate), read_json_file(c.paths.oracle), c.compare);
  Json rj = report.to_json();
  rj["config"] = effective_config(c);
  const fs::path out = out_file(c, "compare.json");
  atomic_write(out, dump(rj));
  log << "max abs error " << report.max_abs_error << ", max error/SE " << report.max_ratio << ": "
      << (report.pass ? "pass" : "FAIL") << "\nwrote " << out.string() << "\n";
  return report.pass ? kExitOk : kExitCheckFailed;
}

}  // namespace

Json choi_oracle_json(const ChannelSpec& spec, int k_max, int cutoff) {
  if (k_max > cutoff) throw ConfigError("k_max exceeds cutoff");
  const auto chi = choi_from_kraus(make_channel(spec, cutoff), k_max);
  Json j;
  j["kind"] = "choi";
  j["k_max"] = k_max;
  j["chi"] = choi_to_json(chi);
  return j;
}

Json povm_oracle_json(const DetectorSpec& spec, int m_max, int cutoff) {
  if (m_max > cutoff) throw ConfigError("m_max exceeds cutoff");
  const auto povm = make_detector(spec, cutoff);
  Json j;
  j["kind"] = "povm";
  j["m_max"] = m_max;
  Json list = Json::array();
  for (int k = 0; k < povm.outcomes(); ++k) {
    const CMatrix block = povm.elements[k].matrix().topLeftCorner(m_max + 1, m_max + 1);
    list.push_back({{"outcome", k}, {"pi", matrix_to_json(block)}});
  }
  j["povm"] = list;
  return j;
}

Json CompareReport::to_json() const {
  Json j;
  j["pass"] = pass;
  j["max_abs_error"] = max_abs_error;
  j["max_error_over_se"] = max_ratio;
  j["policy"] = {{"c", policy.c}, {"abs_floor", policy.abs_floor}};
  Json list = Json::array();
  for (const auto& e : elements) {
    list.push_back(
        {{"index", e.index}, {"abs_error", e.abs_error}, {"std_error", e.std_error}, {"ratio", e.ratio}, {"pass", e.pass}});
  }
  j["elements"] = list;
  return j;
}

CompareReport compare_report(const Json& estimate, const Json& oracle, const ComparePolicy& policy) {
  CompareReport report;
  report.policy = policy;
  auto add = [&](std::vector<int> index, Complex a, Complex b, double se) {
    CompareElement e;
    e.index = std::move(index);
    e.abs_error = std::abs(a - b);
    e.std_error = se;
    e.ratio = se > 0 ? e.abs_error / se : 0.0;
    e.pass = e.abs_error <= std::max(policy.c * se, policy.abs_floor);
    report.max_abs_error = std::max(report.max_abs_error, e.abs_error);
    report.max_ratio = std::max(report.max_ratio, e.ratio);
    report.pass = report.pass && e.pass;
    report.elements.push_back(std::move(e));
  };

  if (estimate.contains("chi") && oracle.contains("chi")) {
    const auto a = choi_from_json(estimate["chi"]);
    const auto b = choi_from_json(oracle["chi"]);
    if (a.k_max() != b.k_max())
      throw ConfigError("shape mismatch: k_max " + std::to_string(a.k_max()) + " vs " + std::to_string(b.k_max()));
    std::vector<double> se(a.data().size(), 0.0);
    if (estimate.contains("std_error")) se = choi_errors_from_json(estimate["std_error"], a.k_max());
    const int d = a.dim();
    std::size_t idx = 0;
    for (int k = 0; k < d; ++k)
      for (int m = 0; m < d; ++m)
        for (int l = 0; l < d; ++l)
          for (int n = 0; n < d; ++n, ++idx) add({k, m, l, n}, a(k, m, l, n), b(k, m, l, n), se[idx]);
    return report;
  }
  if (estimate.contains("povm") && oracle.contains("povm")) {
    const auto& pa = estimate["povm"];
    const auto& pb = oracle["povm"];
    if (pa.size() != pb.size())
      throw ConfigError("shape mismatch: " + std::to_string(pa.size()) + " vs " + std::to_string(pb.size()) + " outcomes");
    for (std::size_t k = 0; k < pa.size(); ++k) {
      const CMatrix a = matrix_from_json(pa[k].at("pi"));
      const CMatrix b = matrix_from_json(pb[k].at("pi"));
      if (a.rows() != b.rows())
        throw ConfigError("shape mismatch: m_max " + std::to_string(a.rows() - 1) + " vs " + std::to_string(b.rows() - 1));
      Eigen::MatrixXd se = Eigen::MatrixXd::Zero(a.rows(), a.cols());
      if (pa[k].contains("std_error")) se = real_matrix_from_json(pa[k]["std_error"]);
      for (int m = 0; m < a.rows(); ++m)
        for (int n = 0; n < a.cols(); ++n) add({static_cast<int>(k), m, n}, a(m, n), b(m, n), se(m, n));
    }
    return report;
  }
  throw ConfigError("shape mismatch: files do not hold comparable chi or povm tensors");
}

int run(const RunConfig& c, std::ostream& log) {
  const auto start = std::chrono::steady_clock::now();
  int code = kExitOk;
  fs::path result;
  if (c.task == "simulate-process" || c.task == "simulate-detector") {
    code = task_simulate(c, log);
    result = metadata_path(samples_file(c));
  } else if (c.task == "reconstruct") {
    code = task_reconstruct(c, log);
    result = out_file(c, "estimate.json");
  } else if (c.task == "oracle-choi") {
    code = task_oracle(c, log);
    result = out_file(c, "oracle.json");
  } else if (c.task == "pattern-table") {
    code = task_pattern_table(c, log);
    result = out_file(c, "pattern_table.json");
  } else if (c.task == "validate") {
    return task_validate(log);
  } else if (c.task == "compare") {
    code = task_compare(c, log);
    result = out_file(c, "compare.json");
  } else {
    throw ConfigError("unknown task '" + c.task + "'");
  }
  write_run_log(result, start, c.workers);
  return code;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return kExitConfig;
  if (dynamic_cast<const nlohmann::json::exception*>(&e)) return kExitConfig;
  if (dynamic_cast<const fs::filesystem_error*>(&e)) return kExitConfig;
  if (dynamic_cast<const DomainError*>(&e)) return kExitDomain;
  return kExitNumerical;
}

int run_guarded(const RunConfig& config, std::ostream& log, std::ostream& err) {
  try {
    return run(config, log);
  } catch (const std::exception& e) {
    const int code = exit_code_for(e);
    const char* kind = code == kExitConfig ? "config error" : code == kExitDomain ? "domain error" : "numerical failure";
    err << "sqpt: " << kind << ": " << e.what() << "\n";
    return code;
  }
}

}  // namespace sqpt
