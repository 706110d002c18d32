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

#ifndef SQPT_HARNESS_HPP
#define SQPT_HARNESS_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sqpt/channels.hpp"
#include "sqpt/homodyne.hpp"
#include "sqpt/io.hpp"

namespace sqpt {

struct ChannelSpec {
  std::string type;  // identity | loss | phase | photon-subtraction
  double transmittance = 1.0;
  double phi0 = 0.0;
};

struct DetectorSpec {
  std::string type;  // onoff | pnr
  double eta_d = 1.0;
  double p_dark = 0.0;
  int k_max = 1;
};

struct ProbeSpec {
  double v_minus = 0.0;
  double v_plus = 0.0;
};

struct TableSpec {
  double eta = 1.0;
  int m_max = 3;
  GridSpec grid;
};

// An element passes when |estimate - oracle| <= max(c SE, abs_floor).
struct ComparePolicy {
  double c = 4.0;
  double abs_floor = 0.03;
};

struct PathSpec {
  std::string samples;
  std::string estimate;
  std::string oracle;
  std::string out = ".";
};

struct RunConfig {
  std::string task;
  std::optional<ChannelSpec> channel;
  std::optional<DetectorSpec> detector;
  std::optional<ProbeSpec> probe;
  std::optional<TableSpec> table;
  double eta_b = 1.0;
  std::uint64_t samples = 100000;
  std::uint64_t seed = 1;
  int cutoff = 30;
  int k_max = 2;
  int m_max = 3;
  int workers = 1;
  double truncation_tolerance = 1e-6;
  double min_eta = 0.55;
  ComparePolicy compare;
  PathSpec paths;
};

inline const std::vector<std::string> kTasks = {"simulate-process", "simulate-detector", "reconstruct", "oracle-choi",
                                                "pattern-table",    "validate",          "compare"};

// Schema validation only; physical-domain checks happen in the modules.
// Throws ConfigError.
RunConfig parse_config(const Json& j);
RunConfig load_config(const std::filesystem::path& path);
Json effective_config(const RunConfig& config);

KrausChannel make_channel(const ChannelSpec& spec, int cutoff);
Povm make_detector(const DetectorSpec& spec, int cutoff);

Json choi_oracle_json(const ChannelSpec& spec, int k_max, int cutoff);
Json povm_oracle_json(const DetectorSpec& spec, int m_max, int cutoff);

struct CompareElement {
  std::vector<int> index;
  double abs_error = 0.0;
  double std_error = 0.0;
  double ratio = 0.0;  // abs_error / SE, 0 when SE is 0
  bool pass = true;
};

struct CompareReport {
  std::vector<CompareElement> elements;
  double max_abs_error = 0.0;
  double max_ratio = 0.0;
  bool pass = true;
  ComparePolicy policy;

  Json to_json() const;
};

// Accepts Choi files ("chi") or POVM files ("povm"). SE is read from the
// estimate side when present. Mismatched shapes throw ConfigError.
CompareReport compare_report(const Json& estimate, const Json& oracle, const ComparePolicy& policy);

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitDomain = 3;
inline constexpr int kExitNumerical = 4;

// Executes the task; errors propagate as exceptions.
int run(const RunConfig& config, std::ostream& log);
// run() with exceptions mapped to exit codes and reported on `err`.
int run_guarded(const RunConfig& config, std::ostream& log, std::ostream& err);
int exit_code_for(const std::exception& e);

}  // namespace sqpt

#endif  // SQPT_HARNESS_HPP
