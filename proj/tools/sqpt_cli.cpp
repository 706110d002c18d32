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

#include <iostream>

#include "CLI11.hpp"
#include "sqpt/errors.hpp"
#include "sqpt/harness.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Squeezed-probe process tomography: simulate, reconstruct and compare"};
  std::string config_path;
  std::optional<int> workers;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  app.add_option("--config", config_path, "JSON run configuration")->required();
  app.add_option("--workers", workers, "override worker count")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "override RNG seed");
  app.add_option("--out", out, "output directory");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : sqpt::kExitConfig;
  }

  sqpt::RunConfig config;
  try {
    config = sqpt::load_config(config_path);
  } catch (const std::exception& e) {
    std::cerr << "sqpt: config error: " << e.what() << "\n";
    return sqpt::kExitConfig;
  }
  if (workers) config.workers = *workers;
  if (seed) config.seed = *seed;
  if (out) config.paths.out = *out;
  return sqpt::run_guarded(config, std::cout, std::cerr);
}
