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

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "sqpt/io.hpp"

namespace fs = std::filesystem;
using sqpt::Json;

namespace {

const fs::path kRoot = fs::temp_directory_path() / "sqpt_cli_test";

int sqpt_cli(const std::string& args) {
  const std::string cmd = std::string(SQPT_CLI_PATH) + " " + args + " >" + (kRoot / "stdout.txt").string() + " 2>" +
                          (kRoot / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path config(const std::string& name, const Json& j) {
  fs::create_directories(kRoot);
  const auto p = kRoot / name;
  std::ofstream(p) << j.dump(1);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

TEST_CASE("missing or malformed configuration exits 2") {
  fs::create_directories(kRoot);
  CHECK(sqpt_cli("") == 2);
  CHECK(sqpt_cli("--config " + (kRoot / "nope.json").string()) == 2);
  CHECK(sqpt_cli("--config " + config("unknown.json", {{"task", "oracle-choi"}, {"colour", "red"}}).string()) == 2);
  CHECK(slurp(kRoot / "stderr.txt").find("colour") != std::string::npos);
}

TEST_CASE("physical-domain errors exit 3") {
  const auto c = config("domain.json", {{"task", "oracle-choi"}, {"channel", {{"type", "loss"}, {"transmittance", -0.2}}}});
  CHECK(sqpt_cli("--config " + c.string() + " --out " + (kRoot / "domain").string()) == 3);
}

TEST_CASE("numerical failures exit 4") {
  // Heavily squeezed probes cannot be held in 6 Fock levels.
  const auto c = config("trunc.json", {{"task", "simulate-process"},
                                       {"channel", {{"type", "photon-subtraction"}, {"transmittance", 0.8}}},
                                       {"probe", {{"v_minus", 0.05}, {"v_plus", 5.0}}},
                                       {"cutoff", 6},
                                       {"samples", 10}});
  CHECK(sqpt_cli("--config " + c.string() + " --out " + (kRoot / "trunc").string()) == 4);
}

TEST_CASE("oracle task honours --out") {
  const auto c = config("oracle.json", {{"task", "oracle-choi"},
                                        {"channel", {{"type", "loss"}, {"transmittance", 0.7}}},
                                        {"k_max", 1}});
  const auto out = kRoot / "oracle_out";
  fs::remove_all(out);
  REQUIRE(sqpt_cli("--config " + c.string() + " --out " + out.string()) == 0);
  const auto j = sqpt::read_json_file(out / "oracle.json");
  CHECK(j["chi"][1][1][0][0][0].get<double>() == doctest::Approx(0.836660).epsilon(1e-6));
  CHECK(j["config"]["paths"]["out"].get<std::string>() == out.string());
}

TEST_CASE("seed and worker overrides land in the effective config, values do not change with workers") {
  const auto c = config("sim.json", {{"task", "simulate-process"},
                                     {"channel", {{"type", "loss"}, {"transmittance", 0.7}}},
                                     {"probe", {{"v_minus", 0.32402708}, {"v_plus", 0.77154032}}},
                                     {"eta_b", 0.85},
                                     {"samples", 10000}});
  const auto one = kRoot / "w1", four = kRoot / "w4";
  REQUIRE(sqpt_cli("--config " + c.string() + " --out " + one.string() + " --seed 99 --workers 1") == 0);
  REQUIRE(sqpt_cli("--config " + c.string() + " --out " + four.string() + " --seed 99 --workers 4") == 0);
  CHECK(slurp(one / "samples.csv") == slurp(four / "samples.csv"));
  const auto meta = sqpt::read_json_file(four / "samples.csv.meta.json");
  CHECK(meta["config"]["seed"].get<int>() == 99);
  CHECK(meta["config"]["workers"].get<int>() == 4);
  CHECK(meta["metadata"]["seed"].get<int>() == 99);
}

TEST_CASE("compare task exit status reflects the verdict") {
  const auto a = config("oa.json", {{"task", "oracle-choi"}, {"channel", {{"type", "loss"}, {"transmittance", 0.7}}}, {"k_max", 1}});
  const auto b = config("ob.json", {{"task", "oracle-choi"}, {"channel", {{"type", "loss"}, {"transmittance", 0.3}}}, {"k_max", 1}});
  const auto k2 = config("ok2.json", {{"task", "oracle-choi"}, {"channel", {{"type", "identity"}}}, {"k_max", 2}});
  REQUIRE(sqpt_cli("--config " + a.string() + " --out " + (kRoot / "oa").string()) == 0);
  REQUIRE(sqpt_cli("--config " + b.string() + " --out " + (kRoot / "ob").string()) == 0);
  REQUIRE(sqpt_cli("--config " + k2.string() + " --out " + (kRoot / "ok2").string()) == 0);
  auto compare = [&](const std::string& est, const std::string& orc) {
    const auto c = config("cmp.json", {{"task", "compare"},
                                       {"paths", {{"estimate", (kRoot / est / "oracle.json").string()},
                                                  {"oracle", (kRoot / orc / "oracle.json").string()}}}});
    return sqpt_cli("--config " + c.string() + " --out " + (kRoot / "cmp").string());
  };
  CHECK(compare("oa", "oa") == 0);
  CHECK(sqpt::read_json_file(kRoot / "cmp" / "compare.json")["max_abs_error"].get<double>() == 0.0);
  CHECK(compare("oa", "ob") == 1);
  CHECK(compare("oa", "ok2") == 2);
}

TEST_CASE("validate task passes") {
  const auto c = config("validate.json", {{"task", "validate"}});
  CHECK(sqpt_cli("--config " + c.string()) == 0);
  CHECK(slurp(kRoot / "stdout.txt").find("FAIL") == std::string::npos);
}
