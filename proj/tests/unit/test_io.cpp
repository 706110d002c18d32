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

#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "sqpt/errors.hpp"
#include "sqpt/io.hpp"

using namespace sqpt;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "sqpt_io_test";
  fs::create_directories(dir);
  return dir / name;
}

void write_text(const fs::path& p, const std::string& s) {
  std::ofstream out(p);
  out << s;
}

}  // namespace

TEST_CASE("process CSV round trip is exact") {
  RngStream rng(1, 0);
  std::vector<ProcessSampleRecord> recs;
  for (int i = 0; i < 500; ++i) recs.push_back({rng.uniform() * 6.28, rng.normal(), rng.uniform() * 6.28, 1e-7 * rng.normal()});
  const auto p = scratch("proc.csv");
  write_process_csv(p, recs);
  const auto back = read_process_csv(p);
  REQUIRE(back.size() == recs.size());
  for (std::size_t i = 0; i < recs.size(); ++i) {
    CHECK(back[i].theta == recs[i].theta);
    CHECK(back[i].x_a == recs[i].x_a);
    CHECK(back[i].phi == recs[i].phi);
    CHECK(back[i].x_b == recs[i].x_b);
  }
  CHECK(sniff_sample_kind(p) == SampleKind::kProcess);
  CHECK_FALSE(fs::exists(p.string() + ".tmp"));
  std::ifstream in(p);
  std::string header;
  std::getline(in, header);
  CHECK(header == "theta,x_a,phi,x_b");
}

TEST_CASE("detector CSV round trip") {
  const std::vector<DetectorSampleRecord> recs = {{0.1, -0.25, 0}, {3.0, 1.0 / 3.0, 1}, {6.2, 2.5, 3}};
  const auto p = scratch("det.csv");
  write_detector_csv(p, recs);
  const auto back = read_detector_csv(p);
  REQUIRE(back.size() == 3);
  CHECK(back[1].x_a == recs[1].x_a);
  CHECK(back[2].outcome == 3);
  CHECK(sniff_sample_kind(p) == SampleKind::kDetector);
}

TEST_CASE("malformed CSV files are rejected") {
  const auto p = scratch("bad.csv");
  write_text(p, "a,b,c\n1,2,3\n");
  CHECK_THROWS_AS(read_process_csv(p), ConfigError);
  CHECK_THROWS_AS(sniff_sample_kind(p), ConfigError);
  write_text(p, "theta,x_a,phi,x_b\n1,2,3\n");
  CHECK_THROWS_AS(read_process_csv(p), ConfigError);
  write_text(p, "theta,x_a,phi,x_b\n1,2,zz,4\n");
  CHECK_THROWS_AS(read_process_csv(p), ConfigError);
  write_text(p, "theta,x_a,k\n1,2,0.5\n");
  CHECK_THROWS_AS(read_detector_csv(p), ConfigError);
  CHECK_THROWS_AS(read_process_csv(scratch("missing.csv")), ConfigError);
  // CRLF line endings are tolerated.
  write_text(p, "theta,x_a,k\r\n1,2,1\r\n");
  CHECK(read_detector_csv(p).at(0).outcome == 1);
}

TEST_CASE("run metadata round trip") {
  RunMetadata m;
  m.source = "loss";
  m.params = probe_params_from_tmsv(0.5, 0.8);
  m.eta_b = 0.85;
  m.seed = 123456789012345ULL;
  m.attempted = 1000;
  m.kept = 900;
  m.clamped = 3;
  m.outcomes = 0;
  m.gaussian_path = true;
  const auto j = metadata_to_json(m);
  CHECK(j.contains("conventions"));
  CHECK(j["clamp_rate"].get<double>() == doctest::Approx(0.003));
  CHECK(j["post_selection_rate"].get<double>() == doctest::Approx(0.9));
  const auto back = metadata_from_json(j);
  CHECK(back.seed == m.seed);
  CHECK(back.params.lambda == m.params.lambda);
  CHECK(back.params.eta_a == m.params.eta_a);
  CHECK(back.kept == 900);
  CHECK_THROWS_AS(metadata_from_json(Json{{"source", "x"}}), ConfigError);
}

TEST_CASE("Choi tensors serialize as nested [re, im]") {
  ChoiMatrix chi(1);
  chi(0, 0, 1, 1) = Complex(0.5, -0.25);
  chi(1, 0, 1, 0) = 0.3;
  const auto j = choi_to_json(chi);
  CHECK(j[0][0][1][1][0].get<double>() == 0.5);
  CHECK(j[0][0][1][1][1].get<double>() == -0.25);
  const auto back = choi_from_json(j);
  CHECK(back.data() == chi.data());

  Json ragged = j;
  ragged[1][0].erase(0);
  CHECK_THROWS_AS(choi_from_json(ragged), ConfigError);

  const std::vector<double> se(16, 0.125);
  CHECK(choi_errors_from_json(choi_errors_to_json(se, 1), 1) == se);
  CHECK_THROWS_AS(choi_errors_from_json(choi_errors_to_json(se, 1), 2), ConfigError);
}

TEST_CASE("matrices serialize") {
  CMatrix m(2, 2);
  m << Complex(1, 2), 3, Complex(0, -1), 4;
  CHECK(matrix_from_json(matrix_to_json(m)) == m);
  Eigen::MatrixXd r(2, 2);
  r << 1, 2, 3, 4;
  CHECK(real_matrix_from_json(real_matrix_to_json(r)) == r);
}

TEST_CASE("JSON file reading reports malformed input") {
  const auto p = scratch("bad.json");
  write_text(p, "{ not json");
  CHECK_THROWS_AS(read_json_file(p), ConfigError);
  atomic_write(p, "{\"a\": 1}");
  CHECK(read_json_file(p)["a"].get<int>() == 1);
}
