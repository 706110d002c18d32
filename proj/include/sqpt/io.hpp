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

#ifndef SQPT_IO_HPP
#define SQPT_IO_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "sqpt/estimators.hpp"

namespace sqpt {

using Json = nlohmann::ordered_json;

// Writes to a temporary sibling and renames it over `path`.
void atomic_write(const std::filesystem::path& path, const std::string& contents);

// CSV with header theta,x_a,phi,x_b (process) or theta,x_a,k (detector);
// values printed with 17 significant digits.
void write_process_csv(const std::filesystem::path& path, std::span<const ProcessSampleRecord> records);
void write_detector_csv(const std::filesystem::path& path, std::span<const DetectorSampleRecord> records);
std::vector<ProcessSampleRecord> read_process_csv(const std::filesystem::path& path);
std::vector<DetectorSampleRecord> read_detector_csv(const std::filesystem::path& path);

enum class SampleKind { kProcess, kDetector };
SampleKind sniff_sample_kind(const std::filesystem::path& path);

// Run metadata lives next to the CSV as "<csv>.meta.json".
std::filesystem::path metadata_path(const std::filesystem::path& csv);
Json metadata_to_json(const RunMetadata& meta);
RunMetadata metadata_from_json(const Json& j);

// chi[k][m][l][n] = [re, im]
Json choi_to_json(const ChoiMatrix& chi);
ChoiMatrix choi_from_json(const Json& j);
// Real tensor in ChoiMatrix layout as nested arrays.
Json choi_errors_to_json(const std::vector<double>& values, int k_max);
std::vector<double> choi_errors_from_json(const Json& j, int k_max);

Json matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const Json& j);
Json real_matrix_to_json(const Eigen::MatrixXd& m);
Eigen::MatrixXd real_matrix_from_json(const Json& j);

Json choi_estimate_to_json(const ChoiEstimate& est);
Json povm_estimate_to_json(const PovmEstimate& est);

Json read_json_file(const std::filesystem::path& path);

}  // namespace sqpt

#endif  // SQPT_IO_HPP
