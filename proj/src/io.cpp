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

#include "sqpt/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "sqpt/errors.hpp"

namespace sqpt {

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

double parse_double(const std::string& s, const std::filesystem::path& path, std::size_t line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(path.string() + ":" + std::to_string(line) + ": not a number: '" + s + "'");
  }
}

std::string strip(std::string s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.pop_back();
  return s;
}

std::ifstream open_csv(const std::filesystem::path& path, const std::string& expected_header) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::string header;
  std::getline(in, header);
  if (strip(header) != expected_header)
    throw ConfigError(path.string() + ": expected header '" + expected_header + "'");
  return in;
}

}  // namespace

void atomic_write(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + tmp.string());
    out << contents;
    if (!out) throw ConfigError("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

void write_process_csv(const std::filesystem::path& path, std::span<const ProcessSampleRecord> records) {
  std::string s = "theta,x_a,phi,x_b\n";
  s.reserve(records.size() * 100);
  for (const auto& r : records) {
    s += format_double(r.theta) + ',' + format_double(r.x_a) + ',' + format_double(r.phi) + ',' +
         format_double(r.x_b) + '\n';
  }
  atomic_write(path, s);
}

void write_detector_csv(const std::filesystem::path& path, std::span<const DetectorSampleRecord> records) {
  std::string s = "theta,x_a,k\n";
  s.reserve(records.size() * 60);
  for (const auto& r : records) s += format_double(r.theta) + ',' + format_double(r.x_a) + ',' + std::to_string(r.outcome) + '\n';
  atomic_write(path, s);
}

std::vector<ProcessSampleRecord> read_process_csv(const std::filesystem::path& path) {
  std::ifstream in = open_csv(path, "theta,x_a,phi,x_b");
  std::vector<ProcessSampleRecord> out;
  std::string line;
  std::size_t n = 1;
  while (std::getline(in, line)) {
    ++n;
    line = strip(line);
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != 4) throw ConfigError(path.string() + ":" + std::to_string(n) + ": expected 4 columns");
    out.push_back({parse_double(cells[0], path, n), parse_double(cells[1], path, n), parse_double(cells[2], path, n),
                   parse_double(cells[3], path, n)});
  }
  return out;
}

std::vector<DetectorSampleRecord> read_detector_csv(const std::filesystem::path& path) {
  std::ifstream in = open_csv(path, "theta,x_a,k");
  std::vector<DetectorSampleRecord> out;
  std::string line;
  std::size_t n = 1;
  while (std::getline(in, line)) {
    ++n;
    line = strip(line);
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != 3) throw ConfigError(path.string() + ":" + std::to_string(n) + ": expected 3 columns");
    const double k = parse_double(cells[2], path, n);
    if (k != static_cast<int>(k)) throw ConfigError(path.string() + ":" + std::to_string(n) + ": outcome not an integer");
    out.push_back({parse_double(cells[0], path, n), parse_double(cells[1], path, n), static_cast<int>(k)});
  }
  return out;
}

SampleKind sniff_sample_kind(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::string header;
  std::getline(in, header);
  header = strip(header);
  if (header == "theta,x_a,phi,x_b") return SampleKind::kProcess;
  if (header == "theta,x_a,k") return SampleKind::kDetector;
  throw ConfigError(path.string() + ": unrecognized sample header '" + header + "'");
}

std::filesystem::path metadata_path(const std::filesystem::path& csv) { return csv.string() + ".meta.json"; }

Json metadata_to_json(const RunMetadata& meta) {
  Json j;
  j["source"] = meta.source;
  j["probe"] = {{"v_minus", meta.params.v_minus},
                {"v_plus", meta.params.v_plus},
                {"eta_a", meta.params.eta_a},
                {"lambda", meta.params.lambda},
                {"v_a", meta.params.v_a},
                {"d_coeff", meta.params.d_coeff}};
  j["eta_b"] = meta.eta_b;
  j["seed"] = meta.seed;
  j["block_size"] = meta.block_size;
  j["attempted"] = meta.attempted;
  j["kept"] = meta.kept;
  j["clamped"] = meta.clamped;
  j["clamp_rate"] = meta.clamp_rate();
  j["post_selection_rate"] = meta.acceptance_rate();
  j["outcomes"] = meta.outcomes;
  j["gaussian_path"] = meta.gaussian_path;
  j["conventions"] = {{"quadrature", "x = (a + a^dagger)/sqrt(2), vacuum variance 1/2"},
                      {"phase_shift", "U(theta) = exp(-i n theta)"},
                      {"homodyne_angle", "x_theta = x cos(theta) + p sin(theta)"},
                      {"estimator_phase", "e^{+i(m-n)theta}"},
                      {"choi_index", "chi[k][m][l][n] = <k m|chi|l n>, input mode first"}};
  return j;
}

RunMetadata metadata_from_json(const Json& j) {
  try {
    RunMetadata m;
    m.source = j.at("source").get<std::string>();
    const auto& p = j.at("probe");
    m.params.v_minus = p.at("v_minus").get<double>();
    m.params.v_plus = p.at("v_plus").get<double>();
    m.params.eta_a = p.at("eta_a").get<double>();
    m.params.lambda = p.at("lambda").get<double>();
    m.params.v_a = p.at("v_a").get<double>();
    m.params.d_coeff = p.at("d_coeff").get<double>();
    m.eta_b = j.at("eta_b").get<double>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.block_size = j.at("block_size").get<std::size_t>();
    m.attempted = j.at("attempted").get<std::size_t>();
    m.kept = j.at("kept").get<std::size_t>();
    m.clamped = j.at("clamped").get<std::size_t>();
    m.outcomes = j.at("outcomes").get<int>();
    m.gaussian_path = j.at("gaussian_path").get<bool>();
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed run metadata: ") + e.what());
  }
}

Json choi_to_json(const ChoiMatrix& chi) {
  const int d = chi.dim();
  Json out = Json::array();
  for (int k = 0; k < d; ++k) {
    Json jk = Json::array();
    for (int m = 0; m < d; ++m) {
      Json jm = Json::array();
      for (int l = 0; l < d; ++l) {
        Json jl = Json::array();
        for (int n = 0; n < d; ++n) jl.push_back({chi(k, m, l, n).real(), chi(k, m, l, n).imag()});
        jm.push_back(std::move(jl));
      }
      jk.push_back(std::move(jm));
    }
    out.push_back(std::move(jk));
  }
  return out;
}

ChoiMatrix choi_from_json(const Json& j) {
  try {
    const int d = static_cast<int>(j.size());
    if (d == 0) throw ConfigError("empty chi tensor");
    ChoiMatrix chi(d - 1);
    for (int k = 0; k < d; ++k) {
      if (j[k].size() != static_cast<std::size_t>(d)) throw ConfigError("chi tensor is not hypercubic");
      for (int m = 0; m < d; ++m) {
        if (j[k][m].size() != static_cast<std::size_t>(d)) throw ConfigError("chi tensor is not hypercubic");
        for (int l = 0; l < d; ++l) {
          if (j[k][m][l].size() != static_cast<std::size_t>(d)) throw ConfigError("chi tensor is not hypercubic");
          for (int n = 0; n < d; ++n) {
            const auto& c = j[k][m][l][n];
            chi(k, m, l, n) = Complex(c.at(0).get<double>(), c.at(1).get<double>());
          }
        }
      }
    }
    return chi;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed chi tensor: ") + e.what());
  }
}

Json choi_errors_to_json(const std::vector<double>& values, int k_max) {
  const int d = k_max + 1;
  Json out = Json::array();
  std::size_t idx = 0;
  for (int k = 0; k < d; ++k) {
    Json jk = Json::array();
    for (int m = 0; m < d; ++m) {
      Json jm = Json::array();
      for (int l = 0; l < d; ++l) {
        Json jl = Json::array();
        for (int n = 0; n < d; ++n) jl.push_back(values[idx++]);
        jm.push_back(std::move(jl));
      }
      jk.push_back(std::move(jm));
    }
    out.push_back(std::move(jk));
  }
  return out;
}

std::vector<double> choi_errors_from_json(const Json& j, int k_max) {
  const int d = k_max + 1;
  if (j.size() != static_cast<std::size_t>(d)) throw ConfigError("std_error tensor shape mismatch");
  std::vector<double> out;
  try {
    for (int k = 0; k < d; ++k)
      for (int m = 0; m < d; ++m)
        for (int l = 0; l < d; ++l)
          for (int n = 0; n < d; ++n) out.push_back(j.at(k).at(m).at(l).at(n).get<double>());
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed std_error tensor: ") + e.what());
  }
  return out;
}

Json matrix_to_json(const CMatrix& m) {
  Json out = Json::array();
  for (int r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    out.push_back(std::move(row));
  }
  return out;
}

CMatrix matrix_from_json(const Json& j) {
  const int rows = static_cast<int>(j.size());
  if (rows == 0) throw ConfigError("empty matrix");
  CMatrix m(rows, rows);
  try {
    for (int r = 0; r < rows; ++r) {
      if (j[r].size() != static_cast<std::size_t>(rows)) throw ConfigError("matrix is not square");
      for (int c = 0; c < rows; ++c) m(r, c) = Complex(j[r][c].at(0).get<double>(), j[r][c].at(1).get<double>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed matrix: ") + e.what());
  }
  return m;
}

Json real_matrix_to_json(const Eigen::MatrixXd& m) {
  Json out = Json::array();
  for (int r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    out.push_back(std::move(row));
  }
  return out;
}

Eigen::MatrixXd real_matrix_from_json(const Json& j) {
  const int rows = static_cast<int>(j.size());
  Eigen::MatrixXd m(rows, rows);
  try {
    for (int r = 0; r < rows; ++r) {
      if (j[r].size() != static_cast<std::size_t>(rows)) throw ConfigError("matrix is not square");
      for (int c = 0; c < rows; ++c) m(r, c) = j[r][c].get<double>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed matrix: ") + e.what());
  }
  return m;
}

Json choi_estimate_to_json(const ChoiEstimate& est) {
  Json j;
  j["k_max"] = est.value.k_max();
  j["n_samples"] = est.n_samples;
  j["chi"] = choi_to_json(est.value);
  j["std_error"] = choi_errors_to_json(est.std_error, est.value.k_max());
  j["raw_asymmetry"] = est.raw_asymmetry;
  j["chi_raw"] = choi_to_json(est.raw);
  j["rescaling"] = choi_errors_to_json(est.rescaling, est.value.k_max());
  j["warnings"] = est.warnings;
  j["metadata"] = metadata_to_json(est.meta);
  return j;
}

Json povm_estimate_to_json(const PovmEstimate& est) {
  Json j;
  j["outcome"] = est.outcome;
  j["m_max"] = static_cast<int>(est.value.rows()) - 1;
  j["n_samples"] = est.n_samples;
  j["pi"] = matrix_to_json(est.value);
  j["std_error"] = real_matrix_to_json(est.std_error);
  j["rho"] = matrix_to_json(est.rho);
  j["rho_std_error"] = real_matrix_to_json(est.rho_std_error);
  j["trace"] = est.trace;
  j["frequency"] = est.frequency;
  j["frequency_se"] = est.frequency_se;
  j["trace_minus_frequency"] = est.trace_minus_frequency;
  j["trace_minus_frequency_se"] = est.trace_minus_frequency_se;
  j["warnings"] = est.warnings;
  return j;
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("malformed JSON in " + path.string() + ": " + e.what());
  }
}

}  // namespace sqpt
