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

#include <algorithm>
#include <set>

#include "sqpt/errors.hpp"
#include "sqpt/harness.hpp"

namespace sqpt {

namespace {

void require_object(const Json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
}

void reject_unknown(const Json& j, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (!allowed.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

std::string join_path(const std::string& where, const std::string& key) {
  return where.empty() ? key : where + "." + key;
}

double get_number(const Json& j, const std::string& key, double fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number()) throw ConfigError(join_path(where, key) + ": expected a number");
  return j[key].get<double>();
}

double require_number(const Json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(join_path(where, key) + ": required");
  return get_number(j, key, 0.0, where);
}

std::int64_t get_integer(const Json& j, const std::string& key, std::int64_t fallback, const std::string& where,
                         std::int64_t min_value) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number_integer()) throw ConfigError(join_path(where, key) + ": expected an integer");
  const auto v = j[key].get<std::int64_t>();
  if (v < min_value) throw ConfigError(join_path(where, key) + ": must be >= " + std::to_string(min_value));
  return v;
}

std::string get_string(const Json& j, const std::string& key, const std::string& fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_string()) throw ConfigError(join_path(where, key) + ": expected a string");
  return j[key].get<std::string>();
}

ChannelSpec parse_channel(const Json& j) {
  require_object(j, "channel");
  ChannelSpec spec;
  spec.type = get_string(j, "type", "", "channel");
  if (spec.type == "identity") {
    reject_unknown(j, {"type"}, "channel");
  } else if (spec.type == "loss" || spec.type == "photon-subtraction") {
    reject_unknown(j, {"type", "transmittance"}, "channel");
    spec.transmittance = require_number(j, "transmittance", "channel");
  } else if (spec.type == "phase") {
    reject_unknown(j, {"type", "phi0"}, "channel");
    spec.phi0 = require_number(j, "phi0", "channel");
  } else {
    throw ConfigError("channel.type: expected identity, loss, phase or photon-subtraction, got '" + spec.type + "'");
  }
  return spec;
}

DetectorSpec parse_detector(const Json& j) {
  require_object(j, "detector");
  DetectorSpec spec;
  spec.type = get_string(j, "type", "", "detector");
  if (spec.type == "onoff") {
    reject_unknown(j, {"type", "eta_d", "p_dark"}, "detector");
    spec.eta_d = require_number(j, "eta_d", "detector");
    spec.p_dark = get_number(j, "p_dark", 0.0, "detector");
  } else if (spec.type == "pnr") {
    reject_unknown(j, {"type", "eta_d", "k_max"}, "detector");
    spec.eta_d = require_number(j, "eta_d", "detector");
    spec.k_max = static_cast<int>(get_integer(j, "k_max", 1, "detector", 1));
  } else {
    throw ConfigError("detector.type: expected onoff or pnr, got '" + spec.type + "'");
  }
  return spec;
}

}  // namespace

RunConfig parse_config(const Json& j) {
  require_object(j, "config");
  reject_unknown(j,
                 {"task", "channel", "detector", "probe", "table", "eta_b", "samples", "seed", "cutoff", "k_max",
                  "m_max", "workers", "truncation_tolerance", "min_eta", "compare", "paths"},
                 "config");
  RunConfig c;
  c.task = get_string(j, "task", "", "");
  if (std::find(kTasks.begin(), kTasks.end(), c.task) == kTasks.end())
    throw ConfigError("task: unknown or missing task '" + c.task + "'");

  if (j.contains("channel")) c.channel = parse_channel(j["channel"]);
  if (j.contains("detector")) c.detector = parse_detector(j["detector"]);
  if (j.contains("probe")) {
    const auto& p = j["probe"];
    require_object(p, "probe");
    reject_unknown(p, {"v_minus", "v_plus"}, "probe");
    c.probe = ProbeSpec{require_number(p, "v_minus", "probe"), require_number(p, "v_plus", "probe")};
  }
  if (j.contains("table")) {
    const auto& t = j["table"];
    require_object(t, "table");
    reject_unknown(t, {"eta", "m_max", "x_min", "x_max", "n_points"}, "table");
    TableSpec spec;
    spec.eta = require_number(t, "eta", "table");
    spec.m_max = static_cast<int>(get_integer(t, "m_max", spec.m_max, "table", 0));
    spec.grid.x_min = get_number(t, "x_min", spec.grid.x_min, "table");
    spec.grid.x_max = get_number(t, "x_max", spec.grid.x_max, "table");
    spec.grid.n_points = static_cast<int>(get_integer(t, "n_points", spec.grid.n_points, "table", 4));
    if (!(spec.grid.x_max > spec.grid.x_min)) throw ConfigError("table: x_max must exceed x_min");
    c.table = spec;
  }
  c.eta_b = get_number(j, "eta_b", c.eta_b, "");
  c.samples = static_cast<std::uint64_t>(get_integer(j, "samples", static_cast<std::int64_t>(c.samples), "", 1));
  if (j.contains("seed")) {
    if (!j["seed"].is_number_integer() || (!j["seed"].is_number_unsigned() && j["seed"].get<std::int64_t>() < 0))
      throw ConfigError("seed: expected a non-negative integer");
    c.seed = j["seed"].get<std::uint64_t>();
  }
  c.cutoff = static_cast<int>(get_integer(j, "cutoff", c.cutoff, "", 2));
  c.k_max = static_cast<int>(get_integer(j, "k_max", c.k_max, "", 0));
  c.m_max = static_cast<int>(get_integer(j, "m_max", c.m_max, "", 0));
  c.workers = static_cast<int>(get_integer(j, "workers", c.workers, "", 1));
  c.truncation_tolerance = get_number(j, "truncation_tolerance", c.truncation_tolerance, "");
  if (!(c.truncation_tolerance > 0)) throw ConfigError("truncation_tolerance: must be positive");
  c.min_eta = get_number(j, "min_eta", c.min_eta, "");
  if (j.contains("compare")) {
    const auto& p = j["compare"];
    require_object(p, "compare");
    reject_unknown(p, {"c", "abs_floor"}, "compare");
    c.compare.c = get_number(p, "c", c.compare.c, "compare");
    c.compare.abs_floor = get_number(p, "abs_floor", c.compare.abs_floor, "compare");
    if (c.compare.c < 0 || c.compare.abs_floor < 0) throw ConfigError("compare: c and abs_floor must be >= 0");
  }
  if (j.contains("paths")) {
    const auto& p = j["paths"];
    require_object(p, "paths");
    reject_unknown(p, {"samples", "estimate", "oracle", "out"}, "paths");
    c.paths.samples = get_string(p, "samples", "", "paths");
    c.paths.estimate = get_string(p, "estimate", "", "paths");
    c.paths.oracle = get_string(p, "oracle", "", "paths");
    c.paths.out = get_string(p, "out", c.paths.out, "paths");
  }

  // Per-task requirements.
  auto need = [&](bool ok, const std::string& what) {
    if (!ok) throw ConfigError("task " + c.task + " requires " + what);
  };
  if (c.task == "simulate-process") {
    need(c.channel.has_value(), "a channel");
    need(c.probe.has_value(), "a probe");
  } else if (c.task == "simulate-detector") {
    need(c.detector.has_value(), "a detector");
    need(c.probe.has_value(), "a probe");
  } else if (c.task == "reconstruct") {
    need(!c.paths.samples.empty(), "paths.samples");
  } else if (c.task == "oracle-choi") {
    need(c.channel.has_value() || c.detector.has_value(), "a channel or detector");
  } else if (c.task == "pattern-table") {
    need(c.table.has_value(), "a table section");
  } else if (c.task == "compare") {
    need(!c.paths.estimate.empty() && !c.paths.oracle.empty(), "paths.estimate and paths.oracle");
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& path) { return parse_config(read_json_file(path)); }

Json effective_config(const RunConfig& c) {
  Json j;
  j["task"] = c.task;
  if (c.channel) {
    Json ch{{"type", c.channel->type}};
    if (c.channel->type == "loss" || c.channel->type == "photon-subtraction") ch["transmittance"] = c.channel->transmittance;
    if (c.channel->type == "phase") ch["phi0"] = c.channel->phi0;
    j["channel"] = ch;
  }
  if (c.detector) {
    Json d{{"type", c.detector->type}, {"eta_d", c.detector->eta_d}};
    if (c.detector->type == "onoff") d["p_dark"] = c.detector->p_dark;
    if (c.detector->type == "pnr") d["k_max"] = c.detector->k_max;
    j["detector"] = d;
  }
  if (c.probe) j["probe"] = {{"v_minus", c.probe->v_minus}, {"v_plus", c.probe->v_plus}};
  if (c.table) {
    j["table"] = {{"eta", c.table->eta},
                  {"m_max", c.table->m_max},
                  {"x_min", c.table->grid.x_min},
                  {"x_max", c.table->grid.x_max},
                  {"n_points", c.table->grid.n_points}};
  }
  j["eta_b"] = c.eta_b;
  j["samples"] = c.samples;
  j["seed"] = c.seed;
  j["cutoff"] = c.cutoff;
  j["k_max"] = c.k_max;
  j["m_max"] = c.m_max;
  j["workers"] = c.workers;
  j["truncation_tolerance"] = c.truncation_tolerance;
  j["min_eta"] = c.min_eta;
  j["compare"] = {{"c", c.compare.c}, {"abs_floor", c.compare.abs_floor}};
  j["paths"] = {{"samples", c.paths.samples},
                {"estimate", c.paths.estimate},
                {"oracle", c.paths.oracle},
                {"out", c.paths.out}};
  return j;
}

KrausChannel make_channel(const ChannelSpec& spec, int cutoff) {
  if (spec.type == "identity") return identity_channel(cutoff);
  if (spec.type == "loss") return loss_channel(spec.transmittance, cutoff);
  if (spec.type == "phase") return phase_channel(spec.phi0, cutoff);
  if (spec.type == "photon-subtraction") return photon_subtraction(spec.transmittance, cutoff);
  throw ConfigError("unknown channel type '" + spec.type + "'");
}

Povm make_detector(const DetectorSpec& spec, int cutoff) {
  if (spec.type == "onoff") return onoff_detector(spec.eta_d, spec.p_dark, cutoff);
  if (spec.type == "pnr") return pnr_detector(spec.eta_d, spec.k_max, cutoff);
  throw ConfigError("unknown detector type '" + spec.type + "'");
}

}  // namespace sqpt
