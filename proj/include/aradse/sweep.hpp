/*
 * Copyright 2026 The aradse Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

// Design-space sweeps.
//
// Plan file (JSON; relative paths resolve against the plan's directory):
//   {
//     "spec": "medical5.xml",
//     "workload": {"trace": "burst.trace"}
//              |  {"pattern": "stream", "kernel": "gradient", "multiplier": 1,
//                  "count": 256, "rate": 1e-4, "seed": 1, "only": ["gaussian"]},
//     "kernels": {...} | "overrides.json",        optional descriptor overrides
//     "platform": {"miss_batch_size": 4, ...},    optional PlatformModel::set keys
//     "axes": {
//       "tlb_entries": [64, 256], "coherency": ["llc", "dram"],
//       "interleave": ["intra", "inter"], "connectivity": [2, 3],
//       "buffers": ["shared", "private"], "miss_mode": ["kernel_api", "pgtwalk"],
//       "reuse_factor": [1.0, 0.2]
//     },
//     "cap": 512
//   }
//
// Rows enumerate the cartesian product with the axes nested in the order
// listed above (tlb_entries outermost) and the values of each axis in plan
// order. Every row carries all seven axis columns; an axis that is not swept
// shows the base configuration's value (reuse_factor is left empty).

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "aradse/crossbar.hpp"
#include "aradse/errors.hpp"
#include "aradse/interleave.hpp"
#include "aradse/platform.hpp"
#include "aradse/report.hpp"
#include "aradse/simulator.hpp"
#include "aradse/spec_model.hpp"
#include "aradse/workload.hpp"

namespace aradse {

inline constexpr const char* kCsvSchemaVersion = "1";
inline constexpr std::uint64_t kDefaultSweepCap = 512;

/// Synthesized hardware for one configuration.
struct SystemModel {
  CrossbarTopology topology;
  InterleaveMap interleave;

  /// Distinct banks wired to at least one port.
  std::uint64_t banks_used() const {
    std::set<BankId> used;
    for (const auto& ports : topology.port_banks)
      for (const auto& banks : ports) used.insert(banks.begin(), banks.end());
    return used.size();
  }
};

/// Shared buffers synthesize a partial crossbar over the spec's banks;
/// private buffers give every port a dedicated bank.
inline SystemModel build_system(const AraSpec& spec, bool private_buffers = false) {
  const auto report = validate_spec(spec);
  if (!report.ok()) throw ConfigError("invalid spec: " + report.violations.front().message);
  const auto instances = expand_instances(spec);
  SystemModel s;
  s.topology = private_buffers ? private_buffer_topology(instances)
                               : synthesize_crossbar(instances, spec.shared_buffers.count, spec.acc_to_buf.connectivity);
  s.interleave = synthesize_interleave(s.topology, spec.shared_buffers.num_dmacs, spec.buf_to_dmac.strategy);
  return s;
}

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline WorkloadPattern::Kind parse_pattern_kind(std::string_view s) {
  if (s == "single") return WorkloadPattern::Kind::single;
  if (s == "all_parallel") return WorkloadPattern::Kind::all_parallel;
  if (s == "poisson") return WorkloadPattern::Kind::poisson;
  if (s == "stream") return WorkloadPattern::Kind::stream;
  throw ConfigError("unknown workload pattern '" + std::string(s) + "'");
}

/// Reads {"pattern": kind, "kernel": ..., ...}.
inline WorkloadPattern pattern_from_json(const nlohmann::json& j) {
  WorkloadPattern p;
  try {
    p.kind = parse_pattern_kind(j.at("pattern").get<std::string>());
    for (const auto& [key, value] : j.items()) {
      if (key == "pattern") continue;
      else if (key == "kernel") p.kernel = value.get<std::string>();
      else if (key == "multiplier") p.multiplier = value.get<std::uint32_t>();
      else if (key == "count") p.count = value.get<std::uint64_t>();
      else if (key == "rate") p.rate = value.get<double>();
      else if (key == "seed") p.seed = value.get<std::uint64_t>();
      else if (key == "only") p.only = value.get<std::vector<std::string>>();
      else throw ConfigError("unknown workload pattern key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad workload pattern: ") + e.what());
  }
  if (p.multiplier == 0) throw ConfigError("workload multiplier must be positive");
  return p;
}

/// Compact form used on the command line: "stream,kernel=gradient,count=256".
inline WorkloadPattern parse_pattern_text(std::string_view text) {
  nlohmann::json j;
  std::size_t pos = 0;
  bool first = true;
  while (pos <= text.size()) {
    auto end = text.find(',', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string item(text.substr(pos, end - pos));
    pos = end + 1;
    if (first) {
      j["pattern"] = item;
      first = false;
      continue;
    }
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ConfigError("expected key=value in pattern, got '" + item + "'");
    const auto key = item.substr(0, eq);
    const auto value = item.substr(eq + 1);
    if (key == "kernel") j[key] = value;
    else if (key == "rate") j[key] = std::stod(value);
    else if (key == "only") {
      j[key] = nlohmann::json::array();
      std::stringstream ss(value);
      for (std::string name; std::getline(ss, name, ':');) j[key].push_back(name);
    } else {
      try {
        j[key] = std::stoull(value);
      } catch (const std::exception&) {
        throw ConfigError("bad value for pattern key '" + key + "': '" + value + "'");
      }
    }
  }
  return pattern_from_json(j);
}

struct SweepAxes {
  std::vector<std::uint64_t> tlb_entries;
  std::vector<Coherency> coherency;
  std::vector<InterleaveStrategy> interleave;
  std::vector<std::uint64_t> connectivity;
  std::vector<bool> private_buffers;
  std::vector<MissMode> miss_mode;
  std::vector<double> reuse_factor;

  std::uint64_t product() const {
    std::uint64_t n = 1;
    auto mul = [&](std::size_t k) {
      if (k) n = n > UINT64_MAX / k ? UINT64_MAX : n * k;
    };
    mul(tlb_entries.size());
    mul(coherency.size());
    mul(interleave.size());
    mul(connectivity.size());
    mul(private_buffers.size());
    mul(miss_mode.size());
    mul(reuse_factor.size());
    return n;
  }
};

struct SweepPlan {
  AraSpec spec;
  Workload workload;
  KernelTable kernels = builtin_kernels();
  PlatformModel platform;
  SweepAxes axes;
  std::uint64_t cap = kDefaultSweepCap;
};

/// One point of the design space.
struct SweepConfig {
  std::uint64_t tlb_entries = kDefaultTlbEntries;
  Coherency coherency = Coherency::dram;
  InterleaveStrategy interleave = InterleaveStrategy::intra_acc;
  std::uint64_t connectivity = 1;
  bool private_buffers = false;
  MissMode miss_mode = MissMode::pgtwalk;
  std::optional<double> reuse_factor;
};

namespace detail {

template <class T, class F>
std::vector<T> axis_values(const nlohmann::json& j, const std::string& name, F convert) {
  if (!j.is_array()) throw PlanError("axis '" + name + "' must be a list");
  if (j.empty()) throw PlanError("axis '" + name + "' has no values");
  std::vector<T> out;
  for (const auto& v : j) {
    try {
      out.push_back(convert(v));
    } catch (const nlohmann::json::exception& e) {
      throw PlanError("axis '" + name + "': " + e.what());
    } catch (const Error& e) {
      throw PlanError("axis '" + name + "': " + e.what());
    }
  }
  return out;
}

inline bool parse_buffers_mode(const std::string& s) {
  if (s == "shared") return false;
  if (s == "private") return true;
  throw PlanError("unknown buffers mode '" + s + "' (expected shared|private)");
}

}  // namespace detail

inline SweepAxes axes_from_json(const nlohmann::json& j) {
  SweepAxes a;
  if (j.is_null()) return a;
  if (!j.is_object()) throw PlanError("'axes' must be an object");
  for (const auto& [name, values] : j.items()) {
    using nlohmann::json;
    if (name == "tlb_entries") {
      a.tlb_entries = detail::axis_values<std::uint64_t>(values, name, [](const json& v) {
        auto n = v.get<std::uint64_t>();
        if (n == 0) throw PlanError("tlb_entries must be positive");
        return n;
      });
    } else if (name == "coherency") {
      a.coherency = detail::axis_values<Coherency>(values, name, [](const json& v) { return parse_coherency(v.get<std::string>()); });
    } else if (name == "interleave") {
      a.interleave =
          detail::axis_values<InterleaveStrategy>(values, name, [](const json& v) { return parse_strategy(v.get<std::string>()); });
    } else if (name == "connectivity") {
      a.connectivity = detail::axis_values<std::uint64_t>(values, name, [](const json& v) { return v.get<std::uint64_t>(); });
    } else if (name == "buffers") {
      a.private_buffers =
          detail::axis_values<bool>(values, name, [](const json& v) { return detail::parse_buffers_mode(v.get<std::string>()); });
    } else if (name == "miss_mode") {
      a.miss_mode = detail::axis_values<MissMode>(values, name, [](const json& v) { return parse_miss_mode(v.get<std::string>()); });
    } else if (name == "reuse_factor") {
      a.reuse_factor = detail::axis_values<double>(values, name, [](const json& v) {
        auto r = v.get<double>();
        if (!(r > 0.0 && r <= 1.0)) throw PlanError("reuse_factor must be in (0, 1]");
        return r;
      });
    } else {
      throw PlanError("unknown sweep axis '" + name + "'");
    }
  }
  return a;
}

/// Loads a plan file. `seed`, when given, replaces the pattern seed.
inline SweepPlan load_plan(const std::filesystem::path& path, std::optional<std::uint64_t> seed = std::nullopt) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_text_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw PlanError("plan '" + path.string() + "' is not valid JSON: " + e.what());
  }
  if (!j.is_object()) throw PlanError("plan must be a JSON object");
  const auto dir = path.parent_path();
  auto resolve = [&](const std::string& p) { return std::filesystem::path(p).is_absolute() ? std::filesystem::path(p) : dir / p; };

  SweepPlan plan;
  for (const auto& [key, _] : j.items())
    if (key != "spec" && key != "workload" && key != "kernels" && key != "platform" && key != "axes" && key != "cap")
      throw PlanError("unknown plan key '" + key + "'");
  if (!j.contains("spec") || !j["spec"].is_string()) throw PlanError("plan needs a 'spec' path");
  plan.spec = parse_spec(read_text_file(resolve(j["spec"].get<std::string>())));
  plan.platform = PlatformModel::from_spec(plan.spec);

  if (j.contains("kernels")) {
    const auto& k = j["kernels"];
    plan.kernels = merge_kernel_overrides(builtin_kernels(), k.is_string() ? nlohmann::json::parse(read_text_file(resolve(k.get<std::string>()))) : k);
  }
  if (j.contains("platform")) {
    if (!j["platform"].is_object()) throw PlanError("'platform' must be an object");
    for (const auto& [key, value] : j["platform"].items())
      plan.platform.set(key, value.is_string() ? value.get<std::string>() : value.dump());
  }

  if (!j.contains("workload") || !j["workload"].is_object()) throw PlanError("plan needs a 'workload' object");
  const auto& w = j["workload"];
  if (w.contains("trace")) {
    plan.workload = load_trace(read_text_file(resolve(w["trace"].get<std::string>())));
  } else {
    auto pattern = pattern_from_json(w);
    if (seed) pattern.seed = *seed;
    plan.workload = synth_workload(pattern, plan.spec);
  }

  plan.axes = axes_from_json(j.value("axes", nlohmann::json()));
  if (j.contains("cap")) plan.cap = j["cap"].get<std::uint64_t>();
  return plan;
}

/// All configurations in row order; throws PlanError above the cap.
inline std::vector<SweepConfig> expand_plan(const SweepPlan& plan) {
  const auto& a = plan.axes;
  const auto n = a.product();
  if (n > plan.cap)
    throw PlanError("sweep has " + std::to_string(n) + " runs, above the cap of " + std::to_string(plan.cap));

  SweepConfig base;
  base.tlb_entries = plan.spec.iommu.tlb_entries;
  base.coherency = plan.platform.coherency;
  base.interleave = plan.spec.buf_to_dmac.strategy;
  base.connectivity = plan.spec.acc_to_buf.connectivity;
  base.miss_mode = plan.platform.miss_mode;

  // Odometer over per-axis indices; the last axis varies fastest.
  const std::vector<std::size_t> sizes = {a.tlb_entries.size(),     a.coherency.size(), a.interleave.size(),
                                          a.connectivity.size(),    a.private_buffers.size(), a.miss_mode.size(),
                                          a.reuse_factor.size()};
  std::vector<std::size_t> idx(sizes.size(), 0);
  std::vector<SweepConfig> out;
  out.reserve(n);
  for (std::uint64_t row = 0; row < n; ++row) {
    SweepConfig c = base;
    if (sizes[0]) c.tlb_entries = a.tlb_entries[idx[0]];
    if (sizes[1]) c.coherency = a.coherency[idx[1]];
    if (sizes[2]) c.interleave = a.interleave[idx[2]];
    if (sizes[3]) c.connectivity = a.connectivity[idx[3]];
    if (sizes[4]) c.private_buffers = a.private_buffers[idx[4]];
    if (sizes[5]) c.miss_mode = a.miss_mode[idx[5]];
    if (sizes[6]) c.reuse_factor = a.reuse_factor[idx[6]];
    out.push_back(c);
    for (std::size_t k = sizes.size(); k-- > 0;) {
      if (sizes[k] == 0) continue;
      if (++idx[k] < sizes[k]) break;
      idx[k] = 0;
    }
  }
  return out;
}

struct SweepRow {
  SweepConfig config;
  std::uint64_t banks_used = 0;
  std::uint64_t cross_points = 0;
  PerfReport report;
};

/// Runs one configuration of `plan`.
inline SweepRow run_config(const SweepPlan& plan, const SweepConfig& c) {
  AraSpec spec = plan.spec;
  spec.iommu.tlb_entries = c.tlb_entries;
  spec.buf_to_dmac.strategy = c.interleave;
  spec.acc_to_buf.connectivity = c.connectivity;
  PlatformModel platform = plan.platform;
  platform.coherency = c.coherency;
  platform.miss_mode = c.miss_mode;
  const auto kernels = c.reuse_factor ? with_reuse(plan.kernels, *c.reuse_factor) : plan.kernels;

  const auto system = build_system(spec, c.private_buffers);
  SweepRow row;
  row.config = c;
  row.banks_used = system.banks_used();
  row.cross_points = cross_point_count(system.topology);
  row.report = run_simulation(spec, system.topology, system.interleave, plan.workload, kernels, platform);
  return row;
}

/// Runs every configuration, `jobs` at a time. Rows come back in plan order;
/// if several runs fail, the error of the earliest row is rethrown.
inline std::vector<SweepRow> run_sweep(const SweepPlan& plan, unsigned jobs = 1) {
  const auto configs = expand_plan(plan);
  std::vector<SweepRow> rows(configs.size());
  std::vector<std::exception_ptr> errors(configs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < configs.size();) {
      try {
        rows[i] = run_config(plan, configs[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(configs.size(), 1))));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
  }
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (!errors[i]) continue;
    try {
      std::rethrow_exception(errors[i]);
    } catch (const Error& e) {
      throw SimulationError("sweep row " + std::to_string(i) + " failed: " + e.what());
    }
  }
  return rows;
}

inline std::vector<std::string> sweep_axis_columns() {
  return {"tlb_entries", "coherency", "interleave", "connectivity", "buffers", "miss_mode", "reuse_factor"};
}

inline std::vector<std::string> sweep_csv_columns() {
  std::vector<std::string> cols = {"schema_version"};
  for (auto& c : sweep_axis_columns()) cols.push_back(c);
  cols.push_back("banks_used");
  cols.push_back("cross_points");
  for (auto& c : report_csv_columns()) cols.push_back(c);
  return cols;
}

inline std::string sweep_csv_row(const SweepRow& r) {
  const auto& c = r.config;
  std::vector<std::string> cells = {kCsvSchemaVersion,
                                    std::to_string(c.tlb_entries),
                                    to_string(c.coherency),
                                    to_string(c.interleave),
                                    std::to_string(c.connectivity),
                                    c.private_buffers ? "private" : "shared",
                                    to_string(c.miss_mode),
                                    c.reuse_factor ? format_real(*c.reuse_factor) : "",
                                    std::to_string(r.banks_used),
                                    std::to_string(r.cross_points)};
  for (auto& v : report_csv_values(r.report)) cells.push_back(std::move(v));
  return join_csv(cells);
}

inline std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = join_csv(sweep_csv_columns()) + "\n";
  for (const auto& r : rows) out += sweep_csv_row(r) + "\n";
  return out;
}

}  // namespace aradse
