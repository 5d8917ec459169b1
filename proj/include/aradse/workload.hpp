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

// Kernel descriptors and application traces.
//
// Trace grammar (one event per line, whitespace separated, '#' starts a
// comment, blank lines ignored):
//
//   <time> <app> <verb> <kernel> [multiplier]
//
//   time        accelerator cycles, non-negative integer
//   app         application identifier
//   verb        reserve | check_reserved | send_param | check_done | free | run
//   kernel      accelerator type name
//   multiplier  task size in image slices (positive integer, default 1);
//               read from send_param and run, ignored elsewhere
//
// Per (app, kernel) the explicit protocol is
//   reserve check_reserved* send_param check_done* free
// and `run` is the blocking composite of the whole sequence.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "aradse/errors.hpp"
#include "aradse/spec_model.hpp"

namespace aradse {

/// Image slices in the default input volume (128 slices of 128x128 pixels).
inline constexpr std::uint64_t kVolumeSlices = 128;

struct KernelDescriptor {
  std::string name;
  std::uint32_t port_count = 1;
  std::uint64_t pages_in = 0;   // per slice
  std::uint64_t pages_out = 0;  // per slice
  std::uint64_t compute_cycles_per_page = 0;
  double reuse_factor = 1.0;  // fraction of input pages actually fetched

  /// Input pages fetched for a task of `multiplier` slices: ceil(r * pages_in * m).
  std::uint64_t fetched_pages(std::uint64_t multiplier = 1) const {
    const double x = reuse_factor * static_cast<double>(pages_in * multiplier);
    return static_cast<std::uint64_t>(std::ceil(x - 1e-9));
  }
  std::uint64_t output_pages(std::uint64_t multiplier = 1) const { return pages_out * multiplier; }
  /// Compute work tracks the logical input, so data reuse leaves it unchanged.
  std::uint64_t compute_cycles(std::uint64_t multiplier = 1) const {
    return compute_cycles_per_page * pages_in * multiplier;
  }

  void validate() const {
    if (name.empty()) throw ConfigError("kernel without a name");
    if (port_count < 1) throw ConfigError("kernel '" + name + "' needs at least one port");
    if (!(reuse_factor > 0.0 && reuse_factor <= 1.0))
      throw ConfigError("kernel '" + name + "' reuse_factor must be in (0, 1]");
  }

  bool operator==(const KernelDescriptor&) const = default;
};

using KernelTable = std::map<std::string, KernelDescriptor>;

/// Desk-scale stand-ins for the medical imaging kernels. One slice is
/// 128x128 4-byte pixels = 16 pages; gaussian fetches only 4 pages. Output
/// page counts and compute cycles are calibrated model parameters chosen so
/// that the un-optimized kernels are memory bound (compute ratio below 0.4)
/// on the default platform.
inline KernelTable builtin_kernels() {
  KernelTable t;
  t["gradient"] = {"gradient", 6, 16, 2, 80, 1.0};
  t["segmentation"] = {"segmentation", 8, 16, 2, 64, 1.0};
  t["rician"] = {"rician", 12, 16, 2, 64, 1.0};
  t["gaussian"] = {"gaussian", 5, 4, 1, 130, 1.0};
  return t;
}

/// Merges overrides of the form
///   {"gaussian": {"compute_cycles_per_page": 90}, "fft": {"port_count": 4, ...}}
/// over `base`. New names create new descriptors.
inline KernelTable merge_kernel_overrides(KernelTable base, const nlohmann::json& overrides) {
  if (!overrides.is_object()) throw ConfigError("kernel overrides must be a JSON object");
  for (const auto& [name, fields] : overrides.items()) {
    if (!fields.is_object()) throw ConfigError("kernel override for '" + name + "' must be an object");
    auto& k = base[name];
    k.name = name;
    for (const auto& [key, value] : fields.items()) {
      try {
        if (key == "port_count") k.port_count = value.get<std::uint32_t>();
        else if (key == "pages_in") k.pages_in = value.get<std::uint64_t>();
        else if (key == "pages_out") k.pages_out = value.get<std::uint64_t>();
        else if (key == "compute_cycles_per_page") k.compute_cycles_per_page = value.get<std::uint64_t>();
        else if (key == "reuse_factor") k.reuse_factor = value.get<double>();
        else throw ConfigError("unknown kernel field '" + key + "' for '" + name + "'");
      } catch (const nlohmann::json::exception&) {
        throw ConfigError("kernel field '" + key + "' for '" + name + "' has the wrong type");
      }
    }
    k.validate();
  }
  return base;
}

/// Sets the reuse factor of every kernel.
inline KernelTable with_reuse(KernelTable t, double reuse) {
  for (auto& [_, k] : t) {
    k.reuse_factor = reuse;
    k.validate();
  }
  return t;
}

enum class Verb { reserve, check_reserved, send_param, check_done, free, run };

inline std::string to_string(Verb v) {
  switch (v) {
    case Verb::reserve: return "reserve";
    case Verb::check_reserved: return "check_reserved";
    case Verb::send_param: return "send_param";
    case Verb::check_done: return "check_done";
    case Verb::free: return "free";
    case Verb::run: return "run";
  }
  return "?";
}

struct TraceEvent {
  std::uint64_t time = 0;
  std::string app;
  Verb verb = Verb::run;
  std::string kernel;
  std::uint32_t multiplier = 1;
  std::size_t line = 0;  // 1-based source line, 0 when synthesized

  bool operator==(const TraceEvent&) const = default;
};

struct Workload {
  std::vector<TraceEvent> events;  // sorted by time, stable

  std::vector<std::string> kernels() const {
    std::vector<std::string> out;
    for (const auto& e : events)
      if (std::find(out.begin(), out.end(), e.kernel) == out.end()) out.push_back(e.kernel);
    return out;
  }
};

/// Checks the per-(app, kernel) API protocol on time-ordered events.
inline void validate_protocol(const Workload& w) {
  enum class St { idle, reserved, running };
  struct Open {
    St st = St::idle;
    std::size_t line = 0;
  };
  std::map<std::pair<std::string, std::string>, Open> state;
  for (const auto& e : w.events) {
    auto& s = state[{e.app, e.kernel}];
    auto fail = [&](const std::string& why) {
      throw TraceError(to_string(e.verb) + " " + e.kernel + " by " + e.app + ": " + why, e.line);
    };
    switch (e.verb) {
      case Verb::reserve:
        if (s.st != St::idle) fail("already reserved");
        s = {St::reserved, e.line};
        break;
      case Verb::check_reserved:
        if (s.st != St::reserved) fail("no outstanding reserve");
        break;
      case Verb::send_param:
        if (s.st != St::reserved) fail("send_param without a prior reserve");
        s.st = St::running;
        break;
      case Verb::check_done:
        if (s.st != St::running) fail("check_done before send_param");
        break;
      case Verb::free:
        if (s.st != St::running) fail("free before send_param");
        s = {};
        break;
      case Verb::run:
        if (s.st != St::idle) fail("run while an explicit reservation is open");
        break;
    }
  }
  for (const auto& [key, s] : state)
    if (s.st != St::idle) throw TraceError("reservation of " + key.second + " by " + key.first + " is never freed", s.line);
}

inline Verb parse_verb(std::string_view s, std::size_t line) {
  if (s == "reserve") return Verb::reserve;
  if (s == "check_reserved") return Verb::check_reserved;
  if (s == "send_param") return Verb::send_param;
  if (s == "check_done") return Verb::check_done;
  if (s == "free") return Verb::free;
  if (s == "run") return Verb::run;
  throw ParseError("unknown verb '" + std::string(s) + "'", line);
}

/// Parses a trace, stable-sorts it by time and validates the protocol.
inline Workload load_trace(std::string_view text) {
  Workload w;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    std::istringstream fields(raw);
    std::vector<std::string> tok;
    for (std::string t; fields >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    if (tok.size() < 4 || tok.size() > 5)
      throw ParseError("expected '<time> <app> <verb> <kernel> [multiplier]'", line);
    TraceEvent e;
    e.line = line;
    try {
      e.time = parse_size_value(tok[0], "time");
      if (tok.size() == 5) {
        auto m = parse_size_value(tok[4], "multiplier");
        if (m == 0 || m > UINT32_MAX) throw ValueError("multiplier must be a positive 32-bit integer");
        e.multiplier = static_cast<std::uint32_t>(m);
      }
    } catch (const ValueError& err) {
      throw ParseError(err.what(), line);
    }
    e.app = tok[1];
    e.verb = parse_verb(tok[2], line);
    e.kernel = tok[3];
    w.events.push_back(std::move(e));
  }
  std::stable_sort(w.events.begin(), w.events.end(),
                   [](const TraceEvent& a, const TraceEvent& b) { return a.time < b.time; });
  validate_protocol(w);
  return w;
}

inline std::string to_trace_text(const Workload& w) {
  std::ostringstream o;
  for (const auto& e : w.events)
    o << e.time << ' ' << e.app << ' ' << to_string(e.verb) << ' ' << e.kernel << ' ' << e.multiplier << '\n';
  return o.str();
}

/// Synthetic trace shapes.
struct WorkloadPattern {
  enum class Kind { single, all_parallel, poisson, stream };
  Kind kind = Kind::single;
  std::string kernel;             // single, stream
  std::uint32_t multiplier = 1;   // slices per task
  std::uint64_t count = 1;        // poisson: events; stream: sequential runs
  double rate = 1e-4;             // poisson: arrivals per accelerator cycle
  std::uint64_t seed = 1;         // poisson
  std::vector<std::string> only;  // all_parallel: restrict to these types (empty = all)
};

/// Builds a workload from a pattern:
///   single        one `run` of `kernel` at t=0
///   all_parallel  one `run` per accelerator instance at t=0, each its own app
///   poisson       `count` runs with exponential inter-arrival times, kernels
///                 drawn uniformly over instance types, one app per event
///   stream        one app issuing `count` back-to-back runs of `kernel`
inline Workload synth_workload(const WorkloadPattern& p, const AraSpec& spec) {
  Workload w;
  auto ev = [&](std::uint64_t t, std::string app, const std::string& kernel) {
    w.events.push_back({t, std::move(app), Verb::run, kernel, p.multiplier, 0});
  };
  switch (p.kind) {
    case WorkloadPattern::Kind::single:
      ev(0, "app0", p.kernel);
      break;
    case WorkloadPattern::Kind::stream:
      for (std::uint64_t i = 0; i < p.count; ++i) ev(0, "app0", p.kernel);
      break;
    case WorkloadPattern::Kind::all_parallel: {
      std::uint64_t app = 0;
      for (const auto& inst : expand_instances(spec)) {
        if (!p.only.empty() && std::find(p.only.begin(), p.only.end(), inst.type_name) == p.only.end()) continue;
        ev(0, "app" + std::to_string(app++), inst.type_name);
      }
      break;
    }
    case WorkloadPattern::Kind::poisson: {
      if (!(p.rate > 0.0)) throw ConfigError("poisson rate must be positive");
      auto instances = expand_instances(spec);
      if (instances.empty()) throw ConfigError("poisson workload needs at least one accelerator");
      std::mt19937_64 rng(p.seed);
      std::exponential_distribution<double> gap(p.rate);
      std::uniform_int_distribution<std::size_t> pick(0, instances.size() - 1);
      double t = 0.0;
      for (std::uint64_t i = 0; i < p.count; ++i) {
        t += gap(rng);
        ev(static_cast<std::uint64_t>(t), "app" + std::to_string(i), instances[pick(rng)].type_name);
      }
      break;
    }
  }
  std::stable_sort(w.events.begin(), w.events.end(),
                   [](const TraceEvent& a, const TraceEvent& b) { return a.time < b.time; });
  return w;
}

}  // namespace aradse
