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

// Platform parameters of the modeled SoC. The time base is the accelerator
// clock; CPU-side TLB miss penalties are given in microseconds and converted.
//
// Defaults are model choices: 4 HP ports to DRAM, 1 coherent port to the LLC,
// 8 bytes/cycle/port, 200-cycle DRAM access (a three-access hardware walk is
// ~600 cycles), 30-cycle LLC access, 32 cycles to invalidate one page, batches
// of up to 8 TLB misses, page-table-walk miss handler.

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>

#include "aradse/errors.hpp"
#include "aradse/spec_model.hpp"

namespace aradse {

enum class Coherency { llc, dram };
enum class MissMode { kernel_api, pgtwalk };
enum class TransferDirection { read, write };

inline std::string to_string(Coherency c) { return c == Coherency::llc ? "llc" : "dram"; }
inline std::string to_string(MissMode m) { return m == MissMode::kernel_api ? "kernel_api" : "pgtwalk"; }

inline Coherency parse_coherency(std::string_view s) {
  if (s == "llc") return Coherency::llc;
  if (s == "dram") return Coherency::dram;
  throw ValueError("unknown coherency '" + std::string(s) + "' (expected llc|dram)");
}

inline MissMode parse_miss_mode(std::string_view s) {
  if (s == "kernel_api") return MissMode::kernel_api;
  if (s == "pgtwalk") return MissMode::pgtwalk;
  throw ValueError("unknown miss mode '" + std::string(s) + "' (expected kernel_api|pgtwalk)");
}

struct PlatformModel {
  std::uint64_t acc_clock_hz = 100'000'000;
  std::uint64_t cpu_clock_hz = 667'000'000;
  std::uint64_t page_bytes = kPageBytes;
  std::uint32_t dram_ports = 4;
  std::uint32_t llc_ports = 1;
  std::uint32_t bytes_per_cycle_per_port = 8;
  std::uint64_t dram_latency_cycles = 200;
  std::uint64_t llc_latency_cycles = 30;
  std::uint64_t invalidate_cycles_per_page = 32;
  double tlb_kernel_api_us = 6.41;
  double tlb_pgtwalk_us = 0.69;
  std::uint32_t miss_batch_size = 8;
  MissMode miss_mode = MissMode::pgtwalk;
  Coherency coherency = Coherency::dram;
  std::uint64_t gam_decision_cycles = 0;
  std::uint64_t param_cycles_per_param = 0;
  bool dba_stop_at_first = false;

  /// Defaults plus the accelerator clock and coherency choice of `spec`.
  static PlatformModel from_spec(const AraSpec& spec) {
    PlatformModel p;
    p.acc_clock_hz = spec.acc_frequency_hz;
    p.coherency = spec.coherent_cache ? Coherency::llc : Coherency::dram;
    return p;
  }

  std::uint32_t memory_ports() const { return coherency == Coherency::dram ? dram_ports : llc_ports; }
  std::uint64_t access_latency() const { return coherency == Coherency::dram ? dram_latency_cycles : llc_latency_cycles; }
  std::uint64_t page_transfer_cycles() const {
    return (page_bytes + bytes_per_cycle_per_port - 1) / bytes_per_cycle_per_port;
  }
  double miss_penalty_us(MissMode m) const { return m == MissMode::kernel_api ? tlb_kernel_api_us : tlb_pgtwalk_us; }

  void validate() const {
    if (acc_clock_hz == 0) throw ConfigError("acc_clock_hz must be positive");
    if (cpu_clock_hz == 0) throw ConfigError("cpu_clock_hz must be positive");
    if (page_bytes != kPageBytes) throw ConfigError("page_bytes is fixed at 4096");
    if (dram_ports == 0 || llc_ports == 0) throw ConfigError("port counts must be positive");
    if (bytes_per_cycle_per_port == 0) throw ConfigError("bytes_per_cycle_per_port must be positive");
    if (miss_batch_size == 0) throw ConfigError("miss_batch_size must be positive");
    if (!(tlb_kernel_api_us >= 0.0) || !(tlb_pgtwalk_us >= 0.0)) throw ConfigError("miss penalties must be >= 0");
  }

  /// Applies one "key=value" override. Unknown keys are a ConfigError.
  void set(std::string_view key, std::string_view value) {
    auto u64 = [&] { return parse_size_value(value, key); };
    auto u32 = [&] {
      auto v = u64();
      if (v > UINT32_MAX) throw ValueError(std::string(key) + " out of range");
      return static_cast<std::uint32_t>(v);
    };
    auto real = [&] {
      try {
        std::size_t used = 0;
        double d = std::stod(std::string(value), &used);
        if (used != value.size()) throw std::invalid_argument("trailing");
        return d;
      } catch (const std::exception&) {
        throw ValueError(std::string(key) + " is not a number: '" + std::string(value) + "'");
      }
    };
    if (key == "acc_clock_hz") acc_clock_hz = parse_frequency_value(value, key);
    else if (key == "cpu_clock_hz") cpu_clock_hz = parse_frequency_value(value, key);
    else if (key == "page_bytes") page_bytes = u64();
    else if (key == "dram_ports") dram_ports = u32();
    else if (key == "llc_ports") llc_ports = u32();
    else if (key == "bytes_per_cycle_per_port") bytes_per_cycle_per_port = u32();
    else if (key == "dram_latency_cycles") dram_latency_cycles = u64();
    else if (key == "llc_latency_cycles") llc_latency_cycles = u64();
    else if (key == "invalidate_cycles_per_page") invalidate_cycles_per_page = u64();
    else if (key == "tlb_kernel_api_us") tlb_kernel_api_us = real();
    else if (key == "tlb_pgtwalk_us") tlb_pgtwalk_us = real();
    else if (key == "miss_batch_size") miss_batch_size = u32();
    else if (key == "miss_mode") miss_mode = parse_miss_mode(value);
    else if (key == "coherency") coherency = parse_coherency(value);
    else if (key == "gam_decision_cycles") gam_decision_cycles = u64();
    else if (key == "param_cycles_per_param") param_cycles_per_param = u64();
    else if (key == "dba_stop_at_first") dba_stop_at_first = parse_flag_value(value, key);
    else throw ConfigError("unknown platform key '" + std::string(key) + "'");
    validate();
  }

  /// Applies "key=value".
  void set(std::string_view assignment) {
    auto eq = assignment.find('=');
    if (eq == std::string_view::npos) throw ConfigError("override must be key=value: '" + std::string(assignment) + "'");
    set(assignment.substr(0, eq), assignment.substr(eq + 1));
  }
};

/// Stall (accelerator cycles) for one batch of TLB misses sent to the
/// software handler: |misses| * penalty * f_acc, rounded up. The penalty is
/// rounded to whole picoseconds first so that 0.69 us at 100 MHz is exactly 69.
inline std::uint64_t handle_tlb_miss_batch(std::uint64_t misses, MissMode mode, const PlatformModel& p) {
  if (misses > p.miss_batch_size)
    throw ContractError("miss batch of " + std::to_string(misses) + " exceeds miss_batch_size " +
                        std::to_string(p.miss_batch_size));
  if (misses == 0) return 0;
  const auto penalty_ps = static_cast<std::uint64_t>(std::llround(p.miss_penalty_us(mode) * 1e6));
  const unsigned __int128 num = static_cast<unsigned __int128>(misses) * penalty_ps * p.acc_clock_hz;
  constexpr unsigned __int128 den = 1'000'000'000'000ull;
  return static_cast<std::uint64_t>((num + den - 1) / den);
}

/// Software invalidation of cached copies after writing pages to DRAM.
inline std::uint64_t invalidate_pages(std::uint64_t pages, const PlatformModel& p) {
  if (p.coherency == Coherency::llc) return 0;
  return pages * p.invalidate_cycles_per_page;
}

}  // namespace aradse
