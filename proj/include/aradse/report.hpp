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

// End-of-run performance report.
//
// CSV columns (in order), see csv_header():
//   total_cycles, tasks_completed, tlb_accesses, tlb_misses, tlb_miss_rate,
//   miss_handling_cycles, miss_penalty_fraction, invalidation_cycles,
//   pages_read, pages_written, total_bytes, achieved_bandwidth_bps,
//   mean_compute_ratio, dmac_bytes
// `dmac_bytes` is a ';'-joined list in DMAC order. Real numbers use six
// decimals so identical runs print identical text.

#include <cstdint>
#include <cstdio>
#include <numeric>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace aradse {

struct InstanceStats {
  std::uint32_t instance_id = 0;
  std::string type_name;
  std::uint64_t tasks = 0;
  std::uint64_t busy_cycles = 0;     // send_param to completion, summed over tasks
  std::uint64_t compute_cycles = 0;
  std::uint64_t stall_cycles = 0;    // busy - compute

  double compute_ratio() const {
    return busy_cycles == 0 ? 0.0 : static_cast<double>(compute_cycles) / static_cast<double>(busy_cycles);
  }
  bool operator==(const InstanceStats&) const = default;
};

struct PerfReport {
  std::uint64_t total_cycles = 0;
  std::uint64_t acc_clock_hz = 0;
  std::uint64_t tasks_completed = 0;
  std::uint64_t tlb_accesses = 0;
  std::uint64_t tlb_misses = 0;
  std::uint64_t miss_handling_cycles = 0;
  std::uint64_t invalidation_cycles = 0;
  std::uint64_t pages_read = 0;
  std::uint64_t pages_written = 0;
  std::uint64_t page_bytes = 4096;
  std::vector<std::uint64_t> dmac_bytes;
  std::vector<InstanceStats> instances;

  std::uint64_t total_bytes() const { return std::accumulate(dmac_bytes.begin(), dmac_bytes.end(), std::uint64_t{0}); }
  double achieved_bandwidth() const {
    if (total_cycles == 0 || acc_clock_hz == 0) return 0.0;
    return static_cast<double>(total_bytes()) /
           (static_cast<double>(total_cycles) / static_cast<double>(acc_clock_hz));
  }
  double tlb_miss_rate() const {
    return tlb_accesses == 0 ? 0.0 : static_cast<double>(tlb_misses) / static_cast<double>(tlb_accesses);
  }
  double miss_penalty_fraction() const {
    return total_cycles == 0 ? 0.0 : static_cast<double>(miss_handling_cycles) / static_cast<double>(total_cycles);
  }
  /// Compute ratio over every instance that ran: sum(compute) / sum(busy).
  double mean_compute_ratio() const {
    std::uint64_t c = 0, b = 0;
    for (const auto& i : instances) {
      c += i.compute_cycles;
      b += i.busy_cycles;
    }
    return b == 0 ? 0.0 : static_cast<double>(c) / static_cast<double>(b);
  }

  bool operator==(const PerfReport&) const = default;
};

inline std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

inline std::vector<std::string> report_csv_columns() {
  return {"total_cycles",      "tasks_completed",     "tlb_accesses",  "tlb_misses",
          "tlb_miss_rate",     "miss_handling_cycles", "miss_penalty_fraction", "invalidation_cycles",
          "pages_read",        "pages_written",       "total_bytes",   "achieved_bandwidth_bps",
          "mean_compute_ratio", "dmac_bytes"};
}

inline std::vector<std::string> report_csv_values(const PerfReport& r) {
  std::string dmacs;
  for (std::size_t i = 0; i < r.dmac_bytes.size(); ++i) dmacs += (i ? ";" : "") + std::to_string(r.dmac_bytes[i]);
  return {std::to_string(r.total_cycles),
          std::to_string(r.tasks_completed),
          std::to_string(r.tlb_accesses),
          std::to_string(r.tlb_misses),
          format_real(r.tlb_miss_rate()),
          std::to_string(r.miss_handling_cycles),
          format_real(r.miss_penalty_fraction()),
          std::to_string(r.invalidation_cycles),
          std::to_string(r.pages_read),
          std::to_string(r.pages_written),
          std::to_string(r.total_bytes()),
          format_real(r.achieved_bandwidth()),
          format_real(r.mean_compute_ratio()),
          dmacs};
}

inline std::string join_csv(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) out += (i ? "," : "") + cells[i];
  return out;
}

inline std::string csv_header() { return join_csv(report_csv_columns()); }
inline std::string to_csv_row(const PerfReport& r) { return join_csv(report_csv_values(r)); }

inline nlohmann::json to_json(const PerfReport& r) {
  nlohmann::json j;
  j["total_cycles"] = r.total_cycles;
  j["acc_clock_hz"] = r.acc_clock_hz;
  j["tasks_completed"] = r.tasks_completed;
  j["tlb"] = {{"accesses", r.tlb_accesses},
              {"misses", r.tlb_misses},
              {"miss_rate", r.tlb_miss_rate()},
              {"miss_handling_cycles", r.miss_handling_cycles},
              {"miss_penalty_fraction", r.miss_penalty_fraction()}};
  j["invalidation_cycles"] = r.invalidation_cycles;
  j["pages_read"] = r.pages_read;
  j["pages_written"] = r.pages_written;
  j["page_bytes"] = r.page_bytes;
  j["dmac_bytes"] = r.dmac_bytes;
  j["total_bytes"] = r.total_bytes();
  j["achieved_bandwidth_bps"] = r.achieved_bandwidth();
  j["mean_compute_ratio"] = r.mean_compute_ratio();
  j["instances"] = nlohmann::json::array();
  for (const auto& i : r.instances)
    j["instances"].push_back({{"id", i.instance_id},
                              {"type", i.type_name},
                              {"tasks", i.tasks},
                              {"busy_cycles", i.busy_cycles},
                              {"compute_cycles", i.compute_cycles},
                              {"stall_cycles", i.stall_cycles},
                              {"compute_ratio", i.compute_ratio()}});
  return j;
}

}  // namespace aradse
