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

// Summaries over sweep CSV files.
//
// A scenario names the axis under study. Rows are paired when they agree on
// every other axis column; each pair (or group, for tlb and reuse) yields one
// comparison. A CSV with a single row has nothing to compare.
//
//   buffers      private vs shared: bank counts, saving %, cycle cost %
//   coherency    llc vs dram: speedup = llc_cycles / dram_cycles
//   interleave   inter vs intra: speedup = inter_cycles / intra_cycles,
//                per-DMAC page imbalance (max / max(min, 1)) of each
//   tlb          miss-penalty fraction by TLB size, monotonicity, plateau
//   reuse        compute ratio by reuse factor, speedup vs the largest factor

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "aradse/errors.hpp"
#include "aradse/sweep.hpp"

namespace aradse {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw ParseError("csv has no column '" + name + "'", 1);
    return static_cast<std::size_t>(it - header.begin());
  }
  const std::string& at(std::size_t row, const std::string& name) const { return rows.at(row).at(column(name)); }
};

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

inline double to_number(const std::string& s, std::size_t line) {
  try {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError("expected a number, got '" + s + "'", line);
  }
}

}  // namespace detail

/// Parses and checks a sweep CSV (header, schema version, cell counts).
inline CsvTable parse_sweep_csv(std::string_view text) {
  CsvTable t;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = detail::split_csv_line(line);
    if (t.header.empty()) {
      t.header = std::move(cells);
      for (const auto& col : sweep_csv_columns())
        if (std::find(t.header.begin(), t.header.end(), col) == t.header.end())
          throw ParseError("csv header lacks column '" + col + "'", lineno);
      continue;
    }
    if (cells.size() != t.header.size())
      throw ParseError("row has " + std::to_string(cells.size()) + " cells, header has " + std::to_string(t.header.size()),
                       lineno);
    if (cells[t.column("schema_version")] != kCsvSchemaVersion)
      throw ParseError("unsupported schema version '" + cells[t.column("schema_version")] + "'", lineno);
    for (const auto* col : {"total_cycles", "banks_used", "tlb_entries", "miss_penalty_fraction", "mean_compute_ratio"})
      detail::to_number(cells[t.column(col)], lineno);
    t.rows.push_back(std::move(cells));
  }
  if (t.header.empty()) throw ParseError("csv is empty", 1);
  return t;
}

struct ScenarioSummary {
  nlohmann::json json;
  std::string text;
};

namespace detail {

inline std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

inline double num(const CsvTable& t, std::size_t r, const std::string& col) { return to_number(t.at(r, col), r + 2); }

/// Groups rows by every axis column except `axis`, in first-seen order.
inline std::vector<std::vector<std::size_t>> group_except(const CsvTable& t, const std::string& axis) {
  std::vector<std::string> keys;
  std::vector<std::vector<std::size_t>> groups;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    std::string key;
    for (const auto& col : sweep_axis_columns())
      if (col != axis) key += t.at(r, col) + "|";
    auto it = std::find(keys.begin(), keys.end(), key);
    if (it == keys.end()) {
      keys.push_back(key);
      groups.push_back({r});
    } else {
      groups[static_cast<std::size_t>(it - keys.begin())].push_back(r);
    }
  }
  return groups;
}

inline std::optional<std::size_t> find_value(const CsvTable& t, const std::vector<std::size_t>& group,
                                             const std::string& axis, const std::string& value) {
  for (auto r : group)
    if (t.at(r, axis) == value) return r;
  return std::nullopt;
}

inline double dmac_imbalance(const std::string& cell) {
  std::vector<std::uint64_t> v;
  std::stringstream ss(cell);
  for (std::string x; std::getline(ss, x, ';');) v.push_back(std::stoull(x) / kPageBytes);
  if (v.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return static_cast<double>(*hi) / static_cast<double>(std::max<std::uint64_t>(*lo, 1));
}

inline std::string context(const CsvTable& t, std::size_t r, const std::string& axis) {
  std::string s;
  for (const auto& col : sweep_axis_columns()) {
    if (col == axis || t.at(r, col).empty()) continue;
    s += (s.empty() ? "" : " ") + col + "=" + t.at(r, col);
  }
  return s;
}

}  // namespace detail

inline std::vector<std::string> scenario_names() { return {"buffers", "coherency", "interleave", "tlb", "reuse"}; }

inline ScenarioSummary summarize(const CsvTable& t, const std::string& scenario) {
  using detail::num;
  const auto names = scenario_names();
  if (std::find(names.begin(), names.end(), scenario) == names.end())
    throw ConfigError("unknown scenario '" + scenario + "'");

  ScenarioSummary s;
  s.json = {{"scenario", scenario}, {"rows", t.rows.size()}, {"comparisons", nlohmann::json::array()}};
  std::ostringstream out;
  out << "scenario " << scenario << ": " << t.rows.size() << " row(s)\n";

  auto pairs = [&](const std::string& axis, const std::string& a, const std::string& b, auto&& emit) {
    for (const auto& g : detail::group_except(t, axis)) {
      auto ra = detail::find_value(t, g, axis, a);
      auto rb = detail::find_value(t, g, axis, b);
      if (ra && rb) emit(*ra, *rb);
    }
  };

  if (t.rows.size() >= 2) {
    if (scenario == "buffers") {
      pairs("buffers", "private", "shared", [&](std::size_t p, std::size_t q) {
        const double pb = num(t, p, "banks_used"), sb = num(t, q, "banks_used");
        const double pc = num(t, p, "total_cycles"), sc = num(t, q, "total_cycles");
        const double saving = pb > 0 ? (pb - sb) / pb * 100.0 : 0.0;
        const double cost = pc > 0 ? (sc - pc) / pc * 100.0 : 0.0;
        s.json["comparisons"].push_back({{"context", detail::context(t, q, "buffers")},
                                         {"private_banks", pb},
                                         {"shared_banks", sb},
                                         {"bank_saving_pct", saving},
                                         {"private_cycles", pc},
                                         {"shared_cycles", sc},
                                         {"cycle_cost_pct", cost}});
        out << "  [" << detail::context(t, q, "buffers") << "] private " << t.at(p, "banks_used") << " banks vs shared "
            << t.at(q, "banks_used") << " banks: saving " << detail::fmt("%.1f", saving) << "%; cycles "
            << t.at(p, "total_cycles") << " vs " << t.at(q, "total_cycles") << " (" << detail::fmt("%+.1f", cost)
            << "%)\n";
      });
    } else if (scenario == "coherency") {
      pairs("coherency", "llc", "dram", [&](std::size_t l, std::size_t d) {
        const double lc = num(t, l, "total_cycles"), dc = num(t, d, "total_cycles");
        const double speedup = dc > 0 ? lc / dc : 0.0;
        s.json["comparisons"].push_back({{"context", detail::context(t, d, "coherency")},
                                         {"llc_cycles", lc},
                                         {"dram_cycles", dc},
                                         {"speedup", speedup}});
        out << "  [" << detail::context(t, d, "coherency") << "] llc " << t.at(l, "total_cycles") << " cycles, dram "
            << t.at(d, "total_cycles") << " cycles: speedup " << detail::fmt("%.3f", speedup) << "x\n";
      });
    } else if (scenario == "interleave") {
      pairs("interleave", "inter_acc", "intra_acc", [&](std::size_t e, std::size_t a) {
        const double ec = num(t, e, "total_cycles"), ac = num(t, a, "total_cycles");
        const double speedup = ac > 0 ? ec / ac : 0.0;
        const double ei = detail::dmac_imbalance(t.at(e, "dmac_bytes"));
        const double ai = detail::dmac_imbalance(t.at(a, "dmac_bytes"));
        s.json["comparisons"].push_back({{"context", detail::context(t, a, "interleave")},
                                         {"inter_cycles", ec},
                                         {"intra_cycles", ac},
                                         {"speedup", speedup},
                                         {"inter_imbalance", ei},
                                         {"intra_imbalance", ai}});
        out << "  [" << detail::context(t, a, "interleave") << "] inter " << t.at(e, "total_cycles") << " cycles (imbalance "
            << detail::fmt("%.2f", ei) << "), intra " << t.at(a, "total_cycles") << " cycles (imbalance "
            << detail::fmt("%.2f", ai) << "): speedup " << detail::fmt("%.3f", speedup) << "x\n";
      });
    } else if (scenario == "tlb") {
      for (auto g : detail::group_except(t, "tlb_entries")) {
        if (g.size() < 2) continue;
        std::stable_sort(g.begin(), g.end(),
                         [&](auto x, auto y) { return num(t, x, "tlb_entries") < num(t, y, "tlb_entries"); });
        nlohmann::json points = nlohmann::json::array();
        bool monotone = true;
        out << "  [" << detail::context(t, g.front(), "tlb_entries") << "]\n";
        for (std::size_t i = 0; i < g.size(); ++i) {
          const double f = num(t, g[i], "miss_penalty_fraction");
          if (i && f > num(t, g[i - 1], "miss_penalty_fraction")) monotone = false;
          points.push_back({{"tlb_entries", num(t, g[i], "tlb_entries")},
                            {"tlb_misses", num(t, g[i], "tlb_misses")},
                            {"miss_penalty_fraction", f}});
          out << "    tlb " << t.at(g[i], "tlb_entries") << ": misses " << t.at(g[i], "tlb_misses") << ", penalty "
              << detail::fmt("%.2f", f * 100.0) << "% of cycles\n";
        }
        const bool plateau = t.at(g[g.size() - 1], "tlb_misses") == t.at(g[g.size() - 2], "tlb_misses");
        s.json["comparisons"].push_back({{"context", detail::context(t, g.front(), "tlb_entries")},
                                         {"points", points},
                                         {"non_increasing", monotone},
                                         {"plateau", plateau}});
        out << "    non-increasing: " << (monotone ? "yes" : "no") << ", plateau: " << (plateau ? "yes" : "no") << "\n";
      }
    } else if (scenario == "reuse") {
      for (auto g : detail::group_except(t, "reuse_factor")) {
        if (g.size() < 2) continue;
        std::stable_sort(g.begin(), g.end(),
                         [&](auto x, auto y) { return num(t, x, "reuse_factor") > num(t, y, "reuse_factor"); });
        const double base = num(t, g.front(), "total_cycles");
        nlohmann::json points = nlohmann::json::array();
        out << "  [" << detail::context(t, g.front(), "reuse_factor") << "]\n";
        for (auto r : g) {
          const double c = num(t, r, "total_cycles");
          const double speedup = c > 0 ? base / c : 0.0;
          points.push_back({{"reuse_factor", num(t, r, "reuse_factor")},
                            {"total_cycles", c},
                            {"compute_ratio", num(t, r, "mean_compute_ratio")},
                            {"speedup", speedup}});
          out << "    reuse " << t.at(r, "reuse_factor") << ": compute ratio " << t.at(r, "mean_compute_ratio")
              << ", cycles " << t.at(r, "total_cycles") << ", speedup " << detail::fmt("%.3f", speedup) << "x\n";
        }
        s.json["comparisons"].push_back({{"context", detail::context(t, g.front(), "reuse_factor")}, {"points", points}});
      }
    }
  }

  if (s.json["comparisons"].empty()) {
    out << "  no comparisons\n";
    if (t.rows.size() == 1) {
      s.json["row"] = {{"total_cycles", num(t, 0, "total_cycles")},
                       {"banks_used", num(t, 0, "banks_used")},
                       {"miss_penalty_fraction", num(t, 0, "miss_penalty_fraction")},
                       {"mean_compute_ratio", num(t, 0, "mean_compute_ratio")}};
      out << "  total_cycles " << t.at(0, "total_cycles") << ", banks " << t.at(0, "banks_used") << ", compute ratio "
          << t.at(0, "mean_compute_ratio") << "\n";
    }
  }
  s.text = out.str();
  return s;
}

}  // namespace aradse
