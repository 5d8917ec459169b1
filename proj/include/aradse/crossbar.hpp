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

// Partial crossbar between accelerator ports and shared buffer banks.
//
// Construction: instances are ranked by port count (descending, ties by
// instance id). The first c instances get dedicated banks, one per port, laid
// out back to back from bank 0 in rank order. Every port of every other
// instance is wired to c banks, one inside each dedicated range. For the
// remaining instance of rank k, port j lands at offset (k + j) mod range_size
// inside each range. Since every dedicated range is at least as large as any
// remaining instance, a remaining instance can always take over one whole
// range that no active top-c instance is using; check_feasibility confirms
// this independently with a matching oracle.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aradse/errors.hpp"
#include "aradse/matching.hpp"
#include "aradse/spec_model.hpp"

namespace aradse {

using BankId = std::uint32_t;

enum class Provenance { constructed, repaired };

inline std::string to_string(Provenance p) { return p == Provenance::constructed ? "constructed" : "repaired"; }

struct CrossbarTopology {
  std::uint32_t num_banks = 0;
  std::uint32_t connectivity = 0;
  /// Indexed by instance_id; ids are 0..n-1.
  std::vector<AccInstance> instances;
  /// port_banks[instance][port] = ascending bank ids wired to that port.
  std::vector<std::vector<std::vector<BankId>>> port_banks;
  /// Instances that received dedicated banks, in construction rank order.
  std::vector<std::uint32_t> dedicated;
  Provenance provenance = Provenance::constructed;
  std::uint32_t added_cross_points = 0;

  std::size_t num_instances() const { return instances.size(); }
  const std::vector<BankId>& banks(std::uint32_t instance, std::uint32_t port) const {
    return port_banks.at(instance).at(port);
  }

  bool operator==(const CrossbarTopology&) const = default;
};

struct FeasibilityReport {
  bool feasible = true;
  std::optional<std::vector<std::uint32_t>> violating_subset;
  std::uint64_t checked_subsets = 0;
};

/// Largest exhaustive subset count the feasibility oracle accepts.
inline constexpr std::size_t kFeasibilityOracleLimit = 16;

namespace detail {

inline void require_dense_ids(std::span<const AccInstance> instances) {
  for (std::size_t i = 0; i < instances.size(); ++i)
    if (instances[i].instance_id != i)
      throw ContractError("instance ids must be 0..n-1 in order; found id " +
                          std::to_string(instances[i].instance_id) + " at position " + std::to_string(i));
}

inline std::vector<std::uint32_t> rank_by_ports(std::span<const AccInstance> instances) {
  std::vector<std::uint32_t> order(instances.size());
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    if (instances[a].port_count != instances[b].port_count) return instances[a].port_count > instances[b].port_count;
    return instances[a].instance_id < instances[b].instance_id;
  });
  return order;
}

/// Ports of the instances in `subset` as matcher adjacency, in subset/port order.
inline std::vector<std::vector<std::uint32_t>> subset_adjacency(const CrossbarTopology& t,
                                                               std::span<const std::uint32_t> subset) {
  std::vector<std::vector<std::uint32_t>> adj;
  for (auto inst : subset)
    for (const auto& banks : t.port_banks[inst]) adj.push_back(banks);
  return adj;
}

inline bool subset_matches(const CrossbarTopology& t, std::span<const std::uint32_t> subset) {
  auto adj = subset_adjacency(t, subset);
  return max_matching_size(adj, t.num_banks) == adj.size();
}

/// Advances `comb` (strictly increasing, values < n) to the next k-combination
/// in lexicographic order. Returns false after the last one.
inline bool next_combination(std::vector<std::uint32_t>& comb, std::uint32_t n) {
  const auto k = comb.size();
  for (std::size_t i = k; i-- > 0;) {
    if (comb[i] < n - k + i) {
      ++comb[i];
      for (std::size_t j = i + 1; j < k; ++j) comb[j] = comb[j - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace detail

/// Worst-case number of banks any c simultaneously active instances need:
/// the sum of the c largest port counts.
inline std::uint64_t buffer_demand(std::span<const AccInstance> instances, std::uint64_t c) {
  if (c < 1 || c > instances.size())
    throw ContractError("connectivity " + std::to_string(c) + " out of range [1, " +
                        std::to_string(instances.size()) + "]");
  std::vector<std::uint64_t> ports;
  ports.reserve(instances.size());
  for (const auto& i : instances) ports.push_back(i.port_count);
  std::partial_sort(ports.begin(), ports.begin() + static_cast<std::ptrdiff_t>(c), ports.end(), std::greater<>());
  return std::accumulate(ports.begin(), ports.begin() + static_cast<std::ptrdiff_t>(c), std::uint64_t{0});
}

inline std::uint64_t cross_point_count(const CrossbarTopology& t) {
  std::uint64_t n = 0;
  for (const auto& ports : t.port_banks)
    for (const auto& banks : ports) n += banks.size();
  return n;
}

/// Exhaustively checks every subset of at most c instances for a matching
/// that gives each of their ports its own bank. Subsets are visited by size,
/// then lexicographically; the first failure is reported.
inline FeasibilityReport check_feasibility(const CrossbarTopology& t, std::uint64_t c) {
  const auto n = static_cast<std::uint32_t>(t.num_instances());
  if (n > kFeasibilityOracleLimit)
    throw ContractError("feasibility oracle is exhaustive and limited to " + std::to_string(kFeasibilityOracleLimit) +
                        " instances (got " + std::to_string(n) + "); use a sampled check instead");
  FeasibilityReport report;
  const auto max_k = static_cast<std::uint32_t>(std::min<std::uint64_t>(c, n));
  for (std::uint32_t k = 1; k <= max_k; ++k) {
    std::vector<std::uint32_t> comb(k);
    std::iota(comb.begin(), comb.end(), 0u);
    do {
      ++report.checked_subsets;
      if (!detail::subset_matches(t, comb)) {
        report.feasible = false;
        report.violating_subset = comb;
        return report;
      }
    } while (detail::next_combination(comb, n));
  }
  return report;
}

/// Adds cross points until the topology is feasible for its connectivity.
///
/// Each step takes the violating subset, computes a maximum matching over its
/// ports, picks the unmatched port with the fewest wired banks (ties: lowest
/// instance, then port), and wires it to the lowest bank that grows the
/// matching. Every step adds exactly one cross point.
inline CrossbarTopology repair_topology(CrossbarTopology t, FeasibilityReport report) {
  if (report.feasible) return t;
  const auto c = std::min<std::uint64_t>(t.connectivity, t.num_instances());
  const auto demand = buffer_demand(t.instances, c);
  if (demand > t.num_banks)
    throw CapacityError("no feasible crossbar exists even with full connectivity", demand, t.num_banks);

  while (!report.feasible) {
    const auto& subset = *report.violating_subset;
    struct PortRef {
      std::uint32_t instance, port;
    };
    std::vector<PortRef> refs;
    for (auto inst : subset)
      for (std::uint32_t p = 0; p < t.port_banks[inst].size(); ++p) refs.push_back({inst, p});

    auto adj = detail::subset_adjacency(t, subset);
    BipartiteMatcher matcher(adj, t.num_banks);
    const auto size = matcher.solve();

    std::optional<std::size_t> pick;
    for (std::size_t i = 0; i < refs.size(); ++i) {
      if (matcher.left_match(static_cast<std::uint32_t>(i)) != kUnmatched) continue;
      if (!pick || adj[i].size() < adj[*pick].size()) pick = i;
    }
    if (!pick) throw ContractError("repair_topology: reported subset is not actually violating");

    bool grew = false;
    auto& banks = t.port_banks[refs[*pick].instance][refs[*pick].port];
    for (BankId b = 0; b < t.num_banks && !grew; ++b) {
      if (std::binary_search(banks.begin(), banks.end(), b)) continue;
      adj[*pick].push_back(b);
      if (max_matching_size(adj, t.num_banks) > size) {
        banks.insert(std::upper_bound(banks.begin(), banks.end(), b), b);
        grew = true;
      } else {
        adj[*pick].pop_back();
      }
    }
    if (!grew) throw CapacityError("repair could not grow the matching", demand, t.num_banks);
    ++t.added_cross_points;
    t.provenance = Provenance::repaired;
    report = check_feasibility(t, c);
  }
  return t;
}

/// Builds the minimum-cross-point partial crossbar for connectivity c.
inline CrossbarTopology synthesize_crossbar(std::span<const AccInstance> instances, std::uint64_t num_buffers,
                                            std::uint64_t c) {
  detail::require_dense_ids(instances);
  const auto demand = buffer_demand(instances, c);
  if (num_buffers < demand) throw CapacityError("not enough shared buffers for connectivity " + std::to_string(c), demand, num_buffers);

  CrossbarTopology t;
  t.num_banks = static_cast<std::uint32_t>(num_buffers);
  t.connectivity = static_cast<std::uint32_t>(c);
  t.instances.assign(instances.begin(), instances.end());
  t.port_banks.resize(instances.size());
  for (const auto& inst : instances) t.port_banks[inst.instance_id].resize(inst.port_count);

  const auto order = detail::rank_by_ports(instances);
  std::vector<BankId> range_start(c);
  std::vector<std::uint32_t> range_size(c);
  BankId next = 0;
  for (std::size_t r = 0; r < c; ++r) {
    const auto& inst = instances[order[r]];
    range_start[r] = next;
    range_size[r] = inst.port_count;
    for (std::uint32_t p = 0; p < inst.port_count; ++p) t.port_banks[inst.instance_id][p] = {next++};
    t.dedicated.push_back(inst.instance_id);
  }
  for (std::size_t k = 0; k + c < order.size(); ++k) {
    const auto& inst = instances[order[c + k]];
    for (std::uint32_t p = 0; p < inst.port_count; ++p) {
      auto& banks = t.port_banks[inst.instance_id][p];
      for (std::size_t r = 0; r < c; ++r) banks.push_back(range_start[r] + static_cast<BankId>((k + p) % range_size[r]));
      std::sort(banks.begin(), banks.end());
    }
  }

  if (instances.size() <= kFeasibilityOracleLimit) {
    auto report = check_feasibility(t, c);
    if (!report.feasible) t = repair_topology(std::move(t), std::move(report));
  }
  return t;
}

/// Private-buffer architecture: every port owns one bank; banks = total ports.
inline CrossbarTopology private_buffer_topology(std::span<const AccInstance> instances) {
  detail::require_dense_ids(instances);
  CrossbarTopology t;
  t.instances.assign(instances.begin(), instances.end());
  t.port_banks.resize(instances.size());
  BankId next = 0;
  for (const auto& inst : instances) {
    for (std::uint32_t p = 0; p < inst.port_count; ++p) t.port_banks[inst.instance_id].push_back({next++});
    t.dedicated.push_back(inst.instance_id);
  }
  t.num_banks = next;
  t.connectivity = static_cast<std::uint32_t>(instances.size());
  return t;
}

}  // namespace aradse
