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

// Dynamic buffer allocator with the starvation-free occupied/reserved scheme.
//
// A bank can be allocated only when it is neither occupied nor reserved.
// Only the task at the head of the task list when a pass starts may reserve
// banks: when it cannot be allocated, it reserves one bank per port (free or
// occupied, preferring free ones), and nobody else may take those banks. Its grant
// therefore happens no later than the moment the owners of its reserved
// banks release them. After the head, the remaining tasks are tried greedily
// in list order; by default an infeasible task is skipped and the scan goes
// on (DbaPolicy::stop_at_first ends the scan instead).

#include <algorithm>
#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "aradse/crossbar.hpp"
#include "aradse/errors.hpp"
#include "aradse/gam.hpp"
#include "aradse/matching.hpp"

namespace aradse {

struct BankFlags {
  bool occupied = false;
  bool reserved = false;
  std::optional<TaskId> owner;
  std::optional<TaskId> reserver;

  bool operator==(const BankFlags&) const = default;
};

using BufferFlags = std::vector<BankFlags>;

/// A buffer request bound to an accelerator instance; its demand is one bank
/// per port of that instance.
struct DbaTask {
  TaskId id;
  std::uint32_t instance;
};

struct DbaGrant {
  TaskId task;
  std::vector<BankId> banks;  // banks[p] serves port p
};

struct DbaPolicy {
  bool stop_at_first = false;
};

/// Everything one allocation pass decided, as a delta over the input flags.
struct AllocationDecisions {
  std::vector<DbaGrant> grants;
  std::vector<std::pair<BankId, TaskId>> reservations;
  std::vector<BankId> released_reservations;

  bool empty() const { return grants.empty() && reservations.empty() && released_reservations.empty(); }
};

namespace detail {

/// Number of instances that can reach each bank.
inline std::vector<std::uint32_t> bank_reach(const CrossbarTopology& topo) {
  std::vector<std::uint32_t> reach(topo.num_banks, 0);
  for (const auto& inst : topo.port_banks) {
    std::vector<char> seen(topo.num_banks, 0);
    for (const auto& banks : inst)
      for (BankId b : banks)
        if (!seen[b]) seen[b] = 1, ++reach[b];
  }
  return reach;
}

// Banks reachable by fewer instances are tried first.
inline std::optional<std::vector<BankId>> match_ports(const CrossbarTopology& topo, std::uint32_t instance,
                                                      const std::vector<char>& allowed,
                                                      const std::vector<std::uint32_t>& reach,
                                                      const BufferFlags* prefer_free) {
  const auto& ports = topo.port_banks.at(instance);
  std::vector<std::vector<std::uint32_t>> adj(ports.size());
  for (std::size_t p = 0; p < ports.size(); ++p) {
    for (BankId b : ports[p])
      if (allowed[b]) adj[p].push_back(b);
    std::stable_sort(adj[p].begin(), adj[p].end(), [&](BankId a, BankId b) { return reach[a] < reach[b]; });
    if (prefer_free)
      std::stable_partition(adj[p].begin(), adj[p].end(), [&](BankId b) { return !(*prefer_free)[b].occupied; });
  }
  BipartiteMatcher m(adj, topo.num_banks);
  if (m.solve() != ports.size()) return std::nullopt;
  return m.left_matches();
}

}  // namespace detail

/// Pure allocation pass over `tasks` (head first).
inline AllocationDecisions dba_allocate(std::span<const DbaTask> tasks, const BufferFlags& flags,
                                        const CrossbarTopology& topo, DbaPolicy policy = {}) {
  if (flags.size() != topo.num_banks) throw ContractError("flag table does not match the topology's bank count");
  AllocationDecisions d;
  BufferFlags work = flags;
  const auto reach = detail::bank_reach(topo);

  auto grant = [&](const DbaTask& t, const std::vector<BankId>& banks) {
    for (BankId b = 0; b < work.size(); ++b) {
      if (work[b].reserver == t.id) {
        work[b].reserved = false;
        work[b].reserver.reset();
        d.released_reservations.push_back(b);
      }
    }
    for (BankId b : banks) {
      work[b].occupied = true;
      work[b].owner = t.id;
    }
    d.grants.push_back({t.id, banks});
  };

  if (tasks.empty()) return d;

  const auto& head = tasks.front();
  std::vector<char> allowed(work.size());
  for (BankId b = 0; b < work.size(); ++b)
    allowed[b] = !work[b].occupied && (!work[b].reserved || work[b].reserver == head.id);
  bool head_granted = false;
  if (auto banks = detail::match_ports(topo, head.instance, allowed, reach, nullptr)) {
    grant(head, *banks);
    head_granted = true;
  } else if (std::none_of(work.begin(), work.end(), [&](const BankFlags& f) { return f.reserver == head.id; })) {
    for (BankId b = 0; b < work.size(); ++b) allowed[b] = !work[b].reserved;
    auto banks = detail::match_ports(topo, head.instance, allowed, reach, &work);
    if (!banks) {
      const auto& ports = topo.port_banks.at(head.instance);
      throw CapacityError("instance " + std::to_string(head.instance) + " cannot be given one bank per port",
                          ports.size(), max_matching_size(ports, topo.num_banks));
    }
    for (BankId b : *banks) {
      work[b].reserved = true;
      work[b].reserver = head.id;
      d.reservations.emplace_back(b, head.id);
    }
  }
  if (!head_granted && policy.stop_at_first) return d;

  for (std::size_t j = 1; j < tasks.size(); ++j) {
    for (BankId b = 0; b < work.size(); ++b) allowed[b] = !work[b].occupied && !work[b].reserved;
    if (auto banks = detail::match_ports(topo, tasks[j].instance, allowed, reach, nullptr)) {
      grant(tasks[j], *banks);
    } else if (policy.stop_at_first) {
      break;
    }
  }
  return d;
}

/// Applies a decision delta produced for exactly these flags.
inline void apply_decisions(const AllocationDecisions& d, BufferFlags& flags) {
  for (BankId b : d.released_reservations) {
    flags.at(b).reserved = false;
    flags.at(b).reserver.reset();
  }
  for (const auto& [b, t] : d.reservations) {
    flags.at(b).reserved = true;
    flags.at(b).reserver = t;
  }
  for (const auto& g : d.grants) {
    for (BankId b : g.banks) {
      auto& f = flags.at(b);
      if (f.occupied) throw ContractError("bank " + std::to_string(b) + " granted while occupied");
      f.occupied = true;
      f.owner = g.task;
    }
  }
}

/// Stateful allocator: task list + flag table over one topology.
class DynamicBufferAllocator {
 public:
  DynamicBufferAllocator(const CrossbarTopology& topo, DbaPolicy policy = {})
      : topo_(&topo), policy_(policy), flags_(topo.num_banks) {}

  void enqueue(DbaTask t) {
    const auto& ports = topo_->port_banks.at(t.instance);
    if (max_matching_size(ports, topo_->num_banks) != ports.size())
      throw CapacityError("instance " + std::to_string(t.instance) + " demand exceeds its reachable banks",
                          ports.size(), max_matching_size(ports, topo_->num_banks));
    list_.push_back(t);
  }

  /// Runs allocation passes until one changes nothing (a task that becomes
  /// head mid-pass gets its reservation in the next pass). Returns the grants
  /// in the order they were made; granted tasks leave the list.
  std::vector<DbaGrant> allocate() {
    std::vector<DbaGrant> out;
    while (!list_.empty()) {
      std::vector<DbaTask> view(list_.begin(), list_.end());
      auto d = dba_allocate(view, flags_, *topo_, policy_);
      if (d.empty()) break;
      apply_decisions(d, flags_);
      for (auto& g : d.grants) {
        list_.erase(std::find_if(list_.begin(), list_.end(), [&](const DbaTask& t) { return t.id == g.task; }));
        out.push_back(std::move(g));
      }
    }
    return out;
  }

  /// Releases every bank occupied by `task`; returns them.
  std::vector<BankId> release(TaskId task) {
    std::vector<BankId> out;
    for (BankId b = 0; b < flags_.size(); ++b) {
      if (flags_[b].owner == task) {
        flags_[b].occupied = false;
        flags_[b].owner.reset();
        out.push_back(b);
      }
    }
    if (out.empty()) throw ProtocolError("task " + std::to_string(task) + " holds no buffers");
    return out;
  }

  const BufferFlags& flags() const { return flags_; }
  const std::deque<DbaTask>& task_list() const { return list_; }

  /// Banks currently reserved by `task`.
  std::vector<BankId> reserved_by(TaskId task) const {
    std::vector<BankId> out;
    for (BankId b = 0; b < flags_.size(); ++b)
      if (flags_[b].reserver == task) out.push_back(b);
    return out;
  }

 private:
  const CrossbarTopology* topo_;
  DbaPolicy policy_;
  BufferFlags flags_;
  std::deque<DbaTask> list_;
};

}  // namespace aradse
