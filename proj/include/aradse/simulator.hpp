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

// Discrete-event model of the accelerator plane and its software stack.
//
// Task lifecycle (one accelerator invocation):
//   reserve      request queued at the accelerator manager (FCFS per type),
//                bound to a free instance, then handed to the buffer allocator
//   granted      instance and one bank per port assigned
//   send_param   parameters sent; the task starts streaming:
//                  * input pages go through the IOMMU in groups of up to
//                    miss_batch_size; the misses of a group are handled as
//                    one batch by the (single, serialized) software handler,
//                    then the group is issued to the DMACs of its banks
//                  * compute consumes input pages in order; work is split
//                    evenly over the fetched pages
//                  * output pages are written back as compute progresses
//   done         last write landed plus cache invalidation (DRAM coherency)
//   free         banks and instance released; allocation re-runs
//
// Page p of a task uses the bank of port (p mod ports). Every application
// owns a private virtual address range; consecutive tasks of an application
// walk through a volume of kVolumeSlices slices and wrap around, so repeated
// passes re-touch the same pages.
//
// The engine is single threaded; ties between events at the same cycle are
// broken by insertion order, which makes every run reproducible.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "aradse/crossbar.hpp"
#include "aradse/dba.hpp"
#include "aradse/dma.hpp"
#include "aradse/errors.hpp"
#include "aradse/gam.hpp"
#include "aradse/interleave.hpp"
#include "aradse/platform.hpp"
#include "aradse/report.hpp"
#include "aradse/spec_model.hpp"
#include "aradse/tlb.hpp"
#include "aradse/workload.hpp"

namespace aradse {

struct CounterSnapshot {
  std::uint64_t cycle = 0;
  std::uint64_t tlb_accesses = 0;
  std::uint64_t tlb_misses = 0;
  std::vector<std::uint64_t> dmac_bytes;
};

class Simulator {
 public:
  Simulator(const AraSpec& spec, CrossbarTopology topology, InterleaveMap interleave, Workload workload,
            KernelTable kernels, PlatformModel platform)
      : spec_(spec),
        topo_(std::move(topology)),
        il_(std::move(interleave)),
        wl_(std::move(workload)),
        kernels_(std::move(kernels)),
        platform_(platform),
        gam_(topo_.instances),
        dba_(topo_, DbaPolicy{platform.dba_stop_at_first}),
        tlb_(std::max<std::uint64_t>(spec.iommu.tlb_entries, 1)),
        dma_(il_.num_dmacs, platform) {
    platform_.validate();
    check_inputs();
    stats_.resize(topo_.instances.size());
    for (const auto& i : topo_.instances) {
      stats_[i.instance_id].instance_id = i.instance_id;
      stats_[i.instance_id].type_name = i.type_name;
    }
    for (std::size_t e = 0; e < wl_.events.size(); ++e) {
      const auto& name = wl_.events[e].app;
      auto it = app_index_.find(name);
      if (it == app_index_.end()) {
        it = app_index_.emplace(name, static_cast<std::uint32_t>(apps_.size())).first;
        apps_.push_back(App{name, {}, 0, std::nullopt, 0, {}, std::nullopt});
      }
      apps_[it->second].events.push_back(e);
    }
    for (std::uint32_t a = 0; a < apps_.size(); ++a) push(0, EvKind::app_wake, a);
  }

  /// Processes one event. Returns false when the event queue is empty.
  bool step() {
    if (queue_.empty()) return false;
    Event ev = queue_.top();
    queue_.pop();
    now_ = ev.time;
    last_time_ = std::max(last_time_, ev.time);
    dispatch(ev);
    return true;
  }

  /// Processes every event scheduled at or before `cycle`.
  void run_until(std::uint64_t cycle) {
    while (!queue_.empty() && queue_.top().time <= cycle) step();
  }

  /// Runs to completion; throws SimulationError if tasks are left blocked.
  void run() {
    while (step()) {
    }
    std::string blocked;
    for (const auto& app : apps_) {
      if (app.cursor >= app.events.size()) continue;
      const auto& e = wl_.events[app.events[app.cursor]];
      blocked += "\n  " + app.name + " blocked at '" + to_string(e.verb) + " " + e.kernel + "'";
      if (app.waiting_on) {
        const auto& t = tasks_[*app.waiting_on];
        blocked += " waiting on task " + std::to_string(t.id) + " (" + state_name(t.state) + ")";
      }
    }
    if (!blocked.empty()) throw SimulationError("deadlock: no pending events but unfinished work:" + blocked);
  }

  std::uint64_t now() const { return now_; }

  CounterSnapshot read_counters() const { return {now_, tlb_.accesses(), tlb_.misses(), dma_.bytes_per_dmac()}; }

  /// Zeroes the TLB and DMAC counters only.
  void reset_counters() {
    tlb_.reset_counters();
    dma_.reset_counters();
  }

  const BufferFlags& buffer_flags() const { return dba_.flags(); }

  PerfReport report() const {
    PerfReport r;
    r.total_cycles = last_time_;
    r.acc_clock_hz = platform_.acc_clock_hz;
    r.tasks_completed = tasks_completed_;
    r.tlb_accesses = tlb_.accesses();
    r.tlb_misses = tlb_.misses();
    r.miss_handling_cycles = miss_handling_cycles_;
    r.invalidation_cycles = invalidation_cycles_;
    r.pages_read = dma_.pages_read();
    r.pages_written = dma_.pages_written();
    r.page_bytes = platform_.page_bytes;
    r.dmac_bytes = dma_.bytes_per_dmac();
    r.instances = stats_;
    for (auto& s : r.instances) s.stall_cycles = s.busy_cycles - s.compute_cycles;
    return r;
  }

 private:
  enum class EvKind : std::uint8_t {
    app_wake,
    task_granted,
    task_start,
    translate,
    issue_group,
    page_arrived,
    write_done,
    piece_done,
    task_finished,
  };

  struct Event {
    std::uint64_t time;
    std::uint64_t seq;
    EvKind kind;
    std::uint64_t a;
    std::uint64_t b;
  };

  struct Later {
    bool operator()(const Event& x, const Event& y) const {
      return x.time != y.time ? x.time > y.time : x.seq > y.seq;
    }
  };

  enum class TaskState { waiting, granted, running, done, freed };

  static std::string state_name(TaskState s) {
    switch (s) {
      case TaskState::waiting: return "waiting for grant";
      case TaskState::granted: return "granted";
      case TaskState::running: return "running";
      case TaskState::done: return "done";
      case TaskState::freed: return "freed";
    }
    return "?";
  }

  struct PageGroup {
    TransferDirection dir;
    std::vector<std::uint64_t> pages;  // task-local page indices
  };

  struct Task {
    TaskId id = 0;
    std::uint32_t app = 0;
    const KernelDescriptor* kernel = nullptr;
    bool composite = false;
    std::uint32_t multiplier = 1;
    TaskState state = TaskState::waiting;
    std::optional<std::uint32_t> instance;
    std::vector<BankId> banks;
    std::uint64_t t_start = 0;

    std::uint64_t slice = 0;
    std::uint64_t fetch = 0;
    std::uint64_t outputs = 0;
    std::uint64_t compute = 0;
    std::uint64_t pieces = 1;
    std::vector<char> arrived;
    std::uint64_t next_piece = 0;
    bool computing = false;
    std::uint64_t writes_issued = 0;
    std::uint64_t writes_done = 0;
    bool finishing = false;

    std::deque<PageGroup> xlate_queue;
    bool xlate_busy = false;
    std::vector<PageGroup> issued;
  };

  struct App {
    std::string name;
    std::vector<std::size_t> events;
    std::size_t cursor = 0;
    std::optional<TaskId> waiting_on;
    std::uint64_t slice_cursor = 0;
    std::map<std::string, TaskId> open;  // explicit-protocol task per kernel
    std::optional<TaskId> composite;
  };

  static constexpr std::uint64_t kAppRegionPages = 1ull << 24;
  static constexpr std::uint64_t kOutputOffsetPages = 1ull << 23;

  void check_inputs() {
    const auto expected = expand_instances(spec_);
    if (topo_.instances.size() != expected.size())
      throw ConfigError("topology has " + std::to_string(topo_.instances.size()) + " instances, spec declares " +
                        std::to_string(expected.size()));
    for (std::size_t i = 0; i < expected.size(); ++i)
      if (topo_.instances[i].type_name != expected[i].type_name || topo_.instances[i].port_count != expected[i].port_count)
        throw ConfigError("topology instance " + std::to_string(i) + " does not match the spec");
    for (const auto& ports : topo_.port_banks)
      for (const auto& banks : ports)
        for (BankId b : banks)
          if (!il_.dmac_of(b)) throw ConfigError("bank " + std::to_string(b) + " has no DMAC in the interleave map");
    if (topo_.num_instances() <= kFeasibilityOracleLimit && !topo_.instances.empty()) {
      const auto c = std::min<std::uint64_t>(spec_.acc_to_buf.connectivity, topo_.num_instances());
      auto rep = check_feasibility(topo_, c);
      if (!rep.feasible) throw ConfigError("topology is not feasible for connectivity " + std::to_string(c));
    }
    validate_protocol(wl_);
    for (const auto& name : wl_.kernels()) {
      const auto* type = spec_.find_type(name);
      auto k = kernels_.find(name);
      if (!type || k == kernels_.end()) throw ConfigError("workload references unknown kernel '" + name + "'");
      if (k->second.port_count != type->port_count)
        throw ConfigError("kernel '" + name + "' has " + std::to_string(k->second.port_count) +
                          " ports but the spec declares " + std::to_string(type->port_count));
      k->second.validate();
    }
  }

  void push(std::uint64_t time, EvKind kind, std::uint64_t a, std::uint64_t b = 0) {
    queue_.push(Event{time, seq_++, kind, a, b});
  }

  void dispatch(const Event& ev) {
    switch (ev.kind) {
      case EvKind::app_wake: process_app(static_cast<std::uint32_t>(ev.a)); break;
      case EvKind::task_granted: on_granted(tasks_[ev.a]); break;
      case EvKind::task_start: on_start(tasks_[ev.a]); break;
      case EvKind::translate: on_translate(tasks_[ev.a]); break;
      case EvKind::issue_group: on_issue(tasks_[ev.a], ev.b); break;
      case EvKind::page_arrived:
        tasks_[ev.a].arrived[ev.b] = 1;
        try_compute(tasks_[ev.a]);
        break;
      case EvKind::write_done:
        ++tasks_[ev.a].writes_done;
        check_finish(tasks_[ev.a]);
        break;
      case EvKind::piece_done: on_piece_done(tasks_[ev.a]); break;
      case EvKind::task_finished: on_finished(tasks_[ev.a]); break;
    }
  }

  // ---- applications -------------------------------------------------------

  void process_app(std::uint32_t index) {
    auto& app = apps_[index];
    app.waiting_on.reset();
    while (app.cursor < app.events.size()) {
      const auto& e = wl_.events[app.events[app.cursor]];
      if (e.time > now_) {
        push(e.time, EvKind::app_wake, index);
        return;
      }
      switch (e.verb) {
        case Verb::reserve: {
          auto id = new_task(index, e, false);
          app.open[e.kernel] = id;
          reserve_task(tasks_[id]);
          break;
        }
        case Verb::check_reserved: {
          auto& t = tasks_[app.open.at(e.kernel)];
          if (t.state == TaskState::waiting) return block(app, t);
          break;
        }
        case Verb::send_param: {
          auto& t = tasks_[app.open.at(e.kernel)];
          if (t.state == TaskState::waiting) return block(app, t);
          start_task(t, e.multiplier);
          break;
        }
        case Verb::check_done: {
          auto& t = tasks_[app.open.at(e.kernel)];
          if (t.state != TaskState::done) return block(app, t);
          break;
        }
        case Verb::free: {
          auto& t = tasks_[app.open.at(e.kernel)];
          if (t.state != TaskState::done) return block(app, t);
          free_task(t);
          app.open.erase(e.kernel);
          break;
        }
        case Verb::run: {
          if (!app.composite) {
            auto id = new_task(index, e, true);
            app.composite = id;
            reserve_task(tasks_[id]);
          }
          auto& t = tasks_[*app.composite];
          if (t.state != TaskState::freed) return block(app, t);
          app.composite.reset();
          break;
        }
      }
      ++app.cursor;
    }
  }

  void block(App& app, const Task& t) { app.waiting_on = t.id; }

  void notify(const Task& t) {
    auto& app = apps_[t.app];
    if (app.waiting_on == t.id) {
      app.waiting_on.reset();
      push(now_, EvKind::app_wake, t.app);
    }
  }

  // ---- task lifecycle -----------------------------------------------------

  TaskId new_task(std::uint32_t app, const TraceEvent& e, bool composite) {
    Task t;
    t.id = tasks_.size();
    t.app = app;
    t.kernel = &kernels_.at(e.kernel);
    t.composite = composite;
    t.multiplier = e.multiplier;
    tasks_.push_back(std::move(t));
    return tasks_.back().id;
  }

  void reserve_task(Task& t) {
    gam_.reserve(t.id, t.kernel->name);
    schedule_pass();
  }

  void schedule_pass() {
    for (const auto& b : gam_.schedule()) {
      tasks_[b.task].instance = b.instance;
      dba_.enqueue({b.task, b.instance});
    }
    for (auto& g : dba_.allocate()) {
      tasks_[g.task].banks = std::move(g.banks);
      push(now_ + platform_.gam_decision_cycles, EvKind::task_granted, g.task);
    }
  }

  void on_granted(Task& t) {
    t.state = TaskState::granted;
    notify(t);
    if (t.composite) start_task(t, t.multiplier);
  }

  void start_task(Task& t, std::uint32_t multiplier) {
    t.state = TaskState::running;
    t.multiplier = multiplier;
    const auto* type = spec_.find_type(t.kernel->name);
    push(now_ + platform_.param_cycles_per_param * type->num_params, EvKind::task_start, t.id);
  }

  void on_start(Task& t) {
    t.t_start = now_;
    auto& app = apps_[t.app];
    t.slice = app.slice_cursor;
    app.slice_cursor = (app.slice_cursor + t.multiplier) % kVolumeSlices;
    t.fetch = t.kernel->fetched_pages(t.multiplier);
    t.outputs = t.kernel->output_pages(t.multiplier);
    t.compute = t.kernel->compute_cycles(t.multiplier);
    t.pieces = std::max<std::uint64_t>(t.fetch, 1);
    t.arrived.assign(t.fetch, 0);
    enqueue_pages(t, TransferDirection::read, 0, t.fetch);
    try_compute(t);
  }

  void enqueue_pages(Task& t, TransferDirection dir, std::uint64_t first, std::uint64_t last) {
    for (auto p = first; p < last; p += platform_.miss_batch_size) {
      PageGroup g{dir, {}};
      for (auto q = p; q < std::min<std::uint64_t>(last, p + platform_.miss_batch_size); ++q) g.pages.push_back(q);
      t.xlate_queue.push_back(std::move(g));
    }
    if (!t.xlate_busy && !t.xlate_queue.empty()) {
      t.xlate_busy = true;
      push(now_, EvKind::translate, t.id);
    }
  }

  std::uint64_t virtual_page(const Task& t, TransferDirection dir, std::uint64_t index) const {
    const std::uint64_t base = t.app * kAppRegionPages;
    if (dir == TransferDirection::read) {
      const auto per_slice = std::max<std::uint64_t>(t.kernel->pages_in, 1);
      return base + (t.slice * per_slice + index) % (kVolumeSlices * per_slice);
    }
    const auto per_slice = std::max<std::uint64_t>(t.kernel->pages_out, 1);
    return base + kOutputOffsetPages + (t.slice * per_slice + index) % (kVolumeSlices * per_slice);
  }

  void on_translate(Task& t) {
    if (t.xlate_queue.empty()) {
      t.xlate_busy = false;
      return;
    }
    PageGroup g = std::move(t.xlate_queue.front());
    t.xlate_queue.pop_front();
    std::uint64_t misses = 0;
    for (auto p : g.pages)
      if (!tlb_.access(virtual_page(t, g.dir, p))) ++misses;
    std::uint64_t ready = now_;
    if (misses > 0) {
      const auto stall = handle_tlb_miss_batch(misses, platform_.miss_mode, platform_);
      const auto start = std::max(now_, handler_free_);
      ready = start + stall;
      handler_free_ = ready;
      miss_handling_cycles_ += stall;
    }
    t.issued.push_back(std::move(g));
    push(ready, EvKind::issue_group, t.id, t.issued.size() - 1);
    push(ready, EvKind::translate, t.id);
  }

  void on_issue(Task& t, std::uint64_t group) {
    const auto& g = t.issued[group];
    for (auto p : g.pages) {
      const BankId bank = t.banks[p % t.banks.size()];
      const auto tr = dma_.transfer_page(*il_.dmac_of(bank), g.dir, now_);
      if (g.dir == TransferDirection::read) push(tr.completion, EvKind::page_arrived, t.id, p);
      else push(tr.completion, EvKind::write_done, t.id);
    }
  }

  std::uint64_t piece_length(const Task& t, std::uint64_t i) const {
    return t.compute * (i + 1) / t.pieces - t.compute * i / t.pieces;
  }

  void try_compute(Task& t) {
    if (t.computing || t.next_piece >= t.pieces) return;
    if (t.next_piece < t.fetch && !t.arrived[t.next_piece]) return;
    t.computing = true;
    push(now_ + piece_length(t, t.next_piece), EvKind::piece_done, t.id);
  }

  void on_piece_done(Task& t) {
    t.computing = false;
    ++t.next_piece;
    const auto ready = t.next_piece * t.outputs / t.pieces;
    if (ready > t.writes_issued) {
      enqueue_pages(t, TransferDirection::write, t.writes_issued, ready);
      t.writes_issued = ready;
    }
    try_compute(t);
    check_finish(t);
  }

  void check_finish(Task& t) {
    if (t.finishing || t.next_piece < t.pieces || t.writes_done < t.outputs) return;
    t.finishing = true;
    const auto inv = invalidate_pages(t.outputs, platform_);
    invalidation_cycles_ += inv;
    push(now_ + inv, EvKind::task_finished, t.id);
  }

  void on_finished(Task& t) {
    t.state = TaskState::done;
    auto& s = stats_[*t.instance];
    ++s.tasks;
    s.busy_cycles += now_ - t.t_start;
    s.compute_cycles += t.compute;
    ++tasks_completed_;
    notify(t);
    if (t.composite) free_task(t);
  }

  void free_task(Task& t) {
    dba_.release(t.id);
    gam_.free(*t.instance);
    t.state = TaskState::freed;
    notify(t);
    schedule_pass();
  }

  AraSpec spec_;
  CrossbarTopology topo_;
  InterleaveMap il_;
  Workload wl_;
  KernelTable kernels_;
  PlatformModel platform_;

  GlobalAcceleratorManager gam_;
  DynamicBufferAllocator dba_;
  Tlb tlb_;
  DmaEngine dma_;

  std::priority_queue<Event, std::vector<Event>, Later> queue_;
  std::uint64_t seq_ = 0;
  std::uint64_t now_ = 0;
  std::uint64_t last_time_ = 0;
  std::uint64_t handler_free_ = 0;

  std::vector<Task> tasks_;
  std::vector<App> apps_;
  std::map<std::string, std::uint32_t> app_index_;
  std::vector<InstanceStats> stats_;
  std::uint64_t tasks_completed_ = 0;
  std::uint64_t miss_handling_cycles_ = 0;
  std::uint64_t invalidation_cycles_ = 0;
};

/// Runs `workload` to completion and returns its report.
inline PerfReport run_simulation(const AraSpec& spec, const CrossbarTopology& topology, const InterleaveMap& interleave,
                                 const Workload& workload, const KernelTable& kernels, const PlatformModel& platform) {
  Simulator sim(spec, topology, interleave, workload, kernels, platform);
  sim.run();
  return sim.report();
}

}  // namespace aradse
