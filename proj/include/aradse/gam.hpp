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

#include <cstdint>
#include <deque>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "aradse/errors.hpp"
#include "aradse/spec_model.hpp"

namespace aradse {

using TaskId = std::uint64_t;

struct GamBinding {
  TaskId task;
  std::uint32_t instance;
};

/// Global accelerator manager: a free-instance table and a FIFO of pending
/// requests per accelerator type. A request is bound to the lowest-id free
/// instance of its type once it reaches the head of that type's queue; the
/// binding then waits for buffers from the allocator.
class GlobalAcceleratorManager {
 public:
  explicit GlobalAcceleratorManager(std::span<const AccInstance> instances) {
    for (const auto& i : instances) {
      types_[i.type_name].free.insert(i.instance_id);
      type_of_[i.instance_id] = i.type_name;
    }
  }

  void reserve(TaskId task, const std::string& type) {
    auto it = types_.find(type);
    if (it == types_.end()) throw ProtocolError("no accelerator instances of type '" + type + "'");
    it->second.pending.push_back(task);
  }

  /// Binds queue heads to free instances, oldest request first within a type.
  std::vector<GamBinding> schedule() {
    std::vector<GamBinding> out;
    for (auto& [name, t] : types_) {
      while (!t.pending.empty() && !t.free.empty()) {
        auto inst = *t.free.begin();
        t.free.erase(t.free.begin());
        bound_[inst] = t.pending.front();
        out.push_back({t.pending.front(), inst});
        t.pending.pop_front();
      }
    }
    return out;
  }

  /// Returns `instance` to the free table.
  void free(std::uint32_t instance) {
    auto it = bound_.find(instance);
    if (it == bound_.end()) throw ProtocolError("instance " + std::to_string(instance) + " freed but not granted");
    bound_.erase(it);
    types_[type_of_.at(instance)].free.insert(instance);
  }

  std::size_t pending(const std::string& type) const {
    auto it = types_.find(type);
    return it == types_.end() ? 0 : it->second.pending.size();
  }
  std::size_t free_count(const std::string& type) const {
    auto it = types_.find(type);
    return it == types_.end() ? 0 : it->second.free.size();
  }
  bool is_bound(std::uint32_t instance) const { return bound_.count(instance) != 0; }

 private:
  struct TypeState {
    std::set<std::uint32_t> free;
    std::deque<TaskId> pending;
  };
  std::map<std::string, TypeState> types_;
  std::map<std::uint32_t, std::string> type_of_;
  std::map<std::uint32_t, TaskId> bound_;
};

}  // namespace aradse
