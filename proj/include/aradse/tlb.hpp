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
#include <list>
#include <unordered_map>

#include "aradse/errors.hpp"

namespace aradse {

/// Accelerator-side TLB with LRU eviction and the two performance counters
/// (accesses, misses) exposed by the IOMMU.
class Tlb {
 public:
  explicit Tlb(std::uint64_t capacity_entries) : capacity_(capacity_entries) {
    if (capacity_ == 0) throw ContractError("TLB capacity must be at least one entry");
  }

  /// Translates `page`. Returns true on a hit. A miss installs the entry,
  /// evicting the least recently used one when full.
  bool access(std::uint64_t page) {
    ++accesses_;
    auto it = index_.find(page);
    if (it != index_.end()) {
      lru_.splice(lru_.begin(), lru_, it->second);
      return true;
    }
    ++misses_;
    if (index_.size() == capacity_) {
      index_.erase(lru_.back());
      lru_.pop_back();
    }
    lru_.push_front(page);
    index_[page] = lru_.begin();
    return false;
  }

  bool contains(std::uint64_t page) const { return index_.count(page) != 0; }
  std::uint64_t capacity() const { return capacity_; }
  std::uint64_t size() const { return index_.size(); }
  std::uint64_t accesses() const { return accesses_; }
  std::uint64_t misses() const { return misses_; }

  void reset_counters() {
    accesses_ = 0;
    misses_ = 0;
  }

 private:
  std::uint64_t capacity_;
  std::list<std::uint64_t> lru_;  // front = most recent
  std::unordered_map<std::uint64_t, std::list<std::uint64_t>::iterator> index_;
  std::uint64_t accesses_ = 0;
  std::uint64_t misses_ = 0;
};

}  // namespace aradse
