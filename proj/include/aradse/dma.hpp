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

#include <algorithm>
#include <cstdint>
#include <vector>

#include "aradse/errors.hpp"
#include "aradse/interleave.hpp"
#include "aradse/platform.hpp"

namespace aradse {

struct PageTransfer {
  std::uint64_t issue = 0;       // request reached the DMAC
  std::uint64_t data_start = 0;  // a memory port began moving the page
  std::uint64_t completion = 0;

  std::uint64_t latency() const { return completion - issue; }
};

/// DMACs in front of a pool of physical memory ports.
///
/// Each DMAC serves its requests one page at a time in FIFO order. A request
/// pays the fixed access latency once the DMAC picks it up, then waits for
/// the earliest free port and holds it for page_bytes / bytes_per_cycle. The
/// port pool is the HP ports under DRAM coherency and the ACP port(s) under
/// LLC coherency. Requests must be issued in non-decreasing time order.
class DmaEngine {
 public:
  DmaEngine(std::uint32_t num_dmacs, const PlatformModel& platform)
      : platform_(platform),
        dmac_free_(num_dmacs, 0),
        port_free_(platform.memory_ports(), 0),
        bytes_(num_dmacs, 0),
        pages_(num_dmacs, 0) {
    if (num_dmacs == 0) throw ContractError("at least one DMAC is required");
  }

  PageTransfer transfer_page(DmacId dmac, TransferDirection dir, std::uint64_t now) {
    if (dmac >= dmac_free_.size())
      throw ContractError("invalid DMAC id " + std::to_string(dmac) + " (have " + std::to_string(dmac_free_.size()) + ")");
    PageTransfer t;
    t.issue = now;
    const auto picked = std::max(now, dmac_free_[dmac]);
    auto port = std::min_element(port_free_.begin(), port_free_.end());
    t.data_start = std::max(picked + platform_.access_latency(), *port);
    t.completion = t.data_start + platform_.page_transfer_cycles();
    *port = t.completion;
    dmac_free_[dmac] = t.completion;
    bytes_[dmac] += platform_.page_bytes;
    ++pages_[dmac];
    if (dir == TransferDirection::read) ++reads_;
    else ++writes_;
    return t;
  }

  std::uint32_t num_dmacs() const { return static_cast<std::uint32_t>(dmac_free_.size()); }
  const std::vector<std::uint64_t>& bytes_per_dmac() const { return bytes_; }
  const std::vector<std::uint64_t>& pages_per_dmac() const { return pages_; }
  std::uint64_t pages_read() const { return reads_; }
  std::uint64_t pages_written() const { return writes_; }

  void reset_counters() {
    std::fill(bytes_.begin(), bytes_.end(), 0);
    std::fill(pages_.begin(), pages_.end(), 0);
    reads_ = writes_ = 0;
  }

 private:
  PlatformModel platform_;
  std::vector<std::uint64_t> dmac_free_;
  std::vector<std::uint64_t> port_free_;
  std::vector<std::uint64_t> bytes_;
  std::vector<std::uint64_t> pages_;
  std::uint64_t reads_ = 0;
  std::uint64_t writes_ = 0;
};

}  // namespace aradse
