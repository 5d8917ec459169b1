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
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "aradse/crossbar.hpp"
#include "aradse/errors.hpp"

namespace aradse {

using DmacId = std::uint32_t;

/// Static bank -> DMAC assignment of the interleaved network.
struct InterleaveMap {
  InterleaveStrategy strategy = InterleaveStrategy::intra_acc;
  std::uint32_t num_dmacs = 1;
  std::map<BankId, DmacId> bank_to_dmac;  // wired banks only

  std::optional<DmacId> dmac_of(BankId b) const {
    auto it = bank_to_dmac.find(b);
    if (it == bank_to_dmac.end()) return std::nullopt;
    return it->second;
  }

  bool operator==(const InterleaveMap&) const = default;
};

struct LoadProfile {
  std::vector<std::uint64_t> counts;  // indexed by DMAC; empty for an empty batch
  double imbalance = 0.0;             // max / max(min, 1)
};

/// Assigns every wired bank to a DMAC.
///
/// A bank belongs to the lowest-id instance that received it as a dedicated
/// bank during construction; banks outside every dedicated range fall to the
/// lowest-id instance reaching them. intra_acc walks each instance's banks in port order
/// and deals DMACs round-robin with one counter shared across instances.
/// inter_acc gives instance i DMAC i mod num_dmacs for all of its banks.
inline InterleaveMap synthesize_interleave(const CrossbarTopology& t, std::uint32_t num_dmacs,
                                           InterleaveStrategy strategy) {
  if (num_dmacs == 0) throw ContractError("num_dmacs must be at least 1");
  InterleaveMap m;
  m.strategy = strategy;
  m.num_dmacs = num_dmacs;

  std::uint64_t rr = 0;
  auto assign = [&](std::uint32_t inst, BankId b) {
    if (m.bank_to_dmac.count(b)) return;
    if (strategy == InterleaveStrategy::intra_acc)
      m.bank_to_dmac[b] = static_cast<DmacId>(rr++ % num_dmacs);
    else
      m.bank_to_dmac[b] = inst % num_dmacs;
  };
  auto is_dedicated = [&](std::uint32_t inst) {
    return std::find(t.dedicated.begin(), t.dedicated.end(), inst) != t.dedicated.end();
  };
  for (bool dedicated_pass : {true, false}) {
    for (std::uint32_t inst = 0; inst < t.num_instances(); ++inst) {
      if (dedicated_pass && !is_dedicated(inst)) continue;
      for (const auto& banks : t.port_banks[inst])
        for (BankId b : banks) assign(inst, b);
    }
  }
  return m;
}

/// Histogram of a simultaneous request batch over DMACs.
inline LoadProfile dmac_load_profile(const InterleaveMap& m, std::span<const BankId> batch) {
  LoadProfile p;
  if (batch.empty()) return p;
  p.counts.assign(m.num_dmacs, 0);
  for (BankId b : batch) {
    auto d = m.dmac_of(b);
    if (!d) throw ContractError("bank " + std::to_string(b) + " is not wired to any DMAC");
    ++p.counts[*d];
  }
  auto [lo, hi] = std::minmax_element(p.counts.begin(), p.counts.end());
  p.imbalance = static_cast<double>(*hi) / static_cast<double>(std::max<std::uint64_t>(*lo, 1));
  return p;
}

}  // namespace aradse
