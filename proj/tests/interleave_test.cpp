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


#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "aradse/crossbar.hpp"
#include "aradse/errors.hpp"
#include "aradse/interleave.hpp"
#include "test_util.hpp"

namespace aradse {
namespace {

using testing::instances_with_ports;

CrossbarTopology four_port() { return synthesize_crossbar(instances_with_ports({4}), 4, 1); }

TEST(Interleave, IntraSpreadsFourPorts) {
  const auto m = synthesize_interleave(four_port(), 4, InterleaveStrategy::intra_acc);
  for (BankId b = 0; b < 4; ++b) EXPECT_EQ(m.dmac_of(b), b);
}

TEST(Interleave, InterUsesOneDmac) {
  const auto m = synthesize_interleave(four_port(), 4, InterleaveStrategy::inter_acc);
  for (BankId b = 0; b < 4; ++b) EXPECT_EQ(m.dmac_of(b), 0u);
}

TEST(Interleave, SingleDmac) {
  const auto t = synthesize_crossbar(expand_instances(testing::medical5()), 32, 3);
  for (auto s : {InterleaveStrategy::intra_acc, InterleaveStrategy::inter_acc}) {
    const auto m = synthesize_interleave(t, 1, s);
    for (const auto& [b, d] : m.bank_to_dmac) EXPECT_EQ(d, 0u);
  }
}

TEST(Interleave, ZeroDmacs) { EXPECT_THROW(synthesize_interleave(four_port(), 0, InterleaveStrategy::intra_acc), ContractError); }

TEST(LoadProfile, FourPortBatch) {
  const std::vector<BankId> batch = {0, 1, 2, 3};
  const auto intra = dmac_load_profile(synthesize_interleave(four_port(), 4, InterleaveStrategy::intra_acc), batch);
  EXPECT_EQ(intra.counts, (std::vector<std::uint64_t>{1, 1, 1, 1}));
  EXPECT_DOUBLE_EQ(intra.imbalance, 1.0);
  const auto inter = dmac_load_profile(synthesize_interleave(four_port(), 4, InterleaveStrategy::inter_acc), batch);
  EXPECT_EQ(inter.counts, (std::vector<std::uint64_t>{4, 0, 0, 0}));
  EXPECT_DOUBLE_EQ(inter.imbalance, 4.0);
}

TEST(LoadProfile, EmptyBatch) {
  const auto p = dmac_load_profile(synthesize_interleave(four_port(), 4, InterleaveStrategy::intra_acc), {});
  EXPECT_TRUE(p.counts.empty());
}

TEST(LoadProfile, UnwiredBank) {
  const auto m = synthesize_interleave(four_port(), 4, InterleaveStrategy::intra_acc);
  const std::vector<BankId> batch = {7};
  EXPECT_THROW(dmac_load_profile(m, batch), ContractError);
}

// Every wired bank gets exactly one DMAC; owners' own banks spread evenly.
TEST(Interleave, Properties) {
  std::mt19937 rng(17);
  for (int n = 0; n < 200; ++n) {
    std::vector<std::uint32_t> ports(1 + rng() % 8);
    for (auto& p : ports) p = 1 + rng() % 12;
    const auto inst = instances_with_ports(ports);
    const std::uint64_t c = 1 + rng() % std::min<std::size_t>(4, ports.size());
    const std::uint32_t dmacs = 1 + rng() % 6;
    const auto t = rng() % 4 == 0 ? private_buffer_topology(inst) : synthesize_crossbar(inst, buffer_demand(inst, c), c);
    for (auto s : {InterleaveStrategy::intra_acc, InterleaveStrategy::inter_acc}) {
      const auto m = synthesize_interleave(t, dmacs, s);
      std::set<BankId> wired;
      for (const auto& pb : t.port_banks)
        for (const auto& b : pb) wired.insert(b.begin(), b.end());
      EXPECT_EQ(m.bank_to_dmac.size(), wired.size());
      for (const auto& [b, d] : m.bank_to_dmac) {
        EXPECT_TRUE(wired.count(b));
        EXPECT_LT(d, dmacs);
      }
    }
    const auto intra = synthesize_interleave(t, dmacs, InterleaveStrategy::intra_acc);
    for (auto i : t.dedicated) {
      std::vector<BankId> batch;
      for (const auto& b : t.port_banks[i]) batch.push_back(b.front());
      const auto p = dmac_load_profile(intra, batch);
      const auto [lo, hi] = std::minmax_element(p.counts.begin(), p.counts.end());
      EXPECT_LE(*hi - *lo, 1u);
    }
    const auto inter = synthesize_interleave(t, dmacs, InterleaveStrategy::inter_acc);
    std::vector<std::uint64_t> per_dmac(dmacs, 0);
    for (std::uint32_t i = 0; i < inst.size(); ++i) {
      ++per_dmac[i % dmacs];
      for (const auto& b : t.port_banks[i])
        for (auto bank : b)
          if (std::find(t.dedicated.begin(), t.dedicated.end(), i) != t.dedicated.end())
            EXPECT_EQ(inter.dmac_of(bank), i % dmacs);
    }
    const auto [lo, hi] = std::minmax_element(per_dmac.begin(), per_dmac.end());
    EXPECT_LE(*hi - *lo, 1u);
  }
}

TEST(Interleave, Deterministic) {
  const auto t = synthesize_crossbar(expand_instances(testing::medical5()), 32, 3);
  EXPECT_EQ(synthesize_interleave(t, 4, InterleaveStrategy::intra_acc),
            synthesize_interleave(t, 4, InterleaveStrategy::intra_acc));
}

}  // namespace
}  // namespace aradse
