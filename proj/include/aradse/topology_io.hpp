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

// Topology file (JSON):
//   {
//     "format": "aradse-topology", "version": 1,
//     "num_banks": N, "connectivity": c, "provenance": "constructed"|"repaired",
//     "added_cross_points": k,
//     "instances": [{"id": 0, "type": "gradient", "ports": 6}, ...],
//     "dedicated": [3, 2, 0],
//     "port_map": [[instance, port, [bank, ...]], ...],
//     "interleave": {"strategy": "intra_acc"|"inter_acc", "num_dmacs": D,
//                    "bank_to_dmac": [[bank, dmac], ...]}
//   }

#include <optional>
#include <string>
#include <utility>

#include <nlohmann/json.hpp>

#include "aradse/crossbar.hpp"
#include "aradse/errors.hpp"
#include "aradse/interleave.hpp"

namespace aradse {

inline constexpr const char* kTopologyFormat = "aradse-topology";

inline nlohmann::json to_json(const CrossbarTopology& t) {
  nlohmann::json j;
  j["format"] = kTopologyFormat;
  j["version"] = 1;
  j["num_banks"] = t.num_banks;
  j["connectivity"] = t.connectivity;
  j["provenance"] = to_string(t.provenance);
  j["added_cross_points"] = t.added_cross_points;
  j["instances"] = nlohmann::json::array();
  for (const auto& i : t.instances)
    j["instances"].push_back({{"id", i.instance_id}, {"type", i.type_name}, {"ports", i.port_count}});
  j["dedicated"] = t.dedicated;
  j["port_map"] = nlohmann::json::array();
  for (std::uint32_t i = 0; i < t.port_banks.size(); ++i)
    for (std::uint32_t p = 0; p < t.port_banks[i].size(); ++p)
      j["port_map"].push_back(nlohmann::json::array({i, p, t.port_banks[i][p]}));
  return j;
}

inline nlohmann::json to_json(const InterleaveMap& m) {
  nlohmann::json j;
  j["strategy"] = to_string(m.strategy);
  j["num_dmacs"] = m.num_dmacs;
  j["bank_to_dmac"] = nlohmann::json::array();
  for (const auto& [b, d] : m.bank_to_dmac) j["bank_to_dmac"].push_back(nlohmann::json::array({b, d}));
  return j;
}

inline nlohmann::json topology_file_json(const CrossbarTopology& t, const InterleaveMap& m) {
  auto j = to_json(t);
  j["interleave"] = to_json(m);
  return j;
}

struct TopologyFile {
  CrossbarTopology topology;
  std::optional<InterleaveMap> interleave;
};

inline TopologyFile topology_from_json(const nlohmann::json& j) {
  try {
    if (j.value("format", std::string{}) != kTopologyFormat) throw ConfigError("not an aradse topology file");
    TopologyFile f;
    auto& t = f.topology;
    t.num_banks = j.at("num_banks").get<std::uint32_t>();
    t.connectivity = j.at("connectivity").get<std::uint32_t>();
    t.provenance = j.value("provenance", std::string{"constructed"}) == "repaired" ? Provenance::repaired
                                                                                  : Provenance::constructed;
    t.added_cross_points = j.value("added_cross_points", 0u);
    for (const auto& i : j.at("instances")) {
      AccInstance inst{i.at("id").get<std::uint32_t>(), i.at("type").get<std::string>(),
                       i.at("ports").get<std::uint32_t>()};
      if (inst.instance_id != t.instances.size()) throw ConfigError("topology instances must be listed by id 0..n-1");
      t.instances.push_back(std::move(inst));
    }
    t.dedicated = j.value("dedicated", std::vector<std::uint32_t>{});
    t.port_banks.resize(t.instances.size());
    for (const auto& inst : t.instances) t.port_banks[inst.instance_id].resize(inst.port_count);
    for (const auto& e : j.at("port_map")) {
      auto inst = e.at(0).get<std::uint32_t>();
      auto port = e.at(1).get<std::uint32_t>();
      if (inst >= t.instances.size() || port >= t.instances[inst].port_count)
        throw ConfigError("port_map entry references unknown port");
      auto banks = e.at(2).get<std::vector<BankId>>();
      for (auto b : banks)
        if (b >= t.num_banks) throw ConfigError("port_map bank id out of range");
      std::sort(banks.begin(), banks.end());
      t.port_banks[inst][port] = std::move(banks);
    }
    for (std::uint32_t i = 0; i < t.port_banks.size(); ++i)
      for (std::uint32_t p = 0; p < t.port_banks[i].size(); ++p)
        if (t.port_banks[i][p].empty())
          throw ConfigError("port " + std::to_string(p) + " of instance " + std::to_string(i) + " has no bank");
    if (j.contains("interleave")) {
      const auto& il = j["interleave"];
      InterleaveMap m;
      m.strategy = parse_strategy(il.at("strategy").get<std::string>());
      m.num_dmacs = il.at("num_dmacs").get<std::uint32_t>();
      for (const auto& e : il.at("bank_to_dmac")) {
        auto d = e.at(1).get<DmacId>();
        if (d >= m.num_dmacs) throw ConfigError("interleave DMAC id out of range");
        m.bank_to_dmac[e.at(0).get<BankId>()] = d;
      }
      f.interleave = std::move(m);
    }
    return f;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed topology file: ") + e.what());
  }
}

}  // namespace aradse
