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

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "aradse/spec_model.hpp"

namespace aradse::testing {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string samples_path(const std::string& name) { return std::string(ARADSE_SAMPLES_DIR) + "/" + name; }

inline std::string medical5_text() { return read_file(samples_path("medical5.xml")); }
inline AraSpec medical5() { return parse_spec(medical5_text()); }

struct TypeDecl {
  std::string name;
  unsigned num;
  unsigned ports;
  unsigned params = 1;
};

/// Small spec document in the reference dialect.
inline std::string spec_xml(const std::vector<TypeDecl>& types, unsigned buffers, unsigned dmacs, unsigned c,
                            const std::string& buffer_size = "16K", const std::string& extra = "") {
  std::ostringstream x;
  x << "<system>\n<ACCs>\n";
  for (const auto& t : types)
    x << "  <acc type=\"" << t.name << "\" num=\"" << t.num << "\" num_params=\"" << t.params << "\">\n"
      << "    <port size=\"16K\" num=\"" << t.ports << "\"/>\n  </acc>\n";
  x << "</ACCs>\n<SharedBuffers size=\"" << buffer_size << "\" num=\"" << buffers << "\" numDMACs=\"" << dmacs
    << "\"/>\n<Interconnects>\n  <ACCS_to_Buffers type=\"crossbar\" connectivity=\"" << c
    << "\" auto=\"1\"/>\n  <Buffers_to_DMACs type=\"interleaved\" use=\"1\" auto=\"1\"/>\n</Interconnects>\n"
    << "<IOMMU>\n  <TLB size=\"8K\" evict=\"LRU\"/>\n</IOMMU>\n<CoherentCache use=\"0\" />\n"
    << "<AccFrequency hz=\"100MHz\" />\n" << extra << "</system>\n";
  return x.str();
}

inline std::vector<AccInstance> instances_with_ports(const std::vector<std::uint32_t>& ports) {
  std::vector<AccInstance> out;
  for (std::uint32_t i = 0; i < ports.size(); ++i) out.push_back({i, "t" + std::to_string(i), ports[i]});
  return out;
}

}  // namespace aradse::testing
