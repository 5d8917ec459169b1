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

// ARA specification file: parsing, validation, canonical serialization and
// expansion of duplicated accelerator types into instances.
//
// Unit conventions for attribute values:
//   sizes and entry counts   "16K" = 16 * 1024, "1M" = 1024 * 1024
//   frequencies              "100MHz" = 100 * 10^6 Hz ("100M" is accepted too)
// The TLB "size" attribute counts entries, not bytes.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <nlohmann/json.hpp>

#include "aradse/errors.hpp"

namespace aradse {

inline constexpr std::uint64_t kPageBytes = 4096;
inline constexpr std::uint64_t kDefaultBufferBytes = 16 * 1024;
inline constexpr std::uint64_t kDefaultTlbEntries = 8 * 1024;
inline constexpr std::uint64_t kDefaultAccFrequencyHz = 100'000'000;

enum class InterleaveStrategy { intra_acc, inter_acc };

inline std::string to_string(InterleaveStrategy s) { return s == InterleaveStrategy::intra_acc ? "intra_acc" : "inter_acc"; }

inline InterleaveStrategy parse_strategy(std::string_view text) {
  if (text == "intra" || text == "intra_acc") return InterleaveStrategy::intra_acc;
  if (text == "inter" || text == "inter_acc") return InterleaveStrategy::inter_acc;
  throw ValueError("unknown interleave strategy '" + std::string(text) + "'");
}

struct AccTypeSpec {
  std::string name;
  std::uint64_t num_instances = 1;
  std::uint64_t num_params = 0;
  std::uint64_t port_count = 1;
  std::uint64_t port_buffer_size_bytes = kDefaultBufferBytes;

  bool operator==(const AccTypeSpec&) const = default;
};

struct SharedBufferSpec {
  std::uint64_t size_bytes = kDefaultBufferBytes;
  std::uint64_t count = 1;
  std::uint64_t num_dmacs = 1;

  bool operator==(const SharedBufferSpec&) const = default;
};

struct CrossbarSpec {
  std::uint64_t connectivity = 1;
  bool automatic = true;

  bool operator==(const CrossbarSpec&) const = default;
};

struct InterleaveSpec {
  InterleaveStrategy strategy = InterleaveStrategy::intra_acc;
  bool enabled = true;
  bool automatic = true;

  bool operator==(const InterleaveSpec&) const = default;
};

struct IommuSpec {
  std::uint64_t tlb_entries = kDefaultTlbEntries;
  std::string evict_policy = "LRU";

  bool operator==(const IommuSpec&) const = default;
};

struct AraSpec {
  std::vector<AccTypeSpec> acc_types;
  SharedBufferSpec shared_buffers;
  CrossbarSpec acc_to_buf;
  InterleaveSpec buf_to_dmac;
  IommuSpec iommu;
  bool coherent_cache = false;
  std::uint64_t acc_frequency_hz = kDefaultAccFrequencyHz;

  std::uint64_t total_instances() const {
    std::uint64_t n = 0;
    for (const auto& t : acc_types) n += t.num_instances;
    return n;
  }

  const AccTypeSpec* find_type(std::string_view name) const {
    for (const auto& t : acc_types)
      if (t.name == name) return &t;
    return nullptr;
  }

  bool operator==(const AraSpec&) const = default;
};

/// One physical accelerator after expanding the "num" duplication count.
struct AccInstance {
  std::uint32_t instance_id = 0;
  std::string type_name;
  std::uint32_t port_count = 1;

  bool operator==(const AccInstance&) const = default;
};

namespace detail {

inline std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

inline std::uint64_t parse_digits(std::string_view digits, std::string_view what, std::string_view raw) {
  if (digits.empty() || !std::all_of(digits.begin(), digits.end(), [](unsigned char c) { return std::isdigit(c); }))
    throw ValueError("attribute '" + std::string(what) + "' is not numeric: '" + std::string(raw) + "'");
  std::uint64_t v = 0;
  for (char c : digits) {
    if (v > (UINT64_MAX - 9) / 10) throw ValueError("attribute '" + std::string(what) + "' overflows");
    v = v * 10 + static_cast<std::uint64_t>(c - '0');
  }
  return v;
}

}  // namespace detail

/// "16K" -> 16384, "1M" -> 1048576, "37" -> 37. Binary multipliers.
inline std::uint64_t parse_size_value(std::string_view raw, std::string_view what) {
  std::string s = detail::trim(raw);
  std::uint64_t mult = 1;
  if (!s.empty()) {
    char last = static_cast<char>(std::toupper(static_cast<unsigned char>(s.back())));
    if (last == 'K') mult = 1024;
    else if (last == 'M') mult = 1024 * 1024;
    else if (last == 'G') mult = 1024ull * 1024 * 1024;
    if (mult != 1) s.pop_back();
  }
  return detail::parse_digits(s, what, raw) * mult;
}

/// "100MHz" -> 100000000. Decimal multipliers; the "Hz" suffix is optional.
inline std::uint64_t parse_frequency_value(std::string_view raw, std::string_view what) {
  std::string s = detail::trim(raw);
  if (s.size() >= 2) {
    std::string tail = s.substr(s.size() - 2);
    std::transform(tail.begin(), tail.end(), tail.begin(), [](unsigned char c) { return std::tolower(c); });
    if (tail == "hz") s.resize(s.size() - 2);
  }
  std::uint64_t mult = 1;
  if (!s.empty()) {
    char last = static_cast<char>(std::toupper(static_cast<unsigned char>(s.back())));
    if (last == 'K') mult = 1'000;
    else if (last == 'M') mult = 1'000'000;
    else if (last == 'G') mult = 1'000'000'000;
    if (mult != 1) s.pop_back();
  }
  return detail::parse_digits(s, what, raw) * mult;
}

inline bool parse_flag_value(std::string_view raw, std::string_view what) {
  std::string s = detail::trim(raw);
  if (s == "1" || s == "true" || s == "yes") return true;
  if (s == "0" || s == "false" || s == "no") return false;
  throw ValueError("attribute '" + std::string(what) + "' is not a flag: '" + std::string(raw) + "'");
}

namespace detail {

using boost::property_tree::ptree;

class SpecReader {
 public:
  explicit SpecReader(std::vector<std::string>* warnings) : warnings_(warnings) {}

  AraSpec read(const ptree& doc) {
    auto root = doc.get_child_optional("system");
    if (!root) throw SchemaError("system");
    AraSpec spec;
    warn_unknown_children(*root, "system",
                          {"ACCs", "SharedBuffers", "Interconnects", "IOMMU", "CoherentCache", "AccFrequency"});

    const ptree& accs = section(*root, "ACCs");
    warn_unknown_children(accs, "ACCs", {"acc"});
    for (const auto& [tag, node] : accs) {
      if (tag != "acc") continue;
      spec.acc_types.push_back(read_acc(node));
    }

    const ptree& bufs = section(*root, "SharedBuffers");
    auto battrs = attrs(bufs, "SharedBuffers", {"size", "num", "numDMACs"});
    spec.shared_buffers.size_bytes =
        battrs.count("size") ? parse_size_value(battrs["size"], "SharedBuffers.size") : kDefaultBufferBytes;
    spec.shared_buffers.count = parse_size_value(required(battrs, "SharedBuffers", "num"), "SharedBuffers.num");
    spec.shared_buffers.num_dmacs =
        battrs.count("numDMACs") ? parse_size_value(battrs["numDMACs"], "SharedBuffers.numDMACs") : 1;

    const ptree& ics = section(*root, "Interconnects");
    warn_unknown_children(ics, "Interconnects", {"ACCS_to_Buffers", "Buffers_to_DMACs"});
    if (auto xb = ics.get_child_optional("ACCS_to_Buffers")) {
      auto a = attrs(*xb, "ACCS_to_Buffers", {"type", "connectivity", "auto"});
      if (a.count("type") && a["type"] != "crossbar")
        throw ValueError("ACCS_to_Buffers.type must be 'crossbar', got '" + a["type"] + "'");
      spec.acc_to_buf.connectivity =
          parse_size_value(required(a, "ACCS_to_Buffers", "connectivity"), "ACCS_to_Buffers.connectivity");
      if (a.count("auto")) spec.acc_to_buf.automatic = parse_flag_value(a["auto"], "ACCS_to_Buffers.auto");
    } else {
      throw SchemaError("Interconnects/ACCS_to_Buffers");
    }
    if (auto il = ics.get_child_optional("Buffers_to_DMACs")) {
      auto a = attrs(*il, "Buffers_to_DMACs", {"type", "use", "auto", "strategy"});
      if (a.count("type") && a["type"] != "interleaved")
        throw ValueError("Buffers_to_DMACs.type must be 'interleaved', got '" + a["type"] + "'");
      if (a.count("use")) spec.buf_to_dmac.enabled = parse_flag_value(a["use"], "Buffers_to_DMACs.use");
      if (a.count("auto")) spec.buf_to_dmac.automatic = parse_flag_value(a["auto"], "Buffers_to_DMACs.auto");
      if (a.count("strategy")) spec.buf_to_dmac.strategy = parse_strategy(a["strategy"]);
    }

    if (auto io = root->get_child_optional("IOMMU")) {
      warn_unknown_children(*io, "IOMMU", {"TLB"});
      if (auto tlb = io->get_child_optional("TLB")) {
        auto a = attrs(*tlb, "TLB", {"size", "evict"});
        if (a.count("size")) spec.iommu.tlb_entries = parse_size_value(a["size"], "TLB.size");
        if (a.count("evict")) {
          if (a["evict"] != "LRU") throw ValueError("TLB.evict: only LRU is supported, got '" + a["evict"] + "'");
          spec.iommu.evict_policy = a["evict"];
        }
      }
    }
    if (auto cc = root->get_child_optional("CoherentCache")) {
      auto a = attrs(*cc, "CoherentCache", {"use"});
      if (a.count("use")) spec.coherent_cache = parse_flag_value(a["use"], "CoherentCache.use");
    }
    if (auto f = root->get_child_optional("AccFrequency")) {
      auto a = attrs(*f, "AccFrequency", {"hz"});
      if (a.count("hz")) spec.acc_frequency_hz = parse_frequency_value(a["hz"], "AccFrequency.hz");
    }
    return spec;
  }

 private:
  AccTypeSpec read_acc(const ptree& node) {
    auto a = attrs(node, "acc", {"type", "num", "num_params"});
    AccTypeSpec t;
    t.name = required(a, "ACCs/acc", "type");
    t.num_instances = a.count("num") ? parse_size_value(a["num"], "acc.num") : 1;
    t.num_params = a.count("num_params") ? parse_size_value(a["num_params"], "acc.num_params") : 0;
    warn_unknown_children(node, "acc", {"port"});
    auto port = node.get_child_optional("port");
    if (!port) throw SchemaError("ACCs/acc[" + t.name + "]/port");
    auto pa = attrs(*port, "port", {"size", "num"});
    t.port_count = parse_size_value(required(pa, "acc/port", "num"), "port.num");
    t.port_buffer_size_bytes = pa.count("size") ? parse_size_value(pa["size"], "port.size") : kDefaultBufferBytes;
    return t;
  }

  static const ptree& section(const ptree& root, const char* name) {
    auto s = root.get_child_optional(name);
    if (!s) throw SchemaError(name);
    return *s;
  }

  static std::string required(std::map<std::string, std::string>& a, const std::string& where, const char* key) {
    auto it = a.find(key);
    if (it == a.end()) throw SchemaError(where + "@" + key);
    return it->second;
  }

  std::map<std::string, std::string> attrs(const ptree& node, const std::string& where,
                                           std::initializer_list<std::string_view> known) {
    std::map<std::string, std::string> out;
    if (auto xa = node.get_child_optional("<xmlattr>")) {
      for (const auto& [k, v] : *xa) {
        if (std::find(known.begin(), known.end(), k) == known.end())
          warn("unknown attribute '" + k + "' on <" + where + "> ignored");
        out[k] = v.data();
      }
    }
    return out;
  }

  void warn_unknown_children(const ptree& node, const std::string& where,
                             std::initializer_list<std::string_view> known) {
    for (const auto& [tag, child] : node) {
      if (tag == "<xmlattr>" || tag == "<xmlcomment>") continue;
      if (std::find(known.begin(), known.end(), tag) == known.end())
        warn("unknown element <" + tag + "> inside <" + where + "> ignored");
    }
  }

  void warn(std::string msg) {
    if (warnings_) warnings_->push_back(std::move(msg));
  }

  std::vector<std::string>* warnings_;
};

}  // namespace detail

/// Parses an ARA specification XML document. Unknown elements and attributes
/// are reported through `warnings` (when non-null) and otherwise ignored.
inline AraSpec parse_spec(std::string_view text, std::vector<std::string>* warnings = nullptr) {
  boost::property_tree::ptree doc;
  std::istringstream in{std::string(text)};
  try {
    boost::property_tree::read_xml(in, doc);
  } catch (const boost::property_tree::xml_parser_error& e) {
    throw ParseError(e.message(), e.line());
  }
  return detail::SpecReader(warnings).read(doc);
}

enum class ViolationKind {
  connectivity_zero,
  connectivity_exceeds_instances,
  no_accelerators,
  zero_ports,
  zero_instances,
  duplicate_type_name,
  zero_buffers,
  buffer_not_page_multiple,
  zero_dmacs,
  zero_tlb_entries,
  zero_frequency,
};

struct Violation {
  ViolationKind kind;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool has(ViolationKind k) const {
    return std::any_of(violations.begin(), violations.end(), [k](const Violation& v) { return v.kind == k; });
  }
};

/// Checks the invariants of a parsed spec. Violations are returned as data.
inline ValidationReport validate_spec(const AraSpec& spec) {
  ValidationReport r;
  auto add = [&](ViolationKind k, std::string msg) { r.violations.push_back({k, std::move(msg)}); };

  if (spec.acc_types.empty()) add(ViolationKind::no_accelerators, "no accelerator types declared");
  std::set<std::string> names;
  for (const auto& t : spec.acc_types) {
    if (!names.insert(t.name).second) add(ViolationKind::duplicate_type_name, "duplicate accelerator type '" + t.name + "'");
    if (t.port_count == 0) add(ViolationKind::zero_ports, "accelerator '" + t.name + "' has zero ports");
    if (t.num_instances == 0) add(ViolationKind::zero_instances, "accelerator '" + t.name + "' has zero instances");
  }
  const auto instances = spec.total_instances();
  if (spec.acc_to_buf.connectivity == 0) add(ViolationKind::connectivity_zero, "connectivity must be at least 1");
  if (spec.acc_to_buf.connectivity > instances)
    add(ViolationKind::connectivity_exceeds_instances,
        "connectivity exceeds instances (" + std::to_string(spec.acc_to_buf.connectivity) + " > " +
            std::to_string(instances) + ")");
  if (spec.shared_buffers.count == 0) add(ViolationKind::zero_buffers, "no shared buffers declared");
  if (spec.shared_buffers.size_bytes == 0 || spec.shared_buffers.size_bytes % kPageBytes != 0)
    add(ViolationKind::buffer_not_page_multiple,
        "buffer size " + std::to_string(spec.shared_buffers.size_bytes) + " is not page-multiple (page " +
            std::to_string(kPageBytes) + ")");
  if (spec.shared_buffers.num_dmacs == 0) add(ViolationKind::zero_dmacs, "numDMACs must be at least 1");
  if (spec.iommu.tlb_entries == 0) add(ViolationKind::zero_tlb_entries, "TLB must have at least one entry");
  if (spec.acc_frequency_hz == 0) add(ViolationKind::zero_frequency, "accelerator frequency must be positive");
  return r;
}

/// One instance per duplication, in declaration order then duplication index.
inline std::vector<AccInstance> expand_instances(const AraSpec& spec) {
  std::vector<AccInstance> out;
  std::uint32_t next = 0;
  for (const auto& t : spec.acc_types)
    for (std::uint64_t i = 0; i < t.num_instances; ++i)
      out.push_back({next++, t.name, static_cast<std::uint32_t>(t.port_count)});
  return out;
}

namespace detail {

inline std::string format_size(std::uint64_t v) {
  if (v != 0 && v % (1024ull * 1024) == 0) return std::to_string(v / (1024ull * 1024)) + "M";
  if (v != 0 && v % 1024 == 0) return std::to_string(v / 1024) + "K";
  return std::to_string(v);
}

inline std::string format_frequency(std::uint64_t hz) {
  if (hz != 0 && hz % 1'000'000'000 == 0) return std::to_string(hz / 1'000'000'000) + "GHz";
  if (hz != 0 && hz % 1'000'000 == 0) return std::to_string(hz / 1'000'000) + "MHz";
  if (hz != 0 && hz % 1'000 == 0) return std::to_string(hz / 1'000) + "KHz";
  return std::to_string(hz) + "Hz";
}

inline std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace detail

/// Writes the spec back in the element/attribute vocabulary it was read from.
inline std::string to_xml(const AraSpec& spec) {
  using detail::format_size;
  std::ostringstream o;
  o << "<system>\n<ACCs>\n";
  for (const auto& t : spec.acc_types) {
    o << "  <acc type=\"" << detail::xml_escape(t.name) << "\" num=\"" << t.num_instances << "\" num_params=\""
      << t.num_params << "\">\n";
    o << "    <port size=\"" << format_size(t.port_buffer_size_bytes) << "\" num=\"" << t.port_count << "\"/>\n";
    o << "  </acc>\n";
  }
  o << "</ACCs>\n";
  o << "<SharedBuffers size=\"" << format_size(spec.shared_buffers.size_bytes) << "\" num=\""
    << spec.shared_buffers.count << "\" numDMACs=\"" << spec.shared_buffers.num_dmacs << "\"/>\n";
  o << "<Interconnects>\n";
  o << "  <ACCS_to_Buffers type=\"crossbar\" connectivity=\"" << spec.acc_to_buf.connectivity << "\" auto=\""
    << (spec.acc_to_buf.automatic ? 1 : 0) << "\"/>\n";
  o << "  <Buffers_to_DMACs type=\"interleaved\" use=\"" << (spec.buf_to_dmac.enabled ? 1 : 0) << "\" auto=\""
    << (spec.buf_to_dmac.automatic ? 1 : 0) << "\" strategy=\""
    << (spec.buf_to_dmac.strategy == InterleaveStrategy::intra_acc ? "intra" : "inter") << "\"/>\n";
  o << "</Interconnects>\n";
  o << "<IOMMU>\n  <TLB size=\"" << format_size(spec.iommu.tlb_entries) << "\" evict=\""
    << detail::xml_escape(spec.iommu.evict_policy) << "\"/>\n</IOMMU>\n";
  o << "<CoherentCache use=\"" << (spec.coherent_cache ? 1 : 0) << "\" />\n";
  o << "<AccFrequency hz=\"" << detail::format_frequency(spec.acc_frequency_hz) << "\" />\n";
  o << "</system>\n";
  return o.str();
}

/// Canonical JSON dump. Keys and units:
///   acc_types[]: name, num_instances, num_params, port_count, port_buffer_size_bytes
///   shared_buffers: size_bytes, count, num_dmacs
///   interconnect.acc_to_buf: kind="crossbar", connectivity, auto
///   interconnect.buf_to_dmac: kind="interleaved", strategy, use, auto
///   iommu: tlb_entries, evict_policy
///   coherent_cache (bool), acc_frequency_hz
inline nlohmann::json to_json(const AraSpec& spec) {
  nlohmann::json j;
  j["acc_types"] = nlohmann::json::array();
  for (const auto& t : spec.acc_types)
    j["acc_types"].push_back({{"name", t.name},
                              {"num_instances", t.num_instances},
                              {"num_params", t.num_params},
                              {"port_count", t.port_count},
                              {"port_buffer_size_bytes", t.port_buffer_size_bytes}});
  j["shared_buffers"] = {{"size_bytes", spec.shared_buffers.size_bytes},
                         {"count", spec.shared_buffers.count},
                         {"num_dmacs", spec.shared_buffers.num_dmacs}};
  j["interconnect"] = {
      {"acc_to_buf",
       {{"kind", "crossbar"}, {"connectivity", spec.acc_to_buf.connectivity}, {"auto", spec.acc_to_buf.automatic}}},
      {"buf_to_dmac",
       {{"kind", "interleaved"},
        {"strategy", to_string(spec.buf_to_dmac.strategy)},
        {"use", spec.buf_to_dmac.enabled},
        {"auto", spec.buf_to_dmac.automatic}}}};
  j["iommu"] = {{"tlb_entries", spec.iommu.tlb_entries}, {"evict_policy", spec.iommu.evict_policy}};
  j["coherent_cache"] = spec.coherent_cache;
  j["acc_frequency_hz"] = spec.acc_frequency_hz;
  return j;
}

}  // namespace aradse
