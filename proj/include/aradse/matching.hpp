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
#include <limits>
#include <span>
#include <vector>

namespace aradse {

inline constexpr std::uint32_t kUnmatched = std::numeric_limits<std::uint32_t>::max();

/// Maximum bipartite matching between "left" vertices (accelerator ports) and
/// "right" vertices (buffer banks), by augmenting paths. Left vertices are
/// tried in index order and each adjacency list in its stored order, so the
/// result is fully deterministic.
class BipartiteMatcher {
 public:
  BipartiteMatcher(std::span<const std::vector<std::uint32_t>> adjacency, std::uint32_t num_right)
      : adj_(adjacency), left_match_(adjacency.size(), kUnmatched), right_match_(num_right, kUnmatched) {}

  std::size_t solve() {
    std::size_t size = 0;
    for (std::uint32_t u = 0; u < adj_.size(); ++u) {
      visited_.assign(right_match_.size(), 0);
      if (augment(u)) ++size;
    }
    return size;
  }

  /// Bank matched to left vertex `u`, or kUnmatched.
  std::uint32_t left_match(std::uint32_t u) const { return left_match_[u]; }
  const std::vector<std::uint32_t>& left_matches() const { return left_match_; }

 private:
  bool augment(std::uint32_t u) {
    for (std::uint32_t v : adj_[u]) {
      if (v >= right_match_.size() || visited_[v]) continue;
      visited_[v] = 1;
      if (right_match_[v] == kUnmatched || augment(right_match_[v])) {
        left_match_[u] = v;
        right_match_[v] = u;
        return true;
      }
    }
    return false;
  }

  std::span<const std::vector<std::uint32_t>> adj_;
  std::vector<std::uint32_t> left_match_;
  std::vector<std::uint32_t> right_match_;
  std::vector<char> visited_;
};

inline std::size_t max_matching_size(std::span<const std::vector<std::uint32_t>> adjacency, std::uint32_t num_right) {
  BipartiteMatcher m(adjacency, num_right);
  return m.solve();
}

}  // namespace aradse
