// Copyright 2026 The cvmaxcut Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "cvmaxcut/common.hpp"
#include "cvmaxcut/graph.hpp"

namespace cvmaxcut {

/// Group membership (0 or 1) per node.
struct CutAssignment {
  std::vector<int> bits;

  std::size_t size() const { return bits.size(); }
  CutAssignment complement() const {
    CutAssignment c{bits};
    for (auto& b : c.bits) b = 1 - b;
    return c;
  }
  friend bool operator==(const CutAssignment&, const CutAssignment&) = default;
};

/// Sum of w_ij over unordered edges whose endpoints are on different sides.
inline double cut_weight(const WeightedGraph& g, const CutAssignment& cut) {
  if (cut.size() != g.n()) throw DimensionError("cut_weight: assignment length does not match node count");
  double total = 0.0;
  for (std::size_t i = 0; i < g.n(); ++i)
    for (std::size_t j = i + 1; j < g.n(); ++j)
      if (cut.bits[i] != cut.bits[j]) total += g.weight(i, j);
  return total;
}

struct MaxCutResult {
  double mc = 0.0;
  /// One representative per complementary pair, node 0 always in group 0.
  std::vector<CutAssignment> maximizers;
};

inline constexpr std::size_t kMaxBruteForceNodes = 24;

/// Exhaustive search over the 2^{n-1} bipartitions with node 0 fixed, walked
/// in Gray-code order so each step updates the cut in O(n). Candidates within
/// a relative 1e-9 of the best are re-scored with cut_weight.
inline MaxCutResult brute_force_maxcut(const WeightedGraph& g) {
  const std::size_t n = g.n();
  if (n == 0) throw DimensionError("brute_force_maxcut: empty graph");
  if (n > kMaxBruteForceNodes) {
    throw SizingError("brute_force_maxcut: " + std::to_string(n) + " nodes exceeds the exhaustive limit of " +
                      std::to_string(kMaxBruteForceNodes));
  }
  const std::uint64_t count = std::uint64_t{1} << (n - 1);
  const MatrixXd& w = g.adjacency();

  auto walk = [&](auto&& visit) {
    std::vector<int> side(n, 0);
    double value = 0.0;
    std::uint64_t gray = 0;
    visit(gray, value);
    for (std::uint64_t k = 1; k < count; ++k) {
      // bit flipped between gray(k-1) and gray(k) is the lowest set bit of k
      const auto bit = static_cast<std::size_t>(__builtin_ctzll(k));
      const std::size_t node = bit + 1;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == node) continue;
        const double wij = w(static_cast<Eigen::Index>(node), static_cast<Eigen::Index>(j));
        value += side[node] == side[j] ? wij : -wij;
      }
      side[node] ^= 1;
      gray ^= std::uint64_t{1} << bit;
      visit(gray, value);
    }
  };

  double best = -std::numeric_limits<double>::infinity();
  walk([&](std::uint64_t, double v) { best = std::max(best, v); });
  const double tol = 1e-9 * std::max(1.0, std::abs(best));

  std::vector<std::uint64_t> candidates;
  walk([&](std::uint64_t mask, double v) {
    if (v >= best - tol) candidates.push_back(mask);
  });

  auto to_cut = [n](std::uint64_t mask) {
    CutAssignment c{std::vector<int>(n, 0)};
    for (std::size_t k = 1; k < n; ++k) c.bits[k] = int((mask >> (k - 1)) & 1u);
    return c;
  };
  std::vector<std::pair<CutAssignment, double>> scored;
  for (auto mask : candidates) {
    auto c = to_cut(mask);
    const double v = cut_weight(g, c);
    scored.emplace_back(std::move(c), v);
  }
  MaxCutResult out;
  out.mc = scored.front().second;
  for (const auto& s : scored) out.mc = std::max(out.mc, s.second);
  for (auto& s : scored)
    if (s.second >= out.mc - tol) out.maximizers.push_back(std::move(s.first));
  std::sort(out.maximizers.begin(), out.maximizers.end(),
            [](const CutAssignment& a, const CutAssignment& b) { return a.bits < b.bits; });
  return out;
}

/// Photon count 0 -> group 0, any positive count -> group 1.
inline CutAssignment binarize(std::span<const std::size_t> counts) {
  CutAssignment c{std::vector<int>(counts.size(), 0)};
  for (std::size_t k = 0; k < counts.size(); ++k) c.bits[k] = counts[k] == 0 ? 0 : 1;
  return c;
}

/// True when `cut` equals one of the maximizers or its complement.
inline bool is_optimal(const MaxCutResult& result, const CutAssignment& cut) {
  for (const auto& m : result.maximizers)
    if (m == cut || m.complement() == cut) return true;
  return false;
}

}  // namespace cvmaxcut
