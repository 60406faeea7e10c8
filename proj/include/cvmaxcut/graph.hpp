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

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cvmaxcut/common.hpp"

namespace cvmaxcut {

struct Edge {
  std::size_t i = 0;
  std::size_t j = 0;
  double weight = 0.0;
};

/// Undirected weighted graph held as a symmetric adjacency matrix with zero
/// diagonal; a_ij = w(i, j) and 0 where there is no edge.
class WeightedGraph {
 public:
  WeightedGraph() = default;

  explicit WeightedGraph(MatrixXd adjacency) : adj_(std::move(adjacency)) {
    if (adj_.rows() != adj_.cols()) throw DimensionError("WeightedGraph: adjacency is not square");
    if (!adj_.allFinite()) throw DomainError("WeightedGraph: adjacency has non-finite entries");
    if (adj_.size() > 0 && (adj_ - adj_.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
      throw DimensionError("WeightedGraph: adjacency is not symmetric");
    }
    for (Eigen::Index k = 0; k < adj_.rows(); ++k)
      if (adj_(k, k) != 0.0) throw DimensionError("WeightedGraph: self-loop on node " + std::to_string(k));
  }

  static WeightedGraph from_edges(std::size_t n, const std::vector<Edge>& edges) {
    MatrixXd adj = MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (const auto& e : edges) {
      const std::string label = "edge [" + std::to_string(e.i) + ", " + std::to_string(e.j) + "]";
      if (e.i >= n || e.j >= n) throw ConfigError(label + ": node index out of range for n = " + std::to_string(n));
      if (e.i == e.j) throw ConfigError(label + ": self-loop");
      if (!std::isfinite(e.weight)) throw ConfigError(label + ": weight is not finite");
      if (!seen.emplace(std::min(e.i, e.j), std::max(e.i, e.j)).second) throw ConfigError(label + ": duplicate edge");
      adj(static_cast<Eigen::Index>(e.i), static_cast<Eigen::Index>(e.j)) = e.weight;
      adj(static_cast<Eigen::Index>(e.j), static_cast<Eigen::Index>(e.i)) = e.weight;
    }
    return WeightedGraph(std::move(adj));
  }

  std::size_t n() const { return static_cast<std::size_t>(adj_.rows()); }
  const MatrixXd& adjacency() const { return adj_; }
  double weight(std::size_t i, std::size_t j) const {
    return adj_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }

  /// Unordered edges (i < j) with non-zero weight.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    for (std::size_t i = 0; i < n(); ++i)
      for (std::size_t j = i + 1; j < n(); ++j)
        if (weight(i, j) != 0.0) out.push_back({i, j, weight(i, j)});
    return out;
  }

 private:
  MatrixXd adj_;
};

/// {"n": int, "edges": [[i, j, w], ...]} with 0-based node indices.
inline WeightedGraph graph_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ConfigError("graph: expected a JSON object");
  if (!doc.contains("n") || !doc["n"].is_number_integer() || doc["n"].get<long long>() < 1) {
    throw ConfigError("graph: field \"n\" must be a positive integer");
  }
  if (!doc.contains("edges") || !doc["edges"].is_array()) throw ConfigError("graph: field \"edges\" must be an array");
  const auto n = static_cast<std::size_t>(doc["n"].get<long long>());
  std::vector<Edge> edges;
  std::size_t k = 0;
  for (const auto& e : doc["edges"]) {
    if (!e.is_array() || e.size() != 3 || !e[0].is_number_integer() || !e[1].is_number_integer() ||
        !e[2].is_number()) {
      throw ConfigError("graph: edges[" + std::to_string(k) + "] must be [i, j, weight]");
    }
    if (e[0].get<long long>() < 0 || e[1].get<long long>() < 0) {
      throw ConfigError("graph: edges[" + std::to_string(k) + "] has a negative node index");
    }
    edges.push_back({static_cast<std::size_t>(e[0].get<long long>()), static_cast<std::size_t>(e[1].get<long long>()),
                     e[2].get<double>()});
    ++k;
  }
  return WeightedGraph::from_edges(n, edges);
}

inline nlohmann::json graph_to_json(const WeightedGraph& g) {
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& e : g.edges()) edges.push_back({e.i, e.j, e.weight});
  return {{"n", g.n()}, {"edges", edges}};
}

inline WeightedGraph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open graph file " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  try {
    return graph_from_json(doc);
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

}  // namespace cvmaxcut
